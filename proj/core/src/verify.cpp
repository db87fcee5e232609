#include "tdg/verify.hpp"

#include "tdg/strategies.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace tdg {

namespace {

Vec box_center(const TargetSet& target) {
    if (const auto* hs = std::get_if<HalfSpace>(&target.data()))
        return hs->offset * hs->normal;  // foot of the normal through the origin
    if (std::holds_alternative<Polytope>(target.data()))
        return Vec::Zero(target.dimension());
    return target.interior_anchor();
}

double hji_residual_impl(const GameConfig& cfg, const GameState& s, const TargetSet& target,
                         Region region) {
    Vec grad;
    Vec u_P, u_E;
    if (region == Region::CaptureRegion) {
        const CapturePlan plan = capture_plan(cfg, s, target);
        grad = capture_value_gradient(cfg, s, target);
        u_P = plan.dir_P;
        u_E = plan.dir_E;
    } else {
        const AttackPlan plan = attack_plan(cfg, s, target);
        grad = attack_value_gradient(cfg, s, target);
        u_P = plan.dir_P;
        u_E = plan.dir_E;
    }
    const int n = cfg.dimension;
    return grad.head(n).dot(cfg.v_P * u_P) + grad.tail(n).dot(cfg.v_E * u_E);
}

struct SuiteCase {
    std::string name;
    TargetSet target;
    Region region;
    int samples;
    double tolerance;
};

TargetSet suite_ball() { return TargetSet::norm_ball(Vec::Zero(3), 1.0); }

TargetSet suite_half_space() {
    Vec a = Vec::Zero(3);
    a[2] = 1.0;
    return TargetSet::half_space(a, 0.0);
}

TargetSet suite_ellipsoid() {
    Vec s(3);
    s << 0.8, 0.4, 0.4;
    return TargetSet::ellipsoid(Vec::Zero(3), s);
}

CheckReport run_hji_case(const SuiteCase& sc, std::mt19937_64& rng) {
    const GameConfig cfg = GameConfig::make(3, 0.5);
    CheckReport rep;
    rep.name = sc.name;
    rep.samples = sc.samples;
    rep.tolerance = sc.tolerance;
    for (int i = 0; i < sc.samples; ++i) {
        const GameState s = sample_state_in_region(cfg, sc.target, sc.region, rng);
        const double r = std::abs(hji_residual(cfg, s, sc.target));
        if (r > rep.max_residual) {
            rep.max_residual = r;
            rep.worst_state = s;
        }
    }
    rep.pass = rep.max_residual <= rep.tolerance;
    return rep;
}

CheckReport run_gradient_case(const SuiteCase& sc, std::mt19937_64& rng) {
    const GameConfig cfg = GameConfig::make(3, 0.5);
    CheckReport rep;
    rep.name = sc.name;
    rep.samples = sc.samples;
    rep.tolerance = sc.tolerance;
    const double step = 1e-6;
    for (int i = 0; i < sc.samples; ++i) {
        const GameState s = sample_state_in_region(cfg, sc.target, sc.region, rng);
        Vec analytic, numeric;
        if (sc.region == Region::CaptureRegion) {
            analytic = capture_value_gradient(cfg, s, sc.target);
            numeric = fd_gradient(
                [&](const GameState& q) {
                    const ApolloniusRegion a = apollonius(cfg, q);
                    return sc.target.distance(a.alpha) - a.beta;
                },
                s, step);
        } else {
            analytic = attack_value_gradient(cfg, s, sc.target);
            numeric = fd_gradient(
                [&](const GameState& q) { return attack_plan(cfg, q, sc.target).value; }, s,
                step);
        }
        const double r = (analytic - numeric).cwiseAbs().maxCoeff();
        if (r > rep.max_residual) {
            rep.max_residual = r;
            rep.worst_state = s;
        }
    }
    rep.pass = rep.max_residual <= rep.tolerance;
    return rep;
}

}  // namespace

GameState sample_state_in_region(const GameConfig& cfg, const TargetSet& target, Region want,
                                 std::mt19937_64& rng) {
    const Vec center = box_center(target);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        GameState s;
        s.x_P = center;
        s.x_E = center;
        for (int i = 0; i < cfg.dimension; ++i) {
            s.x_P[i] += u(rng);
            s.x_E[i] += u(rng);
        }
        if ((s.x_P - s.x_E).norm() < 1e-3) continue;
        if (target.contains(s.x_E)) continue;
        const BarrierResult b = barrier(cfg, s, target);
        if (std::abs(b.value) <= 10.0 * tol::kBarrier) continue;
        if (b.region == want) return s;
    }
    throw SolverFailure("sample_state_in_region: rejection sampling exhausted", 0.0);
}

double hji_residual(const GameConfig& cfg, const GameState& s, const TargetSet& target) {
    const BarrierResult b = barrier(cfg, s, target);
    if (std::abs(b.value) <= 10.0 * tol::kBarrier)
        throw DomainError("hji_residual: state is on (or too close to) the barrier");
    return hji_residual_impl(cfg, s, target, b.region);
}

Vec fd_gradient(const std::function<double(const GameState&)>& value_fn, const GameState& s,
                double step) {
    const int n = static_cast<int>(s.x_P.size());
    Vec grad(2 * n);
    for (int i = 0; i < 2 * n; ++i) {
        GameState hi = s, lo = s;
        Vec& vhi = i < n ? hi.x_P : hi.x_E;
        Vec& vlo = i < n ? lo.x_P : lo.x_E;
        vhi[i % n] += step;
        vlo[i % n] -= step;
        grad[i] = (value_fn(hi) - value_fn(lo)) / (2.0 * step);
    }
    return grad;
}

GridMinimum grid_minimize_phi(const GameConfig& cfg, const GameState& s, const TargetSet& target,
                              int resolution) {
    if (cfg.dimension > 3)
        throw DomainError("grid_minimize_phi: oracle limited to dimension <= 3");
    if (resolution < 2) throw DomainError("grid_minimize_phi: resolution too coarse");
    const BarrierResult b = barrier(cfg, s, target);
    if (b.region == Region::CaptureRegion)
        throw DomainError("grid_minimize_phi: state is in the capture region");
    const ApolloniusRegion region = apollonius(cfg, s);

    const int n = cfg.dimension;
    GridMinimum best{Vec(), std::numeric_limits<double>::infinity()};
    // Seed with proj_Omega(alpha), which lies in cl(A) whenever B <= 0. This
    // keeps the oracle exact for singleton targets, which a regular grid will
    // generally miss.
    {
        const Vec z0 = target.project(region.alpha);
        if ((z0 - region.alpha).norm() <= region.beta + 1e-12) {
            best.value = attack_objective(cfg, s, z0);
            best.point = z0;
        }
    }
    std::vector<int> idx(n, 0);
    Vec z(n);
    const double beta_pad = region.beta + 1e-12;
    while (true) {
        for (int i = 0; i < n; ++i)
            z[i] = region.alpha[i] - region.beta +
                   2.0 * region.beta * idx[i] / static_cast<double>(resolution - 1);
        if ((z - region.alpha).norm() <= beta_pad && target.contains(z)) {
            const double v = attack_objective(cfg, s, z);
            if (v < best.value) {
                best.value = v;
                best.point = z;
            }
        }
        int d = 0;
        while (d < n && ++idx[d] == resolution) idx[d++] = 0;
        if (d == n) break;
    }
    if (!std::isfinite(best.value))
        throw DomainError("grid_minimize_phi: no feasible grid point (resolution too coarse)");
    return best;
}

std::vector<CheckReport> run_suite(const std::string& name, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<CheckReport> reports;
    if (name == "hji") {
        const std::vector<SuiteCase> cases = {
            {"hji_capture_ball", suite_ball(), Region::CaptureRegion, 1000, 1e-8},
            {"hji_attack_ball", suite_ball(), Region::AttackRegion, 1000, 1e-8},
            {"hji_capture_halfspace", suite_half_space(), Region::CaptureRegion, 1000, 1e-8},
            {"hji_attack_halfspace", suite_half_space(), Region::AttackRegion, 1000, 1e-8},
            {"hji_capture_ellipsoid", suite_ellipsoid(), Region::CaptureRegion, 1000, 1e-5},
            {"hji_attack_ellipsoid", suite_ellipsoid(), Region::AttackRegion, 1000, 1e-5},
        };
        for (const auto& c : cases) reports.push_back(run_hji_case(c, rng));
    } else if (name == "gradients") {
        const std::vector<SuiteCase> cases = {
            {"danskin_capture_ball", suite_ball(), Region::CaptureRegion, 200, 1e-4},
            {"danskin_attack_ball", suite_ball(), Region::AttackRegion, 200, 1e-4},
            {"danskin_capture_halfspace", suite_half_space(), Region::CaptureRegion, 200, 1e-4},
            {"danskin_attack_halfspace", suite_half_space(), Region::AttackRegion, 200, 1e-4},
            {"danskin_capture_ellipsoid", suite_ellipsoid(), Region::CaptureRegion, 200, 1e-4},
            {"danskin_attack_ellipsoid", suite_ellipsoid(), Region::AttackRegion, 200, 1e-4},
        };
        for (const auto& c : cases) reports.push_back(run_gradient_case(c, rng));
    } else {
        throw DomainError("unknown verification suite: " + name);
    }
    return reports;
}

void write_reports_json(std::ostream& out, const std::vector<CheckReport>& reports) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json item;
        item["name"] = r.name;
        item["samples"] = r.samples;
        item["max_residual"] = r.max_residual;
        item["tolerance"] = r.tolerance;
        item["pass"] = r.pass;
        if (r.worst_state.x_P.size() > 0) {
            item["worst_state"]["x_P"] = std::vector<double>(
                r.worst_state.x_P.data(), r.worst_state.x_P.data() + r.worst_state.x_P.size());
            item["worst_state"]["x_E"] = std::vector<double>(
                r.worst_state.x_E.data(), r.worst_state.x_E.data() + r.worst_state.x_E.size());
        }
        j.push_back(std::move(item));
    }
    out << j.dump(2);
}

void print_reports(std::ostream& out, const std::vector<CheckReport>& reports) {
    for (const auto& r : reports) {
        out << (r.pass ? "[PASS] " : "[FAIL] ") << std::left << std::setw(28) << r.name
            << " samples=" << r.samples << " max_residual=" << std::scientific
            << std::setprecision(3) << r.max_residual << " tol=" << r.tolerance << std::defaultfloat
            << "\n";
    }
}

}  // namespace tdg
