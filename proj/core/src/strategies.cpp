#include "tdg/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace tdg {

namespace {

Vec unit(const Vec& v, const char* what) {
    const double n = v.norm();
    if (n <= 0.0) throw DomainError(std::string("degenerate direction: ") + what);
    return v / n;
}

Vec phi_gradient(const GameConfig& cfg, const GameState& s, const Vec& z) {
    const Vec dP = z - s.x_P;
    const Vec dE = z - s.x_E;
    const double nP = dP.norm(), nE = dE.norm();
    if (nP <= 0.0 || nE <= 0.0) throw DomainError("phi gradient undefined at a player position");
    return dE / (cfg.gamma * nE) - dP / nP;
}

Mat phi_hessian(const GameConfig& cfg, const GameState& s, const Vec& z) {
    const int n = static_cast<int>(z.size());
    const Vec dP = z - s.x_P;
    const Vec dE = z - s.x_E;
    const double nP = dP.norm(), nE = dE.norm();
    const Mat I = Mat::Identity(n, n);
    const Mat projP = (I - (dP / nP) * (dP / nP).transpose()) / nP;
    const Mat projE = (I - (dE / nE) * (dE / nE).transpose()) / nE;
    return projE / cfg.gamma - projP;
}

// Intersection of the closed safe region and the target set.
struct FeasibleSet {
    const TargetSet& target;
    const ApolloniusRegion& region;

    Vec project_ball(const Vec& x) const {
        const Vec d = x - region.alpha;
        const double n = d.norm();
        if (n <= region.beta) return x;
        if (region.beta <= 0.0) return region.alpha;
        return region.alpha + (region.beta / n) * d;
    }

    bool feasible(const Vec& x, double slack) const {
        return (x - region.alpha).norm() <= region.beta + slack && target.contains(x);
    }

    // Dykstra's alternating projections; used to build feasible seeds.
    Vec project(const Vec& x) const {
        Vec z = x;
        Vec inc_a = Vec::Zero(x.size()), inc_b = Vec::Zero(x.size());
        for (int it = 0; it < 2000; ++it) {
            const Vec za = project_ball(z + inc_a);
            inc_a = z + inc_a - za;
            const Vec zb = target.project(za + inc_b);
            inc_b = za + inc_b - zb;
            const double err = (za - zb).norm();
            z = zb;
            if (err < 1e-12 && feasible(z, 1e-12)) return z;
        }
        return z;
    }

    // Cheap feasibility restoration for descent iterates: plain alternating
    // projections, accurate enough for the Newton polish to finish the job.
    Vec restore(const Vec& x) const {
        Vec z = x;
        for (int it = 0; it < 25; ++it) {
            z = project_ball(target.project(z));
            if (feasible(z, 1e-11)) return z;
        }
        return target.project(z);
    }
};

struct Constraint {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    std::function<Mat(const Vec&)> hessian;
};

Constraint ball_constraint(const Vec& center, double radius) {
    return {
        [=](const Vec& z) { return (z - center).squaredNorm() - radius * radius; },
        [=](const Vec& z) -> Vec { return 2.0 * (z - center); },
        [=](const Vec& z) -> Mat {
            return 2.0 * Mat::Identity(z.size(), z.size());
        },
    };
}

// Boundary constraint(s) of the target active near z.
std::vector<Constraint> target_constraints(const TargetSet& target, const Vec& z, double tol_act) {
    std::vector<Constraint> cs;
    if (const auto* hs = std::get_if<HalfSpace>(&target.data())) {
        if (hs->normal.dot(z) - hs->offset > -tol_act) {
            const Vec a = hs->normal;
            const double b = hs->offset;
            cs.push_back({[=](const Vec& y) { return a.dot(y) - b; },
                          [=](const Vec&) -> Vec { return a; },
                          [=](const Vec& y) -> Mat { return Mat::Zero(y.size(), y.size()); }});
        }
    } else if (const auto* pt = std::get_if<Polytope>(&target.data())) {
        for (const auto& f : pt->faces) {
            if (f.normal.dot(z) - f.offset > -tol_act) {
                const Vec a = f.normal;
                const double b = f.offset;
                cs.push_back({[=](const Vec& y) { return a.dot(y) - b; },
                              [=](const Vec&) -> Vec { return a; },
                              [=](const Vec& y) -> Mat { return Mat::Zero(y.size(), y.size()); }});
            }
        }
    } else if (target.has_smooth_boundary()) {
        if (target.boundary_value(z) > -tol_act) {
            const TargetSet* t = &target;
            auto grad = [t](const Vec& y) { return t->boundary_gradient(y); };
            cs.push_back({[t](const Vec& y) { return t->boundary_value(y); },
                          [t](const Vec& y) -> Vec {
                              // boundary_gradient insists on boundary points; the
                              // polish may probe slightly off it.
                              if (const auto* b = std::get_if<NormBall>(&t->data()))
                                  return 2.0 * (y - b->center);
                              if (const auto* e = std::get_if<Ellipsoid>(&t->data())) {
                                  const Vec yb = e->rotation.transpose() * (y - e->center);
                                  Vec g(yb.size());
                                  for (int i = 0; i < yb.size(); ++i)
                                      g[i] = 2.0 * yb[i] / (e->semi_axes[i] * e->semi_axes[i]);
                                  return e->rotation * g;
                              }
                              return std::get<SmoothLevelSet>(t->data()).gradient(y);
                          },
                          [t, grad](const Vec& y) -> Mat {
                              if (const auto* b = std::get_if<NormBall>(&t->data())) {
                                  (void)b;
                                  return 2.0 * Mat::Identity(y.size(), y.size());
                              }
                              if (const auto* e = std::get_if<Ellipsoid>(&t->data())) {
                                  Vec d(e->semi_axes.size());
                                  for (int i = 0; i < d.size(); ++i)
                                      d[i] = 2.0 / (e->semi_axes[i] * e->semi_axes[i]);
                                  return e->rotation * d.asDiagonal() * e->rotation.transpose();
                              }
                              // SmoothLevelSet: finite-difference the gradient.
                              const int n = static_cast<int>(y.size());
                              const auto& g = std::get<SmoothLevelSet>(t->data()).gradient;
                              Mat H(n, n);
                              const double h = 1e-6;
                              for (int i = 0; i < n; ++i) {
                                  Vec yp = y, ym = y;
                                  yp[i] += h;
                                  ym[i] -= h;
                                  H.col(i) = (g(yp) - g(ym)) / (2.0 * h);
                              }
                              return 0.5 * (H + H.transpose());
                          }});
        }
    }
    return cs;
}

// Equality-constrained Newton refinement of the KKT system at the detected
// active set. Returns the refined point, or z0 if the refinement fails.
Vec kkt_polish(const GameConfig& cfg, const GameState& s, const TargetSet& target,
               const ApolloniusRegion& region, const Vec& z0) {
    std::vector<Constraint> cs;
    const double scale = std::max(1.0, region.beta);
    const Constraint ball = ball_constraint(region.alpha, region.beta);
    if (ball.value(z0) > -1e-7 * scale) cs.push_back(ball);
    for (auto& c : target_constraints(target, z0, 1e-7 * scale)) cs.push_back(std::move(c));
    if (cs.empty()) return z0;

    const int n = static_cast<int>(z0.size());
    const int m = static_cast<int>(cs.size());
    Vec z = z0;
    Vec lambda = Vec::Zero(m);
    // Initialize multipliers by least squares: grad phi + J^T lambda = 0.
    {
        Mat J(m, n);
        for (int i = 0; i < m; ++i) J.row(i) = cs[i].gradient(z).transpose();
        lambda = J.transpose()
                     .jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV)
                     .solve(-phi_gradient(cfg, s, z));
    }
    for (int it = 0; it < 60; ++it) {
        Vec gphi = phi_gradient(cfg, s, z);
        Mat H = phi_hessian(cfg, s, z);
        Mat J(m, n);
        Vec c(m);
        for (int i = 0; i < m; ++i) {
            J.row(i) = cs[i].gradient(z).transpose();
            c[i] = cs[i].value(z);
            H += lambda[i] * cs[i].hessian(z);
        }
        Vec r1 = gphi + J.transpose() * lambda;
        if (r1.norm() < 1e-13 && c.cwiseAbs().maxCoeff() < 1e-14) break;
        Mat kkt = Mat::Zero(n + m, n + m);
        kkt.topLeftCorner(n, n) = H;
        kkt.topRightCorner(n, m) = J.transpose();
        kkt.bottomLeftCorner(m, n) = J;
        Vec rhs(n + m);
        rhs << -r1, -c;
        Eigen::FullPivLU<Mat> lu(kkt);
        if (!lu.isInvertible()) return z0;
        Vec step = lu.solve(rhs);
        double damp = 1.0;
        if (step.head(n).norm() > 0.1 * scale) damp = 0.1 * scale / step.head(n).norm();
        z += damp * step.head(n);
        lambda += damp * step.tail(m);
        if ((damp * step.head(n)).norm() < 1e-15) break;
    }
    // Accept only if feasible, multipliers admissible, and not worse.
    if ((z - region.alpha).norm() > region.beta + 1e-9 || !target.contains(z)) return z0;
    if (lambda.minCoeff() < -1e-7) return z0;
    if (attack_objective(cfg, s, z) > attack_objective(cfg, s, z0) + 1e-12) return z0;
    return z;
}

Vec pgd_minimize(const GameConfig& cfg, const GameState& s, const FeasibleSet& feasible, Vec z) {
    double obj = attack_objective(cfg, s, z);
    for (int it = 0; it < 60; ++it) {
        Vec grad;
        try {
            grad = phi_gradient(cfg, s, z);
        } catch (const DomainError&) {
            break;  // landed on a player position; treat as converged
        }
        double step = std::max(feasible.region.beta, 1e-6);
        bool accepted = false;
        Vec cand;
        double cand_obj = obj;
        for (int bt = 0; bt < 40; ++bt) {
            cand = feasible.restore(z - step * grad);
            cand_obj = attack_objective(cfg, s, cand);
            if (cand_obj <= obj - 1e-4 * (cand - z).squaredNorm() / std::max(step, 1e-300)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        const double moved = (cand - z).norm();
        z = cand;
        obj = cand_obj;
        if (moved < 1e-9) break;
    }
    return z;
}

}  // namespace

double attack_objective(const GameConfig& cfg, const GameState& s, const Vec& z) {
    return -(z - s.x_P).norm() + (z - s.x_E).norm() / cfg.gamma;
}

CapturePlan capture_plan(const GameConfig& cfg, const GameState& s, const TargetSet& target) {
    if ((s.x_P - s.x_E).norm() <= 0.0) throw DomainError("capture_plan: coincident players");
    const BarrierResult b = barrier(cfg, s, target);
    if (b.region == Region::AttackRegion)
        throw DomainError("capture_plan called in the attack region");
    const ApolloniusRegion a = apollonius(cfg, s);
    const Vec g = a.alpha - b.projection_point;
    const double gn = g.norm();
    if (gn <= 0.0) throw DomainError("capture_plan: safe-region center inside the target");
    CapturePlan plan;
    plan.x_star = a.alpha - a.beta * (g / gn);
    plan.value = gn - a.beta;
    plan.dir_P = unit(plan.x_star - s.x_P, "x_star - x_P");
    plan.dir_E = unit(plan.x_star - s.x_E, "x_star - x_E");
    return plan;
}

Vec capture_value_gradient(const GameConfig& cfg, const GameState& s, const TargetSet& target) {
    const BarrierResult b = barrier(cfg, s, target);
    if (b.region == Region::AttackRegion)
        throw DomainError("capture_value_gradient called in the attack region");
    const ApolloniusRegion a = apollonius(cfg, s);
    const Vec g = a.alpha - b.projection_point;
    if (g.norm() <= 0.0) throw DomainError("capture_value_gradient: degenerate projection");
    if ((s.x_E - s.x_P).norm() <= 0.0) throw DomainError("capture_value_gradient: coincident players");
    const Vec ghat = g / g.norm();
    const Vec ehat = (s.x_E - s.x_P) / (s.x_E - s.x_P).norm();
    const double c = 1.0 / (1.0 - cfg.gamma * cfg.gamma);
    const int n = cfg.dimension;
    Vec grad(2 * n);
    grad.head(n) = c * (-cfg.gamma * cfg.gamma * ghat + cfg.gamma * ehat);
    grad.tail(n) = c * (ghat - cfg.gamma * ehat);
    return grad;
}

AttackPlan attack_plan(const GameConfig& cfg, const GameState& s, const TargetSet& target,
                       std::uint64_t seed) {
    const BarrierResult b = barrier(cfg, s, target);
    if (b.region == Region::CaptureRegion)
        throw DomainError("attack_plan called in the capture region");
    const ApolloniusRegion region = apollonius(cfg, s);

    AttackPlan plan;
    if (target.contains(s.x_E)) {
        // The attacker already sits in the target; phi is minimized at x_E.
        plan.x_dagger = s.x_E;
        plan.value = -(s.x_E - s.x_P).norm();
        plan.dir_P = unit(s.x_E - s.x_P, "x_E - x_P");
        plan.dir_E = plan.dir_P;  // game is over; heading is immaterial
        return plan;
    }
    if (const auto* st = std::get_if<Singleton>(&target.data())) {
        plan.x_dagger = st->point;
        plan.value = attack_objective(cfg, s, plan.x_dagger);
        plan.dir_P = unit(plan.x_dagger - s.x_P, "x_dagger - x_P");
        plan.dir_E = unit(plan.x_dagger - s.x_E, "x_dagger - x_E");
        return plan;
    }

    // Multi-start seeds: the barrier tangency candidate, the attacker's
    // projection, and random feasible points in the safe region.
    const FeasibleSet feasible{target, region};
    std::vector<Vec> starts;
    starts.push_back(feasible.project(b.projection_point));
    starts.push_back(feasible.project(target.project(s.x_E)));
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n = cfg.dimension;
    for (int k = 0; k < 8; ++k) {
        Vec u(n);
        for (int i = 0; i < n; ++i) u[i] = normal(rng);
        u.normalize();
        const double radius = region.beta * std::pow(unif(rng), 1.0 / n);
        starts.push_back(feasible.project(region.alpha + radius * u));
    }

    bool have_best = false;
    Vec best;
    double best_value = 0.0;
    for (const Vec& z0 : starts) {
        // A start that Dykstra could not make feasible is skipped.
        if (!feasible.feasible(z0, 1e-9)) continue;
        Vec z = pgd_minimize(cfg, s, feasible, z0);
        z = kkt_polish(cfg, s, target, region, z);
        const double v = attack_objective(cfg, s, z);
        const bool better =
            !have_best || v < best_value - 1e-12 ||
            (std::abs(v - best_value) <= 1e-12 &&
             std::lexicographical_compare(z.data(), z.data() + n, best.data(), best.data() + n));
        if (better) {
            have_best = true;
            best = z;
            best_value = v;
        }
    }
    if (!have_best)
        throw SolverFailure(
            "attack_plan: no feasible point found although the state is in the attack region",
            b.value);

    plan.x_dagger = best;
    plan.value = best_value;
    plan.dir_P = unit(plan.x_dagger - s.x_P, "x_dagger - x_P");
    plan.dir_E = unit(plan.x_dagger - s.x_E, "x_dagger - x_E");
    return plan;
}

Vec attack_value_gradient(const GameConfig& cfg, const GameState& s, const TargetSet& target,
                          std::uint64_t seed) {
    const AttackPlan plan = attack_plan(cfg, s, target, seed);
    const Vec dP = plan.x_dagger - s.x_P;
    const Vec dE = plan.x_dagger - s.x_E;
    if (dP.norm() <= 0.0 || dE.norm() <= 0.0)
        throw DomainError("attack_value_gradient: attack point coincides with a player");
    // V_a = -||x+ - x_P|| + ||x+ - x_E|| / gamma with the minimizer held
    // fixed (envelope theorem), so the defender block points at x+ and the
    // evader block away from it. Central differences confirm these signs; the
    // HJI residual alone cannot, since it is invariant under negating the
    // whole gradient.
    const int n = cfg.dimension;
    Vec grad(2 * n);
    grad.head(n) = dP / dP.norm();
    grad.tail(n) = -dE / (cfg.gamma * dE.norm());
    return grad;
}

Vec policy_step(const Policy& policy, Role role, const GameConfig& cfg, const GameState& s,
                const TargetSet& target, std::uint64_t seed) {
    switch (policy.kind) {
        case Policy::Kind::PurePursuit:
            if (role != Role::Defender) throw DomainError("pure pursuit is a defender policy");
            return unit(s.x_E - s.x_P, "x_E - x_P");
        case Policy::Kind::DirectTo:
            if (role != Role::Evader) throw DomainError("direct-to is an evader policy");
            if (!target.contains(policy.direct_target))
                throw DomainError("direct-to point must lie in the target set");
            return unit(policy.direct_target - s.x_E, "target - x_E");
        case Policy::Kind::Custom:
            return policy.custom(cfg, s, target);
        case Policy::Kind::OptimalAuto: {
            const BarrierResult b = barrier(cfg, s, target);
            if (b.region == Region::AttackRegion) {
                const AttackPlan plan = attack_plan(cfg, s, target, seed);
                return role == Role::Defender ? plan.dir_P : plan.dir_E;
            }
            const CapturePlan plan = capture_plan(cfg, s, target);
            return role == Role::Defender ? plan.dir_P : plan.dir_E;
        }
    }
    throw DomainError("unknown policy");
}

}  // namespace tdg
