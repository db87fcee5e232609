#include "tdg/barrier_geometry.hpp"

#include <cmath>
#include <ostream>

namespace tdg {

namespace {

// Singleton residual: positive outside the sphere of radius gamma*||x_P0 - c||.
double residual_singleton(const Singleton& set, const Vec& x_P0, double gamma, const Vec& z) {
    return (z - set.point).norm() - gamma * (x_P0 - set.point).norm();
}

// Half-space residual: hyperboloid sheet in coordinates anchored at the foot
// of the defender's perpendicular onto the separating hyperplane,
//   h_z^2 / (gamma h)^2 - ||w||^2 / ((1 - gamma^2) h^2) - 1,
// where h (resp. h_z) is the defender's (resp. query's) height above the
// hyperplane and w the tangential offset from the defender.
double residual_half_space(const HalfSpace& set, const Vec& x_P0, double gamma, const Vec& z) {
    const double g2 = gamma * gamma;
    const double h = set.normal.dot(x_P0) - set.offset;
    if (h <= 0.0)
        throw DomainError("pbs_analytic: defender must start strictly outside the half-space");
    const double hz = set.normal.dot(z) - set.offset;
    const Vec diff = z - x_P0;
    const Vec w = diff - (hz - h) * set.normal;
    return hz * hz / (g2 * h * h) - w.squaredNorm() / ((1.0 - g2) * h * h) - 1.0;
}

// Norm-ball residual (Cartesian oval), equal to (1 - gamma^2) * barrier value.
double residual_norm_ball(const NormBall& set, const Vec& x_P0, double gamma, const Vec& z) {
    const double g2 = gamma * gamma;
    const Vec zc = z - set.center;
    const Vec pc = x_P0 - set.center;
    return (zc - g2 * pc).norm() - gamma * (zc - pc).norm() - (1.0 - g2) * set.radius;
}

}  // namespace

double pbs_analytic(const TargetSet& target, const Vec& x_P0, const GameConfig& cfg,
                    const Vec& query) {
    // Reject queries strictly interior to the target (boundary-tolerance slack
    // keeps bracketing points valid).
    if (const auto* s = std::get_if<Singleton>(&target.data())) {
        if ((query - s->point).norm() < tol::kBoundary)
            throw DomainError("pbs_analytic: query lies inside the target");
        return residual_singleton(*s, x_P0, cfg.gamma, query);
    }
    if (const auto* h = std::get_if<HalfSpace>(&target.data())) {
        if (h->offset - h->normal.dot(query) > tol::kBoundary)
            throw DomainError("pbs_analytic: query lies inside the target");
        return residual_half_space(*h, x_P0, cfg.gamma, query);
    }
    if (const auto* b = std::get_if<NormBall>(&target.data())) {
        if (b->radius - (query - b->center).norm() > tol::kBoundary)
            throw DomainError("pbs_analytic: query lies inside the target");
        return residual_norm_ball(*b, x_P0, cfg.gamma, query);
    }
    throw DomainError("pbs_analytic: no closed form for this target variant");
}

double xi_plus(const Vec& p, const Vec& grad, const Vec& x_P0, const GameConfig& cfg) {
    const double a = grad.squaredNorm();
    if (a <= 0.0) throw DomainError("xi_plus: zero boundary gradient");
    const Vec d = x_P0 - p;
    const double dn2 = d.squaredNorm();
    if (dn2 <= 0.0) throw DomainError("xi_plus: defender coincides with the boundary point");
    const double g2 = cfg.gamma * cfg.gamma;
    const double b = g2 * d.dot(grad);           // half coefficient of xi
    const double c = g2 * (1.0 - g2) * dn2;      // negated constant term, > 0
    const double disc = std::sqrt(b * b + a * c);
    // Opposite-sign first/third coefficients guarantee a positive root; pick
    // the cancellation-free formula per the sign of b.
    return b >= 0.0 ? c / (b + disc) : (disc - b) / a;
}

PbsSample map_boundary_to_pbs(const Vec& p, const TargetSet& target, const Vec& x_P0,
                              const GameConfig& cfg) {
    PbsSample sample;
    sample.boundary_point = p;
    try {
        const Vec grad = target.boundary_gradient(p);
        sample.xi_plus = xi_plus(p, grad, x_P0, cfg);
        const double g2 = cfg.gamma * cfg.gamma;
        sample.pbs_point = grad * sample.xi_plus + g2 * x_P0 + (1.0 - g2) * p;
    } catch (const std::exception& e) {
        sample.ok = false;
        sample.error = e.what();
    }
    return sample;
}

Vec map_boundary_to_pbs_closed_form(const Vec& p, const Vec& grad, const Vec& x_P0,
                                    const GameConfig& cfg) {
    const double g2 = cfg.gamma * cfg.gamma;
    const Vec d = x_P0 - p;
    const double inner = d.dot(grad);
    const double radicand =
        g2 * inner * inner + (1.0 - g2) * grad.squaredNorm() * d.squaredNorm();
    const double bracket = -g2 * inner + cfg.gamma * std::sqrt(radicand);
    return g2 * x_P0 + (1.0 - g2) * p + (bracket / grad.squaredNorm()) * grad;
}

namespace {

// Evenly spread unit directions: circle angles in R^2, Fibonacci sphere in R^3.
std::vector<Vec> spread_directions(int n, int count) {
    std::vector<Vec> dirs;
    dirs.reserve(count);
    if (n == 2) {
        for (int k = 0; k < count; ++k) {
            const double th = 2.0 * M_PI * k / count;
            Vec u(2);
            u << std::cos(th), std::sin(th);
            dirs.push_back(u);
        }
    } else if (n == 3) {
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < count; ++k) {
            const double y = 1.0 - 2.0 * (k + 0.5) / count;
            const double rad = std::sqrt(std::max(0.0, 1.0 - y * y));
            const double th = golden * k;
            Vec u(3);
            u << rad * std::cos(th), y, rad * std::sin(th);
            dirs.push_back(u);
        }
    } else {
        throw DomainError("direction spread only implemented for dimensions 2 and 3");
    }
    return dirs;
}

}  // namespace

std::vector<Vec> sample_analytic_pbs(const TargetSet& target, const Vec& x_P0,
                                     const GameConfig& cfg, int count) {
    if (count < 1) throw DomainError("sample_analytic_pbs: count must be >= 1");
    const int n = target.dimension();
    std::vector<Vec> points;
    points.reserve(count);

    if (const auto* st = std::get_if<Singleton>(&target.data())) {
        const double radius = cfg.gamma * (x_P0 - st->point).norm();
        for (const Vec& u : spread_directions(n, count)) points.push_back(st->point + radius * u);
        return points;
    }

    if (const auto* hs = std::get_if<HalfSpace>(&target.data())) {
        const double g2 = cfg.gamma * cfg.gamma;
        const double h = hs->normal.dot(x_P0) - hs->offset;
        if (h <= 0.0)
            throw DomainError("sample_analytic_pbs: defender must start outside the half-space");
        const Vec foot = x_P0 - h * hs->normal;
        // Orthonormal basis of the hyperplane.
        Mat basis = hs->normal.transpose().fullPivLu().kernel();
        for (int c = 0; c < basis.cols(); ++c) {
            for (int c0 = 0; c0 < c; ++c0) basis.col(c) -= basis.col(c0).dot(basis.col(c)) * basis.col(c0);
            basis.col(c).normalize();
        }
        auto lift = [&](const Vec& w) {
            const double height = cfg.gamma * std::sqrt(h * h + w.squaredNorm() / (1.0 - g2));
            return foot + basis * w + height * hs->normal;
        };
        if (n == 2) {
            for (int k = 0; k < count; ++k) {
                Vec w(1);
                w << -2.0 * h + 4.0 * h * k / std::max(1, count - 1);
                points.push_back(lift(w));
            }
        } else if (n == 3) {
            const double golden = M_PI * (3.0 - std::sqrt(5.0));
            for (int k = 0; k < count; ++k) {
                const double rad = 2.0 * h * std::sqrt((k + 0.5) / count);
                const double th = golden * k;
                Vec w(2);
                w << rad * std::cos(th), rad * std::sin(th);
                points.push_back(lift(w));
            }
        } else {
            throw DomainError("sample_analytic_pbs: only dimensions 2 and 3");
        }
        return points;
    }

    if (const auto* ball = std::get_if<NormBall>(&target.data())) {
        for (const Vec& u : spread_directions(n, count)) {
            // The oval is star-shaped about the ball center; bisect the residual
            // along the ray center + t u.
            auto residual = [&](double t) {
                return pbs_analytic(target, x_P0, cfg, ball->center + t * u);
            };
            double lo = ball->radius * (1.0 + 1e-12);
            double hi = lo;
            int guard = 0;
            while (residual(hi) <= 0.0) {
                hi = ball->radius + 2.0 * (hi - ball->radius) + ball->radius;
                if (++guard > 60) throw SolverFailure("analytic PBS ray bracket", hi);
            }
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                (residual(mid) <= 0.0 ? lo : hi) = mid;
            }
            points.push_back(ball->center + 0.5 * (lo + hi) * u);
        }
        return points;
    }

    throw DomainError("sample_analytic_pbs: no closed form for this target variant");
}

Vec cast_boundary_ray(const TargetSet& target, const Vec& direction) {
    const Vec anchor = target.interior_anchor();
    const Vec u = direction / direction.norm();
    // Bracket the boundary crossing by doubling, then bisect.
    double hi = 1.0;
    int guard = 0;
    while (target.boundary_value(anchor + hi * u) <= 0.0) {
        hi *= 2.0;
        if (++guard > 60) throw SolverFailure("boundary ray casting: no crossing found", hi);
    }
    double lo = 0.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (target.boundary_value(anchor + mid * u) <= 0.0 ? lo : hi) = mid;
    }
    return anchor + 0.5 * (lo + hi) * u;
}

std::vector<PbsSample> sample_pbs_mesh(const TargetSet& target, const Vec& x_P0,
                                       const GameConfig& cfg, int resolution) {
    if (resolution < 1) throw DomainError("sample_pbs_mesh: resolution must be >= 1");
    if (!target.has_smooth_boundary() || std::holds_alternative<HalfSpace>(target.data()))
        throw DomainError("sample_pbs_mesh: target must be a bounded smooth set");
    const int n = target.dimension();

    std::vector<Vec> directions;
    if (resolution == 1) {
        Vec u = Vec::Zero(n);
        u[0] = 1.0;
        directions.push_back(u);
    } else if (n == 2) {
        directions.reserve(resolution);
        for (int k = 0; k < resolution; ++k) {
            const double th = 2.0 * M_PI * k / resolution;
            Vec u(2);
            u << std::cos(th), std::sin(th);
            directions.push_back(u);
        }
    } else if (n == 3) {
        directions.reserve(static_cast<size_t>(resolution) * resolution);
        for (int i = 0; i < resolution; ++i) {
            // Latitudes strictly inside (0, pi) to keep samples distinct.
            const double phi = M_PI * (i + 0.5) / resolution;
            for (int j = 0; j < resolution; ++j) {
                const double th = 2.0 * M_PI * j / resolution;
                Vec u(3);
                u << std::sin(phi) * std::cos(th), std::sin(phi) * std::sin(th), std::cos(phi);
                directions.push_back(u);
            }
        }
    } else {
        throw DomainError("sample_pbs_mesh: only dimensions 2 and 3 are meshed");
    }

    std::vector<PbsSample> mesh;
    mesh.reserve(directions.size());
    for (const Vec& u : directions) {
        try {
            const Vec p = cast_boundary_ray(target, u);
            mesh.push_back(map_boundary_to_pbs(p, target, x_P0, cfg));
        } catch (const std::exception& e) {
            PbsSample bad;
            bad.boundary_point = u;
            bad.ok = false;
            bad.error = e.what();
            mesh.push_back(std::move(bad));
        }
    }
    return mesh;
}

void write_mesh_csv(std::ostream& out, const std::vector<PbsSample>& mesh) {
    if (mesh.empty()) return;
    const int n = static_cast<int>(mesh.front().boundary_point.size());
    for (int i = 0; i < n; ++i) out << "p" << i << ",";
    for (int i = 0; i < n; ++i) out << "pbs" << i << ",";
    out << "xi_plus\n";
    out.precision(17);
    for (const auto& s : mesh) {
        if (!s.ok) continue;
        for (int i = 0; i < n; ++i) out << s.boundary_point[i] << ",";
        for (int i = 0; i < n; ++i) out << s.pbs_point[i] << ",";
        out << s.xi_plus << "\n";
    }
}

void write_mesh_json(std::ostream& out, const std::vector<PbsSample>& mesh, int resolution,
                     int dimension) {
    out.precision(17);
    out << "{\"vertices\":[";
    bool first = true;
    for (const auto& s : mesh) {
        if (!first) out << ",";
        first = false;
        out << "[";
        for (int i = 0; i < s.pbs_point.size(); ++i) {
            if (i) out << ",";
            out << (s.ok ? s.pbs_point[i] : 0.0);
        }
        out << "]";
    }
    out << "],\"triangles\":[";
    first = true;
    if (dimension == 3 && resolution > 1) {
        auto idx = [&](int i, int j) { return i * resolution + (j % resolution); };
        for (int i = 0; i + 1 < resolution; ++i) {
            for (int j = 0; j < resolution; ++j) {
                if (!first) out << ",";
                first = false;
                out << "[" << idx(i, j) << "," << idx(i + 1, j) << "," << idx(i + 1, j + 1) << "],"
                    << "[" << idx(i, j) << "," << idx(i + 1, j + 1) << "," << idx(i, j + 1) << "]";
            }
        }
    }
    out << "]}";
}

}  // namespace tdg
