#include "tdg/convex_sets.hpp"

#include <algorithm>
#include <cmath>

namespace tdg {

namespace {

constexpr int kMaxNewton = 200;
constexpr int kMaxProjGrad = 10000;

void check_dimension(int have, int want, const char* op) {
    if (have != want)
        throw DomainError(std::string(op) + ": dimension mismatch (" + std::to_string(have) +
                          " vs " + std::to_string(want) + ")");
}

Vec project_half_space(const HalfSpace& hs, const Vec& x) {
    const double excess = hs.normal.dot(x) - hs.offset;
    if (excess <= 0.0) return x;
    return x - excess * hs.normal;
}

Vec project_norm_ball(const NormBall& b, const Vec& x) {
    const Vec d = x - b.center;
    const double n = d.norm();
    if (n <= b.radius) return x;
    return b.center + (b.radius / n) * d;
}

// Projection onto an axis-aligned ellipsoid in the body frame: Newton on the
// scalar KKT multiplier of the quadratic constraint. y is the query point
// relative to the center, already rotated into the body frame.
Vec project_ellipsoid_body(const Vec& semi_axes, const Vec& y) {
    const int n = static_cast<int>(y.size());
    double level = 0.0;
    for (int i = 0; i < n; ++i) {
        const double q = y[i] / semi_axes[i];
        level += q * q;
    }
    if (level <= 1.0) return y;

    // z_i = s_i^2 y_i / (s_i^2 + lambda); constraint h(lambda) = sum (s_i y_i /
    // (s_i^2 + lambda))^2 - 1 = 0. h is convex and decreasing for lambda > 0,
    // so Newton from 0 converges monotonically from the left.
    double lambda = 0.0;
    for (int it = 0; it < kMaxNewton; ++it) {
        double h = -1.0, dh = 0.0;
        for (int i = 0; i < n; ++i) {
            const double s2 = semi_axes[i] * semi_axes[i];
            const double w = semi_axes[i] * y[i] / (s2 + lambda);
            h += w * w;
            dh -= 2.0 * w * w / (s2 + lambda);
        }
        if (std::abs(h) < 1e-15) break;
        const double step = h / dh;
        lambda -= step;
        if (std::abs(step) < 1e-16 * (1.0 + lambda)) break;
        if (it + 1 == kMaxNewton) throw SolverFailure("ellipsoid projection Newton", std::abs(h));
    }
    Vec z(n);
    for (int i = 0; i < n; ++i) {
        const double s2 = semi_axes[i] * semi_axes[i];
        z[i] = s2 * y[i] / (s2 + lambda);
    }
    return z;
}

Vec project_ellipsoid(const Ellipsoid& e, const Vec& x) {
    const Vec y = e.rotation.transpose() * (x - e.center);
    const Vec z = project_ellipsoid_body(e.semi_axes, y);
    return e.center + e.rotation * z;
}

// Dykstra's alternating projections for the half-space intersection.
Vec project_polytope(const Polytope& p, const Vec& x) {
    const int m = static_cast<int>(p.faces.size());
    Vec z = x;
    std::vector<Vec> increments(m, Vec::Zero(x.size()));
    for (int it = 0; it < kMaxProjGrad; ++it) {
        double shift = 0.0;
        for (int k = 0; k < m; ++k) {
            const Vec y = z + increments[k];
            const Vec znew = project_half_space(p.faces[k], y);
            increments[k] = y - znew;
            shift = std::max(shift, (znew - z).norm());
            z = znew;
        }
        double violation = 0.0;
        for (const auto& f : p.faces)
            violation = std::max(violation, f.normal.dot(z) - f.offset);
        if (violation <= 1e-13 && shift <= 1e-13) return z;
    }
    double violation = 0.0;
    for (const auto& f : p.faces) violation = std::max(violation, f.normal.dot(z) - f.offset);
    if (violation <= tol::kProjIter) return z;
    throw SolverFailure("polytope Dykstra projection", violation);
}

// Moves y to the feasible side along the segment towards the interior anchor.
Vec pull_feasible(const SmoothLevelSet& s, const Vec& y) {
    if (s.value(y) <= 0.0) return y;
    double lo = 0.0, hi = 1.0;  // y + t (anchor - y); F > 0 at lo, F < 0 at hi
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Vec zm = y + mid * (s.interior_point - y);
        (s.value(zm) > 0.0 ? lo : hi) = mid;
    }
    return y + hi * (s.interior_point - y);
}

Vec project_level_set(const SmoothLevelSet& s, const Vec& x) {
    if (s.value(x) <= 0.0) return x;

    // Phase 1: projected gradient on 0.5||z - x||^2 with Armijo backtracking;
    // feasibility is restored by pulling towards the interior anchor.
    Vec z = pull_feasible(s, x);
    double obj = 0.5 * (z - x).squaredNorm();
    for (int it = 0; it < 200; ++it) {
        const Vec grad = z - x;
        double step = 1.0;
        Vec cand;
        double cand_obj = obj;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            cand = pull_feasible(s, z - step * grad);
            cand_obj = 0.5 * (cand - x).squaredNorm();
            if (cand_obj <= obj - 1e-4 * step * grad.squaredNorm()) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        const double moved = (cand - z).norm();
        z = cand;
        obj = cand_obj;
        if (moved < 1e-10) break;
    }

    // Phase 2: polish to the KKT point of min 0.5||z - x||^2 s.t. F(z) = 0,
    // i.e. z - x + lambda grad F(z) = 0, F(z) = 0, via damped Newton with a
    // finite-difference Hessian of F. Phase 1 supplies a feasible warm start.
    {
        const Eigen::Index n = x.size();
        Vec g = s.gradient(z);
        if (g.norm() <= 0.0) throw SolverFailure("level-set projection: vanishing gradient", 0.0);
        double lambda = (x - z).norm() / g.norm();
        auto kkt_residual = [&](const Vec& zz, double ll) {
            Vec r(n + 1);
            r.head(n) = zz - x + ll * s.gradient(zz);
            r[n] = s.value(zz);
            return r;
        };
        Vec r = kkt_residual(z, lambda);
        for (int it = 0; it < kMaxProjGrad && r.norm() > 1e-13 * (1.0 + (x - z).norm()); ++it) {
            g = s.gradient(z);
            Eigen::MatrixXd hess(n, n);
            const double h = 1e-6 * (1.0 + z.norm());
            for (Eigen::Index j = 0; j < n; ++j) {
                Vec zp = z, zm = z;
                zp[j] += h;
                zm[j] -= h;
                hess.col(j) = (s.gradient(zp) - s.gradient(zm)) / (2.0 * h);
            }
            hess = 0.5 * (hess + hess.transpose().eval());
            Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 1, n + 1);
            kkt.topLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n) + lambda * hess;
            kkt.topRightCorner(n, 1) = g;
            kkt.bottomLeftCorner(1, n) = g.transpose();
            const Vec delta = kkt.fullPivLu().solve(-r);
            double step = 1.0;
            bool accepted = false;
            for (int bt = 0; bt < 40; ++bt) {
                const Vec zc = z + step * delta.head(n);
                const double lc = lambda + step * delta[n];
                const Vec rc = kkt_residual(zc, lc);
                if (rc.norm() < r.norm()) {
                    z = zc;
                    lambda = lc;
                    r = rc;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;
        }
        z = pull_feasible(s, z);
    }

    // Residual check: x - z must be parallel to the boundary normal.
    Vec n = s.gradient(z);
    n /= n.norm();
    const Vec d = x - z;
    const double residual = (d - d.dot(n) * n).norm();
    if (residual > tol::kProjIter * (1.0 + d.norm()))
        throw SolverFailure("level-set projection stationarity", residual);
    return z;
}

}  // namespace

TargetSet TargetSet::singleton(Vec point) {
    const int n = static_cast<int>(point.size());
    return TargetSet(Singleton{std::move(point)}, n);
}

TargetSet TargetSet::half_space(Vec normal, double offset) {
    const double nn = normal.norm();
    if (nn <= 0.0) throw DomainError("half-space normal must be nonzero");
    const int n = static_cast<int>(normal.size());
    return TargetSet(HalfSpace{normal / nn, offset / nn}, n);
}

TargetSet TargetSet::norm_ball(Vec center, double radius) {
    if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
    const int n = static_cast<int>(center.size());
    return TargetSet(NormBall{std::move(center), radius}, n);
}

TargetSet TargetSet::ellipsoid(Vec center, Vec semi_axes) {
    const int n = static_cast<int>(center.size());
    return ellipsoid(std::move(center), std::move(semi_axes), Mat::Identity(n, n));
}

TargetSet TargetSet::ellipsoid(Vec center, Vec semi_axes, Mat rotation) {
    const int n = static_cast<int>(center.size());
    if (semi_axes.size() != n || rotation.rows() != n || rotation.cols() != n)
        throw DomainError("ellipsoid: inconsistent dimensions");
    if (semi_axes.minCoeff() <= 0.0) throw DomainError("ellipsoid semi-axes must be positive");
    if ((rotation.transpose() * rotation - Mat::Identity(n, n)).norm() > 1e-9)
        throw DomainError("ellipsoid rotation must be orthogonal");
    return TargetSet(Ellipsoid{std::move(center), std::move(semi_axes), std::move(rotation)}, n);
}

TargetSet TargetSet::polytope(std::vector<HalfSpace> faces) {
    if (faces.empty()) throw DomainError("polytope needs at least one face");
    const int n = static_cast<int>(faces.front().normal.size());
    for (auto& f : faces) {
        if (f.normal.size() != n) throw DomainError("polytope: inconsistent dimensions");
        const double nn = f.normal.norm();
        if (nn <= 0.0) throw DomainError("polytope face normal must be nonzero");
        f.normal /= nn;
        f.offset /= nn;
    }
    return TargetSet(Polytope{std::move(faces)}, n);
}

TargetSet TargetSet::smooth_level_set(std::function<double(const Vec&)> value,
                                      std::function<Vec(const Vec&)> gradient,
                                      Vec interior_point) {
    if (value(interior_point) >= 0.0)
        throw DomainError("level set: interior_point must satisfy F < 0");
    const int n = static_cast<int>(interior_point.size());
    return TargetSet(SmoothLevelSet{std::move(value), std::move(gradient), std::move(interior_point)},
                     n);
}

bool TargetSet::contains(const Vec& z) const {
    check_dimension(static_cast<int>(z.size()), dimension_, "contains");
    return std::visit(
        [&](const auto& set) -> bool {
            using T = std::decay_t<decltype(set)>;
            if constexpr (std::is_same_v<T, Singleton>) {
                return (z - set.point).norm() <= tol::kMembership;
            } else if constexpr (std::is_same_v<T, HalfSpace>) {
                return set.normal.dot(z) - set.offset <= tol::kMembership;
            } else if constexpr (std::is_same_v<T, NormBall>) {
                return (z - set.center).norm() <= set.radius + tol::kMembership;
            } else if constexpr (std::is_same_v<T, Polytope>) {
                for (const auto& f : set.faces)
                    if (f.normal.dot(z) - f.offset > tol::kMembership) return false;
                return true;
            } else {
                return boundary_value(z) <= tol::kMembership;
            }
        },
        data_);
}

Vec TargetSet::project(const Vec& x) const {
    check_dimension(static_cast<int>(x.size()), dimension_, "project");
    return std::visit(
        [&](const auto& set) -> Vec {
            using T = std::decay_t<decltype(set)>;
            if constexpr (std::is_same_v<T, Singleton>) {
                return set.point;
            } else if constexpr (std::is_same_v<T, HalfSpace>) {
                return project_half_space(set, x);
            } else if constexpr (std::is_same_v<T, NormBall>) {
                return project_norm_ball(set, x);
            } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                return project_ellipsoid(set, x);
            } else if constexpr (std::is_same_v<T, Polytope>) {
                return project_polytope(set, x);
            } else {
                return project_level_set(set, x);
            }
        },
        data_);
}

double TargetSet::distance(const Vec& x) const { return (x - project(x)).norm(); }

bool TargetSet::has_smooth_boundary() const {
    return std::holds_alternative<NormBall>(data_) || std::holds_alternative<Ellipsoid>(data_) ||
           std::holds_alternative<SmoothLevelSet>(data_) ||
           std::holds_alternative<HalfSpace>(data_);
}

double TargetSet::boundary_value(const Vec& z) const {
    check_dimension(static_cast<int>(z.size()), dimension_, "boundary_value");
    return std::visit(
        [&](const auto& set) -> double {
            using T = std::decay_t<decltype(set)>;
            if constexpr (std::is_same_v<T, HalfSpace>) {
                return set.normal.dot(z) - set.offset;
            } else if constexpr (std::is_same_v<T, NormBall>) {
                return (z - set.center).squaredNorm() - set.radius * set.radius;
            } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                const Vec y = set.rotation.transpose() * (z - set.center);
                double v = -1.0;
                for (int i = 0; i < y.size(); ++i) {
                    const double q = y[i] / set.semi_axes[i];
                    v += q * q;
                }
                return v;
            } else if constexpr (std::is_same_v<T, SmoothLevelSet>) {
                return set.value(z);
            } else {
                throw DomainError("boundary_value: variant has no smooth boundary");
            }
        },
        data_);
}

Vec TargetSet::boundary_gradient(const Vec& p) const {
    check_dimension(static_cast<int>(p.size()), dimension_, "boundary_gradient");
    if (!has_smooth_boundary())
        throw DomainError("boundary_gradient: variant has no smooth boundary");
    if (std::abs(boundary_value(p)) > tol::kBoundary)
        throw DomainError("boundary_gradient: point is not on the boundary");
    Vec g = std::visit(
        [&](const auto& set) -> Vec {
            using T = std::decay_t<decltype(set)>;
            if constexpr (std::is_same_v<T, HalfSpace>) {
                return set.normal;
            } else if constexpr (std::is_same_v<T, NormBall>) {
                return 2.0 * (p - set.center);
            } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                const Vec y = set.rotation.transpose() * (p - set.center);
                Vec gb(y.size());
                for (int i = 0; i < y.size(); ++i)
                    gb[i] = 2.0 * y[i] / (set.semi_axes[i] * set.semi_axes[i]);
                return set.rotation * gb;
            } else if constexpr (std::is_same_v<T, SmoothLevelSet>) {
                return set.gradient(p);
            } else {
                throw DomainError("boundary_gradient: unsupported variant");
            }
        },
        data_);
    if (g.norm() <= 0.0) throw DomainError("boundary_gradient: vanishing gradient");
    return g;
}

Vec TargetSet::interior_anchor() const {
    return std::visit(
        [&](const auto& set) -> Vec {
            using T = std::decay_t<decltype(set)>;
            if constexpr (std::is_same_v<T, Singleton>) {
                return set.point;
            } else if constexpr (std::is_same_v<T, NormBall>) {
                return set.center;
            } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                return set.center;
            } else if constexpr (std::is_same_v<T, SmoothLevelSet>) {
                return set.interior_point;
            } else {
                throw DomainError("interior_anchor: unbounded or degenerate variant");
            }
        },
        data_);
}

}  // namespace tdg
