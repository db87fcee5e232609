#pragma once

#include "tdg/types.hpp"

#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace tdg {

// Closed convex target-set variants. Construct through the TargetSet factories,
// which validate the invariants (unit normals, positive radii, ...).

struct Singleton {
    Vec point;
};

// {z : <normal, z> <= offset}, normal has unit norm.
struct HalfSpace {
    Vec normal;
    double offset;
};

struct NormBall {
    Vec center;
    double radius;
};

// Axis lengths along the columns of `rotation` (identity = axis-aligned).
struct Ellipsoid {
    Vec center;
    Vec semi_axes;
    Mat rotation;
};

// H-representation: intersection of half-spaces.
struct Polytope {
    std::vector<HalfSpace> faces;
};

// {z : F(z) <= 0} with F convex and smooth; the caller supplies F, its
// gradient, and a strictly interior anchor point (F(anchor) < 0).
struct SmoothLevelSet {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    Vec interior_point;
};

class TargetSet {
public:
    using Variant =
        std::variant<Singleton, HalfSpace, NormBall, Ellipsoid, Polytope, SmoothLevelSet>;

    static TargetSet singleton(Vec point);
    static TargetSet half_space(Vec normal, double offset);
    static TargetSet norm_ball(Vec center, double radius);
    static TargetSet ellipsoid(Vec center, Vec semi_axes);
    static TargetSet ellipsoid(Vec center, Vec semi_axes, Mat rotation);
    static TargetSet polytope(std::vector<HalfSpace> faces);
    static TargetSet smooth_level_set(std::function<double(const Vec&)> value,
                                      std::function<Vec(const Vec&)> gradient,
                                      Vec interior_point);

    int dimension() const { return dimension_; }

    bool contains(const Vec& z) const;
    Vec project(const Vec& x) const;
    double distance(const Vec& x) const;

    // True for variants with a smooth boundary description F (NormBall,
    // Ellipsoid, SmoothLevelSet). HalfSpace is accepted as a degenerate case.
    bool has_smooth_boundary() const;

    // F(z) for smooth-boundary variants (HalfSpace: <a,z> - b).
    double boundary_value(const Vec& z) const;

    // Gradient of F at a boundary point p (|F(p)| <= tol::kBoundary).
    Vec boundary_gradient(const Vec& p) const;

    // A point strictly inside the set, used as ray-casting anchor for
    // boundary sampling. Defined for bounded variants.
    Vec interior_anchor() const;

    const Variant& data() const { return data_; }

private:
    TargetSet(Variant data, int dimension) : data_(std::move(data)), dimension_(dimension) {}

    Variant data_;
    int dimension_;
};

}  // namespace tdg
