#pragma once

#include "tdg/convex_sets.hpp"
#include "tdg/game_core.hpp"
#include "tdg/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace tdg {

// One sample of the projected barrier surface (PBS): a target-boundary point
// p, the positive quadratic root xi_plus, and the image point on the PBS.
struct PbsSample {
    Vec boundary_point;
    double xi_plus = 0.0;
    Vec pbs_point;
    bool ok = true;
    std::string error;
};

// Implicit-equation residual whose zero level set is the PBS, for the three
// targets with closed forms (singleton, half-space, norm ball). The residual
// sign agrees with the barrier sign for the same query point.
double pbs_analytic(const TargetSet& target, const Vec& x_P0, const GameConfig& cfg,
                    const Vec& query);

// Unique positive root of
//   ||grad||^2 xi^2 + 2 g^2 <x_P0 - p, grad> xi - g^2 (1 - g^2) ||x_P0 - p||^2 = 0
// (g = gamma), computed cancellation-free.
double xi_plus(const Vec& p, const Vec& grad, const Vec& x_P0, const GameConfig& cfg);

// Maps a boundary point of a smooth target to the PBS via the two-step form
// (quadratic root, then affine image).
PbsSample map_boundary_to_pbs(const Vec& p, const TargetSet& target, const Vec& x_P0,
                              const GameConfig& cfg);

// Single-expression closed form of the same map; kept as a redundant
// cross-check of map_boundary_to_pbs.
Vec map_boundary_to_pbs_closed_form(const Vec& p, const Vec& grad, const Vec& x_P0,
                                    const GameConfig& cfg);

// Deterministic boundary sampling (ray casting from the interior anchor) and
// mapping. In R^2 `resolution` points on the circle of directions; in R^3 a
// resolution x resolution latitude-longitude grid; resolution 1 yields the
// single sample at the parameterization origin.
std::vector<PbsSample> sample_pbs_mesh(const TargetSet& target, const Vec& x_P0,
                                       const GameConfig& cfg, int resolution);

// Deterministic points on the closed-form PBS itself (singleton, half-space,
// norm ball): exact for the singleton sphere, explicit for the half-space
// hyperboloid sheet, and bisection on the oval residual for the ball.
std::vector<Vec> sample_analytic_pbs(const TargetSet& target, const Vec& x_P0,
                                     const GameConfig& cfg, int count);

// Casts a ray from the interior anchor along unit direction u and returns the
// boundary intersection (bisection on F, 80 steps).
Vec cast_boundary_ray(const TargetSet& target, const Vec& direction);

void write_mesh_csv(std::ostream& out, const std::vector<PbsSample>& mesh);

// Indexed-triangle JSON for external plotting ("vertices" + "triangles"; the
// triangulation assumes the lat-long grid ordering of sample_pbs_mesh).
void write_mesh_json(std::ostream& out, const std::vector<PbsSample>& mesh, int resolution,
                     int dimension);

}  // namespace tdg
