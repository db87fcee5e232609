#pragma once

#include "tdg/convex_sets.hpp"
#include "tdg/game_core.hpp"
#include "tdg/types.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace tdg {

// Independent oracles used to certify the analytic modules: finite
// differences, HJI residuals, and brute-force grid search. None of these call
// the analytic gradients or optimizers they check, except hji_residual, which
// by construction pairs the regime's analytic gradient with its strategies.

struct CheckReport {
    std::string name;
    int samples = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    GameState worst_state;
};

// <dV/dx, f(x, u_P*, u_E*)> for the regime the state lies in. Rejects
// on-barrier states.
double hji_residual(const GameConfig& cfg, const GameState& s, const TargetSet& target);

// Central differences of a scalar state function over the stacked 2n state.
Vec fd_gradient(const std::function<double(const GameState&)>& value_fn, const GameState& s,
                double step);

struct GridMinimum {
    Vec point;
    double value;
};

// Exhaustive minimization of the attack objective over a regular grid on the
// bounding box of the safe region, filtered by membership in both sets.
GridMinimum grid_minimize_phi(const GameConfig& cfg, const GameState& s, const TargetSet& target,
                              int resolution);

// Named suites: "hji", "gradients". All reports pass at their tolerances.
std::vector<CheckReport> run_suite(const std::string& name, std::uint64_t seed);

void write_reports_json(std::ostream& out, const std::vector<CheckReport>& reports);
void print_reports(std::ostream& out, const std::vector<CheckReport>& reports);

// Draws a random state in a box of half-width 3 around the target anchor,
// rejecting states that are not strictly in the requested region.
GameState sample_state_in_region(const GameConfig& cfg, const TargetSet& target, Region want,
                                 std::mt19937_64& rng);

}  // namespace tdg
