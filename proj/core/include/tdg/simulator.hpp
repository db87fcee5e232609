#pragma once

#include "tdg/convex_sets.hpp"
#include "tdg/game_core.hpp"
#include "tdg/strategies.hpp"
#include "tdg/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace tdg {

struct Scenario {
    GameConfig cfg;
    TargetSet target;
    Vec x_P0;
    Vec x_E0;
    Policy policy_P;
    Policy policy_E;
    double dt = 1e-3;
    double t_max = 50.0;
    double capture_radius = 1e-3;
    std::uint64_t seed = 0;
};

enum class Outcome { Captured, Attacked, HorizonExceeded };

struct TrajectoryStep {
    double t;
    Vec x_P;
    Vec x_E;
    double barrier_value;
    Region regime;
    Vec dir_P;
    Vec dir_E;
};

struct TrajectoryRecord {
    std::vector<TrajectoryStep> steps;
    Outcome outcome;
    double t_f;
    std::vector<double> switch_times;
    // dist(x_E(t_f), target) if Captured; ||x_E(t_f) - x_P(t_f)|| if Attacked.
    double payoff;
};

// Fixed-step RK4 feedback simulation: controls are re-evaluated from the
// policies at every substage; the terminal time is refined by bisection
// inside the final step (tolerance dt * 1e-6).
TrajectoryRecord simulate(const Scenario& sc);

// Max distance of any sample from the chord joining the first and last
// positions of the given agent, normalized by the chord length.
double straightness_deviation(const TrajectoryRecord& rec, Role agent);

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& rec);
void write_trajectory_json(std::ostream& out, const TrajectoryRecord& rec);

const char* to_string(Outcome o);

}  // namespace tdg
