#pragma once

#include "tdg/convex_sets.hpp"
#include "tdg/types.hpp"

namespace tdg {

// Evader's safe region: the set of points E reaches strictly before P under
// straight-line motion. A ball with center alpha and radius beta for gamma < 1.
struct ApolloniusRegion {
    Vec alpha;
    double beta;
};

enum class Region { CaptureRegion, AttackRegion, OnBarrier };

struct BarrierResult {
    double value;
    Region region;
    Vec projection_point;  // projection of alpha onto the target set
};

enum class Termination { Running, Captured, Attacked };

ApolloniusRegion apollonius(const GameConfig& cfg, const GameState& s);

// Signed barrier value dist(alpha, target) - beta; sign classifies the state
// with a dead-band of tol::kBarrier around zero.
BarrierResult barrier(const GameConfig& cfg, const GameState& s, const TargetSet& target);

// Captured takes precedence when both terminal conditions hold.
Termination check_termination(const GameConfig& cfg, const GameState& s, const TargetSet& target,
                              double capture_radius);

const char* to_string(Region r);
const char* to_string(Termination t);

}  // namespace tdg
