#pragma once

#include "tdg/convex_sets.hpp"
#include "tdg/game_core.hpp"
#include "tdg/types.hpp"

#include <cstdint>
#include <functional>

namespace tdg {

// Saddle-point plan for the capture game: optimal capture point, value, and
// unit heading for each player.
struct CapturePlan {
    Vec x_star;
    double value;
    Vec dir_P;
    Vec dir_E;
};

// Saddle-point plan for the attack game.
struct AttackPlan {
    Vec x_dagger;
    double value;
    Vec dir_P;
    Vec dir_E;
};

enum class Role { Defender, Evader };

// Feedback policy selector. OptimalAuto re-classifies the state each step and
// plays the matching subgame strategy (capture side when on the barrier).
// Custom is a library-level hook for test policies (e.g. random headings); it
// is not part of the scenario file schema.
struct Policy {
    enum class Kind { OptimalAuto, PurePursuit, DirectTo, Custom };
    Kind kind = Kind::OptimalAuto;
    Vec direct_target;  // DirectTo only
    std::function<Vec(const GameConfig&, const GameState&, const TargetSet&)> custom;

    static Policy optimal() { return Policy{Kind::OptimalAuto, {}, {}}; }
    static Policy pure_pursuit() { return Policy{Kind::PurePursuit, {}, {}}; }
    static Policy direct_to(Vec target_point) {
        return Policy{Kind::DirectTo, std::move(target_point), {}};
    }
};

// Capture-side plan; valid in the capture region (and on the barrier, where
// the value is zero and the capture point degenerates to the projection).
CapturePlan capture_plan(const GameConfig& cfg, const GameState& s, const TargetSet& target);

// Analytic gradient of the capture value w.r.t. the stacked state (x_P, x_E).
Vec capture_value_gradient(const GameConfig& cfg, const GameState& s, const TargetSet& target);

// Attack-side plan: minimizes phi(z) = -||z - x_P|| + ||z - x_E||/gamma over
// the intersection of the closed safe region and the target, by multi-start
// projected gradient descent with an active-set Newton polish.
AttackPlan attack_plan(const GameConfig& cfg, const GameState& s, const TargetSet& target,
                       std::uint64_t seed = 0);

Vec attack_value_gradient(const GameConfig& cfg, const GameState& s, const TargetSet& target,
                          std::uint64_t seed = 0);

// Unit heading for one agent under the given policy.
Vec policy_step(const Policy& policy, Role role, const GameConfig& cfg, const GameState& s,
                const TargetSet& target, std::uint64_t seed = 0);

// The attack-game objective phi evaluated at z.
double attack_objective(const GameConfig& cfg, const GameState& s, const Vec& z);

}  // namespace tdg
