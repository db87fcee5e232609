#include "tdg/game_core.hpp"

#include <cmath>

namespace tdg {

ApolloniusRegion apollonius(const GameConfig& cfg, const GameState& s) {
    const double g2 = cfg.gamma * cfg.gamma;
    const double denom = 1.0 - g2;
    ApolloniusRegion region;
    region.alpha = (s.x_E - g2 * s.x_P) / denom;
    region.beta = cfg.gamma * (s.x_E - s.x_P).norm() / denom;
    return region;
}

BarrierResult barrier(const GameConfig& cfg, const GameState& s, const TargetSet& target) {
    const ApolloniusRegion a = apollonius(cfg, s);
    BarrierResult result;
    result.projection_point = target.project(a.alpha);
    result.value = (a.alpha - result.projection_point).norm() - a.beta;
    if (result.value > tol::kBarrier)
        result.region = Region::CaptureRegion;
    else if (result.value < -tol::kBarrier)
        result.region = Region::AttackRegion;
    else
        result.region = Region::OnBarrier;
    return result;
}

Termination check_termination(const GameConfig& cfg, const GameState& s, const TargetSet& target,
                              double capture_radius) {
    (void)cfg;
    if (capture_radius < 0.0) throw DomainError("capture_radius must be nonnegative");
    if ((s.x_P - s.x_E).norm() <= capture_radius) return Termination::Captured;
    if (target.contains(s.x_E)) return Termination::Attacked;
    return Termination::Running;
}

const char* to_string(Region r) {
    switch (r) {
        case Region::CaptureRegion: return "CaptureRegion";
        case Region::AttackRegion: return "AttackRegion";
        case Region::OnBarrier: return "OnBarrier";
    }
    return "?";
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::Running: return "Running";
        case Termination::Captured: return "Captured";
        case Termination::Attacked: return "Attacked";
    }
    return "?";
}

}  // namespace tdg
