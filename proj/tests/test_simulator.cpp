#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tdg/simulator.hpp"

#include <cmath>
#include <sstream>

using namespace tdg;

namespace {

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

Scenario ball_capture_scenario() {
    const GameConfig cfg = GameConfig::make(2, 0.5);
    return Scenario{cfg,
                    TargetSet::norm_ball(Vec::Zero(2), 1.0),
                    vec2(3, 0),
                    vec2(2.2, 0),
                    Policy::optimal(),
                    Policy::optimal(),
                    1e-3,
                    50.0,
                    1e-6,
                    0};
}

}  // namespace

TEST_CASE("optimal capture run: straight, value-conserving") {
    const Scenario sc = ball_capture_scenario();
    const TrajectoryRecord rec = simulate(sc);
    CHECK(rec.outcome == Outcome::Captured);
    // Colinear worked case: both players run to (1.4, 0), value 0.4.
    CHECK(rec.t_f == doctest::Approx(1.6).epsilon(1e-4));
    CHECK(std::abs(rec.payoff - 0.4) < 1e-3);
    CHECK(straightness_deviation(rec, Role::Defender) < 1e-6);
    CHECK(straightness_deviation(rec, Role::Evader) < 1e-6);
    CHECK(rec.switch_times.empty());
    for (const auto& st : rec.steps) CHECK(std::abs(st.barrier_value - 0.4) < 1e-3);
}

TEST_CASE("speed fidelity per step") {
    const Scenario sc = ball_capture_scenario();
    const TrajectoryRecord rec = simulate(sc);
    for (size_t i = 0; i + 2 < rec.steps.size(); ++i) {  // skip the refined last step
        const double h = rec.steps[i + 1].t - rec.steps[i].t;
        CHECK(h > 0.0);
        const double sP = (rec.steps[i + 1].x_P - rec.steps[i].x_P).norm() / h;
        const double sE = (rec.steps[i + 1].x_E - rec.steps[i].x_E).norm() / h;
        CHECK(std::abs(sP - sc.cfg.v_P) < 1e-9);
        CHECK(std::abs(sE - sc.cfg.v_E) < 1e-9);
    }
}

TEST_CASE("optimal attack run") {
    Scenario sc = ball_capture_scenario();
    sc.x_E0 = vec2(1.8, 0);  // inside the barrier: alpha=(1.4,0), beta=0.8, B=-0.4
    const TrajectoryRecord rec = simulate(sc);
    CHECK(rec.outcome == Outcome::Attacked);
    CHECK(std::abs(rec.payoff - 0.4) < 1e-3);  // V_a = -0.4: P ends 0.4 away
    CHECK(rec.switch_times.empty());
    CHECK(straightness_deviation(rec, Role::Evader) < 1e-6);
}

TEST_CASE("determinism") {
    const Scenario sc = ball_capture_scenario();
    const TrajectoryRecord a = simulate(sc);
    const TrajectoryRecord b = simulate(sc);
    REQUIRE(a.steps.size() == b.steps.size());
    CHECK(a.t_f == b.t_f);
    CHECK(a.payoff == b.payoff);
    for (size_t i = 0; i < a.steps.size(); ++i) {
        CHECK((a.steps[i].x_P - b.steps[i].x_P).norm() == 0.0);
        CHECK((a.steps[i].x_E - b.steps[i].x_E).norm() == 0.0);
    }
}

TEST_CASE("horizon exceeded") {
    Scenario sc = ball_capture_scenario();
    sc.t_max = 0.5;  // capture needs t = 1.6
    const TrajectoryRecord rec = simulate(sc);
    CHECK(rec.outcome == Outcome::HorizonExceeded);
    CHECK(std::isnan(rec.payoff));
}

TEST_CASE("immediate termination states") {
    Scenario sc = ball_capture_scenario();
    sc.x_E0 = sc.x_P0;
    sc.capture_radius = 1e-3;
    CHECK(simulate(sc).outcome == Outcome::Captured);

    Scenario sa = ball_capture_scenario();
    sa.x_E0 = vec2(0.5, 0);
    CHECK(simulate(sa).outcome == Outcome::Attacked);
}

TEST_CASE("scenario validation") {
    Scenario sc = ball_capture_scenario();
    sc.dt = 0.0;
    CHECK_THROWS_AS(simulate(sc), DomainError);
    Scenario s2 = ball_capture_scenario();
    s2.t_max = -1.0;
    CHECK_THROWS_AS(simulate(s2), DomainError);
    Scenario s3 = ball_capture_scenario();
    s3.capture_radius = -1.0;
    CHECK_THROWS_AS(simulate(s3), DomainError);
    Scenario s4 = ball_capture_scenario();
    s4.x_E0 = Vec::Zero(3);
    CHECK_THROWS_AS(simulate(s4), DomainError);
}

TEST_CASE("straightness_deviation") {
    TrajectoryRecord rec;
    const Vec z = Vec::Zero(2);
    rec.steps.push_back({0.0, vec2(0, 0), vec2(1, 0), 0.0, Region::CaptureRegion, z, z});
    rec.steps.push_back({1.0, vec2(1, 0), vec2(2, 0), 0.0, Region::CaptureRegion, z, z});
    CHECK(straightness_deviation(rec, Role::Defender) == doctest::Approx(0.0));
    rec.steps.insert(rec.steps.begin() + 1,
                     {0.5, vec2(0.5, 0.25), vec2(1.5, 0), 0.0, Region::CaptureRegion, z, z});
    CHECK(straightness_deviation(rec, Role::Defender) == doctest::Approx(0.25).epsilon(1e-12));

    TrajectoryRecord empty;
    empty.steps.push_back({0.0, vec2(0, 0), vec2(1, 0), 0.0, Region::CaptureRegion, z, z});
    CHECK_THROWS_AS(straightness_deviation(empty, Role::Defender), DomainError);
}

TEST_CASE("pure pursuit curves") {
    Scenario sc = ball_capture_scenario();
    sc.x_E0 = vec2(2.2, 0.4);
    sc.policy_P = Policy::pure_pursuit();
    sc.capture_radius = 1e-3;
    const TrajectoryRecord rec = simulate(sc);
    CHECK(straightness_deviation(rec, Role::Defender) > 1e-3);
}

TEST_CASE("trajectory serialization") {
    Scenario sc = ball_capture_scenario();
    sc.t_max = 0.05;
    const TrajectoryRecord rec = simulate(sc);
    std::ostringstream csv;
    write_trajectory_csv(csv, rec);
    CHECK(csv.str().rfind("t,xP0,xP1,xE0,xE1,barrier,regime", 0) == 0);
    std::ostringstream js;
    write_trajectory_json(js, rec);
    CHECK(js.str().find("\"outcome\"") != std::string::npos);
    CHECK(js.str().find("\"switch_times\"") != std::string::npos);
}
