#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tdg/game_core.hpp"
#include "tdg/strategies.hpp"

#include <random>

using namespace tdg;

namespace {

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

Vec vec3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

Vec random_vec(std::mt19937_64& rng, int n, double half_width) {
    std::uniform_real_distribution<double> u(-half_width, half_width);
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = u(rng);
    return v;
}

Vec random_unit(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = g(rng);
    return v.normalized();
}

}  // namespace

TEST_CASE("GameConfig validation") {
    CHECK_THROWS_AS(GameConfig::make(0, 0.5), DomainError);
    CHECK_THROWS_AS(GameConfig::make(2, 0.0), DomainError);
    CHECK_THROWS_AS(GameConfig::make(2, 1.0), DomainError);
    CHECK_THROWS_AS(GameConfig::make(2, 0.5, 0.0), DomainError);
    const GameConfig cfg = GameConfig::make(3, 0.5, 2.0);
    CHECK(cfg.v_E == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("apollonius examples") {
    const GameConfig cfg = GameConfig::make(2, 0.5);
    {
        const ApolloniusRegion a = apollonius(cfg, {vec2(0, 0), vec2(1, 0), 0});
        CHECK((a.alpha - vec2(4.0 / 3.0, 0)).norm() < 1e-12);
        CHECK(a.beta == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    }
    {
        const ApolloniusRegion a = apollonius(cfg, {vec2(1, 1), vec2(1, 1), 0});
        CHECK((a.alpha - vec2(1, 1)).norm() < 1e-12);
        CHECK(a.beta == doctest::Approx(0.0));
    }
    {
        const ApolloniusRegion a = apollonius(cfg, {vec2(1, 0), vec2(0.7, 0), 0});
        CHECK((a.alpha - vec2(0.6, 0)).norm() < 1e-12);
        CHECK(a.beta == doctest::Approx(0.2).epsilon(1e-12));
    }
}

TEST_CASE("apollonius defining property") {
    std::mt19937_64 rng(17);
    const GameConfig cfg = GameConfig::make(3, 0.5);
    for (int k = 0; k < 1000; ++k) {
        const GameState s{random_vec(rng, 3, 3.0), random_vec(rng, 3, 3.0), 0.0};
        const ApolloniusRegion a = apollonius(cfg, s);
        const Vec z = a.alpha + a.beta * random_unit(rng, 3);
        CHECK(std::abs((z - s.x_E).norm() - cfg.gamma * (z - s.x_P).norm()) < 1e-9);
        CHECK((s.x_E - a.alpha).norm() <= a.beta + 1e-12);  // region contains x_E
    }
}

TEST_CASE("barrier examples") {
    const GameConfig cfg = GameConfig::make(2, 0.5);
    const TargetSet origin = TargetSet::singleton(Vec::Zero(2));
    {
        const BarrierResult b = barrier(cfg, {vec2(1, 0), vec2(0.5, 0), 0}, origin);
        CHECK(std::abs(b.value) <= tol::kBarrier);
        CHECK(b.region == Region::OnBarrier);
    }
    {
        const BarrierResult b = barrier(cfg, {vec2(1, 0), vec2(0.4, 0), 0}, origin);
        CHECK(b.value == doctest::Approx(-0.2).epsilon(1e-12));
        CHECK(b.region == Region::AttackRegion);
    }
    {
        const BarrierResult b = barrier(cfg, {vec2(1, 0), vec2(0.7, 0), 0}, origin);
        CHECK(b.value == doctest::Approx(0.4).epsilon(1e-12));
        CHECK(b.region == Region::CaptureRegion);
    }
    const GameConfig cfg3 = GameConfig::make(3, 0.5);
    const TargetSet ell = TargetSet::ellipsoid(Vec::Zero(3), vec3(0.8, 0.4, 0.4));
    const BarrierResult b =
        barrier(cfg3, {vec3(-0.8, 0, 0.5), vec3(0.2, 0.4, 0.9), 0}, ell);
    CHECK(b.value > 0.0);
    CHECK(b.region == Region::CaptureRegion);
}

TEST_CASE("barrier sign consistency") {
    std::mt19937_64 rng(23);
    const GameConfig cfg = GameConfig::make(3, 0.5);
    const TargetSet ball = TargetSet::norm_ball(Vec::Zero(3), 1.0);
    for (int k = 0; k < 500; ++k) {
        const GameState s{random_vec(rng, 3, 3.0), random_vec(rng, 3, 3.0), 0.0};
        const ApolloniusRegion a = apollonius(cfg, s);
        const BarrierResult b = barrier(cfg, s, ball);
        const double proj_dist = (b.projection_point - a.alpha).norm();
        if (b.value > tol::kBarrier) CHECK(proj_dist > a.beta);
        if (b.value < -tol::kBarrier) CHECK(proj_dist < a.beta);
    }
}

TEST_CASE("barrier value equals capture value on CaptureRegion") {
    std::mt19937_64 rng(29);
    const GameConfig cfg = GameConfig::make(3, 0.5);
    const TargetSet ball = TargetSet::norm_ball(Vec::Zero(3), 1.0);
    int found = 0;
    while (found < 100) {
        const GameState s{random_vec(rng, 3, 3.0), random_vec(rng, 3, 3.0), 0.0};
        const BarrierResult b = barrier(cfg, s, ball);
        if (b.region != Region::CaptureRegion || (s.x_P - s.x_E).norm() < 1e-6) continue;
        ++found;
        CHECK(capture_plan(cfg, s, ball).value == b.value);
    }
}

TEST_CASE("barrier scaling covariance") {
    std::mt19937_64 rng(31);
    const GameConfig cfg = GameConfig::make(3, 0.5);
    for (int k = 0; k < 100; ++k) {
        const double scale = std::uniform_real_distribution<double>(0.5, 4.0)(rng);
        const Vec c = random_vec(rng, 3, 1.0);
        const double r = std::uniform_real_distribution<double>(0.2, 1.5)(rng);
        const GameState s{random_vec(rng, 3, 3.0), random_vec(rng, 3, 3.0), 0.0};
        const double b1 = barrier(cfg, s, TargetSet::norm_ball(c, r)).value;
        const double b2 =
            barrier(cfg, {scale * s.x_P, scale * s.x_E, 0.0},
                    TargetSet::norm_ball(scale * c, scale * r))
                .value;
        CHECK(b2 == doctest::Approx(scale * b1).epsilon(1e-10));
    }
}

TEST_CASE("check_termination") {
    const GameConfig cfg = GameConfig::make(2, 0.5);
    const TargetSet ball = TargetSet::norm_ball(Vec::Zero(2), 1.0);
    CHECK(check_termination(cfg, {vec2(2, 0), vec2(2, 0), 0}, ball, 0.0) == Termination::Captured);
    CHECK(check_termination(cfg, {vec2(2, 0), vec2(0.5, 0), 0}, ball, 1e-3) ==
          Termination::Attacked);
    CHECK(check_termination(cfg, {vec2(2, 0), vec2(1.5, 0), 0}, ball, 1e-3) ==
          Termination::Running);
    // Captured takes precedence when both conditions hold.
    CHECK(check_termination(cfg, {vec2(0.5, 0), vec2(0.5, 0), 0}, ball, 1e-3) ==
          Termination::Captured);
    CHECK_THROWS_AS(check_termination(cfg, {vec2(2, 0), vec2(1.5, 0), 0}, ball, -1.0), DomainError);
}
