#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tdg/convex_sets.hpp"

#include <cmath>
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

TargetSet section_v_ellipsoid() { return TargetSet::ellipsoid(Vec::Zero(3), vec3(0.8, 0.4, 0.4)); }

Vec random_vec(std::mt19937_64& rng, int n, double half_width) {
    std::uniform_real_distribution<double> u(-half_width, half_width);
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = u(rng);
    return v;
}

// Random point inside the unit ball scaled into the ellipsoid.
Vec random_ellipsoid_point(std::mt19937_64& rng, const Vec& semi_axes) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec d(semi_axes.size());
    for (int i = 0; i < d.size(); ++i) d[i] = g(rng);
    d.normalize();
    const double r = std::pow(u(rng), 1.0 / semi_axes.size());
    return (r * d.array() * semi_axes.array()).matrix();
}

}  // namespace

TEST_CASE("contains") {
    CHECK(TargetSet::norm_ball(Vec::Zero(3), 1.0).contains(vec3(0.5, 0, 0)));
    CHECK_FALSE(TargetSet::half_space(vec3(0, 0, 1), 0.0).contains(vec3(1, 2, 3)));
    CHECK_FALSE(section_v_ellipsoid().contains(vec3(0.2, 0.2, 0.7)));
    CHECK(section_v_ellipsoid().contains(vec3(0.2, 0.2, 0.2)));
    CHECK_THROWS_AS((void)section_v_ellipsoid().contains(vec2(0, 0)), DomainError);
}

TEST_CASE("closed-form projections") {
    CHECK((TargetSet::half_space(vec3(0, 0, 1), 0.0).project(vec3(1, 2, 3)) - vec3(1, 2, 0))
              .norm() == doctest::Approx(0.0).epsilon(tol::kProjClosed));
    CHECK((TargetSet::norm_ball(Vec::Zero(3), 1.0).project(vec3(2, 0, 0)) - vec3(1, 0, 0)).norm() ==
          doctest::Approx(0.0).epsilon(tol::kProjClosed));
    CHECK((TargetSet::singleton(Vec::Zero(2)).project(vec2(0.3, -0.4))).norm() ==
          doctest::Approx(0.0));
}

TEST_CASE("ellipsoid projection vs dense-sampling oracle") {
    const TargetSet ell = section_v_ellipsoid();
    const Vec semi = vec3(0.8, 0.4, 0.4);
    const Vec x = vec3(1, 1, 1);
    const Vec z = ell.project(x);

    // Brute-force minimum of ||x - q|| over a fine boundary mesh.
    double best = 1e300;
    Vec best_q;
    const int res = 600;
    for (int i = 0; i < res; ++i) {
        const double phi = M_PI * (i + 0.5) / res;
        for (int j = 0; j < res; ++j) {
            const double th = 2.0 * M_PI * j / res;
            const Vec q = vec3(semi[0] * std::sin(phi) * std::cos(th),
                               semi[1] * std::sin(phi) * std::sin(th), semi[2] * std::cos(phi));
            const double d = (x - q).norm();
            if (d < best) {
                best = d;
                best_q = q;
            }
        }
    }
    CHECK((z - best_q).norm() < 1e-2);   // mesh pitch limits the point match
    CHECK((x - z).norm() <= best + 1e-6);  // distance is what matters
}

TEST_CASE("distance") {
    CHECK(TargetSet::norm_ball(Vec::Zero(3), 1.0).distance(vec3(2, 0, 0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(section_v_ellipsoid().distance(vec3(0.1, 0.1, 0.1)) == doctest::Approx(0.0));
    CHECK(TargetSet::singleton(Vec::Zero(2)).distance(vec2(3, 4)) ==
          doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("boundary_gradient") {
    CHECK((TargetSet::norm_ball(Vec::Zero(2), 1.0).boundary_gradient(vec2(1, 0)) - vec2(2, 0))
              .norm() < 1e-12);
    auto quartic = TargetSet::smooth_level_set(
        [](const Vec& z) { return std::pow(z[0], 4) + std::pow(z[1], 4) + std::pow(z[2], 4) - 1; },
        [](const Vec& z) {
            return Vec(4 * z.array().pow(3));
        },
        Vec::Zero(3));
    CHECK((quartic.boundary_gradient(vec3(1, 0, 0)) - vec3(4, 0, 0)).norm() < 1e-12);
    // d/dz1 of sum (z_i/s_i)^2 at (0.8,0,0) with s_1 = 0.8: 2 * 0.8 / 0.8^2 = 2.5.
    CHECK((section_v_ellipsoid().boundary_gradient(vec3(0.8, 0, 0)) - vec3(2.5, 0, 0)).norm() <
          1e-12);
    CHECK_THROWS_AS((void)TargetSet::singleton(Vec::Zero(2)).boundary_gradient(vec2(0, 0)),
                    DomainError);
    CHECK_THROWS_AS((void)TargetSet::polytope({{vec2(1, 0), 1.0}, {vec2(-1, 0), 1.0}})
                        .boundary_gradient(vec2(1, 0)),
                    DomainError);
}

TEST_CASE("projection idempotence and variational inequality") {
    std::mt19937_64 rng(7);
    const Vec semi = vec3(0.8, 0.4, 0.4);
    std::vector<TargetSet> sets;
    sets.push_back(TargetSet::norm_ball(vec3(0.1, -0.2, 0.3), 0.7));
    sets.push_back(TargetSet::half_space(vec3(0, 0, 1), 0.25));
    sets.push_back(section_v_ellipsoid());
    sets.push_back(TargetSet::polytope({{vec3(1, 0, 0), 0.5},
                                        {vec3(-1, 0, 0), 0.5},
                                        {vec3(0, 1, 0), 0.5},
                                        {vec3(0, -1, 0), 0.5},
                                        {vec3(0, 0, 1), 0.5},
                                        {vec3(0, 0, -1), 0.5}}));
    for (const auto& set : sets) {
        for (int k = 0; k < 50; ++k) {
            const Vec x = random_vec(rng, 3, 3.0);
            const Vec p = set.project(x);
            CHECK((set.project(p) - p).norm() < tol::kProjIter);
            // Variational inequality against a known feasible point.
            Vec z = random_ellipsoid_point(rng, semi * 0.5);
            z = set.project(z);
            CHECK((x - p).dot(z - p) <= tol::kProjIter * ((x - z).norm() + 1.0));
        }
    }
}

TEST_CASE("ball as level set matches closed form") {
    const TargetSet ball = TargetSet::norm_ball(Vec::Zero(3), 1.0);
    auto level = TargetSet::smooth_level_set(
        [](const Vec& z) { return z.squaredNorm() - 1.0; }, [](const Vec& z) { return Vec(2 * z); },
        Vec::Zero(3));
    std::mt19937_64 rng(11);
    for (int k = 0; k < 100; ++k) {
        const Vec x = random_vec(rng, 3, 3.0);
        CHECK((ball.project(x) - level.project(x)).norm() < 1e-8);
    }
}

TEST_CASE("distance is 1-Lipschitz") {
    std::mt19937_64 rng(13);
    const TargetSet ell = section_v_ellipsoid();
    for (int k = 0; k < 200; ++k) {
        const Vec x = random_vec(rng, 3, 3.0);
        const Vec y = random_vec(rng, 3, 3.0);
        CHECK(std::abs(ell.distance(x) - ell.distance(y)) <= (x - y).norm() + 1e-9);
    }
}

TEST_CASE("factory validation") {
    CHECK_THROWS_AS(TargetSet::norm_ball(Vec::Zero(2), 0.0), DomainError);
    CHECK_THROWS_AS(TargetSet::ellipsoid(Vec::Zero(2), vec2(1, 0)), DomainError);
    CHECK_THROWS_AS(TargetSet::half_space(Vec::Zero(2), 0.0), DomainError);
    CHECK_THROWS_AS(TargetSet::polytope({}), DomainError);
    // Half-space normals are normalized on construction.
    const TargetSet hs = TargetSet::half_space(vec2(0, 2), 4.0);
    CHECK(hs.contains(vec2(0, 2)));
    CHECK_FALSE(hs.contains(vec2(0, 2.1)));
}
