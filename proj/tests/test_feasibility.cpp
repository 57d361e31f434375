#include <catch2/catch_amalgamated.hpp>

#include "subgrad/feasibility.hpp"
#include "subgrad/random.hpp"

using namespace subgrad;

namespace {
Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

BallSystem system_of(std::vector<Ball> balls, double delta, double f_bar) {
    BallSystem s;
    s.balls = std::move(balls);
    s.delta_target = delta;
    s.f_bar_per_ball.assign(s.balls.size(), f_bar);
    return s;
}
}  // namespace

TEST_CASE("two overlapping balls reach the intersection in one projection") {
    const BallSystem s = system_of({Ball(v2(0, 0), 1.0), Ball(v2(1, 0), 1.0)}, 0.0, 0.0);
    const auto result = sequential_project(s, v2(-0.5, 0), 5, 1);

    CHECK(result.per_ball_dist[0] <= 1e-9);
    CHECK(result.per_ball_dist[1] <= 1e-9);
    CHECK(result.iterations_used == 1);  // only the second ball was outside
    CHECK(result.point.isApprox(v2(0, 0)));
}

TEST_CASE("single ball: exterior point projects in one iteration") {
    const BallSystem s = system_of({Ball(v2(0, 0), 1.0)}, 0.0, 0.0);
    const auto result = sequential_project(s, v2(3, 0), 5, 1);
    CHECK(result.iterations_used == 1);
    CHECK(result.point.isApprox(v2(1, 0)));
    CHECK(result.per_ball_dist[0] <= 1e-12);
}

TEST_CASE("interior start costs no iterations") {
    const BallSystem s = system_of({Ball(v2(0, 0), 2.0), Ball(v2(1, 0), 2.0)}, 0.0, 0.0);
    const auto result = sequential_project(s, v2(0.5, 0), 5, 3);
    CHECK(result.iterations_used == 0);
    CHECK(result.point.isApprox(v2(0.5, 0)));
}

TEST_CASE("max distance is non-increasing over sweeps") {
    Rng rng(321);
    for (int instance = 0; instance < 10; ++instance) {
        const Eigen::Index n = 20;
        std::vector<Ball> balls;
        for (int i = 0; i < 8; ++i) balls.emplace_back(rng.on_sphere(n, 3.0), 2.5);
        const BallSystem s = system_of(std::move(balls), 0.5, 0.25);
        const auto result = sequential_project(s, rng.on_sphere(n, 10.0), 5, 6);
        for (std::size_t i = 1; i < result.sweep_max_dist.size(); ++i)
            CHECK(result.sweep_max_dist[i] <= result.sweep_max_dist[i - 1] * (1.0 + 1e-12) + 1e-12);
    }
}

TEST_CASE("relaxed targets stop each subproblem at its f_bar") {
    const double target = 0.25;
    const BallSystem s = system_of({Ball(v2(0, 0), 1.0)}, target, target);
    const auto result = sequential_project(s, v2(4, 0), 5, 1);
    CHECK(result.iterations_used == 1);
    CHECK(result.per_ball_dist[0] == Catch::Approx(target).margin(1e-12));
}

TEST_CASE("input validation") {
    BallSystem empty;
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);

    BallSystem mismatched = system_of({Ball(v2(0, 0), 1.0)}, 0.0, 0.0);
    mismatched.f_bar_per_ball.clear();
    CHECK_THROWS_AS(mismatched.validate(), std::invalid_argument);

    const BallSystem ok = system_of({Ball(v2(0, 0), 1.0)}, 0.0, 0.0);
    Vec x3(3);
    x3 << 1, 2, 3;
    CHECK_THROWS_AS(sequential_project(ok, x3, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(sequential_project(ok, v2(0, 0), 0, 1), std::invalid_argument);
}

TEST_CASE("relaxed ball system at desk scale meets the Delta target") {
    // 20 balls of radius 10 whose centers sit at distance 10.5 from the
    // origin: no common point, but the origin is within 0.5 of every ball.
    Rng rng(20240909);
    const Eigen::Index n = 50;
    const double r = 10.0;
    const double Delta = 0.5;
    std::vector<Ball> balls;
    for (int i = 0; i < 20; ++i) balls.emplace_back(rng.on_sphere(n, r + Delta), r);
    const BallSystem s = system_of(std::move(balls), Delta, Delta / 2.0);

    const Vec x0 = s.balls.front().center;  // start inside the first ball
    const auto result = sequential_project(s, x0, 5, 2);

    double max_dist = 0.0;
    for (double d : result.per_ball_dist) max_dist = std::max(max_dist, d);
    CHECK(max_dist <= Delta);
    CHECK(result.iterations_used <= 50);
}
