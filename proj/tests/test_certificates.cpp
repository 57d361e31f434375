#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "subgrad/certificates.hpp"
#include "subgrad/problems.hpp"
#include "testing_support.hpp"

using namespace subgrad;

namespace {
Trace trace_from_grads(const std::vector<double>& grad_norms) {
    Trace t;
    for (std::size_t i = 0; i < grad_norms.size(); ++i) {
        IterateRecord r;
        r.k = static_cast<long>(i);
        r.x = Vec::Zero(1);
        r.grad_norm = grad_norms[i];
        t.records.push_back(r);
    }
    // Terminal record (no step taken from it).
    IterateRecord last;
    last.k = static_cast<long>(grad_norms.size());
    last.x = Vec::Zero(1);
    t.records.push_back(last);
    return t;
}
}  // namespace

TEST_CASE("bound_theorem1 collapses to a geometric envelope for constant gradients") {
    const double g = 1.3;
    const Trace t = trace_from_grads(std::vector<double>(12, g));
    const BoundSeries series = bound_theorem1(t, 1.0, 1.0, 0.0, 7.0);
    REQUIRE(series.values.size() == 12);
    for (std::size_t k = 0; k < series.values.size(); ++k) {
        const double expected = std::pow(1.0 - 1.0 / (2.0 * g * g), k + 1) * 7.0;
        CHECK(series.values[k] == Catch::Approx(expected).epsilon(1e-12));
    }
    CHECK(series.assumptions_ok);
}

TEST_CASE("bound_theorem1 one-iteration plug-in") {
    const Trace t = trace_from_grads({1.0});
    const BoundSeries series = bound_theorem1(t, 1.0, 1.0, 0.2, 4.0);
    REQUIRE(series.values.size() == 1);
    CHECK(series.values[0] == Catch::Approx(0.5 * 4.0 + 0.02));
}

TEST_CASE("bound_theorem1 recurrence equals the direct product-sum form") {
    Rng rng(1234);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t len = 1 + rng.uniform_index(50);
        std::vector<double> grads(len);
        for (double& g : grads) g = rng.uniform(0.2, 5.0);
        const double alpha = rng.uniform(0.05, 1.5);
        const double beta = rng.uniform(0.1, 1.0);
        const double Delta = rng.uniform(0.0, 1.0);
        const double R0_sq = rng.uniform(0.0, 25.0);

        const BoundSeries series =
            bound_theorem1(trace_from_grads(grads), alpha, beta, Delta, R0_sq);
        const std::vector<double> direct =
            testing::theorem1_direct(grads, alpha, beta, Delta, R0_sq);
        REQUIRE(series.values.size() == direct.size());
        for (std::size_t k = 0; k < direct.size(); ++k) {
            const double scale = std::max(1.0, std::abs(direct[k]));
            CHECK(std::abs(series.values[k] - direct[k]) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("check_theorem1_condition flags small gradients") {
    CHECK(check_theorem1_condition(trace_from_grads({1.0, 1.0}), 1.0, 1.0).first);
    auto [ok, violated] = check_theorem1_condition(trace_from_grads({1.0, 0.5, 1.0}), 1.0, 1.0);
    CHECK_FALSE(ok);
    REQUIRE(violated.size() == 1);
    CHECK(violated[0] == 1);
    CHECK(check_theorem1_condition(Trace{}, 1.0, 1.0).first);
    CHECK(check_theorem1_condition(Trace{}, 1.0, 1.0).second.empty());
}

TEST_CASE("bound_theorem2 plug-ins, floor and hypothesis") {
    CHECK(bound_theorem2(1, 1.0, 1.0, 1.0, 0.1, 4.0) == Catch::Approx(1.02));
    CHECK(bound_theorem2(5, 1.0, 1.0, 1.0, 0.0, 4.0) ==
          Catch::Approx(std::pow(0.5, 6) * 4.0));
    // k -> infinity limit is the floor 2 Delta^2 / (alpha^2 beta^2).
    CHECK(bound_theorem2(4000, 1.0, 1.0, 1.0, 0.1, 4.0) == Catch::Approx(0.02));
    CHECK(theorem2_hypothesis_ok(1.0, 1.0, 1.0));
    CHECK_FALSE(theorem2_hypothesis_ok(2.0, 1.0, 1.0));
    // Value still computed when the hypothesis fails.
    CHECK(std::isfinite(bound_theorem2(3, 2.0, 1.0, 1.0, 0.0, 1.0)));
}

TEST_CASE("bound_corollary1 plug-ins and error") {
    CHECK(bound_corollary1(0, 1.0, 1.0, std::sqrt(2.0), 1.0) == Catch::Approx(0.5));
    CHECK(bound_corollary1(7, 1.0, 1.0, 1.0, 1.0) == 0.0);  // base zero
    CHECK_THROWS_AS(bound_corollary1(0, 2.0, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("corollary1 matches theorem2 at Delta = 0 up to the halved exponent base") {
    for (long k = 0; k <= 20; ++k) {
        const double alpha = 0.8, beta = 0.9, M = 2.0, R0_sq = 3.0;
        const double full = bound_corollary1(k, alpha, beta, M, R0_sq);
        const double q = alpha * alpha * beta * beta / (M * M);
        const double halved = bound_theorem2(k, alpha, beta, M, 0.0, R0_sq);
        CHECK(halved == Catch::Approx(std::pow(1.0 - q / 2.0, k + 1) * R0_sq));
        CHECK(full == Catch::Approx(std::pow(1.0 - q, k + 1) * R0_sq));
        CHECK(full <= halved * (1.0 + 1e-12));
    }
}

TEST_CASE("bound_theorem4 plug-ins") {
    CHECK(bound_theorem4(1, 1.0, 1.0, 0.1, 4.0) == Catch::Approx(1.02));
    CHECK(bound_theorem4(3, 1.0, 2.0, 0.0, 1.0) ==
          Catch::Approx(bound_theorem2(3, 1.0, 1.0, 2.0, 0.0, 1.0)));
    CHECK(series_theorem4(1, 1.0, 1.0, 0.1, 1.0).floor == Catch::Approx(0.02));
}

TEST_CASE("bound_theorem7 plug-ins and reductions") {
    CHECK(bound_theorem7(0, 1.0, 1.0, 0.1, 0.1, 1.0) == Catch::Approx(0.58));
    for (long k = 0; k < 10; ++k) {
        CHECK(bound_theorem7(k, 0.7, 1.5, 0.2, 0.0, 2.0) ==
              Catch::Approx(bound_theorem4(k, 0.7, 1.5, 0.2, 2.0)));
        // Delta = 0 gives the exact-minimum delta-oracle value.
        CHECK(bound_theorem7(k, 0.7, 1.5, 0.0, 0.3, 2.0) ==
              Catch::Approx(std::pow(1.0 - 0.49 / 4.5, k + 1) * 2.0 + 2.0 * 0.09 / 0.49));
    }
}

TEST_CASE("trajectory_radius plug-ins and error") {
    CHECK(trajectory_radius(1.0, 1.0, 2.0) == Catch::Approx(2.0));
    CHECK(trajectory_radius(5.0, 3.0, 1.0) == Catch::Approx(1.0));
    CHECK(trajectory_radius(2.0, std::sqrt(2.0), 1.0) == Catch::Approx((2.0 + std::sqrt(2.0)) / 2.0));
    CHECK_THROWS_AS(trajectory_radius(1.0, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("harmonic bounds plug-ins") {
    CHECK(bound_harmonic_original(1.0, 1.0, 1) == Catch::Approx(1.0));
    CHECK(bound_harmonic_original(2.0, 1.0, 7) == Catch::Approx(1.0));
    // Doubling N+1 halves the bound.
    CHECK(bound_harmonic_original(3.0, 2.0, 15) ==
          Catch::Approx(0.5 * bound_harmonic_original(3.0, 2.0, 7)));

    CHECK(bound_harmonic_adaptive(trace_from_grads({1.0}), 1.0, 1) == Catch::Approx(0.5));
    CHECK(bound_harmonic_adaptive(trace_from_grads({1.0, 2.0}), 1.0, 2) ==
          Catch::Approx(19.0 / 18.0));
    CHECK_THROWS_AS(bound_harmonic_adaptive(trace_from_grads({1.0}), 1.0, 5),
                    std::invalid_argument);

    CHECK(bound_harmonic_argument_global(1.0, 1.0, 3) == Catch::Approx(1.0));
    CHECK(bound_harmonic_argument_adaptive(trace_from_grads({1.0}), 2.0, 1) ==
          Catch::Approx(0.25));
}

TEST_CASE("adaptive harmonic bound never exceeds the global one when g <= M") {
    Rng rng(606);
    for (int trial = 0; trial < 200; ++trial) {
        const double M = rng.uniform(0.5, 4.0);
        const double mu = rng.uniform(0.1, 3.0);
        const std::size_t len = 1 + rng.uniform_index(60);
        std::vector<double> grads(len);
        for (double& g : grads) g = rng.uniform(0.0, M);
        const Trace t = trace_from_grads(grads);
        for (long N = 1; N <= static_cast<long>(len); ++N) {
            CHECK(bound_harmonic_adaptive(t, mu, N) <=
                  bound_harmonic_original(M, mu, N) * (1.0 + 1e-12));
            CHECK(bound_harmonic_argument_adaptive(t, mu, N) <=
                  bound_harmonic_argument_global(M, mu, N) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("closed-form bounds are non-increasing in k") {
    for (long k = 1; k < 60; ++k) {
        CHECK(bound_theorem2(k, 0.6, 0.8, 1.0, 0.1, 5.0) <=
              bound_theorem2(k - 1, 0.6, 0.8, 1.0, 0.1, 5.0) * (1.0 + 1e-15));
        CHECK(bound_theorem4(k, 0.6, 1.0, 0.1, 5.0) <=
              bound_theorem4(k - 1, 0.6, 1.0, 0.1, 5.0) * (1.0 + 1e-15));
        CHECK(bound_theorem7(k, 0.6, 1.0, 0.1, 0.2, 5.0) <=
              bound_theorem7(k - 1, 0.6, 1.0, 0.1, 0.2, 5.0) * (1.0 + 1e-15));
        CHECK(bound_corollary1(k, 0.6, 0.8, 1.0, 5.0) <=
              bound_corollary1(k - 1, 0.6, 0.8, 1.0, 5.0) * (1.0 + 1e-15));
        CHECK(bound_harmonic_original(2.0, 1.0, k + 1) <= bound_harmonic_original(2.0, 1.0, k));
    }
}

TEST_CASE("theorem1 series dominates adaptive runs on relaxed-target problems") {
    Rng rng(911);
    for (int instance = 0; instance < 15; ++instance) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_index(5));
        const double target = rng.uniform(0.05, 0.7);
        const ProblemSpec p =
            ball_distance(Ball(rng.gaussian_vec(n), rng.uniform(0.3, 2.0)), target, target);
        const Vec x0 = p.feasible_set.center + rng.on_sphere(n, rng.uniform(3.0, 9.0));

        IterateOptions opts;
        opts.max_iters = 80;
        opts.project = false;
        const Trace trace = iterate(p, PolyakAdaptive{1.0, target}, x0, opts);

        const double R0_sq = trace.records.front().dist_sq.value();
        const BoundSeries series = bound_theorem1(trace, 1.0, 1.0, target, R0_sq);
        CHECK(series.assumptions_ok);  // unit gradients outside the ball
        for (std::size_t k = 0; k < series.values.size(); ++k) {
            const double measured = trace.records[k + 1].dist_sq.value();
            CHECK(measured <= series.values[k] * (1.0 + 1e-9) + 1e-12);
        }
    }
}

TEST_CASE("theorem7 series dominates delta-oracle runs with the certified delta") {
    Rng rng(2222);
    Vec c1 = Vec::Zero(4);
    Vec c2 = Vec::Zero(4);
    c2[0] = 2.0;
    const ProblemSpec p = hull_of_balls_inexact({c1, c2}, 0.5, 17);

    IterateOptions opts;
    opts.max_iters = 60;
    opts.project = false;
    opts.use_delta_oracle = true;
    opts.seed = 31;
    const Vec x0 = rng.on_sphere(4, 12.0);
    const Trace trace = iterate(p, PolyakDeltaPartial{0.0, 0.0, 1.0}, x0, opts);

    const double R0_sq = trace.records.front().dist_sq.value();
    double delta_max = 0.0;
    for (const IterateRecord& rec : trace.records) delta_max = std::max(delta_max, rec.inexactness);

    for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
        const double bound = bound_theorem7(static_cast<long>(k), 1.0, 1.0, 0.0,
                                            p.delta_certified.value(), R0_sq);
        CHECK(trace.records[k + 1].dist_sq.value() <= bound * (1.0 + 1e-9) + 1e-12);
    }
    CHECK(delta_max <= p.delta_certified.value() + 1e-12);
}
