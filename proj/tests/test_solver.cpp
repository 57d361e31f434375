#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "subgrad/certificates.hpp"
#include "subgrad/problems.hpp"
#include "subgrad/solver.hpp"
#include "testing_support.hpp"

using namespace subgrad;

namespace {
Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}
}  // namespace

TEST_CASE("one Polyak step projects onto a ball") {
    const ProblemSpec p = ball_distance(Ball(Vec::Zero(2), 1.0));
    IterateOptions opts;
    opts.max_iters = 10;
    opts.project = false;
    const Trace trace = iterate(p, PolyakPartial{0.0, 1.0}, v2(2, 0), opts);

    REQUIRE(trace.records.size() == 2);
    CHECK(trace.records[1].x.isApprox(v2(1, 0)));
    CHECK(trace.terminated_by == Termination::reached_f_bar);
    CHECK(trace.records[0].step == Catch::Approx(1.0));
}

TEST_CASE("absolute value reaches the minimizer in one adaptive step") {
    Vec center(1), x0(1);
    center << 0.0;
    x0 << 3.0;
    // f(x) = |x| as the distance to the degenerate ball {0}.
    const ProblemSpec p = ball_distance(Ball(center, 0.0));
    IterateOptions opts;
    opts.max_iters = 10;
    opts.project = false;
    const Trace trace = iterate(p, PolyakAdaptive{1.0, 0.0}, x0, opts);

    REQUIRE(trace.records.size() == 2);
    CHECK(trace.records[0].step == Catch::Approx(3.0));
    CHECK(trace.records[1].x.isZero());
    CHECK(trace.records[1].value == 0.0);
    // value <= f_bar and the gradient vanished simultaneously; the target
    // check runs first, so the run reports the certified arrival.
    CHECK(trace.terminated_by == Termination::reached_f_bar);
}

TEST_CASE("harmonic indexing starts from x_1 = x0") {
    // f(x) = x^2 as the squared farthest-point distance to {0}.
    Vec zero(1), x0(1);
    zero << 0.0;
    x0 << 1.0;
    const ProblemSpec p = enclosing_ball({zero}, 1.0, true);
    IterateOptions opts;
    opts.max_iters = 1;
    opts.project = false;
    const Trace trace = iterate(p, HarmonicStronglyConvex{2.0}, x0, opts);

    REQUIRE(trace.records.size() == 2);
    CHECK(trace.records[0].step == Catch::Approx(0.5));  // h_1 = 2/(mu*2)
    CHECK(trace.records[1].x.isZero());                  // 1 - 0.5*2 = 0
    CHECK(trace.x_hat.has_value());
    CHECK((*trace.x_hat)[0] == Catch::Approx(1.0));      // N = 1: x_hat = x_1 = x0
}

TEST_CASE("weighted_average weights") {
    auto make_harmonic_trace = [](int n_records) {
        Trace t;
        for (int j = 0; j < n_records; ++j) {
            IterateRecord r;
            r.k = j;
            r.x = Vec::Zero(1);
            r.x[0] = static_cast<double>(j + 1);  // x_k = k (paper indexing)
            t.records.push_back(r);
        }
        return t;
    };

    // N = 2: weights (1/3, 2/3) over x = (1, 2).
    CHECK(weighted_average(make_harmonic_trace(3))[0] ==
          Catch::Approx(1.0 / 3.0 + 2.0 * 2.0 / 3.0));
    // N = 3: weights (1/6, 1/3, 1/2) over x = (1, 2, 3).
    CHECK(weighted_average(make_harmonic_trace(4))[0] ==
          Catch::Approx(1.0 / 6.0 + 2.0 / 3.0 + 3.0 / 2.0));
    CHECK_THROWS_AS(weighted_average(make_harmonic_trace(1)), std::invalid_argument);
    CHECK_THROWS_AS(weighted_average(Trace{}), std::invalid_argument);
}

TEST_CASE("weighted_average weights sum to one exactly") {
    Trace t;
    for (int j = 0; j < 1000; ++j) {
        IterateRecord r;
        r.x = Vec::Ones(1);
        t.records.push_back(r);
    }
    CHECK(weighted_average(t)[0] == 1.0);  // bit-exact by residual adjustment
}

TEST_CASE("projected runs stay feasible") {
    Rng rng(12);
    const ProblemSpec p = norm_plus_quadratic(0.5, Vec::Zero(4), 2.0);
    IterateOptions opts;
    opts.max_iters = 50;
    opts.project = true;
    const Vec x0 = rng.on_sphere(4, 2.0);
    const Trace trace = iterate(p, PolyakAdaptive{1.0, 0.0}, x0, opts);
    for (const IterateRecord& rec : trace.records) {
        CHECK(dist_to_ball(rec.x, p.feasible_set).value <= 1e-12 * (1.0 + rec.x.norm()));
        if (rec.dist_sq) CHECK(*rec.dist_sq == Catch::Approx(rec.x.squaredNorm()).margin(1e-12));
    }
}

TEST_CASE("iterate validates inputs") {
    const ProblemSpec p = ball_distance(Ball(Vec::Zero(2), 1.0), 0.0, 0.0, 2.0);
    IterateOptions opts;
    opts.max_iters = 5;
    opts.project = true;
    CHECK_THROWS_AS(iterate(p, PolyakPartial{0.0, 1.0}, v2(5, 0), opts), std::invalid_argument);

    Vec x3(3);
    x3 << 1, 1, 1;
    CHECK_THROWS_AS(iterate(p, PolyakPartial{0.0, 1.0}, x3, opts), std::invalid_argument);

    opts.project = false;
    opts.use_delta_oracle = true;
    CHECK_THROWS_AS(iterate(p, PolyakPartial{0.0, 1.0}, v2(5, 0), opts), std::logic_error);
}

TEST_CASE("nonpositive step stop for the delta rule") {
    const ProblemSpec p = ball_distance(Ball(Vec::Zero(2), 1.0));
    IterateOptions opts;
    opts.max_iters = 50;
    opts.project = false;
    // Target f_bar = 0 but delta = 0.5: once the distance drops below 0.5
    // the step turns nonpositive while the value is still above f_bar.
    const Trace trace = iterate(p, PolyakDeltaPartial{0.0, 0.5, 1.0}, v2(3, 0), opts);
    CHECK(trace.terminated_by == Termination::nonpositive_step);
    CHECK(trace.records.back().value <= 0.5 + 1e-12);
    CHECK(trace.records.back().value > 0.0);
}

TEST_CASE("Lemma 2 per-iteration inequality for the harmonic method") {
    Rng rng(2025);
    std::vector<Vec> points;
    for (int i = 0; i < 8; ++i) points.push_back(rng.in_ball(5, 3.0));
    const ProblemSpec p = enclosing_ball(points, 1.0, true, 2.5);

    std::vector<Vec> probes;
    for (int i = 0; i < 10; ++i) probes.push_back(rng.in_ball(5, 2.5));

    long checked = 0;
    IterateOptions opts;
    opts.max_iters = 200;
    opts.project = true;
    opts.observer = [&](long, const Vec& x_k, const Vec& g, double h, const Vec& x_next) {
        for (const Vec& probe : probes) {
            const double lhs = h * g.dot(x_k - probe);
            const double rhs = 0.5 * h * h * g.squaredNorm() +
                               0.5 * (probe - x_k).squaredNorm() -
                               0.5 * (probe - x_next).squaredNorm();
            const double scale = std::max(1.0, std::abs(rhs));
            CHECK(lhs <= rhs + 1e-9 * scale);
            ++checked;
        }
    };
    iterate(p, HarmonicStronglyConvex{2.0}, rng.in_ball(5, 2.5), opts);
    CHECK(checked >= 10 * 200);
}

TEST_CASE("Theorem 2 envelope dominates measured distances") {
    Rng rng(31);
    for (int instance = 0; instance < 20; ++instance) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_index(6));
        const double target = rng.uniform(0.0, 0.5);
        const ProblemSpec p = ball_distance(Ball(rng.gaussian_vec(n), rng.uniform(0.2, 2.0)),
                                            target, target);
        const Vec x0 = p.feasible_set.center + rng.on_sphere(n, rng.uniform(3.0, 8.0));

        IterateOptions opts;
        opts.max_iters = 60;
        opts.project = false;
        const StepRule rule = PolyakLipschitz{1.0, target, 1.0};
        const Trace trace = iterate(p, rule, x0, opts);

        const double R0_sq = trace.records.front().dist_sq.value();
        for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
            const double bound = bound_theorem2(static_cast<long>(k), 1.0, 1.0, 1.0,
                                                p.sharpness.delta, R0_sq);
            const double measured = trace.records[k + 1].dist_sq.value();
            CHECK(measured <= bound * (1.0 + 1e-9) + 1e-12);
        }
    }
}

TEST_CASE("Theorem 3 linear rate at Delta = 0 with the partial step") {
    Rng rng(77);
    const ProblemSpec p = norm_plus_quadratic(0.5, Vec::Zero(6), 10.0);
    const double M = p.sharpness.lipschitz_M.value();
    const Vec x0 = rng.on_sphere(6, 10.0);

    IterateOptions opts;
    opts.max_iters = 150;
    opts.project = true;
    const Trace trace = iterate(p, PolyakPartial{0.0, M}, x0, opts);

    const double R0_sq = trace.records.front().dist_sq.value();
    for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
        const double envelope = bound_corollary1(static_cast<long>(k), 1.0, 1.0, M, R0_sq);
        CHECK(trace.records[k + 1].dist_sq.value() <= envelope * (1.0 + 1e-9) + 1e-15);
    }
}

TEST_CASE("projection-free trajectories respect the certified radius") {
    Rng rng(4096);
    for (int instance = 0; instance < 25; ++instance) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_index(10));
        const Ball target(rng.gaussian_vec(n), rng.uniform(0.1, 2.0));
        const ProblemSpec p = ball_distance(target);
        const Vec x0 = target.center + rng.on_sphere(n, rng.uniform(2.0, 10.0));

        IterateOptions opts;
        opts.max_iters = 100;
        opts.project = false;
        const Trace trace = iterate(p, PolyakPartial{0.0, 1.0}, x0, opts);

        const double R0 = std::sqrt(trace.records.front().dist_sq.value());
        const double certified = trajectory_radius(1.0, 1.0, R0);
        for (const IterateRecord& rec : trace.records)
            CHECK(rec.radius_from_x0 <= certified + 1e-9);
    }
}
