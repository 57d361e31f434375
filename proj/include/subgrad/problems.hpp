// problems.hpp
//
// The toolkit's test objectives as first-order oracles, each constructed
// together with its analytically known sharpness/regularity metadata.

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "subgrad/geometry.hpp"
#include "subgrad/oracle.hpp"
#include "subgrad/random.hpp"

namespace subgrad {

/// Translates a weak sharp minimum  f(x) - f* >= mu * ||x - x*||^p  (p > 1)
/// into generalized-sharp parameters: alpha = mu * eps^(p-1) and
/// delta = mu * eps, plus f_bar_gap when only f_bar >= f* with
/// f_bar - f* <= f_bar_gap is known.
inline std::pair<double, double> weak_sharp_to_delta(double mu, double p, double eps,
                                                     double f_bar_gap = 0.0) {
    if (!(mu > 0.0)) throw std::invalid_argument("weak_sharp_to_delta: mu must be > 0");
    if (!(p > 1.0)) throw std::invalid_argument("weak_sharp_to_delta: p must be > 1");
    if (!(eps > 0.0)) throw std::invalid_argument("weak_sharp_to_delta: eps must be > 0");
    if (!(f_bar_gap >= 0.0)) throw std::invalid_argument("weak_sharp_to_delta: gap must be >= 0");
    return {mu * std::pow(eps, p - 1.0), mu * eps + f_bar_gap};
}

/// f(x) = ||x||_2 + gamma * ||x - c||_2^2 on the ball of the given radius
/// (gamma is the literal coefficient of the quadratic term).
///
/// For c = 0 this has an exact sharp minimum at 0 (alpha = 1, delta = 0,
/// f_bar = f* = 0). For c != 0 only the relaxed condition is certified,
/// with f_bar = (gamma/2)||c||^2 and delta = gamma ||c||^2; the point 0 is
/// still the exact minimizer whenever 2*gamma*||c|| <= 1, but its value
/// sits above f_bar, so f* is left unset.
inline ProblemSpec norm_plus_quadratic(double gamma, const Vec& c, double radius = kInf) {
    if (!(gamma > 0.0)) throw std::invalid_argument("norm_plus_quadratic: gamma must be > 0");
    if (!(radius > 0.0)) throw std::invalid_argument("norm_plus_quadratic: radius must be > 0");
    const Eigen::Index n = c.size();
    if (n <= 0) throw std::invalid_argument("norm_plus_quadratic: empty parameter vector");

    ProblemSpec spec;
    spec.name = "norm_plus_quadratic";
    spec.dimension = n;
    spec.feasible_set = Ball(Vec::Zero(n), radius);
    spec.oracle = [gamma, c](const Vec& x) {
        OracleOutput out;
        const double norm = x.norm();
        out.value = norm + gamma * (x - c).squaredNorm();
        out.subgradient = 2.0 * gamma * (x - c);
        if (norm > 0.0) out.subgradient += x / norm;
        return out;
    };

    const double c_norm = c.norm();
    SharpnessInfo& meta = spec.sharpness;
    meta.alpha = 1.0;
    meta.beta = 1.0;
    meta.strong_mu = 2.0 * gamma;
    if (c_norm == 0.0) {
        meta.delta = 0.0;
        meta.f_bar = 0.0;
        meta.f_star = 0.0;
        meta.minimizer = Vec::Zero(n);
        spec.solution_set = SolutionSet::point(Vec::Zero(n));
        if (!std::isinf(radius)) meta.lipschitz_M = 1.0 + 2.0 * gamma * radius;
    } else {
        meta.delta = gamma * c_norm * c_norm;
        meta.f_bar = 0.5 * gamma * c_norm * c_norm;
        if (!std::isinf(radius)) meta.lipschitz_M = 1.0 + 2.0 * gamma * (radius + c_norm);
        if (2.0 * gamma * c_norm <= 1.0) {
            // 0 is in the subdifferential at the origin, so the minimizer is
            // known even though f(0) lies above the f_bar convention.
            meta.minimizer = Vec::Zero(n);
            spec.solution_set = SolutionSet::point(Vec::Zero(n));
            meta.notes = "f(0) = gamma*||c||^2 is the exact minimum; f_bar sits below it";
        }
    }
    spec.validate();
    return spec;
}

/// Smallest-enclosing-ball objectives over a point set:
///   squared:     f(x) = max_i ||x - a_i||^2        (2-strongly convex)
///   non-squared: f(x) = alpha * max_i ||x - a_i||  (alpha-Lipschitz, and
///                f(x) >= alpha*||x - x*|| justifies the sharpness modulus)
/// Ties between maximizing points break to the smallest index.
inline ProblemSpec enclosing_ball(std::vector<Vec> points, double scale_alpha, bool squared,
                                  double radius = kInf) {
    if (points.empty()) throw std::invalid_argument("enclosing_ball: need at least one point");
    if (!(scale_alpha > 0.0)) throw std::invalid_argument("enclosing_ball: scale must be > 0");
    if (squared && scale_alpha != 1.0)
        throw std::invalid_argument("enclosing_ball: the squared variant is unscaled");
    const Eigen::Index n = points.front().size();
    for (const Vec& p : points)
        if (p.size() != n) throw std::invalid_argument("enclosing_ball: point dimensions differ");

    auto shared_points = std::make_shared<const std::vector<Vec>>(std::move(points));

    ProblemSpec spec;
    spec.name = squared ? "enclosing_ball_squared" : "enclosing_ball";
    spec.dimension = n;
    spec.feasible_set = Ball(Vec::Zero(n), radius);
    spec.oracle = [shared_points, scale_alpha, squared](const Vec& x) {
        const auto& pts = *shared_points;
        std::size_t arg = 0;
        double best = -kInf;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double d = (x - pts[i]).squaredNorm();
            if (d > best) {
                best = d;
                arg = i;
            }
        }
        OracleOutput out;
        if (squared) {
            out.value = best;
            out.subgradient = 2.0 * (x - pts[arg]);
        } else {
            const double dist = std::sqrt(best);
            out.value = scale_alpha * dist;
            out.subgradient = dist > 0.0 ? Vec(scale_alpha * (x - pts[arg]) / dist)
                                         : Vec(Vec::Zero(x.size()));
        }
        return out;
    };

    SharpnessInfo& meta = spec.sharpness;
    meta.beta = 1.0;
    double max_point_norm = 0.0;
    for (const Vec& p : *shared_points) max_point_norm = std::max(max_point_norm, p.norm());
    if (squared) {
        meta.strong_mu = 2.0;
        if (!std::isinf(radius)) meta.lipschitz_M = 2.0 * (radius + max_point_norm);
    } else {
        meta.alpha = scale_alpha;  // via f(x) >= alpha * ||x - x*||
        meta.lipschitz_M = scale_alpha;
    }
    spec.validate();
    return spec;
}

/// F(x) = dist(x, capsule) + gamma * ||x||^2 with the capsule contained in
/// the feasible ball B_R(0). Carries the relaxed-sharp-minimum metadata
/// alpha = 1, delta = f_bar = gamma * R^2.
inline ProblemSpec capsule_regularized(Capsule capsule, double gamma, double radius) {
    if (!(gamma > 0.0)) throw std::invalid_argument("capsule_regularized: gamma must be > 0");
    if (!(radius > 0.0) || std::isinf(radius))
        throw std::invalid_argument("capsule_regularized: need a finite positive radius");
    if (capsule.endpoint_a.norm() + capsule.radius > radius ||
        capsule.endpoint_b.norm() + capsule.radius > radius)
        throw std::invalid_argument("capsule_regularized: capsule not contained in the ball");

    const Eigen::Index n = capsule.dim();
    ProblemSpec spec;
    spec.name = "capsule_regularized";
    spec.dimension = n;
    spec.feasible_set = Ball(Vec::Zero(n), radius);
    auto shared_capsule = std::make_shared<const Capsule>(std::move(capsule));
    spec.oracle = [shared_capsule, gamma](const Vec& x) {
        const DistanceResult d = dist_to_capsule(x, *shared_capsule);
        OracleOutput out;
        out.value = d.value + gamma * x.squaredNorm();
        out.subgradient = d.subgradient + 2.0 * gamma * x;
        return out;
    };

    SharpnessInfo& meta = spec.sharpness;
    meta.alpha = 1.0;
    meta.beta = 1.0;
    meta.delta = gamma * radius * radius;
    meta.f_bar = gamma * radius * radius;
    meta.strong_mu = 2.0 * gamma;
    meta.lipschitz_M = 1.0 + 2.0 * gamma * radius;
    spec.validate();
    return spec;
}

/// Distance to the convex hull of m equal-radius balls, with an inexact
/// oracle that queries a uniformly drawn center instead of the hull.
///
/// The exact value is the capsule distance for m <= 2; for m > 2 the
/// reported value is the labeled proxy min_i dist(x, B_i) (an upper bound,
/// exact at 0). Each delta query reports its realized inexactness
/// (returned value minus reported exact value); delta_certified carries the
/// analytic worst case max_{i,j} ||O_i - O_j||, valid for every query.
inline ProblemSpec hull_of_balls_inexact(std::vector<Vec> centers, double r,
                                         std::uint64_t rng_seed, double radius = kInf) {
    if (centers.empty()) throw std::invalid_argument("hull_of_balls_inexact: need centers");
    if (!(r > 0.0)) throw std::invalid_argument("hull_of_balls_inexact: r must be > 0");
    const Eigen::Index n = centers.front().size();
    for (const Vec& c : centers)
        if (c.size() != n) throw std::invalid_argument("hull_of_balls_inexact: dimensions differ");

    const std::size_t m = centers.size();
    auto shared_centers = std::make_shared<const std::vector<Vec>>(std::move(centers));

    auto exact_value = [shared_centers, r, m](const Vec& x) -> DistanceResult {
        const auto& cs = *shared_centers;
        if (m == 1) return dist_to_ball(x, Ball(cs[0], r));
        if (m == 2) return dist_to_capsule(x, Capsule(cs[0], cs[1], r));
        DistanceResult best;
        best.value = kInf;
        for (const Vec& c : cs) {
            DistanceResult d = dist_to_ball(x, Ball(c, r));
            if (d.value < best.value) best = std::move(d);
        }
        return best;
    };

    ProblemSpec spec;
    spec.name = "hull_of_balls_inexact";
    spec.dimension = n;
    spec.feasible_set = Ball(Vec::Zero(n), radius);
    spec.value_is_proxy = m > 2;
    spec.delta_seed = rng_seed;
    spec.oracle = [exact_value](const Vec& x) {
        const DistanceResult d = exact_value(x);
        OracleOutput out;
        out.value = d.value;
        out.subgradient = d.subgradient;
        return out;
    };
    spec.delta_oracle = [shared_centers, exact_value, r, m](const Vec& x, Rng& rng) {
        const auto& cs = *shared_centers;
        const std::size_t j = m == 1 ? 0 : static_cast<std::size_t>(rng.uniform_index(m));
        const DistanceResult drawn = dist_to_ball(x, Ball(cs[j], r));
        OracleOutput out;
        out.value = drawn.value;
        out.subgradient = drawn.subgradient;
        out.inexactness = std::max(0.0, drawn.value - exact_value(x).value);
        return out;
    };

    double worst_spread = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            worst_spread = std::max(worst_spread, ((*shared_centers)[i] - (*shared_centers)[j]).norm());
    spec.delta_certified = worst_spread;

    SharpnessInfo& meta = spec.sharpness;
    meta.alpha = 1.0;
    meta.beta = 1.0;
    meta.lipschitz_M = 1.0;
    meta.f_star = 0.0;
    meta.f_bar = 0.0;
    meta.delta = 0.0;
    std::vector<Ball> balls;
    balls.reserve(m);
    for (const Vec& c : *shared_centers) balls.emplace_back(c, r);
    if (m == 1)
        spec.solution_set = SolutionSet::ball(std::move(balls[0]));
    else if (m == 2)
        spec.solution_set = SolutionSet::capsule(Capsule((*shared_centers)[0], (*shared_centers)[1], r));
    else
        spec.solution_set = SolutionSet::ball_union_proxy(std::move(balls));
    spec.validate();
    return spec;
}

/// dist(x, ball) itself as a problem, with configurable step target. Covers
/// the projection subproblems of the feasibility driver and the relaxed
/// target family (f_bar = delta = t certifies the sharp condition exactly).
inline ProblemSpec ball_distance(Ball ball, double f_bar = 0.0, double delta = 0.0,
                                 double feasible_radius = kInf) {
    if (!(f_bar >= 0.0)) throw std::invalid_argument("ball_distance: f_bar must be >= 0");
    if (!(delta >= f_bar)) throw std::invalid_argument("ball_distance: need delta >= f_bar");
    const Eigen::Index n = ball.dim();
    ProblemSpec spec;
    spec.name = "ball_distance";
    spec.dimension = n;
    spec.feasible_set = Ball(Vec::Zero(n), feasible_radius);
    auto shared_ball = std::make_shared<const Ball>(std::move(ball));
    spec.oracle = [shared_ball](const Vec& x) {
        const DistanceResult d = dist_to_ball(x, *shared_ball);
        OracleOutput out;
        out.value = d.value;
        out.subgradient = d.subgradient;
        return out;
    };
    SharpnessInfo& meta = spec.sharpness;
    meta.alpha = 1.0;
    meta.beta = 1.0;
    meta.lipschitz_M = 1.0;
    meta.f_star = 0.0;
    meta.f_bar = f_bar;
    meta.delta = delta;
    meta.minimizer = shared_ball->center;
    spec.solution_set = SolutionSet::ball(*shared_ball);
    spec.validate();
    return spec;
}

namespace detail {
/// Tightest delta with  f(x) >= alpha*|x| - delta  on [0, T] for the
/// 1-d objective below: dense grid plus local ternary refinement.
inline double derive_quasiconvex_delta(double alpha, double T) {
    const auto gap = [alpha](double x) { return alpha * x - x * (1.0 - std::exp(-x)); };
    const int grid = 20000;
    double best_x = 0.0;
    double best = 0.0;
    for (int i = 0; i <= grid; ++i) {
        const double x = T * static_cast<double>(i) / grid;
        const double g = gap(x);
        if (g > best) {
            best = g;
            best_x = x;
        }
    }
    double lo = std::max(0.0, best_x - T / grid);
    double hi = std::min(T, best_x + T / grid);
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (gap(m1) < gap(m2))
            lo = m1;
        else
            hi = m2;
    }
    return std::max(best, gap(0.5 * (lo + hi)));
}
}  // namespace detail

/// The nonconvex but weakly 1-quasiconvex 1-d objective
/// f(x) = |x| (1 - e^{-|x|}), minimized at 0 with f* = 0. The sharpness
/// pair (alpha, delta) is not analytic; it is derived numerically on the
/// working interval [-T, T] with the fixed modulus alpha = 1 - 1/e and
/// flagged as derived in the metadata.
inline ProblemSpec weakly_quasiconvex_1d(double T = 5.0) {
    if (!(T > 0.0)) throw std::invalid_argument("weakly_quasiconvex_1d: T must be > 0");
    ProblemSpec spec;
    spec.name = "weakly_quasiconvex_1d";
    spec.dimension = 1;
    spec.feasible_set = Ball(Vec::Zero(1), T);
    spec.oracle = [](const Vec& x) {
        const double t = std::abs(x[0]);
        const double e = std::exp(-t);
        OracleOutput out;
        out.value = t * (1.0 - e);
        out.subgradient = Vec::Zero(1);
        if (t > 0.0) {
            const double slope = 1.0 - e + t * e;
            out.subgradient[0] = x[0] > 0.0 ? slope : -slope;
        }
        return out;
    };
    SharpnessInfo& meta = spec.sharpness;
    const double alpha = 1.0 - std::exp(-1.0);
    meta.alpha = alpha;
    meta.delta = detail::derive_quasiconvex_delta(alpha, T);
    meta.f_bar = 0.0;
    meta.f_star = 0.0;
    meta.beta = 1.0;
    meta.lipschitz_M = 1.0 + std::exp(-2.0);  // max of |f'| over the reals
    meta.minimizer = Vec::Zero(1);
    meta.derived_sharpness = true;
    meta.notes = "alpha fixed at 1 - 1/e; delta from a grid search on [-T, T]";
    spec.solution_set = SolutionSet::point(Vec::Zero(1));
    spec.validate();
    return spec;
}

}  // namespace subgrad
