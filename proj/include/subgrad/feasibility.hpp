// feasibility.hpp
//
// Sequential-projection driver for the "common point of a system of balls"
// problem and its relaxed variant: each subproblem minimizes the distance
// to one ball with a Polyak-type step (beta = 1, M = 1) down to the
// per-ball target f_bar_i. With f_bar_i = 0 and a point outside the ball,
// the step is the exact Euclidean projection, so each subproblem takes one
// iteration.

#pragma once

#include <stdexcept>
#include <vector>

#include "subgrad/geometry.hpp"
#include "subgrad/problems.hpp"
#include "subgrad/solver.hpp"

namespace subgrad {

struct BallSystem {
    std::vector<Ball> balls;
    double delta_target = 0.0;          // the Delta of the relaxed formulation
    std::vector<double> f_bar_per_ball; // per-subproblem targets

    void validate() const {
        if (balls.empty()) throw std::invalid_argument("BallSystem: need at least one ball");
        const Eigen::Index n = balls.front().dim();
        for (const Ball& b : balls)
            if (b.dim() != n) throw std::invalid_argument("BallSystem: ball dimensions differ");
        if (f_bar_per_ball.size() != balls.size())
            throw std::invalid_argument("BallSystem: need one f_bar per ball");
        for (double f : f_bar_per_ball)
            if (!(f >= 0.0)) throw std::invalid_argument("BallSystem: f_bar must be >= 0");
        if (!(delta_target >= 0.0))
            throw std::invalid_argument("BallSystem: delta_target must be >= 0");
    }
};

struct SequentialProjectResult {
    Vec point;
    std::vector<double> per_ball_dist;
    long iterations_used = 0;             // total subgradient steps across subproblems
    std::vector<double> sweep_max_dist;   // max per-ball distance after each sweep
    std::vector<double> step_max_dist;    // max per-ball distance after every step
};

/// Cycles over the balls in input order for the given number of sweeps.
/// Balls already within their target cost no iterations; a sweep that takes
/// no steps is a fixed point and ends the run early.
inline SequentialProjectResult sequential_project(const BallSystem& system, const Vec& x0,
                                                  long max_iters_per_subproblem, long sweeps) {
    system.validate();
    if (x0.size() != system.balls.front().dim())
        throw std::invalid_argument("sequential_project: x0 dimension mismatch");
    if (max_iters_per_subproblem <= 0 || sweeps <= 0)
        throw std::invalid_argument("sequential_project: iteration counts must be positive");

    SequentialProjectResult result;
    result.point = x0;
    const auto max_dist_over_balls = [&system](const Vec& x) {
        double max_dist = 0.0;
        for (const Ball& b : system.balls)
            max_dist = std::max(max_dist, dist_to_ball(x, b).value);
        return max_dist;
    };
    for (long sweep = 0; sweep < sweeps; ++sweep) {
        long steps_this_sweep = 0;
        for (std::size_t i = 0; i < system.balls.size(); ++i) {
            const double f_bar = system.f_bar_per_ball[i];
            const ProblemSpec sub = ball_distance(system.balls[i], f_bar,
                                                  std::max(f_bar, system.delta_target));
            IterateOptions opts;
            opts.max_iters = max_iters_per_subproblem;
            opts.project = false;
            opts.observer = [&](long, const Vec&, const Vec&, double, const Vec& next) {
                result.step_max_dist.push_back(max_dist_over_balls(next));
            };
            const Trace trace =
                iterate(sub, PolyakPartial{f_bar, 1.0}, result.point, opts);
            const long steps = static_cast<long>(trace.records.size()) - 1;
            steps_this_sweep += steps;
            result.iterations_used += steps;
            result.point = trace.records.back().x;
        }
        result.sweep_max_dist.push_back(max_dist_over_balls(result.point));
        if (steps_this_sweep == 0) break;
    }

    result.per_ball_dist.reserve(system.balls.size());
    for (const Ball& b : system.balls)
        result.per_ball_dist.push_back(dist_to_ball(result.point, b).value);
    return result;
}

}  // namespace subgrad
