// solver.hpp
//
// The projected subgradient iteration x_{k+1} = Pr_Q{ x_k - h_k g_k }
// parameterized by a StepRule, with optional projection, delta-oracle mode,
// per-iteration trace recording and the weighted averaging of the
// harmonic-step method.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "subgrad/oracle.hpp"
#include "subgrad/step_rules.hpp"

namespace subgrad {

enum class Termination { max_iters, zero_gradient, reached_f_bar, nonpositive_step };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::max_iters: return "max_iters";
        case Termination::zero_gradient: return "zero_gradient";
        case Termination::reached_f_bar: return "reached_f_bar";
        case Termination::nonpositive_step: return "nonpositive_step";
    }
    return "unknown";
}

struct IterateRecord {
    long k = 0;
    Vec x;
    double value = 0.0;              // exact (or labeled-proxy) objective value
    double grad_norm = 0.0;          // norm of the subgradient the step used
    double step = 0.0;               // h_k producing the next iterate (0 if none)
    std::optional<double> dist_sq;   // min over known X* of ||x_k - x*||^2
    double inexactness = 0.0;        // realized delta of the oracle query
    double radius_from_x0 = 0.0;     // ||x_k - x0||, for the trajectory bound
};

struct Trace {
    std::vector<IterateRecord> records;
    Termination terminated_by = Termination::max_iters;
    std::optional<Vec> x_hat;        // weighted average, harmonic runs only
    bool value_is_proxy = false;
};

struct IterateOptions {
    long max_iters = 1000;
    bool project = true;
    bool use_delta_oracle = false;
    /// Keep the full iterate vectors in the trace. Long high-dimensional
    /// runs can switch this off and consume iterates through the observer.
    bool store_iterates = true;
    /// Seed for the delta-oracle stream; falls back to the problem's
    /// delta_seed when unset. Runs never share random state.
    std::optional<std::uint64_t> seed;
    /// Called as observer(k, x_k, g_k, h_k, x_{k+1}) after every step.
    std::function<void(long, const Vec&, const Vec&, double, const Vec&)> observer;
};

/// Weights 2k / (N(N+1)), k = 1..N, over all recorded iterates except the
/// final one (the harmonic method averages x_1..x_N while the run also
/// produced x_{N+1}). The last weight absorbs the rounding residual so the
/// weights sum to 1 exactly.
inline Vec weighted_average(const Trace& trace) {
    if (trace.records.size() < 2)
        throw std::invalid_argument("weighted_average: need at least one averaging iterate");
    const std::size_t N = trace.records.size() - 1;
    const double denom = static_cast<double>(N) * static_cast<double>(N + 1);
    Vec avg = Vec::Zero(trace.records.front().x.size());
    double weight_sum = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        double w = 2.0 * static_cast<double>(j + 1) / denom;
        if (j + 1 == N) w = 1.0 - weight_sum;
        weight_sum += w;
        avg += w * trace.records[j].x;
    }
    return avg;
}

/// Runs the subgradient iteration from x0 and records every iterate.
///
/// Stops on: value <= f_bar (target certifiably attained), a vanished
/// subgradient (arrival at a minimizer), a nonpositive Polyak-type step, or
/// the iteration budget. With project unset the iterates roam freely and
/// radius_from_x0 tracks the excursion for the trajectory-radius bound.
inline Trace iterate(const ProblemSpec& problem, const StepRule& rule, const Vec& x0,
                     const IterateOptions& opts) {
    problem.validate();
    validate(rule);
    if (x0.size() != problem.dimension)
        throw std::invalid_argument("iterate: x0 dimension mismatch");
    if (opts.max_iters <= 0) throw std::invalid_argument("iterate: max_iters must be positive");
    if (opts.use_delta_oracle && !problem.has_delta_oracle())
        throw std::invalid_argument("iterate: problem exposes no delta oracle");
    const double x0_scale = std::max(1.0, x0.norm());
    if (opts.project && !problem.feasible_set.contains(x0, 1e-9 * x0_scale))
        throw std::invalid_argument("iterate: x0 infeasible with projection enabled");

    Rng rng(opts.seed.value_or(problem.delta_seed));
    const std::optional<double> target = target_value(rule);
    const bool harmonic = is_harmonic(rule);

    Trace trace;
    trace.value_is_proxy = problem.value_is_proxy;
    trace.records.reserve(static_cast<std::size_t>(opts.max_iters) + 1);

    Vec x = x0;
    for (long k = 0;; ++k) {
        OracleOutput out =
            opts.use_delta_oracle ? problem.query_delta(x, rng) : problem.query(x);
        // The step sees what the (possibly inexact) oracle returned; the
        // record reports the exact or labeled-proxy value.
        const double step_value = out.value;
        IterateRecord rec;
        rec.k = k;
        if (opts.store_iterates) rec.x = x;
        rec.value = opts.use_delta_oracle ? problem.query(x).value : out.value;
        rec.grad_norm = out.subgradient.norm();
        rec.inexactness = out.inexactness;
        rec.radius_from_x0 = (x - x0).norm();
        if (problem.solution_set.known()) rec.dist_sq = problem.solution_set.dist_sq(x);
        trace.records.push_back(std::move(rec));
        IterateRecord& current = trace.records.back();

        if (target && step_value <= *target) {
            trace.terminated_by = Termination::reached_f_bar;
            break;
        }
        if (current.grad_norm == 0.0) {
            trace.terminated_by = Termination::zero_gradient;
            break;
        }
        if (k == opts.max_iters) {
            trace.terminated_by = Termination::max_iters;
            break;
        }

        // Harmonic iterates are numbered from 1 with x_1 = x0, so the step
        // at record k uses the harmonic index k + 1.
        const double h = step_size(rule, step_value, current.grad_norm, harmonic ? k + 1 : k);
        current.step = h;
        if (!harmonic && h <= 0.0) {
            trace.terminated_by = Termination::nonpositive_step;
            break;
        }

        Vec next = x - h * out.subgradient;
        if (opts.project) next = project_ball(next, problem.feasible_set);
        if (opts.observer) opts.observer(k, x, out.subgradient, h, next);
        x = std::move(next);
    }

    if (harmonic && opts.store_iterates && trace.records.size() >= 2)
        trace.x_hat = weighted_average(trace);
    return trace;
}

}  // namespace subgrad
