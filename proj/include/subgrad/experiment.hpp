// experiment.hpp
//
// Configuration-driven experiment runner: constructs problems and step
// rules by name, runs the solver (or the sequential-projection driver),
// evaluates requested bound series and emits a deterministic CSV trace.
//
// CSV schema: header  k,f,gap,dist_sq,grad_norm,step,inexactness  followed
// by one column per requested series, one row per iteration, and trailing
// `meta,<key>,<value>` rows (terminated_by, x-hat gap for harmonic runs,
// observed vs certified trajectory radius).

#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "subgrad/certificates.hpp"
#include "subgrad/feasibility.hpp"
#include "subgrad/problems.hpp"
#include "subgrad/solver.hpp"

namespace subgrad::experiment {

using nlohmann::json;

/// Invalid or inconsistent configuration; the CLI maps this to its
/// dedicated exit status.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const json& require_field(const json& j, const std::string& key, const char* where) {
    auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(std::string(where) + ": missing required field '" + key + "'");
    return *it;
}

inline double require_number(const json& j, const std::string& key, const char* where) {
    const json& v = require_field(j, key, where);
    if (!v.is_number()) throw ConfigError(std::string(where) + ": field '" + key + "' must be a number");
    return v.get<double>();
}

inline double number_or(const json& j, const std::string& key, double fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) throw ConfigError("field '" + key + "' must be a number");
    return it->get<double>();
}

inline long integer_or(const json& j, const std::string& key, long fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer()) throw ConfigError("field '" + key + "' must be an integer");
    return it->get<long>();
}

inline bool flag_or(const json& j, const std::string& key, bool fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_boolean()) throw ConfigError("field '" + key + "' must be a boolean");
    return it->get<bool>();
}

inline std::string require_string(const json& j, const std::string& key, const char* where) {
    const json& v = require_field(j, key, where);
    if (!v.is_string()) throw ConfigError(std::string(where) + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

inline Vec vec_from_json(const json& arr, const char* where) {
    if (!arr.is_array() || arr.empty())
        throw ConfigError(std::string(where) + ": expected a non-empty numeric array");
    Vec v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            throw ConfigError(std::string(where) + ": expected a numeric array");
        v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    return v;
}

inline Vec axis_vector(Eigen::Index n, double scale) {
    Vec v = Vec::Zero(n);
    v[0] = scale;
    return v;
}

/// Fixed-width round-trip formatting so identical runs produce identical
/// bytes regardless of locale or stream state.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Problem construction by name

inline ProblemSpec build_problem(const json& p, Eigen::Index dimension, std::uint64_t seed) {
    const std::string name = detail::require_string(p, "name", "problem");
    Rng gen(detail::derive_seed(seed, 1));

    if (name == "norm_plus_quadratic") {
        const double gamma = detail::require_number(p, "gamma", "norm_plus_quadratic");
        Vec c;
        if (p.contains("c")) {
            c = detail::vec_from_json(p.at("c"), "norm_plus_quadratic.c");
            if (c.size() != dimension)
                throw ConfigError("norm_plus_quadratic: c does not match dimension");
        } else {
            c = detail::axis_vector(dimension, detail::number_or(p, "c_norm", 0.0));
        }
        return norm_plus_quadratic(gamma, c, detail::number_or(p, "R", kInf));
    }

    if (name == "enclosing_ball" || name == "enclosing_ball_squared") {
        const bool squared = name == "enclosing_ball_squared" || detail::flag_or(p, "squared", false);
        std::vector<Vec> points;
        if (p.contains("points")) {
            for (const json& pt : p.at("points"))
                points.push_back(detail::vec_from_json(pt, "enclosing_ball.points"));
            for (const Vec& pt : points)
                if (pt.size() != dimension)
                    throw ConfigError("enclosing_ball: point does not match dimension");
        } else {
            const json& g = detail::require_field(p, "generate", "enclosing_ball");
            const long count = detail::integer_or(g, "count", 20);
            const double radius = detail::require_number(g, "radius", "enclosing_ball.generate");
            const bool on_sphere = detail::flag_or(g, "on_sphere", false);
            for (long i = 0; i < count; ++i)
                points.push_back(on_sphere ? gen.on_sphere(dimension, radius)
                                           : gen.in_ball(dimension, radius));
            const double outlier = detail::number_or(g, "outlier_factor", 0.0);
            if (outlier > 0.0) points.push_back(detail::axis_vector(dimension, radius * outlier));
        }
        ProblemSpec spec = enclosing_ball(std::move(points),
                                          detail::number_or(p, "scale_alpha", 1.0), squared,
                                          detail::number_or(p, "R", kInf));
        if (p.contains("f_bar")) spec.sharpness.f_bar = detail::require_number(p, "f_bar", "");
        if (p.contains("delta")) spec.sharpness.delta = detail::require_number(p, "delta", "");
        spec.validate();
        return spec;
    }

    if (name == "capsule_regularized") {
        const double r = detail::require_number(p, "r", "capsule_regularized");
        const double gamma = detail::require_number(p, "gamma", "capsule_regularized");
        const double R = detail::require_number(p, "R", "capsule_regularized");
        Vec a, b;
        if (p.contains("a") || p.contains("b")) {
            a = detail::vec_from_json(detail::require_field(p, "a", "capsule_regularized"), "a");
            b = detail::vec_from_json(detail::require_field(p, "b", "capsule_regularized"), "b");
            if (a.size() != dimension || b.size() != dimension)
                throw ConfigError("capsule_regularized: endpoints do not match dimension");
        } else {
            const double offset = detail::require_number(p, "axis_offset", "capsule_regularized");
            a = detail::axis_vector(dimension, offset);
            b = detail::axis_vector(dimension, -offset);
        }
        return capsule_regularized(Capsule(std::move(a), std::move(b), r), gamma, R);
    }

    if (name == "hull_of_balls_inexact") {
        const double r = detail::require_number(p, "r", "hull_of_balls_inexact");
        std::vector<Vec> centers;
        if (p.contains("centers")) {
            for (const json& c : p.at("centers"))
                centers.push_back(detail::vec_from_json(c, "hull_of_balls_inexact.centers"));
            for (const Vec& c : centers)
                if (c.size() != dimension)
                    throw ConfigError("hull_of_balls_inexact: center does not match dimension");
        } else {
            const json& g = detail::require_field(p, "generate", "hull_of_balls_inexact");
            const long count = detail::integer_or(g, "count", 5);
            const double spread = detail::require_number(g, "spread", "hull_of_balls_inexact.generate");
            const Vec base = detail::axis_vector(dimension, detail::number_or(g, "base_norm", 0.0));
            for (long i = 0; i < count; ++i)
                centers.push_back(base + gen.in_ball(dimension, spread));
        }
        return hull_of_balls_inexact(std::move(centers), r, detail::derive_seed(seed, 2),
                                     detail::number_or(p, "R", kInf));
    }

    if (name == "ball_distance") {
        const double r = detail::require_number(p, "r", "ball_distance");
        Vec center = p.contains("center")
                         ? detail::vec_from_json(p.at("center"), "ball_distance.center")
                         : Vec(Vec::Zero(dimension));
        if (center.size() != dimension)
            throw ConfigError("ball_distance: center does not match dimension");
        const double f_bar = detail::number_or(p, "f_bar", 0.0);
        return ball_distance(Ball(std::move(center), r), f_bar,
                             detail::number_or(p, "delta", f_bar),
                             detail::number_or(p, "R", kInf));
    }

    if (name == "weakly_quasiconvex_1d") {
        if (dimension != 1) throw ConfigError("weakly_quasiconvex_1d: dimension must be 1");
        return weakly_quasiconvex_1d(detail::number_or(p, "T", 5.0));
    }

    throw ConfigError("unknown problem '" + name +
                      "'; see `list-problems` for the available names");
}

// ---------------------------------------------------------------------------
// Step rule construction by name, defaulting omitted parameters from the
// problem's metadata.

inline StepRule build_rule(const json& r, const ProblemSpec& problem) {
    const std::string name = detail::require_string(r, "name", "rule");
    const SharpnessInfo& meta = problem.sharpness;

    const auto metadata_M = [&]() -> double {
        if (r.contains("M")) return detail::require_number(r, "M", "rule");
        if (meta.lipschitz_M) return *meta.lipschitz_M;
        throw ConfigError("rule '" + name + "': M not given and unknown for this problem");
    };
    const double f_bar = detail::number_or(r, "f_bar", meta.f_bar);
    const double beta = detail::number_or(r, "beta", meta.beta);

    StepRule rule;
    if (name == "polyak_adaptive")
        rule = PolyakAdaptive{beta, f_bar};
    else if (name == "polyak_lipschitz")
        rule = PolyakLipschitz{beta, f_bar, metadata_M()};
    else if (name == "polyak_partial")
        rule = PolyakPartial{f_bar, metadata_M()};
    else if (name == "polyak_delta_partial")
        rule = PolyakDeltaPartial{f_bar, detail::number_or(r, "delta", 0.0), metadata_M()};
    else if (name == "harmonic_strongly_convex") {
        double mu = detail::number_or(r, "mu", meta.strong_mu);
        if (!(mu > 0.0))
            throw ConfigError("harmonic_strongly_convex: mu not given and problem is not "
                              "strongly convex");
        rule = HarmonicStronglyConvex{mu};
    } else {
        throw ConfigError("unknown rule '" + name +
                          "'; see `list-problems` for the available names");
    }
    validate(rule);
    return rule;
}

// ---------------------------------------------------------------------------
// Experiment configuration

struct X0Policy {
    enum class Kind { explicit_vector, uniform_sphere, uniform_ball, constant_over_sqrt_n,
                      first_ball_center };
    Kind kind = Kind::constant_over_sqrt_n;
    Vec vector;
    double radius = 1.0;
};

inline X0Policy parse_x0(const json& j) {
    X0Policy policy;
    const std::string kind = detail::require_string(j, "policy", "x0");
    if (kind == "explicit") {
        policy.kind = X0Policy::Kind::explicit_vector;
        policy.vector = detail::vec_from_json(detail::require_field(j, "vector", "x0"), "x0.vector");
    } else if (kind == "uniform_sphere") {
        policy.kind = X0Policy::Kind::uniform_sphere;
        policy.radius = detail::require_number(j, "radius", "x0");
    } else if (kind == "uniform_ball") {
        policy.kind = X0Policy::Kind::uniform_ball;
        policy.radius = detail::require_number(j, "radius", "x0");
    } else if (kind == "constant_over_sqrt_n") {
        policy.kind = X0Policy::Kind::constant_over_sqrt_n;
        policy.radius = detail::require_number(j, "radius", "x0");
    } else if (kind == "first_ball_center") {
        policy.kind = X0Policy::Kind::first_ball_center;
    } else {
        throw ConfigError("unknown x0 policy '" + kind + "'");
    }
    return policy;
}

inline Vec make_x0(const X0Policy& policy, Eigen::Index dimension, std::uint64_t seed) {
    switch (policy.kind) {
        case X0Policy::Kind::explicit_vector:
            if (policy.vector.size() != dimension)
                throw ConfigError("x0: explicit vector does not match dimension");
            return policy.vector;
        case X0Policy::Kind::uniform_sphere: {
            Rng rng(detail::derive_seed(seed, 3));
            return rng.on_sphere(dimension, policy.radius);
        }
        case X0Policy::Kind::uniform_ball: {
            Rng rng(detail::derive_seed(seed, 3));
            return rng.in_ball(dimension, policy.radius);
        }
        case X0Policy::Kind::constant_over_sqrt_n:
            return Vec::Constant(dimension,
                                 policy.radius / std::sqrt(static_cast<double>(dimension)));
        case X0Policy::Kind::first_ball_center:
            throw ConfigError("x0 policy 'first_ball_center' is only valid for ball systems");
    }
    throw ConfigError("x0: bad policy");
}

inline const std::vector<std::string>& series_catalog() {
    static const std::vector<std::string> names = {
        "theorem1",        "theorem2",
        "corollary1",      "theorem4",
        "theorem7",        "sharp_argument",
        "harmonic_original", "harmonic_adaptive",
        "harmonic_argument_global", "harmonic_argument_adaptive",
        "xhat_gap",        "xhat_dist_sq"};
    return names;
}

// ---------------------------------------------------------------------------
// Solver-run execution and CSV assembly

struct SolverRunOutput {
    ProblemSpec problem;
    StepRule rule;
    Trace trace;
    std::string csv;
    std::string output_path;
};

namespace detail {

struct SeriesColumn {
    std::string name;
    std::vector<std::optional<double>> cells;  // aligned with trace records
    std::vector<std::pair<std::string, std::string>> meta;
};

/// Parameters shared by the closed-form distance bounds, pulled from the
/// rule first and the problem metadata second.
struct BoundParams {
    double alpha = 0.0;
    double beta = 1.0;
    double M = 0.0;
    bool has_M = false;
    double Delta = 0.0;
    double rule_delta = 0.0;
    double mu = 0.0;
    double R0_sq = 0.0;
    bool has_R0 = false;
};

inline BoundParams bound_params(const ProblemSpec& problem, const StepRule& rule,
                                const Trace& trace) {
    BoundParams bp;
    const SharpnessInfo& meta = problem.sharpness;
    if (meta.alpha) bp.alpha = *meta.alpha;
    bp.beta = meta.beta;
    bp.Delta = meta.delta;
    bp.mu = meta.strong_mu;
    if (auto* r = std::get_if<PolyakAdaptive>(&rule)) bp.beta = r->beta;
    if (auto* r = std::get_if<PolyakLipschitz>(&rule)) {
        bp.beta = r->beta;
        bp.M = r->M;
        bp.has_M = true;
    }
    if (auto* r = std::get_if<PolyakPartial>(&rule)) {
        bp.M = r->M;
        bp.has_M = true;
    }
    if (auto* r = std::get_if<PolyakDeltaPartial>(&rule)) {
        bp.M = r->M;
        bp.has_M = true;
        bp.rule_delta = r->delta;
    }
    if (auto* r = std::get_if<HarmonicStronglyConvex>(&rule)) bp.mu = r->mu;
    if (!bp.has_M && meta.lipschitz_M) {
        bp.M = *meta.lipschitz_M;
        bp.has_M = true;
    }
    if (!trace.records.empty() && trace.records.front().dist_sq) {
        bp.R0_sq = *trace.records.front().dist_sq;
        bp.has_R0 = true;
    }
    return bp;
}

inline void require_alpha(const BoundParams& bp, const std::string& name) {
    if (!(bp.alpha > 0.0))
        throw ConfigError("series '" + name + "' needs a sharpness modulus alpha");
}
inline void require_R0(const BoundParams& bp, const std::string& name) {
    if (!bp.has_R0)
        throw ConfigError("series '" + name + "' needs a known solution set for dist^2(x_0)");
}
inline void require_M(const BoundParams& bp, const std::string& name) {
    if (!bp.has_M) throw ConfigError("series '" + name + "' needs a Lipschitz constant M");
}
inline void require_mu(const BoundParams& bp, const std::string& name) {
    if (!(bp.mu > 0.0)) throw ConfigError("series '" + name + "' needs a strong convexity mu");
}

struct XhatSeries {
    std::vector<std::optional<double>> gap;      // f(xhat_N) - f_bar
    std::vector<std::optional<double>> dist_sq;  // ||xhat_N - X*||^2
    std::optional<Vec> final_xhat;
};

}  // namespace detail

inline SolverRunOutput run_solver_config(const json& cfg) {
    const Eigen::Index dimension =
        static_cast<Eigen::Index>(detail::integer_or(cfg, "dimension", 0));
    if (dimension <= 0) throw ConfigError("config: positive 'dimension' is required");
    if (!cfg.contains("seed")) throw ConfigError("config: 'seed' is required");
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();

    SolverRunOutput out;
    out.problem = build_problem(detail::require_field(cfg, "problem", "config"), dimension, seed);
    out.rule = build_rule(detail::require_field(cfg, "rule", "config"), out.problem);
    out.output_path = cfg.contains("output_path")
                          ? detail::require_string(cfg, "output_path", "config")
                          : std::string();

    std::vector<std::string> bounds;
    if (cfg.contains("bounds")) {
        for (const json& b : cfg.at("bounds")) {
            if (!b.is_string()) throw ConfigError("config: 'bounds' must be a list of names");
            const std::string name = b.get<std::string>();
            if (std::find(series_catalog().begin(), series_catalog().end(), name) ==
                series_catalog().end())
                throw ConfigError("unknown series '" + name +
                                  "'; see `list-problems` for the available names");
            bounds.push_back(name);
        }
    }
    const bool wants_xhat =
        std::find(bounds.begin(), bounds.end(), "xhat_gap") != bounds.end() ||
        std::find(bounds.begin(), bounds.end(), "xhat_dist_sq") != bounds.end();
    if (wants_xhat && !is_harmonic(out.rule))
        throw ConfigError("xhat series are only defined for harmonic runs");

    IterateOptions opts;
    opts.max_iters = detail::integer_or(cfg, "max_iters", 1000);
    opts.project = detail::flag_or(cfg, "project", !out.problem.feasible_set.unbounded());
    opts.use_delta_oracle = detail::flag_or(cfg, "use_delta_oracle", false);
    opts.seed = detail::derive_seed(seed, 4);
    opts.store_iterates = false;
    if (opts.project && out.problem.feasible_set.unbounded())
        opts.project = false;

    const Vec x0 = make_x0(parse_x0(detail::require_field(cfg, "x0", "config")), dimension, seed);

    // Prefix weighted averages for the harmonic method, maintained online so
    // long runs never store full iterates.
    detail::XhatSeries xhat;
    Vec weighted_sum;
    const bool harmonic = is_harmonic(out.rule);
    if (harmonic) {
        weighted_sum = Vec::Zero(dimension);
        xhat.gap.push_back(std::nullopt);      // undefined at k = 0
        xhat.dist_sq.push_back(std::nullopt);
        opts.observer = [&](long k, const Vec& x_k, const Vec&, double, const Vec&) {
            weighted_sum += static_cast<double>(k + 1) * x_k;
            const long N = k + 1;
            const Vec avg =
                2.0 / (static_cast<double>(N) * static_cast<double>(N + 1)) * weighted_sum;
            xhat.gap.push_back(out.problem.query(avg).value - out.problem.sharpness.f_bar);
            xhat.dist_sq.push_back(out.problem.solution_set.known()
                                       ? std::optional<double>(out.problem.solution_set.dist_sq(avg))
                                       : std::nullopt);
            xhat.final_xhat = avg;
        };
    }

    out.trace = iterate(out.problem, out.rule, x0, opts);
    if (xhat.final_xhat) out.trace.x_hat = xhat.final_xhat;

    // Assemble requested series columns.
    const detail::BoundParams bp = detail::bound_params(out.problem, out.rule, out.trace);
    const std::size_t rows = out.trace.records.size();
    std::vector<detail::SeriesColumn> columns;
    for (const std::string& name : bounds) {
        detail::SeriesColumn col;
        col.name = name;
        col.cells.assign(rows, std::nullopt);

        if (name == "theorem1") {
            detail::require_alpha(bp, name);
            detail::require_R0(bp, name);
            const BoundSeries s = bound_theorem1(out.trace, bp.alpha, bp.beta, bp.Delta, bp.R0_sq);
            if (rows > 0) col.cells[0] = bp.R0_sq;
            for (std::size_t k = 0; k < s.values.size() && k + 1 < rows; ++k)
                col.cells[k + 1] = s.values[k];
            col.meta.emplace_back("theorem1_assumptions_ok", s.assumptions_ok ? "1" : "0");
            col.meta.emplace_back("theorem1_violations",
                                  std::to_string(s.violated.size()));
        } else if (name == "theorem2" || name == "corollary1" || name == "theorem4" ||
                   name == "theorem7") {
            detail::require_alpha(bp, name);
            detail::require_R0(bp, name);
            detail::require_M(bp, name);
            if (rows > 0) col.cells[0] = bp.R0_sq;
            for (std::size_t k = 0; k + 1 < rows; ++k) {
                const long kk = static_cast<long>(k);
                if (name == "theorem2")
                    col.cells[k + 1] = bound_theorem2(kk, bp.alpha, bp.beta, bp.M, bp.Delta, bp.R0_sq);
                else if (name == "corollary1")
                    col.cells[k + 1] = bound_corollary1(kk, bp.alpha, bp.beta, bp.M, bp.R0_sq);
                else if (name == "theorem4")
                    col.cells[k + 1] = bound_theorem4(kk, bp.alpha, bp.M, bp.Delta, bp.R0_sq);
                else
                    col.cells[k + 1] =
                        bound_theorem7(kk, bp.alpha, bp.M, bp.Delta, bp.rule_delta, bp.R0_sq);
            }
            if (name == "theorem2")
                col.meta.emplace_back("theorem2_hypothesis_ok",
                                      theorem2_hypothesis_ok(bp.alpha, bp.beta, bp.M) ? "1" : "0");
            if (name == "theorem7")
                col.meta.emplace_back("theorem7_hypothesis_ok",
                                      theorem7_hypothesis_ok(bp.alpha, bp.M) ? "1" : "0");
        } else if (name == "sharp_argument") {
            // dist(x_k, X*) <= (f(x_k) - f_bar + Delta) / alpha, squared;
            // needs no known solution set.
            detail::require_alpha(bp, name);
            for (std::size_t k = 0; k < rows; ++k) {
                const double gap =
                    out.trace.records[k].value - out.problem.sharpness.f_bar + bp.Delta;
                col.cells[k] = gap * gap / (bp.alpha * bp.alpha);
            }
        } else if (name == "harmonic_original") {
            detail::require_M(bp, name);
            detail::require_mu(bp, name);
            for (std::size_t k = 1; k < rows; ++k)
                col.cells[k] = bound_harmonic_original(bp.M, bp.mu, static_cast<long>(k));
        } else if (name == "harmonic_adaptive") {
            detail::require_mu(bp, name);
            for (std::size_t k = 1; k < rows; ++k)
                col.cells[k] = bound_harmonic_adaptive(out.trace, bp.mu, static_cast<long>(k));
        } else if (name == "harmonic_argument_global") {
            detail::require_M(bp, name);
            detail::require_mu(bp, name);
            for (std::size_t k = 1; k < rows; ++k)
                col.cells[k] = bound_harmonic_argument_global(bp.M, bp.mu, static_cast<long>(k));
        } else if (name == "harmonic_argument_adaptive") {
            detail::require_mu(bp, name);
            for (std::size_t k = 1; k < rows; ++k)
                col.cells[k] =
                    bound_harmonic_argument_adaptive(out.trace, bp.mu, static_cast<long>(k));
        } else if (name == "xhat_gap") {
            for (std::size_t k = 0; k < rows && k < xhat.gap.size(); ++k)
                col.cells[k] = xhat.gap[k];
        } else if (name == "xhat_dist_sq") {
            if (!out.problem.solution_set.known())
                throw ConfigError("series 'xhat_dist_sq' needs a known solution set");
            for (std::size_t k = 0; k < rows && k < xhat.dist_sq.size(); ++k)
                col.cells[k] = xhat.dist_sq[k];
        }
        columns.push_back(std::move(col));
    }

    // CSV assembly.
    std::ostringstream csv;
    csv << "k,f,gap,dist_sq,grad_norm,step,inexactness";
    for (const auto& col : columns) csv << ',' << col.name;
    csv << '\n';
    for (std::size_t k = 0; k < rows; ++k) {
        const IterateRecord& rec = out.trace.records[k];
        csv << rec.k << ',' << detail::fmt(rec.value) << ','
            << detail::fmt(rec.value - out.problem.sharpness.f_bar) << ',';
        if (rec.dist_sq) csv << detail::fmt(*rec.dist_sq);
        csv << ',' << detail::fmt(rec.grad_norm) << ',' << detail::fmt(rec.step) << ','
            << detail::fmt(rec.inexactness);
        for (const auto& col : columns) {
            csv << ',';
            if (col.cells[k]) csv << detail::fmt(*col.cells[k]);
        }
        csv << '\n';
    }

    csv << "meta,terminated_by," << to_string(out.trace.terminated_by) << '\n';
    if (out.trace.value_is_proxy) csv << "meta,value_is_proxy,1\n";
    double max_radius = 0.0;
    for (const IterateRecord& rec : out.trace.records)
        max_radius = std::max(max_radius, rec.radius_from_x0);
    csv << "meta,max_radius_from_x0," << detail::fmt(max_radius) << '\n';
    if (bp.alpha > 0.0 && bp.has_M && bp.has_R0 && bp.alpha <= bp.M)
        csv << "meta,trajectory_radius_certified,"
            << detail::fmt(trajectory_radius(bp.M, bp.alpha, std::sqrt(bp.R0_sq))) << '\n';
    if (harmonic && xhat.final_xhat) {
        csv << "meta,xhat_gap,"
            << detail::fmt(out.problem.query(*xhat.final_xhat).value -
                           out.problem.sharpness.f_bar)
            << '\n';
        if (out.problem.solution_set.known())
            csv << "meta,xhat_dist_sq,"
                << detail::fmt(out.problem.solution_set.dist_sq(*xhat.final_xhat)) << '\n';
    }
    for (const auto& col : columns)
        for (const auto& [key, value] : col.meta) csv << "meta," << key << ',' << value << '\n';

    out.csv = csv.str();
    return out;
}

// ---------------------------------------------------------------------------
// Ball-system (sequential projection) execution

struct FeasibilityRunOutput {
    BallSystem system;
    SequentialProjectResult result;
    std::string csv;
    std::string output_path;
};

inline FeasibilityRunOutput run_feasibility_config(const json& cfg) {
    const Eigen::Index dimension =
        static_cast<Eigen::Index>(detail::integer_or(cfg, "dimension", 0));
    if (dimension <= 0) throw ConfigError("config: positive 'dimension' is required");
    if (!cfg.contains("seed")) throw ConfigError("config: 'seed' is required");
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const json& p = detail::require_field(cfg, "problem", "config");

    FeasibilityRunOutput out;
    out.output_path = cfg.contains("output_path")
                          ? detail::require_string(cfg, "output_path", "config")
                          : std::string();
    BallSystem& system = out.system;
    system.delta_target = detail::require_number(p, "Delta", "ball_system");
    const double r = detail::require_number(p, "r", "ball_system");

    if (p.contains("centers")) {
        for (const json& c : p.at("centers"))
            system.balls.emplace_back(detail::vec_from_json(c, "ball_system.centers"), r);
    } else {
        const json& g = detail::require_field(p, "generate", "ball_system");
        const long count = detail::integer_or(g, "count", 20);
        const double center_distance =
            detail::require_number(g, "center_distance", "ball_system.generate");
        Rng gen(detail::derive_seed(seed, 1));
        for (long i = 0; i < count; ++i)
            system.balls.emplace_back(gen.on_sphere(dimension, center_distance), r);
    }

    const json& policy = detail::require_field(p, "f_bar_policy", "ball_system");
    if (policy.contains("fraction_of_delta"))
        system.f_bar_per_ball.assign(system.balls.size(),
                                     system.delta_target *
                                         policy.at("fraction_of_delta").get<double>());
    else if (policy.contains("value"))
        system.f_bar_per_ball.assign(system.balls.size(), policy.at("value").get<double>());
    else if (policy.contains("per_ball"))
        for (const json& v : policy.at("per_ball")) system.f_bar_per_ball.push_back(v.get<double>());
    else
        throw ConfigError("ball_system: f_bar_policy needs fraction_of_delta, value or per_ball");
    system.validate();

    Vec x0;
    const json& x0_cfg = detail::require_field(cfg, "x0", "config");
    if (x0_cfg.contains("policy") && x0_cfg.at("policy") == "first_ball_center")
        x0 = system.balls.front().center;
    else
        x0 = make_x0(parse_x0(x0_cfg), dimension, seed);

    out.result = sequential_project(system, x0,
                                    detail::integer_or(cfg, "max_iters_per_subproblem", 5),
                                    detail::integer_or(cfg, "sweeps", 2));

    const auto max_dist_at = [&](const Vec& x) {
        double d = 0.0;
        for (const Ball& b : system.balls) d = std::max(d, dist_to_ball(x, b).value);
        return d;
    };

    std::ostringstream csv;
    csv << "k,f,gap,dist_sq,grad_norm,step,inexactness\n";
    csv << "0," << detail::fmt(max_dist_at(x0)) << ','
        << detail::fmt(max_dist_at(x0) - system.delta_target) << ",,,,\n";
    for (std::size_t t = 0; t < out.result.step_max_dist.size(); ++t)
        csv << (t + 1) << ',' << detail::fmt(out.result.step_max_dist[t]) << ','
            << detail::fmt(out.result.step_max_dist[t] - system.delta_target) << ",,,,\n";
    csv << "meta,iterations_used," << out.result.iterations_used << '\n';
    double final_max = 0.0;
    for (double d : out.result.per_ball_dist) final_max = std::max(final_max, d);
    csv << "meta,final_max_dist," << detail::fmt(final_max) << '\n';
    csv << "meta,delta_target," << detail::fmt(system.delta_target) << '\n';
    csv << "meta,sweeps_run," << out.result.sweep_max_dist.size() << '\n';
    out.csv = csv.str();
    return out;
}

// ---------------------------------------------------------------------------
// Dispatch, file output

inline bool is_feasibility_config(const json& cfg) {
    return cfg.contains("problem") && cfg.at("problem").is_object() &&
           cfg.at("problem").contains("name") && cfg.at("problem").at("name") == "ball_system";
}

inline void write_file_atomically(const std::string& path, const std::string& content) {
    if (path.empty()) throw ConfigError("config: 'output_path' is required to write a trace");
    const std::string tmp = path + ".tmp";
    try {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        f << content;
        f.close();
        if (!f) throw std::runtime_error("write to '" + tmp + "' failed");
        std::filesystem::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw;
    }
}

/// Validates, runs and writes the configured trace; the output file appears
/// only after a fully successful run.
inline std::string execute_config(const json& cfg) {
    if (is_feasibility_config(cfg)) {
        FeasibilityRunOutput out = run_feasibility_config(cfg);
        write_file_atomically(out.output_path, out.csv);
        return out.output_path;
    }
    SolverRunOutput out = run_solver_config(cfg);
    write_file_atomically(out.output_path, out.csv);
    return out.output_path;
}

}  // namespace subgrad::experiment
