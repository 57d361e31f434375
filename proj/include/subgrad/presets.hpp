// presets.hpp
//
// Named experiment presets for the figure and remark reproductions, plus
// the text catalog behind `list-problems`. Every preset carries fixed
// seeds, so reproductions are bit-identical run to run; the scale flag
// shrinks the dimension for desk-scale runs.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subgrad/experiment.hpp"

namespace subgrad::experiment {

struct Preset {
    std::string name;
    std::string description;
    /// One config per emitted CSV (one per method curve); output_path holds
    /// the bare file name, filled in relative to the output directory.
    std::vector<json> configs;
};

namespace detail {

inline json solver_cfg(std::string file, json problem, json rule, long dimension, long max_iters,
                       json x0, std::uint64_t seed, bool project, json bounds) {
    json cfg;
    cfg["problem"] = std::move(problem);
    cfg["rule"] = std::move(rule);
    cfg["dimension"] = dimension;
    cfg["max_iters"] = max_iters;
    cfg["x0"] = std::move(x0);
    cfg["seed"] = seed;
    cfg["project"] = project;
    cfg["bounds"] = std::move(bounds);
    cfg["output_path"] = std::move(file);
    return cfg;
}

}  // namespace detail

inline std::vector<Preset> preset_catalog() {
    std::vector<Preset> presets;

    // Smallest enclosing ball, squared objective, harmonic step: the
    // adaptive estimate against the global one on a bounded set.
    {
        Preset p;
        p.name = "fig1-harmonic-ball";
        p.description = "max_i ||x-a_i||^2, harmonic step, Q = ball of radius 4; "
                        "adaptive vs global estimates (n=1000, points in radius 5)";
        const json problem = {{"name", "enclosing_ball_squared"},
                              {"generate", {{"count", 20}, {"radius", 5.0}}},
                              {"R", 4.0}};
        p.configs.push_back(detail::solver_cfg(
            "fig1-harmonic-ball.csv", problem, {{"name", "harmonic_strongly_convex"}, {"mu", 2.0}},
            1000, 2000, {{"policy", "uniform_ball"}, {"radius", 4.0}}, 101, true,
            {"harmonic_original", "harmonic_adaptive", "harmonic_argument_global",
             "harmonic_argument_adaptive", "xhat_gap"}));
        presets.push_back(std::move(p));
    }

    // Same objective on the whole space, where the global estimate is
    // unavailable and only the adaptive one applies.
    {
        Preset p;
        p.name = "fig2-harmonic-unbounded";
        p.description = "max_i ||x-a_i||^2, harmonic step, Q = R^n; adaptive estimate only";
        const json problem = {{"name", "enclosing_ball_squared"},
                              {"generate", {{"count", 20}, {"radius", 5.0}}}};
        p.configs.push_back(detail::solver_cfg(
            "fig2-harmonic-unbounded.csv", problem,
            {{"name", "harmonic_strongly_convex"}, {"mu", 2.0}}, 1000, 2000,
            {{"policy", "uniform_ball"}, {"radius", 4.0}}, 102, false,
            {"harmonic_adaptive", "harmonic_argument_adaptive", "xhat_gap"}));
        presets.push_back(std::move(p));
    }

    // Scaled covering objective with an approximate minimal value: the
    // partially adaptive step converges to the approximate solution fast.
    {
        Preset p;
        p.name = "fig3-sharp-convex";
        p.description = "alpha * max_i ||x-a_i||, alpha=0.6, cloud radius 0.7525 plus an "
                        "outlier near the boundary; partially adaptive step (n=1000)";
        const double alpha = 0.6;
        const double r = 0.7525;
        const double outlier_factor = 1.05;
        const double f_bar = alpha * r * outlier_factor;
        const json problem = {{"name", "enclosing_ball"},
                              {"scale_alpha", alpha},
                              {"generate",
                               {{"count", 20},
                                {"radius", r},
                                {"on_sphere", true},
                                {"outlier_factor", outlier_factor}}},
                              {"f_bar", f_bar},
                              {"delta", f_bar}};
        p.configs.push_back(detail::solver_cfg(
            "fig3-sharp-convex.csv", problem, {{"name", "polyak_partial"}}, 1000, 300,
            {{"policy", "uniform_sphere"}, {"radius", 3.0 * r}}, 103, false,
            {"sharp_argument"}));
        presets.push_back(std::move(p));
    }

    // The same point cloud with the squared strongly convex objective and
    // the harmonic baseline: slower but keeps improving.
    {
        Preset p;
        p.name = "fig4-strong-convex";
        p.description = "max_i ||x-a_i||^2 on the fig3 cloud, harmonic step (n=1000)";
        const json problem = {{"name", "enclosing_ball_squared"},
                              {"generate",
                               {{"count", 20},
                                {"radius", 0.7525},
                                {"on_sphere", true},
                                {"outlier_factor", 1.05}}}};
        p.configs.push_back(detail::solver_cfg(
            "fig4-strong-convex.csv", problem,
            {{"name", "harmonic_strongly_convex"}, {"mu", 2.0}}, 1000, 2000,
            {{"policy", "uniform_sphere"}, {"radius", 3.0 * 0.7525}}, 103, false,
            {"harmonic_adaptive", "harmonic_argument_adaptive", "xhat_gap"}));
        presets.push_back(std::move(p));
    }

    // ||x|| + 2 gamma ||x||^2 comparisons: adaptive and Lipschitz Polyak
    // steps against the harmonic baseline run with the paper's mu = 2 gamma.
    const auto norm_quad_preset = [](const std::string& name, const std::string& desc,
                                     double gamma_paper, double R, long n, long iters,
                                     std::uint64_t seed) {
        Preset p;
        p.name = name;
        p.description = desc;
        const double coeff = 2.0 * gamma_paper;
        const json problem = {{"name", "norm_plus_quadratic"}, {"gamma", coeff}, {"R", R}};
        const json x0 = {{"policy", "constant_over_sqrt_n"}, {"radius", R}};
        p.configs.push_back(detail::solver_cfg(name + "-adaptive.csv", problem,
                                               {{"name", "polyak_adaptive"}}, n, iters, x0, seed,
                                               true, {"theorem1", "corollary1"}));
        p.configs.push_back(detail::solver_cfg(name + "-lipschitz.csv", problem,
                                               {{"name", "polyak_lipschitz"}}, n, iters, x0, seed,
                                               true, {"theorem2", "corollary1"}));
        p.configs.push_back(detail::solver_cfg(
            name + "-harmonic.csv", problem,
            {{"name", "harmonic_strongly_convex"}, {"mu", coeff}}, n, iters, x0, seed, true,
            {"harmonic_original", "harmonic_adaptive", "harmonic_argument_global",
             "harmonic_argument_adaptive", "xhat_gap", "xhat_dist_sq"}));
        return p;
    };
    presets.push_back(norm_quad_preset(
        "fig5-exact-r10", "||x|| + 2*0.5*||x||^2, R=10 (n=10000): Polyak variants vs harmonic",
        0.5, 10.0, 10000, 3000, 105));
    presets.push_back(norm_quad_preset(
        "fig6-exact-r1000", "||x|| + 2*0.01*||x||^2, R=1000 (n=10000)", 0.01, 1000.0, 10000,
        3000, 106));

    // Inexact minimal value: ||x|| + 2 gamma ||x - c||^2 with small c.
    {
        Preset p;
        p.name = "fig7-nonexact";
        p.description = "||x|| + 2*0.001*||x-c||^2, ||c||=0.01, R=5000 (n=1000); "
                        "relaxed sharp minimum with f_bar above the unknown f*";
        const double coeff = 2.0 * 0.001;
        const json problem = {{"name", "norm_plus_quadratic"},
                              {"gamma", coeff},
                              {"c_norm", 0.01},
                              {"R", 5000.0}};
        const json x0 = {{"policy", "constant_over_sqrt_n"}, {"radius", 5000.0}};
        p.configs.push_back(detail::solver_cfg("fig7-nonexact-adaptive.csv", problem,
                                               {{"name", "polyak_adaptive"}}, 1000, 3000, x0, 107,
                                               true, {"theorem1"}));
        p.configs.push_back(detail::solver_cfg("fig7-nonexact-lipschitz.csv", problem,
                                               {{"name", "polyak_lipschitz"}}, 1000, 3000, x0,
                                               107, true, {"theorem2"}));
        p.configs.push_back(detail::solver_cfg(
            "fig7-nonexact-harmonic.csv", problem,
            {{"name", "harmonic_strongly_convex"}, {"mu", coeff}}, 1000, 3000, x0, 107, true,
            {"harmonic_adaptive", "harmonic_argument_global", "harmonic_argument_adaptive",
             "xhat_dist_sq"}));
        presets.push_back(std::move(p));
    }

    // Capsule-regularized distance objectives.
    const auto capsule_preset = [](const std::string& name, double gamma, double R, double r,
                                   std::uint64_t seed) {
        Preset p;
        p.name = name;
        p.description = "dist(x, capsule) + gamma ||x||^2 with gamma=" + detail::fmt(gamma) +
                        ", R=" + detail::fmt(R) + ", r=" + detail::fmt(r) + " (n=1000)";
        const json problem = {{"name", "capsule_regularized"},
                              {"axis_offset", R / 2.0},
                              {"r", r},
                              {"gamma", gamma},
                              {"R", R}};
        const json x0 = {{"policy", "constant_over_sqrt_n"}, {"radius", R}};
        p.configs.push_back(detail::solver_cfg(name + "-adaptive.csv", problem,
                                               {{"name", "polyak_adaptive"}}, 1000, 2000, x0,
                                               seed, true, {"sharp_argument"}));
        p.configs.push_back(detail::solver_cfg(name + "-lipschitz.csv", problem,
                                               {{"name", "polyak_lipschitz"}}, 1000, 2000, x0,
                                               seed, true, {"sharp_argument"}));
        p.configs.push_back(detail::solver_cfg(
            name + "-harmonic.csv", problem, {{"name", "harmonic_strongly_convex"}}, 1000, 2000,
            x0, seed, true,
            {"harmonic_original", "harmonic_adaptive", "harmonic_argument_global",
             "harmonic_argument_adaptive", "xhat_gap"}));
        return p;
    };
    presets.push_back(capsule_preset("fig8-capsule", 0.01, 1.0, 0.1, 108));
    presets.push_back(capsule_preset("fig9-capsule", 0.001, 5.0, 0.5, 109));

    // Random-center inexact oracle over a hull of nearby balls: the method
    // lands on the exact solution within a few projections.
    {
        Preset p;
        p.name = "remark2-random-centers";
        p.description = "dist to a hull of 5 nearby balls with random-center delta oracle "
                        "(n=50); reaches f = 0 within a few steps";
        const json problem = {{"name", "hull_of_balls_inexact"},
                              {"r", 1.0},
                              {"generate", {{"count", 5}, {"spread", 0.5}, {"base_norm", 3.0}}},
                              {"R", 10.0}};
        json cfg = detail::solver_cfg(
            "remark2-random-centers.csv", problem,
            {{"name", "polyak_delta_partial"}, {"f_bar", 0.0}, {"delta", 0.0}, {"M", 1.0}}, 50,
            50, {{"policy", "constant_over_sqrt_n"}, {"radius", 10.0}}, 110, true, json::array());
        cfg["use_delta_oracle"] = true;
        p.configs.push_back(std::move(cfg));
        presets.push_back(std::move(p));
    }

    // Relaxed common-point problem: 20 balls of radius 10 whose centers sit
    // at distance 10.5 from the origin; sequential projection with
    // per-subproblem targets below Delta.
    {
        Preset p;
        p.name = "remark3";
        p.description = "sequential projection over 20 balls (r=10, centers at 10.5, "
                        "Delta=0.5, n=1000); final max distance <= Delta";
        json cfg;
        cfg["problem"] = {{"name", "ball_system"},
                          {"r", 10.0},
                          {"Delta", 0.5},
                          {"generate", {{"count", 20}, {"center_distance", 10.5}}},
                          {"f_bar_policy", {{"fraction_of_delta", 0.5}}}};
        cfg["dimension"] = 1000;
        cfg["x0"] = {{"policy", "first_ball_center"}};
        cfg["max_iters_per_subproblem"] = 5;
        cfg["sweeps"] = 2;
        cfg["seed"] = 111;
        cfg["output_path"] = "remark3.csv";
        p.configs.push_back(std::move(cfg));
        presets.push_back(std::move(p));
    }

    return presets;
}

/// Runs a preset, optionally overriding the dimension, writing one CSV per
/// configured method into out_dir. Returns the written paths.
inline std::vector<std::string> reproduce(const std::string& name,
                                          std::optional<long> scale_dimension,
                                          const std::string& out_dir) {
    for (const Preset& preset : preset_catalog()) {
        if (preset.name != name) continue;
        std::vector<std::string> written;
        for (json cfg : preset.configs) {
            if (scale_dimension) cfg["dimension"] = *scale_dimension;
            std::filesystem::path path(out_dir);
            path /= cfg.at("output_path").get<std::string>();
            cfg["output_path"] = path.string();
            written.push_back(execute_config(cfg));
        }
        return written;
    }
    std::string known;
    for (const Preset& preset : preset_catalog()) known += "\n  " + preset.name;
    throw ConfigError("unknown preset '" + name + "'; available presets:" + known);
}

/// Minimal ready-to-run example configs covering every problem, rule and
/// series name in the catalog; `list-problems` prints them and the tests
/// round-trip each through the runner.
inline std::vector<json> catalog_examples() {
    std::vector<json> examples;
    const json x0_small = {{"policy", "uniform_sphere"}, {"radius", 3.0}};

    const auto push = [&](json problem, json rule, long dim, json bounds, bool delta_oracle,
                          json x0) {
        json cfg = detail::solver_cfg("", std::move(problem), std::move(rule), dim, 40,
                                      std::move(x0), 1, false, std::move(bounds));
        if (delta_oracle) cfg["use_delta_oracle"] = true;
        cfg.erase("output_path");
        examples.push_back(std::move(cfg));
    };

    push({{"name", "norm_plus_quadratic"}, {"gamma", 0.5}, {"R", 10.0}},
         {{"name", "polyak_adaptive"}}, 4, {"theorem1", "corollary1", "sharp_argument"}, false,
         x0_small);
    push({{"name", "norm_plus_quadratic"}, {"gamma", 0.002}, {"c_norm", 0.01}, {"R", 10.0}},
         {{"name", "polyak_lipschitz"}}, 4, {"theorem2"}, false, x0_small);
    push({{"name", "ball_distance"}, {"r", 1.0}, {"f_bar", 0.1}, {"delta", 0.1}},
         {{"name", "polyak_partial"}, {"M", 1.0}}, 3, {"theorem4"}, false, x0_small);
    push({{"name", "hull_of_balls_inexact"},
          {"r", 0.5},
          {"generate", {{"count", 2}, {"spread", 1.0}}}},
         {{"name", "polyak_delta_partial"}, {"M", 1.0}}, 3, {"theorem7"}, true, x0_small);
    push({{"name", "enclosing_ball_squared"},
          {"generate", {{"count", 6}, {"radius", 2.0}}},
          {"R", 3.0}},
         {{"name", "harmonic_strongly_convex"}}, 4,
         {"harmonic_original", "harmonic_adaptive", "harmonic_argument_global",
          "harmonic_argument_adaptive", "xhat_gap"},
         false, {{"policy", "uniform_ball"}, {"radius", 3.0}});
    push({{"name", "enclosing_ball"},
          {"scale_alpha", 0.6},
          {"generate", {{"count", 6}, {"radius", 2.0}}},
          {"f_bar", 1.5},
          {"delta", 1.5}},
         {{"name", "polyak_partial"}}, 4, {"sharp_argument"}, false, x0_small);
    push({{"name", "capsule_regularized"},
          {"axis_offset", 0.5},
          {"r", 0.1},
          {"gamma", 0.01},
          {"R", 1.0}},
         {{"name", "polyak_adaptive"}}, 3, {"sharp_argument"}, false,
         {{"policy", "constant_over_sqrt_n"}, {"radius", 1.0}});
    push({{"name", "weakly_quasiconvex_1d"}, {"T", 5.0}}, {{"name", "polyak_adaptive"}}, 1,
         {"theorem1"}, false, {{"policy", "explicit"}, {"vector", {4.0}}});

    // Ball-system example for the feasibility path.
    json feasibility;
    feasibility["problem"] = {{"name", "ball_system"},
                              {"r", 2.0},
                              {"Delta", 0.25},
                              {"generate", {{"count", 4}, {"center_distance", 2.2}}},
                              {"f_bar_policy", {{"fraction_of_delta", 0.5}}}};
    feasibility["dimension"] = 8;
    feasibility["x0"] = {{"policy", "first_ball_center"}};
    feasibility["max_iters_per_subproblem"] = 5;
    feasibility["sweeps"] = 2;
    feasibility["seed"] = 1;
    examples.push_back(std::move(feasibility));

    return examples;
}

inline std::string list_problems_text() {
    std::ostringstream out;
    out << "problems (config field: problem.name)\n"
        << "  norm_plus_quadratic      gamma, c | c_norm, R?\n"
        << "  enclosing_ball           points | generate{count, radius, on_sphere?, "
           "outlier_factor?}, scale_alpha?, squared?, R?, f_bar?, delta?\n"
        << "  enclosing_ball_squared   same fields, squared variant\n"
        << "  capsule_regularized      a, b | axis_offset, r, gamma, R\n"
        << "  hull_of_balls_inexact    centers | generate{count, spread, base_norm?}, r, R?\n"
        << "  ball_distance            center?, r, f_bar?, delta?, R?\n"
        << "  weakly_quasiconvex_1d    T? (dimension must be 1)\n"
        << "  ball_system              r, Delta, centers | generate{count, center_distance}, "
           "f_bar_policy{fraction_of_delta | value | per_ball}\n"
        << "\n"
        << "rules (config field: rule.name; omitted parameters default from metadata)\n"
        << "  polyak_adaptive          beta?, f_bar?\n"
        << "  polyak_lipschitz         beta?, f_bar?, M?\n"
        << "  polyak_partial           f_bar?, M?\n"
        << "  polyak_delta_partial     f_bar?, delta?, M?\n"
        << "  harmonic_strongly_convex mu?\n"
        << "\n"
        << "series (config field: bounds, emitted as CSV columns)\n";
    for (const std::string& name : series_catalog()) out << "  " << name << "\n";
    out << "\n"
        << "x0 policies\n"
        << "  explicit{vector}, uniform_sphere{radius}, uniform_ball{radius},\n"
        << "  constant_over_sqrt_n{radius}, first_ball_center (ball systems)\n"
        << "\n"
        << "presets (for `reproduce <name> [--scale <n>]`)\n";
    for (const Preset& preset : preset_catalog())
        out << "  " << preset.name << "\n    " << preset.description << "\n";
    out << "\nexample configs (accepted by `run --config` after adding output_path)\n";
    for (const json& example : catalog_examples()) out << "  " << example.dump() << "\n";
    return out.str();
}

}  // namespace subgrad::experiment
