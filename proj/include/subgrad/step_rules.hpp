// step_rules.hpp
//
// The five step-size formulas driving the projected subgradient iteration:
//
//   PolyakAdaptive          h_k = beta (f(x_k) - f_bar) / ||g_k||^2
//   PolyakLipschitz         h_k = beta (f(x_k) - f_bar) / M^2
//   PolyakPartial           h_k = (f(x_k) - f_bar) / (M ||g_k||)
//   PolyakDeltaPartial      h_k = (f(x_k) - f_bar - delta) / (M ||g_k||)
//   HarmonicStronglyConvex  h_k = 2 / (mu (k+1))

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace subgrad {

struct PolyakAdaptive {
    double beta = 1.0;
    double f_bar = 0.0;
};

struct PolyakLipschitz {
    double beta = 1.0;
    double f_bar = 0.0;
    double M = 1.0;
};

struct PolyakPartial {
    double f_bar = 0.0;
    double M = 1.0;
};

struct PolyakDeltaPartial {
    double f_bar = 0.0;
    double delta = 0.0;
    double M = 1.0;
};

struct HarmonicStronglyConvex {
    double mu = 1.0;
};

using StepRule = std::variant<PolyakAdaptive, PolyakLipschitz, PolyakPartial,
                              PolyakDeltaPartial, HarmonicStronglyConvex>;

inline void validate(const StepRule& rule) {
    std::visit(
        [](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, PolyakAdaptive>) {
                if (!(r.beta > 0.0 && r.beta <= 1.0))
                    throw std::invalid_argument("PolyakAdaptive: beta must be in (0,1]");
            } else if constexpr (std::is_same_v<T, PolyakLipschitz>) {
                if (!(r.beta > 0.0 && r.beta <= 1.0))
                    throw std::invalid_argument("PolyakLipschitz: beta must be in (0,1]");
                if (!(r.M > 0.0)) throw std::invalid_argument("PolyakLipschitz: M must be > 0");
            } else if constexpr (std::is_same_v<T, PolyakPartial>) {
                if (!(r.M > 0.0)) throw std::invalid_argument("PolyakPartial: M must be > 0");
            } else if constexpr (std::is_same_v<T, PolyakDeltaPartial>) {
                if (!(r.M > 0.0)) throw std::invalid_argument("PolyakDeltaPartial: M must be > 0");
                if (!(r.delta >= 0.0))
                    throw std::invalid_argument("PolyakDeltaPartial: delta must be >= 0");
            } else if constexpr (std::is_same_v<T, HarmonicStronglyConvex>) {
                if (!(r.mu > 0.0))
                    throw std::invalid_argument("HarmonicStronglyConvex: mu must be > 0");
            }
        },
        rule);
}

/// Target value below which the iteration certifiably reached f_bar;
/// absent for the harmonic rule, which has no target.
inline std::optional<double> target_value(const StepRule& rule) {
    if (auto* r = std::get_if<PolyakAdaptive>(&rule)) return r->f_bar;
    if (auto* r = std::get_if<PolyakLipschitz>(&rule)) return r->f_bar;
    if (auto* r = std::get_if<PolyakPartial>(&rule)) return r->f_bar;
    if (auto* r = std::get_if<PolyakDeltaPartial>(&rule)) return r->f_bar;
    return std::nullopt;
}

inline bool is_harmonic(const StepRule& rule) {
    return std::holds_alternative<HarmonicStronglyConvex>(rule);
}

inline bool is_delta_rule(const StepRule& rule) {
    return std::holds_alternative<PolyakDeltaPartial>(rule);
}

inline std::string rule_name(const StepRule& rule) {
    if (std::holds_alternative<PolyakAdaptive>(rule)) return "polyak_adaptive";
    if (std::holds_alternative<PolyakLipschitz>(rule)) return "polyak_lipschitz";
    if (std::holds_alternative<PolyakPartial>(rule)) return "polyak_partial";
    if (std::holds_alternative<PolyakDeltaPartial>(rule)) return "polyak_delta_partial";
    return "harmonic_strongly_convex";
}

/// Step length at a point with the given value and (delta-)subgradient norm.
/// k only matters for the harmonic rule, which counts iterates from k = 1.
/// May return a nonpositive value once the target is met; the iteration
/// engine treats that as a stop signal. Gradient-dependent rules require
/// grad_norm > 0 (the engine turns a vanished gradient into a stop before
/// ever calling this).
inline double step_size(const StepRule& rule, double value, double grad_norm, long k) {
    return std::visit(
        [&](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, PolyakAdaptive>) {
                if (!(grad_norm > 0.0))
                    throw std::invalid_argument("step_size: zero gradient for PolyakAdaptive");
                return r.beta * (value - r.f_bar) / (grad_norm * grad_norm);
            } else if constexpr (std::is_same_v<T, PolyakLipschitz>) {
                return r.beta * (value - r.f_bar) / (r.M * r.M);
            } else if constexpr (std::is_same_v<T, PolyakPartial>) {
                if (!(grad_norm > 0.0))
                    throw std::invalid_argument("step_size: zero gradient for PolyakPartial");
                return (value - r.f_bar) / (r.M * grad_norm);
            } else if constexpr (std::is_same_v<T, PolyakDeltaPartial>) {
                if (!(grad_norm > 0.0))
                    throw std::invalid_argument("step_size: zero gradient for PolyakDeltaPartial");
                return (value - r.f_bar - r.delta) / (r.M * grad_norm);
            } else {
                if (k < 0) throw std::invalid_argument("step_size: harmonic index must be >= 0");
                return 2.0 / (r.mu * static_cast<double>(k + 1));
            }
        },
        rule);
}

}  // namespace subgrad
