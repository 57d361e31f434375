// oracle.hpp
//
// First-order oracle plumbing: oracle outputs, sharpness metadata and the
// ProblemSpec bundle consumed by the solver and certificate evaluators.

#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "subgrad/geometry.hpp"
#include "subgrad/random.hpp"

namespace subgrad {

/// Objective value and (delta-)subgradient at a query point. For exact
/// oracles inexactness is 0; delta oracles report the inexactness realized
/// at this particular query.
struct OracleOutput {
    double value = 0.0;
    Vec subgradient;
    double inexactness = 0.0;
};

/// Analytic sharpness/regularity metadata attached to a problem:
///   f(x) - f_bar >= alpha * dist(x, X*) - delta   for all feasible x,
/// with f_bar >= f* whenever both are known. Fields that the construction
/// cannot certify stay unset rather than guessed.
struct SharpnessInfo {
    std::optional<double> alpha;       // sharp-minimum modulus, > 0 when set
    double delta = 0.0;                // relaxation term of the sharp minimum
    double f_bar = 0.0;                // approximate minimal value used in steps
    double beta = 1.0;                 // weak quasiconvexity modulus in (0, 1]
    std::optional<double> lipschitz_M; // Lipschitz constant on the feasible set
    double strong_mu = 0.0;            // strong convexity modulus, 0 if none
    std::optional<double> f_star;      // exact minimal value
    std::optional<Vec> minimizer;      // a representative exact minimizer
    bool derived_sharpness = false;    // (alpha, delta) produced numerically
    std::string notes;

    void validate() const {
        if (alpha && !(*alpha > 0.0)) throw std::invalid_argument("SharpnessInfo: alpha must be > 0");
        if (!(delta >= 0.0)) throw std::invalid_argument("SharpnessInfo: delta must be >= 0");
        if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("SharpnessInfo: beta must be in (0,1]");
        if (lipschitz_M && !(*lipschitz_M > 0.0))
            throw std::invalid_argument("SharpnessInfo: lipschitz_M must be > 0");
        if (!(strong_mu >= 0.0)) throw std::invalid_argument("SharpnessInfo: strong_mu must be >= 0");
        if (f_star && f_bar < *f_star - 1e-15 * std::max(1.0, std::abs(*f_star)))
            throw std::invalid_argument("SharpnessInfo: f_bar must be >= f_star when both known");
    }
};

/// The known solution set X*, when there is one. Distance-type objectives
/// are minimized on a whole set (ball, capsule), not a single point; the
/// union-of-balls variant only admits a labeled proxy distance.
class SolutionSet {
public:
    SolutionSet() = default;

    static SolutionSet point(Vec x) { return SolutionSet(std::move(x)); }
    static SolutionSet ball(Ball b) { return SolutionSet(std::move(b)); }
    static SolutionSet capsule(Capsule c) { return SolutionSet(std::move(c)); }
    static SolutionSet ball_union_proxy(std::vector<Ball> balls) {
        return SolutionSet(std::move(balls));
    }

    bool known() const { return !std::holds_alternative<std::monostate>(set_); }
    bool is_proxy() const { return std::holds_alternative<std::vector<Ball>>(set_); }

    /// min over X* of ||x - x*||; for the ball-union variant this is the
    /// (upper) proxy min_i dist(x, B_i), exact at 0.
    double distance(const Vec& x) const {
        if (auto* p = std::get_if<Vec>(&set_)) return (x - *p).norm();
        if (auto* b = std::get_if<Ball>(&set_)) return dist_to_ball(x, *b).value;
        if (auto* c = std::get_if<Capsule>(&set_)) return dist_to_capsule(x, *c).value;
        if (auto* u = std::get_if<std::vector<Ball>>(&set_)) {
            double best = kInf;
            for (const Ball& b : *u) best = std::min(best, dist_to_ball(x, b).value);
            return best;
        }
        throw std::logic_error("SolutionSet::distance: set unknown");
    }

    double dist_sq(const Vec& x) const {
        const double d = distance(x);
        return d * d;
    }

    /// Nearest known minimizer to x (for Lemma 1 style checks).
    Vec nearest(const Vec& x) const {
        if (auto* p = std::get_if<Vec>(&set_)) return *p;
        if (auto* b = std::get_if<Ball>(&set_)) return project_ball(x, *b);
        if (auto* c = std::get_if<Capsule>(&set_)) {
            const DistanceResult d = dist_to_capsule(x, *c);
            if (d.value == 0.0) return x;
            return x - d.value * d.subgradient;
        }
        if (auto* u = std::get_if<std::vector<Ball>>(&set_)) {
            double best = kInf;
            Vec arg = x;
            for (const Ball& b : *u) {
                const double d = dist_to_ball(x, b).value;
                if (d < best) {
                    best = d;
                    arg = project_ball(x, b);
                }
            }
            return arg;
        }
        throw std::logic_error("SolutionSet::nearest: set unknown");
    }

private:
    template <typename T>
    explicit SolutionSet(T value) : set_(std::move(value)) {}

    std::variant<std::monostate, Vec, Ball, Capsule, std::vector<Ball>> set_;
};

/// A minimization problem f -> min over a feasible ball: the oracle, the
/// feasible set and everything the certificates need to know about f.
struct ProblemSpec {
    std::string name;
    Eigen::Index dimension = 0;
    Ball feasible_set;
    SharpnessInfo sharpness;
    SolutionSet solution_set;

    /// Exact first-order oracle. For hull objectives with more than two
    /// centers the value is the labeled per-ball proxy, see value_is_proxy.
    std::function<OracleOutput(const Vec&)> oracle;

    /// Inexact oracle drawing from the provided random stream; unset for
    /// exact-only problems.
    std::function<OracleOutput(const Vec&, Rng&)> delta_oracle;

    /// A certified global bound on the delta oracle's inexactness, when one
    /// is available analytically.
    std::optional<double> delta_certified;

    /// Seed the solver falls back to for delta-oracle draws when the run
    /// options do not provide one.
    std::uint64_t delta_seed = 0;

    bool value_is_proxy = false;

    bool has_delta_oracle() const { return static_cast<bool>(delta_oracle); }

    OracleOutput query(const Vec& x) const {
        if (x.size() != dimension) throw std::invalid_argument(name + ": query dimension mismatch");
        return oracle(x);
    }

    OracleOutput query_delta(const Vec& x, Rng& rng) const {
        if (!delta_oracle) throw std::logic_error(name + ": no delta oracle");
        if (x.size() != dimension) throw std::invalid_argument(name + ": query dimension mismatch");
        return delta_oracle(x, rng);
    }

    void validate() const {
        if (dimension <= 0) throw std::invalid_argument("ProblemSpec: dimension must be positive");
        if (feasible_set.dim() != dimension)
            throw std::invalid_argument("ProblemSpec: feasible set dimension mismatch");
        sharpness.validate();
        if (sharpness.minimizer && !feasible_set.contains(*sharpness.minimizer, 1e-12))
            throw std::invalid_argument("ProblemSpec: known minimizer outside the feasible set");
        if (!oracle) throw std::invalid_argument("ProblemSpec: missing oracle");
    }
};

}  // namespace subgrad
