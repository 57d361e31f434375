// random.hpp
//
// Small deterministic RNG used throughout the toolkit. We avoid
// std::uniform_real_distribution and friends because their output is
// implementation-defined; xoshiro256** plus hand-rolled transforms gives
// bit-identical streams for a given seed on every platform.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>

namespace subgrad {

using Vec = Eigen::VectorXd;

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ULL) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        // SplitMix64 expansion of the seed into the xoshiro state.
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
        has_spare_gaussian_ = false;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
        // Rejection sampling to kill modulo bias.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do { v = next_u64(); } while (v >= limit);
        return v % n;
    }

    /// Standard normal via Box-Muller (cached spare).
    double gaussian() {
        if (has_spare_gaussian_) {
            has_spare_gaussian_ = false;
            return spare_gaussian_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_gaussian_ = r * std::sin(theta);
        has_spare_gaussian_ = true;
        return r * std::cos(theta);
    }

    Vec gaussian_vec(Eigen::Index n) {
        Vec v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = gaussian();
        return v;
    }

    /// Uniform direction scaled to the given radius.
    Vec on_sphere(Eigen::Index n, double radius) {
        Vec v = gaussian_vec(n);
        double norm = v.norm();
        while (norm == 0.0) {
            v = gaussian_vec(n);
            norm = v.norm();
        }
        return (radius / norm) * v;
    }

    /// Uniform point in the closed ball of the given radius.
    Vec in_ball(Eigen::Index n, double radius) {
        const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(n));
        return on_sphere(n, r);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4] = {};
    bool has_spare_gaussian_ = false;
    double spare_gaussian_ = 0.0;
};

}  // namespace subgrad
