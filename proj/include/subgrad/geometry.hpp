// geometry.hpp
//
// Euclidean balls and capsules with exact projections, distances and
// distance subgradients. These double as projection operators onto feasible
// sets and as building blocks for the distance-type test objectives.

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace subgrad {

using Vec = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed Euclidean ball. radius == +inf is the "whole space" sentinel, used
/// for unconstrained problems; never model that with a huge finite radius.
struct Ball {
    Vec center;
    double radius = 0.0;

    Ball() = default;
    Ball(Vec c, double r) : center(std::move(c)), radius(r) {
        if (!(radius >= 0.0)) throw std::invalid_argument("Ball: radius must be >= 0");
    }

    static Ball whole_space(Eigen::Index dim) { return Ball(Vec::Zero(dim), kInf); }

    Eigen::Index dim() const { return center.size(); }
    bool unbounded() const { return std::isinf(radius); }
    bool contains(const Vec& x, double tol = 0.0) const {
        return unbounded() || (x - center).norm() <= radius + tol;
    }
};

/// Convex hull of two equal-radius balls (Minkowski sum of a segment and a
/// ball). endpoint_a == endpoint_b degenerates to a Ball.
struct Capsule {
    Vec endpoint_a;
    Vec endpoint_b;
    double radius = 0.0;

    Capsule() = default;
    Capsule(Vec a, Vec b, double r)
        : endpoint_a(std::move(a)), endpoint_b(std::move(b)), radius(r) {
        if (!(radius >= 0.0)) throw std::invalid_argument("Capsule: radius must be >= 0");
        if (endpoint_a.size() != endpoint_b.size())
            throw std::invalid_argument("Capsule: endpoint dimensions differ");
    }

    Eigen::Index dim() const { return endpoint_a.size(); }
};

/// Distance value together with a subgradient of the distance function.
/// The subgradient has unit norm when value > 0 and is zero on the set
/// itself (a valid subgradient that lets Polyak-type steps stop exactly).
struct DistanceResult {
    double value = 0.0;
    Vec subgradient;
};

namespace detail {
inline void check_dim(Eigen::Index got, Eigen::Index want, const char* where) {
    if (got != want)
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                    std::to_string(got) + " vs " + std::to_string(want) + ")");
}
}  // namespace detail

/// Exact Euclidean projection onto a ball; the identity for interior points
/// and for the whole-space sentinel.
inline Vec project_ball(const Vec& x, const Ball& ball) {
    detail::check_dim(x.size(), ball.dim(), "project_ball");
    if (ball.unbounded()) return x;
    const Vec d = x - ball.center;
    const double norm = d.norm();
    if (norm <= ball.radius) return x;
    return ball.center + (ball.radius / norm) * d;
}

inline DistanceResult dist_to_ball(const Vec& x, const Ball& ball) {
    detail::check_dim(x.size(), ball.dim(), "dist_to_ball");
    DistanceResult res;
    res.subgradient = Vec::Zero(x.size());
    if (ball.unbounded()) return res;
    const Vec d = x - ball.center;
    const double norm = d.norm();
    if (norm > ball.radius) {
        res.value = norm - ball.radius;
        res.subgradient = d / norm;
    }
    return res;
}

/// Distance from x to the segment [a, b] and the closest segment point.
/// The a == b branch avoids the 0/0 in the projection parameter.
struct SegmentResult {
    double value = 0.0;
    Vec closest;
};

inline SegmentResult dist_to_segment(const Vec& x, const Vec& a, const Vec& b) {
    detail::check_dim(a.size(), x.size(), "dist_to_segment");
    detail::check_dim(b.size(), x.size(), "dist_to_segment");
    const Vec ab = b - a;
    const double len_sq = ab.squaredNorm();
    SegmentResult res;
    if (len_sq == 0.0) {
        res.closest = a;
    } else {
        const double t = std::clamp((x - a).dot(ab) / len_sq, 0.0, 1.0);
        res.closest = a + t * ab;
    }
    res.value = (x - res.closest).norm();
    return res;
}

inline DistanceResult dist_to_capsule(const Vec& x, const Capsule& capsule) {
    detail::check_dim(x.size(), capsule.dim(), "dist_to_capsule");
    const SegmentResult seg = dist_to_segment(x, capsule.endpoint_a, capsule.endpoint_b);
    DistanceResult res;
    res.subgradient = Vec::Zero(x.size());
    if (seg.value > capsule.radius) {
        res.value = seg.value - capsule.radius;
        res.subgradient = (x - seg.closest) / seg.value;
    }
    return res;
}

}  // namespace subgrad
