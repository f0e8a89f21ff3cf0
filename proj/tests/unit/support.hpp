#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "csf/csf.hpp"

namespace csf::test {

inline constexpr double kPi = std::numbers::pi;

inline std::vector<Vec2> circle_points(std::size_t n, double radius = 1.0, double arc = 2.0 * kPi, bool closed = true) {
    std::vector<Vec2> pts(n);
    const double denom = closed ? static_cast<double>(n) : static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) pts[i] = radius * unit_from_angle(arc * static_cast<double>(i) / denom);
    return pts;
}

inline PlanarCurve unit_circle(std::size_t n) { return PlanarCurve::closed(circle_points(n)); }

inline PlanarCurve quarter_arc(std::size_t n) { return PlanarCurve::open(circle_points(n, 1.0, kPi / 2.0, false)); }

inline PlanarCurve corpus_curve(const std::string& generator, std::size_t n, double pin_radius = 8.0,
                                double beta = kPi / 2.0) {
    InitialCurveSpec spec;
    spec.generator = generator;
    spec.n = n;
    spec.angle_a = kPi;
    spec.angle_b = kPi - beta;
    spec.pin_radius = pin_radius;
    spec.seed = 20240917;
    return build_initial_curve(spec);
}

inline const std::vector<std::string>& corpus_names() {
    static const std::vector<std::string> names{"wedge", "bent_line", "spiral", "zigzag", "random_wiggle"};
    return names;
}

/// Independent oracle: sum of atan2(cross, dot) over consecutive segments.
inline double exterior_angle_sum(std::span<const Vec2> pts) {
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const Vec2 a = pts[i] - pts[i - 1];
        const Vec2 b = pts[i + 1] - pts[i];
        sum += std::atan2(a.x * b.y - a.y * b.x, a.x * b.x + a.y * b.y);
    }
    return sum;
}

/// Independent oracle: shoelace-style triangle sum 1/2 (q x p) over segments p -> q, with the sign of
/// the swept-area convention.
inline double triangle_sum(std::span<const Vec2> pts, std::size_t v, std::size_t w) {
    double sum = 0.0;
    for (std::size_t i = v; i < w; ++i) {
        const Vec2 p = pts[i];
        const Vec2 q = pts[i + 1];
        sum += 0.5 * (q.x * p.y - q.y * p.x);
    }
    return sum;
}

/// Vertical lead-in, a bulge to the right returning to 2i heading left, then a straight run to -1 + 2i.
/// Returns the curve and the index of the node at i.
inline std::pair<PlanarCurve, std::size_t> bulge_curve() {
    std::vector<Vec2> pts;
    for (int k = 0; k <= 20; ++k) pts.push_back({0.0, 0.5 + 0.025 * k});
    const std::size_t v = pts.size() - 1;
    for (int k = 1; k <= 4; ++k) pts.push_back({0.0, 1.0 + 0.025 * k});
    const Vec2 p0{0.0, 1.1};
    const Vec2 p1{0.0, 1.4};
    const Vec2 p2{0.6, 2.0};
    const Vec2 p3{0.0, 2.0};
    const int m = 400;
    for (int k = 1; k <= m; ++k) {
        const double t = static_cast<double>(k) / m;
        const double a = (1 - t) * (1 - t) * (1 - t);
        const double b = 3 * (1 - t) * (1 - t) * t;
        const double c = 3 * (1 - t) * t * t;
        const double d = t * t * t;
        pts.push_back(a * p0 + b * p1 + c * p2 + d * p3);
    }
    for (int k = 1; k <= 40; ++k) pts.push_back({-0.025 * k, 2.0});
    return {PlanarCurve::open(pts), v};
}

}  // namespace csf::test
