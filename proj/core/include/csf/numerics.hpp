#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace csf {

/// Angle reduced to (-pi, pi].
inline double wrap_angle(double a) noexcept {
    double r = std::remainder(a, 2.0 * std::numbers::pi);
    if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
    return r;
}

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes).
/// Periodic mode expects y.front() == y.back().
class Pchip {
public:
    Pchip(std::span<const double> x, std::span<const double> y, bool periodic = false);
    double operator()(double xq) const;

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> d_;
};

/// Piecewise-linear interpolation on a strictly increasing grid; clamps outside.
double lerp_table(std::span<const double> x, std::span<const double> y, double xq);

/// Least-squares line y = c0 + c1 x.
struct LineFit {
    double intercept{0.0};
    double slope{0.0};
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_legendre(std::size_t order);

}  // namespace csf
