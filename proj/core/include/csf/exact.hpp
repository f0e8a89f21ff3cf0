#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "csf/curve.hpp"

namespace csf {

/// Exact solution given as the zero set of F(p, t), with samples on demand.
struct LevelSetSolution {
    std::function<double(Vec2, double)> F;
    std::function<Vec2(Vec2, double)> grad;
    std::function<PlanarCurve(double t, std::size_t n)> sample;
};

/// Angenent oval sin y = 2 e^{t-a} cosh(x-a), 0 < y < pi; anticlockwise, equal arclength.
/// Throws DomainError unless t < a - ln 2.
PlanarCurve angenent_oval(double a, double t, std::size_t n);
LevelSetSolution oval_solution(double a);

/// Circle of radius sqrt(R^2 - 2t), anticlockwise from the positive x-axis.
PlanarCurve shrinking_circle(double radius, double t, std::size_t n);
LevelSetSolution circle_solution(double radius);

/// Static line through the origin at the given angle, sampled on [-half_length, half_length].
LevelSetSolution line_solution(double angle, double half_length);

struct ReaperSamples {
    std::vector<double> x;
    std::vector<double> y;
};

/// Height of the grim reaper branch in (0, pi/2): arcsin(e^{t-x}); throws DomainError for x <= t.
double grim_reaper_height(double t, double x);
/// Samples at x_k = t + k (x_max - t)/n for k = 1..n.
ReaperSamples grim_reaper(double t, double x_max, std::size_t n);

/// sup |y_t - y_xx/(1+y_x^2)| over interior reaper samples with centred differences.
double reaper_graph_residual(double t, double x_max, std::size_t n);

/// sup over nodes of |normal displacement to the t+dt level set / dt - <L gamma, N>| at n samples.
double csf_residual(const LevelSetSolution& solution, double t, std::size_t n, double dt);

/// Time-1 profile of the self-similar flow out of a wedge of opening beta.
struct WedgeProfile {
    double beta{0.0};
    double tol{0.0};
    double kappa_max{0.0};
    /// Ordered along the curve from the end on angle pi to the end on angle pi - beta.
    std::vector<double> psis;
    std::vector<double> kappa_beta;
    std::vector<Vec2> gamma_beta;
    std::vector<double> D_beta;
    /// Polar parameter pi - theta and the trapezoidal prefix of r^2/2.
    std::vector<double> phis;
    std::vector<double> V_prefix;
    /// Sup distance to the simulated wedge flow at t = 1.
    double cross_validation_distance{0.0};

    [[nodiscard]] double kappa_at(double psi) const;
    [[nodiscard]] Vec2 gamma_at(double psi) const;
    [[nodiscard]] double psi_at_phi(double phi) const;
    [[nodiscard]] double r_at_phi(double phi) const;
    /// Psi_beta(phi0, phi1) and V_beta(phi0, phi1).
    [[nodiscard]] double turning_between(double phi0, double phi1) const;
    [[nodiscard]] double area_between(double phi0, double phi1) const;
    /// Profile scaled by sqrt(t) and restricted to radius, as a polyline.
    [[nodiscard]] std::vector<Vec2> polyline(double t, double radius) const;
};

/// Half-width of the ODE solution with peak curvature kappa_max.
double expander_half_width(double kappa_max);

/// Profile without the flow cross-check.
WedgeProfile solve_wedge_profile(double beta, double tol);

/// Cached profile, validated against a simulated wedge flow; throws ProfileError.
std::shared_ptr<const WedgeProfile> wedge_profile(double beta, double tol = 1e-3);

}  // namespace csf
