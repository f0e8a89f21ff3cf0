#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "csf/curve.hpp"

namespace csf {

/// Prefix of the swept area; A(v,w) = S[w] - S[v]. Closed curves carry one extra entry
/// (node 0 after a full circuit).
struct SweptAreaPrefix {
    std::vector<double> S;

    [[nodiscard]] double area(std::size_t v, std::size_t w) const;
    [[nodiscard]] std::size_t size() const noexcept { return S.size(); }
};

SweptAreaPrefix swept_area_prefix(const PlanarCurve& curve);
SweptAreaPrefix swept_area_prefix(std::span<const Vec2> points, bool closed);

/// Extremes of g[w] - g[v] over v <= w, with the first witness found by the scan.
struct PairExtrema {
    double max{0.0};
    std::size_t max_v{0};
    std::size_t max_w{0};
    double min{0.0};
    std::size_t min_v{0};
    std::size_t min_w{0};
};

/// Single O(n) pass.
PairExtrema pair_extrema(std::span<const double> g);
/// Same restricted to the boundary families v = 0 and w = last.
PairExtrema boundary_extrema(std::span<const double> g);

struct ExtremaBounds {
    double a_minus{0.0};
    double a_plus{0.0};
    std::size_t minus_v{0};
    std::size_t minus_w{0};
    std::size_t plus_v{0};
    std::size_t plus_w{0};
};

ExtremaBounds extrema_bounds(const SweptAreaPrefix& prefix);

/// psi(w) - psi(v); throws DomainError when v > w.
double turning(const TangentField& lift, std::size_t v, std::size_t w);

/// A(v,w) - t Psi(v,w).
double harnack(const SweptAreaPrefix& prefix, const TangentField& lift, double t, std::size_t v, std::size_t w);

struct WindingTrace {
    std::size_t base{0};
    std::vector<double> theta;
};

/// Continuous winding function about node base, theta[base] = 0, unwrapped outward in both directions.
WindingTrace winding_trace(const PlanarCurve& curve, const TangentField& lift, std::size_t base);

/// |Psi(c,d) - (theta_c(d) - theta_d(c))| with the two winding values unwrapped independently.
double winding_identity_residual(const PlanarCurve& curve, const TangentField& lift, std::size_t c, std::size_t d);

struct SupportField {
    std::vector<double> D;
};

SupportField support_function(const PlanarCurve& curve, const TangentField& lift);

struct PolarGraphView {
    std::vector<double> phis;
    std::vector<double> rs;
    /// Trapezoidal prefix of r^2/2 d(phi).
    std::vector<double> V;

    [[nodiscard]] double area(std::size_t i, std::size_t j) const { return V[j] - V[i]; }
};

struct PolarResult {
    bool ok{false};
    PolarGraphView view;
    /// On failure: polar parameter where phi first stops increasing, and its node.
    double witness_angle{0.0};
    std::size_t witness_node{0};
};

inline constexpr double kPolarTieTolerance = 1e-12;

/// Fails unless phi increases strictly, except for ties among nodes on an end ray.
/// Throws DomainError if a node sits at the origin.
PolarResult polar_view(const PlanarCurve& curve);

/// Unwrapped polar angle of every node, starting from atan2 of the first.
std::vector<double> unwrapped_polar_angles(std::span<const Vec2> points);

}  // namespace csf
