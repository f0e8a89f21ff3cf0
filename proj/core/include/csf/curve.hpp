#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "csf/vec2.hpp"

namespace csf {

inline constexpr double kRayTolerance = 1e-9;
inline constexpr double kUnwrapMargin = 1e-3;
inline constexpr double kTouchTolerance = 1e-12;

/// Radial-end metadata: the curve lies on the ray at angle_a up to clamp_lo
/// and on the ray at angle_b from clamp_hi on.
struct RadialEndSpec {
    double angle_a{0.0};
    double angle_b{0.0};
    std::size_t clamp_lo{0};
    std::size_t clamp_hi{0};
    double pin_radius{0.0};
};

/// Oriented polyline. Immutable once built; all constructors validate.
class PlanarCurve {
public:
    /// Open curve. Empty params means uniform params on [0,1].
    static PlanarCurve open(std::vector<Vec2> points, std::vector<double> params = {},
                            std::optional<RadialEndSpec> ends = std::nullopt);
    /// Open curve whose clamp indices are detected from the points.
    static PlanarCurve radial(std::vector<Vec2> points, double angle_a, double angle_b, double pin_radius,
                              std::vector<double> params = {});
    /// Closed curve; the segment from the last point back to the first is implied.
    static PlanarCurve closed(std::vector<Vec2> points, std::vector<double> params = {});

    [[nodiscard]] std::span<const Vec2> points() const noexcept { return points_; }
    [[nodiscard]] std::span<const double> params() const noexcept { return params_; }
    [[nodiscard]] const std::optional<RadialEndSpec>& ends() const noexcept { return ends_; }
    [[nodiscard]] bool is_closed() const noexcept { return closed_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] std::size_t segment_count() const noexcept { return closed_ ? points_.size() : points_.size() - 1; }
    [[nodiscard]] Vec2 operator[](std::size_t i) const noexcept { return points_[i]; }
    [[nodiscard]] Vec2 segment_start(std::size_t k) const noexcept { return points_[k]; }
    [[nodiscard]] Vec2 segment_end(std::size_t k) const noexcept { return points_[(k + 1) % points_.size()]; }
    [[nodiscard]] Vec2 segment(std::size_t k) const noexcept { return segment_end(k) - segment_start(k); }

private:
    PlanarCurve(std::vector<Vec2> points, std::vector<double> params, std::optional<RadialEndSpec> ends, bool closed);

    std::vector<Vec2> points_;
    std::vector<double> params_;
    std::optional<RadialEndSpec> ends_;
    bool closed_{false};
};

/// Distance from p to the ray {r e^{i angle} : r >= 0}.
double distance_to_ray(Vec2 p, double angle) noexcept;

/// Largest prefix index lying on the ray at angle_a and smallest suffix index on the ray at angle_b.
RadialEndSpec detect_radial_ends(std::span<const Vec2> points, double angle_a, double angle_b, double pin_radius,
                                 double tol = kRayTolerance);

/// Continuous tangent-angle lift. For closed curves psi has size()+1 entries,
/// the last one being node 0 after a full circuit.
struct TangentField {
    std::vector<double> psi;
    /// Multiple of 2 pi subtracted from the raw first-node angle.
    double normalization{0.0};
};

struct CurvatureField {
    std::vector<double> kappa;
    /// Cumulative arclength per node (size()+1 entries for closed curves).
    std::vector<double> arclengths;
};

TangentField tangent_lift(const PlanarCurve& curve);
CurvatureField discrete_curvature(const PlanarCurve& curve, const TangentField& lift);

std::vector<double> cumulative_arclength(const PlanarCurve& curve);
double total_length(const PlanarCurve& curve);
double min_segment_length(const PlanarCurve& curve);
double max_segment_length(const PlanarCurve& curve);

/// Sum of signed exterior angles between consecutive segments.
double total_exterior_turning(const PlanarCurve& curve);

/// Equal-arclength resampling by monotone cubic (Fritsch-Carlson) interpolation of x(s), y(s).
PlanarCurve resample_arclength(const PlanarCurve& curve, std::size_t n);

/// Raw variant used by the integrator: points only, open or periodic.
std::vector<Vec2> resample_points(std::span<const Vec2> points, bool closed, std::size_t n);

struct EmbeddingReport {
    bool ok{true};
    std::size_t first{0};
    std::size_t second{0};
};

/// Sweep over segment x-extents; reports the lexicographically smallest intersecting pair.
EmbeddingReport embeddedness_check(const PlanarCurve& curve);
EmbeddingReport embeddedness_check(std::span<const Vec2> points, bool closed);

/// Minimum distance between two closed segments.
double segment_distance(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) noexcept;
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) noexcept;

/// Symmetric Hausdorff distance between two polylines.
double hausdorff_distance(std::span<const Vec2> a, bool a_closed, std::span<const Vec2> b, bool b_closed);
/// One-sided: sup over points of a of the distance to polyline b.
double directed_distance(std::span<const Vec2> a, std::span<const Vec2> b, bool b_closed);

/// Rigid transforms about the origin. End metadata follows the points.
PlanarCurve rotated(const PlanarCurve& curve, double angle);
/// Reflect across the x-axis and reverse the index order.
PlanarCurve reflected_reversed(const PlanarCurve& curve);
PlanarCurve scaled(const PlanarCurve& curve, double factor);

}  // namespace csf
