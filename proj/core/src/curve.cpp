#include "csf/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "csf/errors.hpp"
#include "csf/numerics.hpp"

namespace csf {

namespace {

std::vector<double> uniform_params(std::size_t n, bool closed) {
    std::vector<double> u(n);
    const double denom = closed ? static_cast<double>(n) : static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) u[i] = static_cast<double>(i) / denom;
    return u;
}

}  // namespace

PlanarCurve::PlanarCurve(std::vector<Vec2> points, std::vector<double> params, std::optional<RadialEndSpec> ends,
                         bool closed)
    : points_(std::move(points)), params_(std::move(params)), ends_(ends), closed_(closed) {
    const std::size_t n = points_.size();
    if (n < 3) throw CurveError("curve needs at least 3 points, got " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y))
            throw CurveError("non-finite coordinate at node " + std::to_string(i));
    }
    if (params_.empty()) params_ = uniform_params(n, closed_);
    if (params_.size() != n) throw CurveError("params size does not match point count");
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(params_[i + 1] > params_[i]))
            throw CurveError("params not strictly increasing at index " + std::to_string(i));
    }
    const std::size_t m = segment_count();
    for (std::size_t k = 0; k < m; ++k) {
        if (!(norm(segment(k)) > 0.0)) throw CurveError("zero-length segment " + std::to_string(k));
    }
    if (ends_) {
        if (closed_) throw CurveError("closed curve cannot carry radial ends");
        const RadialEndSpec& e = *ends_;
        if (!(e.pin_radius > 0.0)) throw CurveError("pin_radius must be positive");
        if (std::abs(wrap_angle(e.angle_a - e.angle_b)) < 1e-12)
            throw CurveError("radial end angles coincide modulo 2 pi");
        if (!(e.clamp_lo < e.clamp_hi) || e.clamp_hi >= n) throw CurveError("invalid clamp indices");
        for (std::size_t i = 0; i <= e.clamp_lo; ++i) {
            if (distance_to_ray(points_[i], e.angle_a) > kRayTolerance)
                throw CurveError("node " + std::to_string(i) + " is off the first end ray");
        }
        for (std::size_t i = e.clamp_hi; i < n; ++i) {
            if (distance_to_ray(points_[i], e.angle_b) > kRayTolerance)
                throw CurveError("node " + std::to_string(i) + " is off the last end ray");
        }
    }
}

PlanarCurve PlanarCurve::open(std::vector<Vec2> points, std::vector<double> params,
                              std::optional<RadialEndSpec> ends) {
    return PlanarCurve(std::move(points), std::move(params), ends, false);
}

PlanarCurve PlanarCurve::radial(std::vector<Vec2> points, double angle_a, double angle_b, double pin_radius,
                                std::vector<double> params) {
    const RadialEndSpec e = detect_radial_ends(points, angle_a, angle_b, pin_radius);
    return PlanarCurve(std::move(points), std::move(params), e, false);
}

PlanarCurve PlanarCurve::closed(std::vector<Vec2> points, std::vector<double> params) {
    return PlanarCurve(std::move(points), std::move(params), std::nullopt, true);
}

double distance_to_ray(Vec2 p, double angle) noexcept {
    const Vec2 d = unit_from_angle(angle);
    const double along = dot(p, d);
    if (along >= 0.0) return std::abs(cross(d, p));
    return norm(p);
}

RadialEndSpec detect_radial_ends(std::span<const Vec2> points, double angle_a, double angle_b, double pin_radius,
                                 double tol) {
    const std::size_t n = points.size();
    if (n < 3) throw CurveError("curve needs at least 3 points");
    if (distance_to_ray(points.front(), angle_a) > tol) throw CurveError("first node is off the first end ray");
    if (distance_to_ray(points.back(), angle_b) > tol) throw CurveError("last node is off the last end ray");
    std::size_t lo = 0;
    while (lo + 1 < n && distance_to_ray(points[lo + 1], angle_a) <= tol) ++lo;
    std::size_t hi = n - 1;
    while (hi > 0 && distance_to_ray(points[hi - 1], angle_b) <= tol) --hi;
    if (hi <= lo) {
        if (lo + 1 < n) {
            hi = lo + 1;
        } else {
            lo = hi - 1;
        }
    }
    return RadialEndSpec{wrap_angle(angle_a), wrap_angle(angle_b), lo, hi, pin_radius};
}

TangentField tangent_lift(const PlanarCurve& curve) {
    const std::size_t n = curve.size();
    const std::size_t m = curve.segment_count();
    std::vector<double> theta(m);
    theta[0] = angle_of(curve.segment(0));
    for (std::size_t k = 1; k < m; ++k) {
        const double jump = signed_angle(curve.segment(k - 1), curve.segment(k));
        if (std::abs(jump) >= std::numbers::pi - kUnwrapMargin) throw UnwrapError(k, jump);
        theta[k] = theta[k - 1] + jump;
    }
    const auto node_angle = [&](double before, double after, std::size_t k_before, std::size_t k_after) {
        const double lb = norm(curve.segment(k_before));
        const double la = norm(curve.segment(k_after));
        return before + (after - before) * lb / (lb + la);
    };
    TangentField out;
    if (!curve.is_closed()) {
        out.psi.resize(n);
        out.psi[0] = theta[0];
        for (std::size_t i = 1; i + 1 < n; ++i) out.psi[i] = node_angle(theta[i - 1], theta[i], i - 1, i);
        out.psi[n - 1] = theta[m - 1];
        return out;
    }
    const double closing = signed_angle(curve.segment(m - 1), curve.segment(0));
    if (std::abs(closing) >= std::numbers::pi - kUnwrapMargin) throw UnwrapError(0, closing);
    const double theta_wrap = theta[m - 1] + closing;
    const double total = theta_wrap - theta[0];
    out.psi.resize(n + 1);
    out.psi[0] = node_angle(theta[m - 1] - total, theta[0], m - 1, 0);
    for (std::size_t i = 1; i < n; ++i) out.psi[i] = node_angle(theta[i - 1], theta[i], i - 1, i);
    out.psi[n] = out.psi[0] + total;
    const double anchored = wrap_angle(out.psi[0]);
    const double shift = anchored - out.psi[0];
    if (shift != 0.0) {
        for (double& v : out.psi) v += shift;
    }
    out.normalization = -shift;
    return out;
}

std::vector<double> cumulative_arclength(const PlanarCurve& curve) {
    const std::size_t m = curve.segment_count();
    std::vector<double> s(m + 1, 0.0);
    for (std::size_t k = 0; k < m; ++k) s[k + 1] = s[k] + norm(curve.segment(k));
    return s;
}

double total_length(const PlanarCurve& curve) { return cumulative_arclength(curve).back(); }

double min_segment_length(const PlanarCurve& curve) {
    double h = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < curve.segment_count(); ++k) h = std::min(h, norm(curve.segment(k)));
    return h;
}

double max_segment_length(const PlanarCurve& curve) {
    double h = 0.0;
    for (std::size_t k = 0; k < curve.segment_count(); ++k) h = std::max(h, norm(curve.segment(k)));
    return h;
}

CurvatureField discrete_curvature(const PlanarCurve& curve, const TangentField& lift) {
    const std::size_t n = curve.size();
    CurvatureField out;
    out.arclengths = cumulative_arclength(curve);
    const auto& s = out.arclengths;
    const auto& psi = lift.psi;
    const std::size_t expected = curve.is_closed() ? n + 1 : n;
    if (psi.size() != expected) throw CurveError("tangent lift does not match curve");
    out.kappa.resize(n);
    auto quotient = [](double dpsi, double ds) {
        if (!(ds > 0.0)) throw CurveError("degenerate segment in curvature stencil");
        return dpsi / ds;
    };
    if (!curve.is_closed()) {
        if (n < 3) {
            out.kappa.assign(n, 0.0);
            return out;
        }
        // outermost two nodes: turning at the nearest vertex
        auto vertex = [&](std::size_t i) {
            return quotient(signed_angle(curve.segment(i - 1), curve.segment(i)), 0.5 * (s[i + 1] - s[i - 1]));
        };
        for (std::size_t i = 2; i + 2 < n; ++i) out.kappa[i] = quotient(psi[i + 1] - psi[i - 1], s[i + 1] - s[i - 1]);
        out.kappa[0] = out.kappa[1] = vertex(1);
        out.kappa[n - 1] = out.kappa[n - 2] = vertex(n - 2);
        return out;
    }
    const double total_len = s[n];
    const double total_turn = psi[n] - psi[0];
    out.kappa[0] = quotient(psi[1] - (psi[n - 1] - total_turn), s[1] + (total_len - s[n - 1]));
    for (std::size_t i = 1; i < n; ++i) out.kappa[i] = quotient(psi[i + 1] - psi[i - 1], s[i + 1] - s[i - 1]);
    return out;
}

double total_exterior_turning(const PlanarCurve& curve) {
    const std::size_t m = curve.segment_count();
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < m; ++k) sum += signed_angle(curve.segment(k), curve.segment(k + 1));
    if (curve.is_closed()) sum += signed_angle(curve.segment(m - 1), curve.segment(0));
    return sum;
}

std::vector<Vec2> resample_points(std::span<const Vec2> points, bool closed, std::size_t n) {
    if (n < 3) throw CurveError("resampling needs n >= 3");
    const std::size_t n_old = points.size();
    const std::size_t knots = closed ? n_old + 1 : n_old;
    std::vector<double> s(knots, 0.0);
    std::vector<double> xs(knots);
    std::vector<double> ys(knots);
    for (std::size_t i = 0; i < knots; ++i) {
        const Vec2 p = points[i % n_old];
        xs[i] = p.x;
        ys[i] = p.y;
        if (i > 0) s[i] = s[i - 1] + norm(p - points[i - 1]);
    }
    const double length = s.back();
    const Pchip px(s, xs, closed);
    const Pchip py(s, ys, closed);
    std::vector<Vec2> out(n);
    const double denom = closed ? static_cast<double>(n) : static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        const double sk = length * static_cast<double>(k) / denom;
        out[k] = {px(sk), py(sk)};
    }
    if (!closed) {
        out.front() = points.front();
        out.back() = points.back();
    } else {
        out.front() = points.front();
    }
    return out;
}

PlanarCurve resample_arclength(const PlanarCurve& curve, std::size_t n) {
    std::vector<Vec2> pts = resample_points(curve.points(), curve.is_closed(), n);
    if (curve.is_closed()) return PlanarCurve::closed(std::move(pts));
    if (curve.ends()) {
        const RadialEndSpec& e = *curve.ends();
        return PlanarCurve::radial(std::move(pts), e.angle_a, e.angle_b, e.pin_radius);
    }
    return PlanarCurve::open(std::move(pts));
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) noexcept {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + t * ab));
}

double segment_distance(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) noexcept {
    const double o1 = cross(a1 - a0, b0 - a0);
    const double o2 = cross(a1 - a0, b1 - a0);
    const double o3 = cross(b1 - b0, a0 - b0);
    const double o4 = cross(b1 - b0, a1 - b0);
    if (((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)))
        return 0.0;
    return std::min({point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                     point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
}

EmbeddingReport embeddedness_check(std::span<const Vec2> points, bool closed) {
    const std::size_t n = points.size();
    const std::size_t m = closed ? n : n - 1;
    auto seg_a = [&](std::size_t k) { return points[k]; };
    auto seg_b = [&](std::size_t k) { return points[(k + 1) % n]; };
    EmbeddingReport report;
    auto record = [&](std::size_t i, std::size_t j) {
        if (i > j) std::swap(i, j);
        if (report.ok || i < report.first || (i == report.first && j < report.second)) {
            report.ok = false;
            report.first = i;
            report.second = j;
        }
    };
    // adjacent segments meet only at their shared node unless they fold back
    for (std::size_t k = 0; k + 1 < m || (closed && k < m); ++k) {
        const std::size_t j = (k + 1) % m;
        if (j == k) break;
        const Vec2 shared = seg_b(k);
        const Vec2 before = seg_a(k);
        const Vec2 after = seg_b(j);
        if (point_segment_distance(before, shared, after) <= kTouchTolerance ||
            point_segment_distance(after, before, shared) <= kTouchTolerance)
            record(k, j);
    }
    // sweep along a generic direction so that axis-aligned rays do not pile up
    const Vec2 dir = unit_from_angle(0.5);
    struct Extent {
        double lo;
        double hi;
        std::size_t k;
    };
    std::vector<Extent> ext(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double p = dot(seg_a(k), dir);
        const double q = dot(seg_b(k), dir);
        ext[k] = {std::min(p, q) - kTouchTolerance, std::max(p, q) + kTouchTolerance, k};
    }
    std::sort(ext.begin(), ext.end(), [](const Extent& a, const Extent& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.k < b.k);
    });
    auto adjacent = [&](std::size_t i, std::size_t j) {
        if (i > j) std::swap(i, j);
        if (j == i + 1) return true;
        return closed && i == 0 && j == m - 1;
    };
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m && ext[b].lo <= ext[a].hi; ++b) {
            const std::size_t i = ext[a].k;
            const std::size_t j = ext[b].k;
            if (adjacent(i, j)) continue;
            if (segment_distance(seg_a(i), seg_b(i), seg_a(j), seg_b(j)) <= kTouchTolerance) record(i, j);
        }
    }
    return report;
}

EmbeddingReport embeddedness_check(const PlanarCurve& curve) {
    return embeddedness_check(curve.points(), curve.is_closed());
}

namespace {

/// Uniform bucket grid over the segments of a polyline.
class SegmentGrid {
public:
    SegmentGrid(std::span<const Vec2> pts, bool closed) : pts_(pts), closed_(closed) {
        const std::size_t m = closed ? pts.size() : pts.size() - 1;
        lo_ = hi_ = pts[0];
        double total = 0.0;
        for (const Vec2& p : pts) {
            lo_.x = std::min(lo_.x, p.x);
            lo_.y = std::min(lo_.y, p.y);
            hi_.x = std::max(hi_.x, p.x);
            hi_.y = std::max(hi_.y, p.y);
        }
        for (std::size_t k = 0; k < m; ++k) total += norm(pts[(k + 1) % pts.size()] - pts[k]);
        const double extent = std::max(hi_.x - lo_.x, hi_.y - lo_.y);
        cell_ = std::max(4.0 * total / static_cast<double>(m), extent / 512.0);
        if (!(cell_ > 0.0)) cell_ = 1.0;
        nx_ = static_cast<long>((hi_.x - lo_.x) / cell_) + 1;
        ny_ = static_cast<long>((hi_.y - lo_.y) / cell_) + 1;
        cells_.assign(static_cast<std::size_t>(nx_ * ny_), {});
        for (std::size_t k = 0; k < m; ++k) {
            const Vec2 a = pts[k];
            const Vec2 b = pts[(k + 1) % pts.size()];
            const long x0 = cx(std::min(a.x, b.x));
            const long x1 = cx(std::max(a.x, b.x));
            const long y0 = cy(std::min(a.y, b.y));
            const long y1 = cy(std::max(a.y, b.y));
            for (long i = x0; i <= x1; ++i)
                for (long j = y0; j <= y1; ++j) cells_[static_cast<std::size_t>(i * ny_ + j)].push_back(k);
        }
    }

    [[nodiscard]] double distance(Vec2 p) const {
        const long qx = static_cast<long>(std::floor((p.x - lo_.x) / cell_));
        const long qy = static_cast<long>(std::floor((p.y - lo_.y) / cell_));
        double best = std::numeric_limits<double>::infinity();
        const long max_ring = std::max({std::abs(qx), std::abs(qy), std::abs(qx - nx_), std::abs(qy - ny_)}) + 1;
        for (long r = 0; r <= max_ring; ++r) {
            for (long i = qx - r; i <= qx + r; ++i) {
                for (long j = qy - r; j <= qy + r; ++j) {
                    if (std::max(std::abs(i - qx), std::abs(j - qy)) != r) continue;
                    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) continue;
                    for (std::size_t k : cells_[static_cast<std::size_t>(i * ny_ + j)]) {
                        best = std::min(best, point_segment_distance(p, pts_[k], pts_[(k + 1) % pts_.size()]));
                    }
                }
            }
            if (best <= static_cast<double>(r) * cell_) break;
        }
        return best;
    }

private:
    [[nodiscard]] long cx(double x) const { return std::clamp(static_cast<long>((x - lo_.x) / cell_), 0L, nx_ - 1); }
    [[nodiscard]] long cy(double y) const { return std::clamp(static_cast<long>((y - lo_.y) / cell_), 0L, ny_ - 1); }

    std::span<const Vec2> pts_;
    bool closed_;
    Vec2 lo_{};
    Vec2 hi_{};
    double cell_{1.0};
    long nx_{1};
    long ny_{1};
    std::vector<std::vector<std::size_t>> cells_;
};

}  // namespace

double directed_distance(std::span<const Vec2> a, std::span<const Vec2> b, bool b_closed) {
    const SegmentGrid grid(b, b_closed);
    double worst = 0.0;
    for (const Vec2& p : a) worst = std::max(worst, grid.distance(p));
    return worst;
}

double hausdorff_distance(std::span<const Vec2> a, bool a_closed, std::span<const Vec2> b, bool b_closed) {
    return std::max(directed_distance(a, b, b_closed), directed_distance(b, a, a_closed));
}

PlanarCurve rotated(const PlanarCurve& curve, double angle) {
    std::vector<Vec2> pts(curve.points().begin(), curve.points().end());
    for (Vec2& p : pts) p = rotate(p, angle);
    std::vector<double> params(curve.params().begin(), curve.params().end());
    if (curve.is_closed()) return PlanarCurve::closed(std::move(pts), std::move(params));
    std::optional<RadialEndSpec> ends = curve.ends();
    if (ends) {
        ends->angle_a = wrap_angle(ends->angle_a + angle);
        ends->angle_b = wrap_angle(ends->angle_b + angle);
        // rotation moves points by rounding error only; re-detect to stay within the ray tolerance
        const RadialEndSpec fresh = detect_radial_ends(pts, ends->angle_a, ends->angle_b, ends->pin_radius);
        ends->clamp_lo = std::min(ends->clamp_lo, fresh.clamp_lo);
        ends->clamp_hi = std::max(ends->clamp_hi, fresh.clamp_hi);
        if (ends->clamp_hi <= ends->clamp_lo) *ends = fresh;
    }
    return PlanarCurve::open(std::move(pts), std::move(params), ends);
}

PlanarCurve reflected_reversed(const PlanarCurve& curve) {
    const std::size_t n = curve.size();
    std::vector<Vec2> pts(n);
    std::vector<double> params(n);
    const auto src = curve.points();
    const auto u = curve.params();
    const double span_sum = curve.is_closed() ? u[n - 1] + u[0] : u[0] + u[n - 1];
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = src[n - 1 - i];
        pts[i] = {p.x, -p.y};
        params[i] = span_sum - u[n - 1 - i];
    }
    if (curve.is_closed()) return PlanarCurve::closed(std::move(pts), std::move(params));
    std::optional<RadialEndSpec> ends;
    if (curve.ends()) {
        const RadialEndSpec& e = *curve.ends();
        ends = RadialEndSpec{wrap_angle(-e.angle_b), wrap_angle(-e.angle_a), n - 1 - e.clamp_hi, n - 1 - e.clamp_lo,
                             e.pin_radius};
    }
    return PlanarCurve::open(std::move(pts), std::move(params), ends);
}

PlanarCurve scaled(const PlanarCurve& curve, double factor) {
    std::vector<Vec2> pts(curve.points().begin(), curve.points().end());
    for (Vec2& p : pts) p = factor * p;
    std::vector<double> params(curve.params().begin(), curve.params().end());
    if (curve.is_closed()) return PlanarCurve::closed(std::move(pts), std::move(params));
    std::optional<RadialEndSpec> ends = curve.ends();
    if (ends) ends->pin_radius *= factor;
    return PlanarCurve::open(std::move(pts), std::move(params), ends);
}

}  // namespace csf
