#include "csf/functionals.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "csf/errors.hpp"
#include "csf/numerics.hpp"

namespace csf {

double SweptAreaPrefix::area(std::size_t v, std::size_t w) const {
    if (v > w) throw DomainError("swept area needs v <= w");
    return S.at(w) - S.at(v);
}

SweptAreaPrefix swept_area_prefix(std::span<const Vec2> points, bool closed) {
    const std::size_t n = points.size();
    const std::size_t m = closed ? n : n - 1;
    SweptAreaPrefix out;
    out.S.assign(m + 1, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const Vec2 p = points[k];
        const Vec2 q = points[(k + 1) % n];
        out.S[k + 1] = out.S[k] + 0.5 * (q.x * p.y - q.y * p.x);
    }
    return out;
}

SweptAreaPrefix swept_area_prefix(const PlanarCurve& curve) {
    return swept_area_prefix(curve.points(), curve.is_closed());
}

PairExtrema pair_extrema(std::span<const double> g) {
    PairExtrema r;
    if (g.empty()) return r;
    std::size_t lo = 0;
    std::size_t hi = 0;
    for (std::size_t w = 0; w < g.size(); ++w) {
        if (g[w] < g[lo]) lo = w;
        if (g[w] > g[hi]) hi = w;
        const double up = g[w] - g[lo];
        const double down = g[w] - g[hi];
        if (up > r.max) {
            r.max = up;
            r.max_v = lo;
            r.max_w = w;
        }
        if (down < r.min) {
            r.min = down;
            r.min_v = hi;
            r.min_w = w;
        }
    }
    return r;
}

PairExtrema boundary_extrema(std::span<const double> g) {
    PairExtrema r;
    if (g.empty()) return r;
    const std::size_t last = g.size() - 1;
    for (std::size_t u = 0; u <= last; ++u) {
        const double head = g[u] - g[0];
        const double tail = g[last] - g[u];
        if (head > r.max) {
            r.max = head;
            r.max_v = 0;
            r.max_w = u;
        }
        if (head < r.min) {
            r.min = head;
            r.min_v = 0;
            r.min_w = u;
        }
        if (tail > r.max) {
            r.max = tail;
            r.max_v = u;
            r.max_w = last;
        }
        if (tail < r.min) {
            r.min = tail;
            r.min_v = u;
            r.min_w = last;
        }
    }
    return r;
}

ExtremaBounds extrema_bounds(const SweptAreaPrefix& prefix) {
    const PairExtrema e = pair_extrema(prefix.S);
    return {e.min, e.max, e.min_v, e.min_w, e.max_v, e.max_w};
}

double turning(const TangentField& lift, std::size_t v, std::size_t w) {
    if (v > w) throw DomainError("turning needs v <= w");
    return lift.psi.at(w) - lift.psi.at(v);
}

double harnack(const SweptAreaPrefix& prefix, const TangentField& lift, double t, std::size_t v, std::size_t w) {
    if (t < 0.0) throw DomainError("harnack needs t >= 0");
    return prefix.area(v, w) - t * turning(lift, v, w);
}

namespace {

double chord_angle(const PlanarCurve& curve, const TangentField& lift, std::size_t base, std::size_t u) {
    const Vec2 chord = curve[u] - curve[base];
    if (!(norm(chord) > 0.0))
        throw DomainError("coincident points at nodes " + std::to_string(base) + " and " + std::to_string(u));
    const Vec2 dir = u > base ? chord : -chord;
    return angle_of(dir) - lift.psi[base];
}

}  // namespace

WindingTrace winding_trace(const PlanarCurve& curve, const TangentField& lift, std::size_t base) {
    const std::size_t n = curve.size();
    if (base >= n) throw DomainError("winding base out of range");
    WindingTrace out;
    out.base = base;
    out.theta.assign(n, 0.0);
    // the one-sided limits at the base are both 0, so each direction starts from the wrapped raw value
    auto unwrap = [&](std::size_t from, std::size_t to, long step) {
        double prev_raw = 0.0;
        double prev = 0.0;
        for (std::size_t u = from;; u = static_cast<std::size_t>(static_cast<long>(u) + step)) {
            const double raw = chord_angle(curve, lift, base, u);
            const double next = (u == from) ? wrap_angle(raw) : prev + wrap_angle(raw - prev_raw);
            if (u != from && std::abs(next - prev) >= std::numbers::pi - kUnwrapMargin) throw UnwrapError(u, next - prev);
            out.theta[u] = next;
            prev = next;
            prev_raw = raw;
            if (u == to) break;
        }
    };
    if (base + 1 < n) unwrap(base + 1, n - 1, 1);
    if (base > 0) unwrap(base - 1, 0, -1);
    return out;
}

double winding_identity_residual(const PlanarCurve& curve, const TangentField& lift, std::size_t c, std::size_t d) {
    if (!(c < d)) throw DomainError("winding identity needs c < d");
    const WindingTrace from_c = winding_trace(curve, lift, c);
    const WindingTrace from_d = winding_trace(curve, lift, d);
    return std::abs(turning(lift, c, d) - (from_c.theta[d] - from_d.theta[c]));
}

SupportField support_function(const PlanarCurve& curve, const TangentField& lift) {
    SupportField out;
    const std::size_t n = curve.size();
    out.D.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double psi = lift.psi[i];
        out.D[i] = dot(curve[i], Vec2{-std::sin(psi), std::cos(psi)});
    }
    return out;
}

std::vector<double> unwrapped_polar_angles(std::span<const Vec2> points) {
    std::vector<double> theta(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].x == 0.0 && points[i].y == 0.0)
            throw DomainError("node " + std::to_string(i) + " sits at the origin; polar angle undefined");
        theta[i] = i == 0 ? angle_of(points[0]) : theta[i - 1] + signed_angle(points[i - 1], points[i]);
    }
    return theta;
}

PolarResult polar_view(const PlanarCurve& curve) {
    const auto pts = curve.points();
    const std::vector<double> theta = unwrapped_polar_angles(pts);
    PolarResult out;
    const std::size_t n = pts.size();
    auto& v = out.view;
    v.phis.resize(n);
    v.rs.resize(n);
    v.V.assign(n, 0.0);
    const double phi_first = std::numbers::pi - theta.front();
    const double phi_last = std::numbers::pi - theta.back();
    // ties are tolerated only among nodes still lying on an end ray
    auto on_end_ray = [&](std::size_t i) {
        const double p = v.phis[i];
        return std::abs(p - v.phis[i - 1]) <= kPolarTieTolerance &&
               (std::abs(p - phi_first) <= kPolarTieTolerance || std::abs(p - phi_last) <= kPolarTieTolerance);
    };
    for (std::size_t i = 0; i < n; ++i) {
        v.phis[i] = std::numbers::pi - theta[i];
        v.rs[i] = norm(pts[i]);
        if (i > 0) {
            if (!(v.phis[i] > v.phis[i - 1]) && !on_end_ray(i)) {
                out.ok = false;
                out.witness_angle = v.phis[i - 1];
                out.witness_node = i - 1;
                return out;
            }
            v.V[i] = v.V[i - 1] + 0.25 * (v.rs[i - 1] * v.rs[i - 1] + v.rs[i] * v.rs[i]) * (v.phis[i] - v.phis[i - 1]);
        }
    }
    out.ok = true;
    return out;
}

}  // namespace csf
