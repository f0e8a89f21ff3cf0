#include "csf/exact.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "csf/errors.hpp"
#include "csf/flow.hpp"
#include "csf/generators.hpp"
#include "csf/numerics.hpp"

namespace csf {

namespace {

constexpr double kPi = std::numbers::pi;

double oval_F(Vec2 p, double a, double t) { return std::sin(p.y) - 2.0 * std::exp(t - a) * std::cosh(p.x - a); }

Vec2 oval_grad(Vec2 p, double a, double t) {
    return {-2.0 * std::exp(t - a) * std::sinh(p.x - a), std::cos(p.y)};
}

/// Newton projection along the gradient onto the zero set.
Vec2 project(const LevelSetSolution& sol, Vec2 p, double t) {
    for (int it = 0; it < 50; ++it) {
        const double f = sol.F(p, t);
        const Vec2 g = sol.grad(p, t);
        const double g2 = dot(g, g);
        if (!(g2 > 0.0)) break;
        const Vec2 dp = (f / g2) * g;
        p -= dp;
        if (norm(dp) < 1e-15) break;
    }
    return p;
}

}  // namespace

LevelSetSolution oval_solution(double a) {
    LevelSetSolution s;
    s.F = [a](Vec2 p, double t) { return oval_F(p, a, t); };
    s.grad = [a](Vec2 p, double t) { return oval_grad(p, a, t); };
    s.sample = [a](double t, std::size_t n) { return angenent_oval(a, t, n); };
    return s;
}

PlanarCurve angenent_oval(double a, double t, std::size_t n) {
    if (!(t < a - std::numbers::ln2)) throw DomainError("Angenent oval needs t < a - ln 2");
    if (n < 3) throw DomainError("oval needs n >= 3");
    const Vec2 centre{a, kPi / 2.0};
    const double reach = std::acosh(std::exp(a - t) / 2.0);
    const double r_hi = std::hypot(reach, kPi / 2.0) + 0.1;
    const std::size_t dense = std::max<std::size_t>(20 * n, 20000);
    std::vector<Vec2> pts(dense);
    for (std::size_t k = 0; k < dense; ++k) {
        const Vec2 d = unit_from_angle(2.0 * kPi * static_cast<double>(k) / static_cast<double>(dense));
        double lo = 0.0;
        double hi = r_hi;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (oval_F(centre + mid * d, a, t) > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        pts[k] = centre + (0.5 * (lo + hi)) * d;
    }
    std::vector<Vec2> out = resample_points(pts, true, n);
    const LevelSetSolution sol = oval_solution(a);
    for (Vec2& p : out) p = project(sol, p, t);
    return PlanarCurve::closed(std::move(out));
}

PlanarCurve shrinking_circle(double radius, double t, std::size_t n) {
    const double r2 = radius * radius - 2.0 * t;
    if (!(r2 > 0.0)) throw DomainError("circle has vanished by time t");
    const double r = std::sqrt(r2);
    std::vector<Vec2> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = r * unit_from_angle(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
    return PlanarCurve::closed(std::move(pts));
}

LevelSetSolution circle_solution(double radius) {
    LevelSetSolution s;
    s.F = [radius](Vec2 p, double t) { return radius * radius - 2.0 * t - dot(p, p); };
    s.grad = [](Vec2 p, double) { return -2.0 * p; };
    s.sample = [radius](double t, std::size_t n) { return shrinking_circle(radius, t, n); };
    return s;
}

LevelSetSolution line_solution(double angle, double half_length) {
    const Vec2 d = unit_from_angle(angle);
    LevelSetSolution s;
    s.F = [d](Vec2 p, double) { return cross(d, p); };
    s.grad = [d](Vec2, double) { return perp(d); };
    s.sample = [d, half_length](double, std::size_t n) {
        std::vector<Vec2> pts(n);
        for (std::size_t i = 0; i < n; ++i)
            pts[i] = (-half_length + 2.0 * half_length * static_cast<double>(i) / static_cast<double>(n - 1)) * d;
        return PlanarCurve::open(std::move(pts));
    };
    return s;
}

double grim_reaper_height(double t, double x) {
    if (!(x > t)) throw DomainError("grim reaper is defined for x > t");
    return std::asin(std::exp(t - x));
}

ReaperSamples grim_reaper(double t, double x_max, std::size_t n) {
    if (!(x_max > t) || n == 0) throw DomainError("grim reaper range must lie in (t, x_max]");
    ReaperSamples out;
    out.x.resize(n);
    out.y.resize(n);
    const double span = x_max - t;
    for (std::size_t k = 1; k <= n; ++k) {
        const double offset = span * static_cast<double>(k) / static_cast<double>(n);
        out.x[k - 1] = t + offset;
        out.y[k - 1] = std::asin(std::exp(-offset));
    }
    return out;
}

double reaper_graph_residual(double t, double x_max, std::size_t n) {
    const ReaperSamples s = grim_reaper(t, x_max, n);
    const double h = (x_max - t) / static_cast<double>(n);
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double u = std::exp(t - s.x[k]);
        if (u > 0.9) continue;
        const double yt = u / std::sqrt(1.0 - u * u);
        const double yx = (s.y[k + 1] - s.y[k - 1]) / (2.0 * h);
        const double yxx = (s.y[k + 1] - 2.0 * s.y[k] + s.y[k - 1]) / (h * h);
        worst = std::max(worst, std::abs(yt - yxx / (1.0 + yx * yx)));
    }
    return worst;
}

double csf_residual(const LevelSetSolution& solution, double t, std::size_t n, double dt) {
    if (!(dt > 0.0)) throw DomainError("csf_residual needs dt > 0");
    const PlanarCurve curve = solution.sample(t, n);
    std::vector<Vec2> pts(curve.points().begin(), curve.points().end());
    const Stepper stepper(curve.is_closed());
    const std::vector<Vec2> lap = stepper.laplacian(pts);
    const std::size_t first = curve.is_closed() ? 0 : 1;
    const std::size_t last = curve.is_closed() ? n : n - 1;
    double worst = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        const Vec2 g = solution.grad(pts[i], t);
        const Vec2 N = g / norm(g);
        double lambda = 0.0;
        for (int it = 0; it < 50; ++it) {
            const Vec2 q = pts[i] + lambda * N;
            const double f = solution.F(q, t + dt);
            const double df = dot(solution.grad(q, t + dt), N);
            if (!(std::abs(df) > 0.0)) break;
            const double step = f / df;
            lambda -= step;
            if (std::abs(step) < 1e-16) break;
        }
        worst = std::max(worst, std::abs(lambda / dt - dot(lap[i], N)));
    }
    return worst;
}

namespace {

/// -ln(sin q) / cos^2 q, finite on (0, pi/2].
double log_ratio(double q) {
    const double c = std::cos(q);
    const double c2 = c * c;
    if (c2 < 1e-8) return 0.5 + 0.25 * c2;
    const double minus_log_sin = q < 0.7 ? -std::log(std::sin(q)) : -0.5 * std::log1p(-c2);
    return minus_log_sin / c2;
}

/// d(psi)/dq and the scalar factor of d(gamma)/dq = e^{i psi} * factor.
struct Rates {
    double dpsi;
    double dgamma;
};

Rates rates_q(double q, double K) {
    const double root = std::sqrt(K * K + log_ratio(q));
    return {K / root, 1.0 / (std::sin(q) * root)};
}

constexpr double kLogQMin = -460.0;
constexpr double kQSplit = 0.1;
constexpr std::size_t kStepsLog = 3000;
constexpr std::size_t kStepsLinear = 3000;

struct HalfState {
    double q;
    double psi;
    Vec2 gamma;
};

/// Integrates from the midpoint q = pi/2 outward to q_min. Returns states in that order.
std::vector<HalfState> integrate_half(double K, double W, bool positions) {
    std::vector<HalfState> out;
    out.reserve(kStepsLog + kStepsLinear + 1);
    HalfState st{kPi / 2.0, W, {0.0, 0.0}};
    out.push_back(st);
    auto f_q = [K](double q, double psi) {
        const Rates r = rates_q(q, K);
        return std::pair{r.dpsi, r.dgamma * unit_from_angle(psi)};
    };
    // linear stretch q in [kQSplit, pi/2]
    const double hq = (kQSplit - kPi / 2.0) / static_cast<double>(kStepsLinear);
    for (std::size_t j = 0; j < kStepsLinear; ++j) {
        const double q0 = kPi / 2.0 + hq * static_cast<double>(j);
        const auto [p1, g1] = f_q(q0, st.psi);
        const auto [p2, g2] = f_q(q0 + hq / 2, st.psi + hq / 2 * p1);
        const auto [p3, g3] = f_q(q0 + hq / 2, st.psi + hq / 2 * p2);
        const auto [p4, g4] = f_q(q0 + hq, st.psi + hq * p3);
        st.psi += hq / 6.0 * (p1 + 2.0 * p2 + 2.0 * p3 + p4);
        if (positions) st.gamma += (hq / 6.0) * (g1 + 2.0 * g2 + 2.0 * g3 + g4);
        st.q = (j + 1 == kStepsLinear) ? kQSplit : q0 + hq;
        out.push_back(st);
    }
    // logarithmic stretch s = ln q in [kLogQMin, ln kQSplit]
    auto f_s = [K](double s, double psi) {
        const double q = std::exp(s);
        const Rates r = rates_q(q, K);
        return std::pair{q * r.dpsi, (q * r.dgamma) * unit_from_angle(psi)};
    };
    const double s_top = std::log(kQSplit);
    const double hs = (kLogQMin - s_top) / static_cast<double>(kStepsLog);
    for (std::size_t j = 0; j < kStepsLog; ++j) {
        const double s0 = s_top + hs * static_cast<double>(j);
        const auto [p1, g1] = f_s(s0, st.psi);
        const auto [p2, g2] = f_s(s0 + hs / 2, st.psi + hs / 2 * p1);
        const auto [p3, g3] = f_s(s0 + hs / 2, st.psi + hs / 2 * p2);
        const auto [p4, g4] = f_s(s0 + hs, st.psi + hs * p3);
        st.psi += hs / 6.0 * (p1 + 2.0 * p2 + 2.0 * p3 + p4);
        if (positions) st.gamma += (hs / 6.0) * (g1 + 2.0 * g2 + 2.0 * g3 + g4);
        st.q = std::exp(s0 + hs);
        out.push_back(st);
    }
    return out;
}

}  // namespace

double expander_half_width(double kappa_max) {
    const std::vector<HalfState> half = integrate_half(kappa_max, 0.0, false);
    return -half.back().psi;
}

WedgeProfile solve_wedge_profile(double beta, double tol) {
    if (!(beta > 0.0 && beta < kPi)) throw DomainError("wedge profile needs beta in (0, pi)");
    if (!(tol > 0.0)) throw DomainError("wedge profile needs tol > 0");
    const double target = (kPi - beta) / 2.0;
    double lo = std::log(1e-8);
    double hi = std::log(1e3);
    if (!(expander_half_width(std::exp(lo)) < target && expander_half_width(std::exp(hi)) > target))
        throw ProfileError("bisection on kappa_max failed to bracket the half width");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double w = expander_half_width(std::exp(mid));
        if (w < target) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-15) break;
    }
    const double K = std::exp(0.5 * (lo + hi));
    const double W = target;
    const std::vector<HalfState> half = integrate_half(K, W, true);

    WedgeProfile prof;
    prof.beta = beta;
    prof.tol = tol;
    prof.kappa_max = K;
    const std::size_t m = half.size();
    const Vec2 mirror = unit_from_angle(2.0 * W);
    auto conj_rot = [&](Vec2 g) {
        // -e^{2iW} * conj(g)
        const Vec2 cg{g.x, -g.y};
        return -1.0 * Vec2{mirror.x * cg.x - mirror.y * cg.y, mirror.x * cg.y + mirror.y * cg.x};
    };
    for (std::size_t j = m; j-- > 0;) {
        const HalfState& s = half[j];
        prof.psis.push_back(s.psi);
        prof.kappa_beta.push_back(K * std::sin(s.q));
        prof.gamma_beta.push_back(s.gamma);
    }
    for (std::size_t j = 1; j < m; ++j) {
        const HalfState& s = half[j];
        prof.psis.push_back(2.0 * W - s.psi);
        prof.kappa_beta.push_back(K * std::sin(s.q));
        prof.gamma_beta.push_back(conj_rot(s.gamma));
    }
    // asymptotes: mean offsets over the outer tenth of each end
    const std::size_t total = prof.gamma_beta.size();
    const std::size_t tail = std::max<std::size_t>(total / 20, 2);
    const double alpha = kPi - beta;
    const Vec2 dir_b = unit_from_angle(alpha);
    double c1 = 0.0;
    double c2 = 0.0;
    for (std::size_t j = 0; j < tail; ++j) {
        c1 += prof.gamma_beta[j].y;
        c2 += cross(dir_b, prof.gamma_beta[total - 1 - j]);
    }
    c1 /= static_cast<double>(tail);
    c2 /= static_cast<double>(tail);
    const double ty = -c1;
    const double tx = (c2 + std::cos(alpha) * ty) / std::sin(alpha);
    for (Vec2& g : prof.gamma_beta) g += Vec2{tx, ty};

    prof.D_beta.resize(total);
    for (std::size_t j = 0; j < total; ++j) {
        const double psi = prof.psis[j];
        prof.D_beta[j] = dot(prof.gamma_beta[j], Vec2{-std::sin(psi), std::cos(psi)});
    }
    prof.phis.resize(total);
    prof.V_prefix.assign(total, 0.0);
    double theta = angle_of(prof.gamma_beta[0]);
    if (theta <= 0.0) theta += 2.0 * kPi;
    for (std::size_t j = 0; j < total; ++j) {
        if (j > 0) theta += signed_angle(prof.gamma_beta[j - 1], prof.gamma_beta[j]);
        prof.phis[j] = kPi - theta;
        if (j > 0) {
            const double r0 = norm(prof.gamma_beta[j - 1]);
            const double r1 = norm(prof.gamma_beta[j]);
            prof.V_prefix[j] = prof.V_prefix[j - 1] + 0.25 * (r0 * r0 + r1 * r1) * (prof.phis[j] - prof.phis[j - 1]);
        }
    }
    return prof;
}

namespace {

/// Indices where the given key increases strictly; used to build interpolation tables.
std::vector<std::size_t> strictly_increasing(const std::vector<double>& key) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < key.size(); ++j) {
        if (idx.empty() || key[j] > key[idx.back()]) idx.push_back(j);
    }
    return idx;
}

double interp(const std::vector<double>& key, const std::vector<double>& val, double at) {
    const std::vector<std::size_t> idx = strictly_increasing(key);
    std::vector<double> k(idx.size());
    std::vector<double> v(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
        k[j] = key[idx[j]];
        v[j] = val[idx[j]];
    }
    return lerp_table(k, v, at);
}

}  // namespace

double WedgeProfile::kappa_at(double psi) const { return interp(psis, kappa_beta, psi); }

Vec2 WedgeProfile::gamma_at(double psi) const {
    std::vector<double> xs(gamma_beta.size());
    std::vector<double> ys(gamma_beta.size());
    for (std::size_t j = 0; j < gamma_beta.size(); ++j) {
        xs[j] = gamma_beta[j].x;
        ys[j] = gamma_beta[j].y;
    }
    return {interp(psis, xs, psi), interp(psis, ys, psi)};
}

double WedgeProfile::psi_at_phi(double phi) const { return interp(phis, psis, phi); }

double WedgeProfile::r_at_phi(double phi) const {
    std::vector<double> rs(gamma_beta.size());
    for (std::size_t j = 0; j < gamma_beta.size(); ++j) rs[j] = norm(gamma_beta[j]);
    return interp(phis, rs, phi);
}

double WedgeProfile::turning_between(double phi0, double phi1) const { return psi_at_phi(phi1) - psi_at_phi(phi0); }

double WedgeProfile::area_between(double phi0, double phi1) const {
    return interp(phis, V_prefix, phi1) - interp(phis, V_prefix, phi0);
}

std::vector<Vec2> WedgeProfile::polyline(double t, double radius) const {
    const double scale = std::sqrt(t);
    std::vector<Vec2> out;
    for (const Vec2& g : gamma_beta) {
        const Vec2 p = scale * g;
        if (norm(p) <= radius) out.push_back(p);
    }
    return out;
}

std::shared_ptr<const WedgeProfile> wedge_profile(double beta, double tol) {
    static std::mutex mutex;
    static std::map<std::pair<double, double>, std::shared_ptr<const WedgeProfile>> cache;
    const std::lock_guard<std::mutex> lock(mutex);
    const auto key = std::pair{beta, tol};
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
    auto prof = std::make_shared<WedgeProfile>(solve_wedge_profile(beta, tol));

    InitialCurveSpec spec;
    spec.generator = "wedge";
    spec.n = 2001;
    spec.angle_a = kPi;
    spec.angle_b = kPi - beta;
    spec.pin_radius = 7.0;
    FlowConfig cfg;
    cfg.dt = 2e-4;
    cfg.t_end = 1.0;
    cfg.pin_radius = 7.0;
    cfg.record_times = {1.0};
    const FlowTrace trace = run(build_initial_curve(spec), cfg, "wedge-cross-check");
    const Snapshot& last = trace.snapshots.back();
    constexpr double kCompareRadius = 3.0;
    std::vector<Vec2> sim_inner;
    for (const Vec2& p : last.curve.points()) {
        if (norm(p) <= kCompareRadius) sim_inner.push_back(p);
    }
    const std::vector<Vec2> prof_inner = prof->polyline(1.0, kCompareRadius);
    const std::vector<Vec2> prof_wide = prof->polyline(1.0, kCompareRadius + 1.0);
    const std::span<const Vec2> sim_all = last.curve.points();
    const double d = std::max(directed_distance(sim_inner, prof_wide, false), directed_distance(prof_inner, sim_all, false));
    prof->cross_validation_distance = d;
    if (!(d <= 10.0 * tol))
        throw ProfileError("expander profile disagrees with the simulated wedge flow by " + std::to_string(d) +
                           "; sign or orientation convention fault");
    cache.emplace(key, prof);
    return prof;
}

}  // namespace csf
