#include "csf/verifier.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>
#include <tuple>

#include "csf/errors.hpp"
#include "csf/exact.hpp"
#include "csf/generators.hpp"
#include "csf/numerics.hpp"

namespace csf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSectorSlack = 0.02;
constexpr double kGradientSlack = 0.05;
constexpr double kKappaRatioSlack = 0.01;
constexpr double kDecaySlack = 0.01;
constexpr double kMinDecayRate = 0.95;
constexpr double kMinHeatRate = 1.5;
constexpr double kBlowdownTolerance = 1e-2;
constexpr double kProfileTolerance = 1e-3;
/// Time offset in steps of the coarsest stride (4).
constexpr std::size_t kMaxOffset = 16;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

CheckReport make_report(const std::string& id) {
    CheckReport r;
    r.check_id = id;
    return r;
}

CheckReport inconclusive(const std::string& id, const std::string& why, std::optional<Witness> witness = std::nullopt) {
    CheckReport r = make_report(id);
    r.status = CheckStatus::inconclusive;
    r.notes = why;
    r.witness = witness;
    return r;
}

/// Applies any override and sets the status from the violation.
void finish(CheckReport& r, double tolerance, const VerifyOptions& options) {
    if (const auto it = options.tolerance_overrides.find(r.check_id); it != options.tolerance_overrides.end())
        tolerance = it->second;
    r.tolerance = tolerance;
    r.max_violation = std::max(r.max_violation, 0.0);
    r.status = r.max_violation <= tolerance ? CheckStatus::pass : CheckStatus::fail;
}

/// Tracks the largest violation seen and where.
struct Worst {
    double value{0.0};
    std::optional<Witness> witness;

    void offer(double v, const Witness& w) {
        if (v > value || (!witness && v > 0.0)) {
            value = v;
            witness = w;
        }
    }
};

Witness pair_witness(double t, std::size_t v, std::size_t w) {
    Witness x;
    x.t = t;
    x.v = v;
    x.w = w;
    return x;
}

Witness node_witness(double t, std::size_t node) {
    Witness x;
    x.t = t;
    x.node = node;
    return x;
}

Witness psi_witness(double t, double psi) {
    Witness x;
    x.t = t;
    x.psi = psi;
    return x;
}

std::vector<double> harnack_prefix(const SweptAreaPrefix& prefix, const TangentField& lift, double t, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = prefix.S[i] - t * lift.psi[i];
    return g;
}

/// Rotates every snapshot, asserting invariance of the functionals.
FlowTrace to_frame(const FlowTrace& trace, Frame frame) {
    const auto rot = frame_rotation(trace.snapshots.front().curve, frame);
    if (!rot) throw DomainError("trace has no radial ends in the canonical range");
    FlowTrace out = rotated(trace, *rot);
    for (std::size_t k = 0; k < trace.snapshots.size(); ++k) assert_rotation_invariant(trace.snapshots[k], out.snapshots[k]);
    return out;
}

std::optional<PolarGraphView> polar_snapshot(const Snapshot& s, std::size_t& witness_node) {
    try {
        PolarResult r = polar_view(s.curve);
        if (!r.ok) {
            witness_node = r.witness_node;
            return std::nullopt;
        }
        return std::move(r.view);
    } catch (const DomainError&) {
        witness_node = 0;
        return std::nullopt;
    }
}

/// First node with clearly negative curvature, if any.
std::optional<std::size_t> concavity_witness(const Snapshot& s) {
    const auto& k = s.curvature.kappa;
    double kmax = 0.0;
    for (double v : k) kmax = std::max(kmax, std::abs(v));
    const double eps = 1e-6 * std::max(kmax, 1.0);
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] < -eps) return i;
    }
    return std::nullopt;
}

/// Strictly increasing subsequence of psi with the matching values, for interpolation.
struct PsiTable {
    std::vector<double> psi;
    std::vector<double> kappa;
    std::vector<double> x;
    std::vector<double> y;
};

PsiTable psi_table(const Snapshot& s) {
    PsiTable t;
    const auto& psi = s.lift.psi;
    for (std::size_t i = 0; i < s.curve.size(); ++i) {
        if (!t.psi.empty() && !(psi[i] > t.psi.back())) continue;
        t.psi.push_back(psi[i]);
        t.kappa.push_back(s.curvature.kappa[i]);
        t.x.push_back(s.curve[i].x);
        t.y.push_back(s.curve[i].y);
    }
    return t;
}

std::vector<double> interior_psi_grid(double alpha, std::size_t count) {
    std::vector<double> g(count);
    for (std::size_t k = 0; k < count; ++k)
        g[k] = alpha * (0.1 + 0.8 * static_cast<double>(k) / static_cast<double>(count - 1));
    return g;
}

/// Scalar version of the flow's discrete Laplace-Beltrami operator.
std::vector<double> scalar_laplacian(const std::vector<Vec2>& pts, const std::vector<double>& f, bool closed) {
    const std::size_t n = pts.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!closed && (i == 0 || i + 1 == n)) continue;
        const std::size_t im = (i + n - 1) % n;
        const std::size_t ip = (i + 1) % n;
        const double lm = norm(pts[i] - pts[im]);
        const double lp = norm(pts[ip] - pts[i]);
        const double a = 2.0 / (lm * (lm + lp));
        const double c = 2.0 / (lp * (lm + lp));
        out[i] = a * (f[im] - f[i]) + c * (f[ip] - f[i]);
    }
    return out;
}

std::vector<Vec2> subsample(std::span<const Vec2> pts, std::size_t stride) {
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < pts.size(); i += stride) out.push_back(pts[i]);
    return out;
}

}  // namespace

const char* to_string(CheckStatus status) noexcept {
    switch (status) {
        case CheckStatus::pass:
            return "pass";
        case CheckStatus::fail:
            return "fail";
        case CheckStatus::inconclusive:
            return "inconclusive";
    }
    return "inconclusive";
}

std::optional<CheckStatus> parse_status(const std::string& text) {
    if (text == "pass") return CheckStatus::pass;
    if (text == "fail") return CheckStatus::fail;
    if (text == "inconclusive") return CheckStatus::inconclusive;
    return std::nullopt;
}

PairGrid make_pair_grid(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& witnesses,
                        std::size_t side) {
    PairGrid grid;
    if (n == 0) return grid;
    side = std::max<std::size_t>(side, 2);
    const std::size_t stride = std::max<std::size_t>(1, (n + side - 1) / side);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; i += stride) idx.push_back(i);
    if (idx.back() != n - 1) idx.push_back(n - 1);
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a; b < idx.size(); ++b) grid.pairs.emplace_back(idx[a], idx[b]);
    }
    for (auto [v, w] : witnesses) {
        if (v > w) std::swap(v, w);
        if (w < n) grid.pairs.emplace_back(v, w);
    }
    grid.pairs.emplace_back(0, n - 1);
    std::sort(grid.pairs.begin(), grid.pairs.end());
    grid.pairs.erase(std::unique(grid.pairs.begin(), grid.pairs.end()), grid.pairs.end());
    return grid;
}

TraceContext trace_context(const FlowTrace& trace) {
    if (trace.snapshots.empty()) throw ConfigError("empty trace");
    const Snapshot& s0 = trace.snapshots.front();
    TraceContext c;
    c.h = max_segment_length(s0.curve);
    c.dt = trace.config.dt;
    const ExtremaBounds eb = extrema_bounds(swept_area_prefix(s0.curve));
    c.a_minus = eb.a_minus;
    c.a_plus = eb.a_plus;
    if (const auto& ends = s0.curve.ends()) {
        try {
            c.beta = sector_opening(ends->angle_a, ends->angle_b);
            c.alpha = kPi - c.beta;
            c.radial = true;
        } catch (const ConfigError&) {
            c.radial = false;
        }
        const double t_end = trace.snapshots.back().t;
        c.eps_pin = kPi / 2.0 * std::exp(t_end - ends->pin_radius);
    }
    return c;
}

void assert_rotation_invariant(const Snapshot& before, const Snapshot& after) {
    const SweptAreaPrefix p0 = swept_area_prefix(before.curve);
    const SweptAreaPrefix p1 = swept_area_prefix(after.curve);
    double scale = 1.0;
    for (const Vec2& p : before.curve.points()) scale = std::max(scale, dot(p, p));
    const double tol_a = 1e-12 * scale * static_cast<double>(before.curve.size());
    const double a0 = p0.S.back() - p0.S.front();
    const double a1 = p1.S.back() - p1.S.front();
    const double s0 = before.lift.psi.back() - before.lift.psi.front();
    const double s1 = after.lift.psi.back() - after.lift.psi.front();
    if (std::abs(a0 - a1) > tol_a || std::abs(s0 - s1) > 1e-9)
        throw Error("rotation changed the swept area or turning beyond roundoff");
}

CheckReport check_harnack_bounds(const FlowTrace& trace, const VerifyOptions& options) {
    const std::string id = "harnack_bounds";
    const TraceContext ctx = trace_context(trace);
    if (!ctx.radial) return inconclusive(id, "initial curve has no radial ends in the canonical range");
    const ExtremaBounds eb = extrema_bounds(swept_area_prefix(trace.snapshots.front().curve));
    CheckReport r = make_report(id);
    Worst worst;
    double hmin = std::numeric_limits<double>::infinity();
    double hmax = -std::numeric_limits<double>::infinity();
    std::size_t grid_pairs = 0;
    for (const Snapshot& s : trace.snapshots) {
        const std::size_t n = s.curve.size();
        const SweptAreaPrefix prefix = swept_area_prefix(s.curve);
        const std::vector<double> g = harnack_prefix(prefix, s.lift, s.t, n);
        const PairExtrema e = pair_extrema(g);
        const PairGrid grid = make_pair_grid(
            n, {{e.max_v, e.max_w}, {e.min_v, e.min_w}, {eb.minus_v, eb.minus_w}, {eb.plus_v, eb.plus_w}}, options.grid_side);
        grid_pairs = std::max(grid_pairs, grid.pairs.size());
        for (const auto& [v, w] : grid.pairs) {
            const double h = g[w] - g[v];
            hmin = std::min(hmin, h);
            hmax = std::max(hmax, h);
            worst.offer(ctx.a_minus - h, pair_witness(s.t, v, w));
            worst.offer(h - ctx.a_plus, pair_witness(s.t, v, w));
        }
    }
    r.max_violation = worst.value;
    r.witness = worst.witness;
    r.notes = "A- = " + fmt(ctx.a_minus) + ", A+ = " + fmt(ctx.a_plus) + ", H range [" + fmt(hmin) + ", " + fmt(hmax) +
              "] over " + std::to_string(grid_pairs) + " pairs per time";
    finish(r, options.slack.tolerance(ctx.a_plus - ctx.a_minus, ctx.h, ctx.dt, ctx.eps_pin), options);
    return r;
}

CheckReport check_area_control(const FlowTrace& trace, const VerifyOptions& options) {
    const std::string id = "area_control";
    const TraceContext ctx = trace_context(trace);
    if (!ctx.radial) return inconclusive(id, "frame rotation impossible: ends not in the canonical range");
    const FlowTrace canon = to_frame(trace, Frame::canonical);
    CheckReport r = make_report(id);
    Worst worst;
    for (const Snapshot& s : canon.snapshots) {
        const SweptAreaPrefix prefix = swept_area_prefix(s.curve);
        const PairExtrema e = pair_extrema(prefix.S);
        worst.offer(ctx.a_minus - e.min, pair_witness(s.t, e.min_v, e.min_w));
        worst.offer(e.max - (ctx.alpha * s.t + ctx.a_plus), pair_witness(s.t, e.max_v, e.max_w));
    }
    r.max_violation = worst.value;
    r.witness = worst.witness;
    r.notes = "bounds A- <= A <= alpha t + A+ with alpha = " + fmt(ctx.alpha);
    finish(r, options.slack.tolerance(ctx.a_plus - ctx.a_minus, ctx.h, ctx.dt, ctx.eps_pin), options);
    return r;
}

CheckReport check_turning_bounds(const FlowTrace& trace, const VerifyOptions& options) {
    const std::string id = "turning_bounds";
    const TraceContext ctx = trace_context(trace);
    if (!ctx.radial) return inconclusive(id, "initial curve has no radial ends in the canonical range");
    const double spread = ctx.a_plus - ctx.a_minus;
    CheckReport r = make_report(id);
    Worst worst;
    std::size_t used = 0;
    for (const Snapshot& s : trace.snapshots) {
        if (!(s.t > 0.0)) continue;
        ++used;
        const PairExtrema e = pair_extrema(s.lift.psi);
        // violations are scaled by t so they carry the units of H
        worst.offer(s.t * (-spread / s.t - e.min), pair_witness(s.t, e.min_v, e.min_w));
        worst.offer(s.t * (e.max - ctx.alpha - spread / s.t), pair_witness(s.t, e.max_v, e.max_w));
    }
    if (used == 0) return inconclusive(id, "no recorded t > 0");
    r.max_violation = worst.value;
    r.witness = worst.witness;
    r.notes = "violation reported as t times the turning excess; A+ - A- = " + fmt(spread);
    finish(r, 2.0 * options.slack.tolerance(spread, ctx.h, ctx.dt, ctx.eps_pin), options);
    return r;
}

CheckReport check_graphicality(const FlowTrace& trace, const VerifyOptions& options) {
    const std::string id = "graphicality";
    const TraceContext ctx = trace_context(trace);
    if (!ctx.radial) return inconclusive(id, "initial curve has no radial ends in the canonical range");
    const double spread = ctx.a_plus - ctx.a_minus;
    const double threshold = 2.0 * spread / ctx.beta;
    const FlowTrace sym = to_frame(trace, Frame::symmetric);
    std::optional<double> first_graphical;
    for (const Snapshot& s : sym.snapshots) {
        const auto sup = max_abs_tangent_angle(s, Frame::symmetric);
        if (sup && *sup < kPi / 2.0 - kGraphicalMargin) {
            first_graphical = s.t;
            break;
        }
    }
    CheckReport r = make_report(id);
    Worst worst;
    std::size_t used = 0;
    for (const Snapshot& s : sym.snapshots) {
        if (!(s.t > threshold) || !(s.t > 0.0)) continue;
        ++used;
        const auto sup = max_abs_tangent_angle(s, Frame::symmetric);
        if (!sup) continue;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < s.lift.psi.size(); ++i) {
            if (std::abs(s.lift.psi[i]) > std::abs(s.lift.psi[arg])) arg = i;
        }
        if (!(*sup < kPi / 2.0 - kGraphicalMargin)) {
            worst.offer(*sup - (kPi / 2.0 - kGraphicalMargin), node_witness(s.t, arg));
            continue;
        }
        const double bound = kPi / 2.0 - ctx.beta / 2.0 + spread / s.t;
        if (bound < kPi / 2.0) {
            const double allowed = std::atan((1.0 + kGradientSlack) * std::tan(bound));
            worst.offer(*sup - allowed, node_witness(s.t, arg));
        }
        const double s_lo = kPi / 2.0 - ctx.beta / 2.0 + spread / s.t;
        const double s_hi = kPi / 2.0 + ctx.beta / 2.0 - spread / s.t;
        if (s_lo < s_hi) {
            const auto sector = detect_polar_sector(s);
            if (!sector) {
                worst.offer(s_hi - s_lo, psi_witness(s.t, 0.5 * (s_lo + s_hi)));
            } else {
                worst.offer(sector->first - s_lo - kSectorSlack, psi_witness(s.t, s_lo));
                worst.offer(s_hi - kSectorSlack - sector->second, psi_witness(s.t, s_hi));
            }
        }
    }
    if (spread <= 0.0 && ctx.beta >= kPi) {
        r.notes = "static line through the origin: pass by convention; ";
    }
    if (used == 0 && !(spread <= 0.0 && ctx.beta >= kPi))
        return inconclusive(id, "no recorded t beyond the threshold " + fmt(threshold));
    r.max_violation = worst.value;
    r.witness = worst.witness;
    r.notes += "threshold " + fmt(threshold) + ", first graphical time " +
               (first_graphical ? fmt(*first_graphical) : std::string("none")) +
               "; 5% gradient slack and 0.02 rad sector slack are folded into the bounds";
    finish(r, 1e-12, options);
    return r;
}

CheckReport check_total_area_law(const FlowTrace& trace, const VerifyOptions& options) {
    const std::string id = "total_area_law";
    const TraceContext ctx = trace_context(trace);
    if (!ctx.radial) return inconclusive(id, "initial curve has no radial ends in the canonical range");
    if (trace.snapshots.size() < 3) return inconclusive(id, "fewer than 3 recorded times");
    std::vector<double> ts;
    std::vector<double> as;
    for (const Snapshot& s : trace.snapshots) {
        const SweptAreaPrefix p = swept_area_prefix(s.curve);
        ts.push_back(s.t);
        as.push_back(p.S.back() - p.S.front());
    }
    const LineFit fit = fit_line(ts, as);
    const double span = ts.back() - ts.front();
    CheckReport r = make_report(id);
    const double slope_err = std::abs(fit.slope - ctx.alpha);
    const double icpt_err = span > 0.0 ? std::abs(fit.intercept - as.front()) / span : 0.0;
    r.max_violation = std::max(slope_err, icpt_err);
    if (r.max_violation > 0.0) r.witness = Witness{ts.back(), 0, trace.snapshots.back().curve.size() - 1, {}, {}};
    r.notes = "slope " + fmt(fit.slope) + " vs alpha " + fmt(ctx.alpha) + ", intercept " + fmt(fit.intercept) + " vs " +
              fmt(as.front()) + " (intercept error divided by the time span)";
    finish(r, options.slack.relative * ctx.alpha + options.slack.discretization(ctx.h, ctx.dt, ctx.eps_pin), options);
    return r;
}

CheckReport check_polar_harnack(const FlowTrace& trace, const VerifyOptions& options) {
    const std::string id = "polar_harnack";
    const TraceContext ctx = trace_context(trace);
    if (!ctx.radial) return inconclusive(id, "initial curve has no radial ends in the canonical range");
    const FlowTrace canon = to_frame(trace, Frame::canonical);
    const SweptAreaPrefix p0 = swept_area_prefix(canon.snapshots.front().curve);
    const double v0 = p0.S.back() - p0.S.front();
    const double disc = options.slack.discretization(ctx.h, ctx.dt, ctx.eps_pin);
    if (ctx.a_minus < -disc || ctx.a_plus > v0 + disc)
        return inconclusive(id, "initial curve is not polar graphical (A- < 0 or A+ > V0)");
    std::shared_ptr<const WedgeProfile> profile;
    if (ctx.beta < kPi) profile = wedge_profile(ctx.beta, kProfileTolerance);
    CheckReport r = make_report(id);
    Worst worst;
    std::size_t used = 0;
    double t_max = 0.0;
    for (const Snapshot& s : canon.snapshots) {
        if (!(s.t > 0.0)) continue;
        std::size_t bad = 0;
        const auto view = polar_snapshot(s, bad);
        if (!view) return inconclusive(id, "snapshot is not a polar graph", node_witness(s.t, bad));
        ++used;
        t_max = std::max(t_max, s.t);
        const std::size_t n = s.curve.size();
        std::vector<double> g1(n);
        std::vector<double> g2(n);
        for (std::size_t i = 0; i < n; ++i) {
            g1[i] = view->V[i] - s.t * s.lift.psi[i];
            const double psi_beta = profile ? profile->psi_at_phi(view->phis[i]) : 0.0;
            g2[i] = s.lift.psi[i] - psi_beta;
        }
        const PairExtrema e1 = pair_extrema(g1);
        const PairExtrema e2 = pair_extrema(g2);
        worst.offer(-e1.min, pair_witness(s.t, e1.min_v, e1.min_w));
        worst.offer(e1.max - v0, pair_witness(s.t, e1.max_v, e1.max_w));
        worst.offer(s.t * e2.max - v0, pair_witness(s.t, e2.max_v, e2.max_w));
        worst.offer(-v0 - s.t * e2.min, pair_witness(s.t, e2.min_v, e2.min_w));
    }
    if (used == 0) return inconclusive(id, "no recorded t > 0");
    r.max_violation = worst.value;
    r.witness = worst.witness;
    r.notes = "V0 = " + fmt(v0) + (profile ? ", against the wedge profile" : ", beta = pi") +
              "; turning violations are scaled by t";
    finish(r, options.slack.tolerance(v0, ctx.h, ctx.dt, ctx.eps_pin) + (profile ? t_max * kProfileTolerance : 0.0),
           options);
    return r;
}

CheckReport check_extremal_turning(const Snapshot& snapshot, double alpha, double tolerance) {
    CheckReport r = make_report("extremal_turning");
    const SweptAreaPrefix prefix = swept_area_prefix(snapshot.curve);
    const auto& psi = snapshot.lift.psi;
    Worst worst;
    auto probe = [&](const PairExtrema& e) {
        worst.offer(psi[e.max_w] - psi[e.max_v] - alpha, pair_witness(snapshot.t, e.max_v, e.max_w));
        worst.offer(-(psi[e.min_w] - psi[e.min_v]), pair_witness(snapshot.t, e.min_v, e.min_w));
    };
    const std::span<const double> s(prefix.S.data(), snapshot.curve.size());
    probe(pair_extrema(s));
    probe(boundary_extrema(s));
    r.max_violation = worst.value;
    r.witness = worst.witness;
    r.tolerance = tolerance;
    r.status = r.max_violation <= tolerance ? CheckStatus::pass : CheckStatus::fail;
    return r;
}

CheckReport check_extremal_turning(const FlowTrace& trace, const VerifyOptions& options) {
    const std::string id = "extremal_turning";
    const TraceContext ctx = trace_context(trace);
    if (!ctx.radial) return inconclusive(id, "initial curve has no radial ends in the canonical range");
    const double tol = options.slack.tolerance(ctx.alpha, ctx.h, ctx.dt, ctx.eps_pin);
    CheckReport r = make_report(id);
    Worst worst;
    std::size_t used = 0;
    for (const Snapshot& s : trace.snapshots) {
        if (!(s.t > 0.0)) continue;
        ++used;
        const CheckReport one = check_extremal_turning(s, ctx.alpha, tol);
        if (one.witness) worst.offer(one.max_violation, *one.witness);
    }
    if (used == 0) return inconclusive(id, "no recorded t > 0");
    r.max_violation = worst.value;
    r.witness = worst.witness;
    r.notes = "Psi at the argmax/argmin of A over all pairs and over the families (first, w), (v, last)";
    finish(r, tol, options);
    return r;
}

CheckReport check_support_curvature(const FlowTrace& trace, const VerifyOptions& options) {
    const std::string id = "support_curvature";
    const TraceContext ctx = trace_context(trace);
    if (!ctx.radial) return inconclusive(id, "initial curve has no radial ends in the canonical range");
    const SweptAreaPrefix p0 = swept_area_prefix(trace.snapshots.front().curve);
    const double v0 = p0.S.back() - p0.S.front();
    const double disc = options.slack.discretization(ctx.h, ctx.dt, ctx.eps_pin);
    if (ctx.a_minus < -disc || ctx.a_plus > v0 + disc)
        return inconclusive(id, "initial curve is not polar graphical (A- < 0 or A+ > V0)");
    CheckReport r = make_report(id);
    Worst worst;
    std::size_t used = 0;
    double kappa_scale = 0.0;
    double equality_gap = 0.0;
    for (const Snapshot& s : trace.snapshots) {
        if (!(s.t > 0.0)) continue;
        std::size_t bad = 0;
        if (!polar_snapshot(s, bad)) return inconclusive(id, "snapshot is not a polar graph", node_witness(s.t, bad));
        ++used;
        const SupportField D = support_function(s.curve, s.lift);
        double kmax = 0.0;
        for (std::size_t i = 0; i < s.curve.size(); ++i) {
            const double k = s.curvature.kappa[i];
            kmax = std::max(kmax, std::abs(k));
            const double gap = k - D.D[i] / (2.0 * s.t);
            equality_gap = std::max(equality_gap, std::abs(gap));
            worst.offer(gap, node_witness(s.t, i));
        }
        kappa_scale = std::max(kappa_scale, kmax);
    }
    if (used == 0) return inconclusive(id, "no recorded t > 0");
    r.max_violation = worst.value;
    r.witness = worst.witness;
    r.notes = std::to_string(used) + " polar snapshots; sup |kappa - D/(2t)| = " + fmt(equality_gap) +
              ", kappa_max = " + fmt(kappa_scale);
    finish(r, options.slack.tolerance(kappa_scale, ctx.h, ctx.dt, ctx.eps_pin), options);
    return r;
}

CheckReport check_hamilton(const FlowTrace& trace, const VerifyOptions& options) {
    const std::string id = "hamilton";
    const TraceContext ctx = trace_context(trace);
    if (!ctx.radial) return inconclusive(id, "initial curve has no radial ends in the canonical range");
    if (!(ctx.beta < kPi)) return inconclusive(id, "no wedge profile for beta = pi");
    for (const Snapshot& s : trace.snapshots) {
        if (const auto bad = concavity_witness(s)) return inconclusive(id, "flow is not convex", node_witness(s.t, *bad));
    }
    const FlowTrace canon = to_frame(trace, Frame::canonical);
    const auto profile = wedge_profile(ctx.beta, kProfileTolerance);
    const std::vector<double> grid = interior_psi_grid(ctx.alpha, 64);
    std::vector<double> kb(grid.size());
    double kb_max = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        kb[k] = profile->kappa_at(grid[k]);
        kb_max = std::max(kb_max, kb[k]);
    }
    CheckReport r = make_report(id);
    Worst worst;
    std::vector<double> prev;
    double prev_t = 0.0;
    double min_increment = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    for (const Snapshot& s : canon.snapshots) {
        if (!(s.t > 0.0)) continue;
        const PsiTable tab = psi_table(s);
        std::vector<double> cur(grid.size());
        const double rt = std::sqrt(s.t);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            cur[k] = rt * lerp_table(tab.psi, tab.kappa, grid[k]);
            max_ratio = std::max(max_ratio, cur[k] / kb[k]);
            worst.offer(cur[k] - (1.0 + kKappaRatioSlack) * kb[k], psi_witness(s.t, grid[k]));
            if (!prev.empty()) {
                const double inc = cur[k] - prev[k];
                min_increment = std::min(min_increment, inc);
                worst.offer(-inc, psi_witness(prev_t, grid[k]));
            }
        }
        prev = std::move(cur);
        prev_t = s.t;
    }
    if (prev.empty()) return inconclusive(id, "no recorded t > 0");
    r.max_violation = worst.value;
    r.witness = worst.witness;
    r.notes = "min increment of kappa sqrt(t) " + (std::isfinite(min_increment) ? fmt(min_increment) : "n/a") +
              ", max kappa sqrt(t) / kappa_beta " + fmt(max_ratio);
    finish(r, options.slack.discretization(ctx.h, ctx.dt, ctx.eps_pin) * std::max(kb_max, 1.0), options);
    return r;
}

DecayFit fit_end_decay(const std::vector<double>& x, const std::vector<double>& y, double t) {
    DecayFit fit;
    std::vector<double> fx;
    std::vector<double> fy;
    double floor = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) floor = std::max(floor, std::abs(y[i]));
    floor = std::max(floor * 1e-9, 1e-13);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < t) continue;
        ++fit.samples;
        const double bound = kPi / 2.0 * std::exp(t - x[i]);
        fit.max_ratio = std::max(fit.max_ratio, std::abs(y[i]) / bound);
        if (std::abs(y[i]) > floor) {
            fx.push_back(x[i]);
            fy.push_back(std::log(std::abs(y[i])));
        }
    }
    if (fx.size() < 3) {
        fit.rate = std::numeric_limits<double>::infinity();
        return fit;
    }
    fit.rate = -fit_line(fx, fy).slope;
    return fit;
}

CheckReport check_end_decay(const FlowTrace& trace, const VerifyOptions& options) {
    const std::string id = "end_decay";
    if (trace.snapshots.empty()) throw ConfigError("empty trace");
    const Snapshot& s0 = trace.snapshots.front();
    if (!s0.curve.ends()) return inconclusive(id, "initial curve has no radial ends");
    const RadialEndSpec ends = *s0.curve.ends();
    const double r_first = norm(s0.curve[ends.clamp_lo]);
    const double r_last = norm(s0.curve[ends.clamp_hi]);
    CheckReport r = make_report(id);
    Worst worst;
    double min_rate = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    for (const Snapshot& s : trace.snapshots) {
        const auto pts = s.curve.points();
        const std::size_t n = pts.size();
        for (int side = 0; side < 2; ++side) {
            const Vec2 d = unit_from_angle(side == 0 ? ends.angle_a : ends.angle_b);
            const double r_dep = side == 0 ? r_first : r_last;
            std::vector<double> xs;
            std::vector<double> ys;
            std::vector<std::size_t> nodes;
            double last_x = std::numeric_limits<double>::infinity();
            bool covered = false;
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t i = side == 0 ? k : n - 1 - k;
                const double x = dot(pts[i], d) - r_dep;
                if (!(x < last_x)) break;
                last_x = x;
                if (x <= s.t) {
                    covered = true;
                    break;
                }
                xs.push_back(x);
                ys.push_back(cross(d, pts[i]));
                nodes.push_back(i);
            }
            if (!covered && last_x >= s.t)
                return inconclusive(id, "end is not a graph over its ray", node_witness(s.t, nodes.empty() ? 0 : nodes.back()));
            const DecayFit fit = fit_end_decay(xs, ys, s.t);
            max_ratio = std::max(max_ratio, fit.max_ratio);
            for (std::size_t j = 0; j < xs.size(); ++j) {
                const double bound = kPi / 2.0 * std::exp(s.t - xs[j]) * (1.0 + kDecaySlack);
                worst.offer(std::abs(ys[j]) / bound - 1.0, node_witness(s.t, nodes[j]));
            }
            if (s.t > 0.0 && std::isfinite(fit.rate)) {
                min_rate = std::min(min_rate, fit.rate);
                worst.offer(kMinDecayRate - fit.rate, node_witness(s.t, nodes.empty() ? 0 : nodes.front()));
            }
        }
    }
    r.max_violation = worst.value;
    r.witness = worst.witness;
    r.notes = "max |y| / ((pi/2) e^{t-x}) = " + fmt(max_ratio) + ", min fitted decay rate " +
              (std::isfinite(min_rate) ? fmt(min_rate) : std::string("n/a")) +
              "; violation is the relative excess over the 1% bound or the rate shortfall below 0.95";
    finish(r, 0.0, options);
    return r;
}

HeatResiduals heat_residuals_at_stride(const FlowTrace& window, std::size_t stride) {
    const std::size_t count = window.snapshots.size();
    if (count < 2 * kMaxOffset + 1) throw DomainError("window too short for centred differences");
    const std::size_t mid = count - 1 - kMaxOffset;
    const std::size_t off = stride * stride;
    if (off > kMaxOffset) throw DomainError("stride too large for the window");
    const Snapshot& sm = window.snapshots[mid - off];
    const Snapshot& s0 = window.snapshots[mid];
    const Snapshot& sp = window.snapshots[mid + off];
    const bool closed = s0.curve.is_closed();
    const double delta = 0.5 * (sp.t - sm.t);
    auto coarse = [&](const Snapshot& s) {
        std::vector<Vec2> pts = subsample(s.curve.points(), stride);
        PlanarCurve c = closed ? PlanarCurve::closed(pts) : PlanarCurve::open(pts);
        TangentField lift = tangent_lift(c);
        SweptAreaPrefix prefix = swept_area_prefix(pts, closed);
        return std::tuple{std::move(pts), std::move(lift), std::move(prefix)};
    };
    auto [pm, lm, am] = coarse(sm);
    auto [p0, l0, a0] = coarse(s0);
    auto [pp, lp, ap] = coarse(sp);
    const std::size_t m = p0.size();
    auto align = [&](TangentField& f) {
        const double shift = 2.0 * kPi * std::round((l0.psi[0] - f.psi[0]) / (2.0 * kPi));
        for (double& v : f.psi) v += shift;
    };
    align(lm);
    align(lp);
    std::vector<double> psi0(l0.psi.begin(), l0.psi.begin() + static_cast<std::ptrdiff_t>(m));
    std::vector<double> S0(a0.S.begin(), a0.S.begin() + static_cast<std::ptrdiff_t>(m));
    const std::vector<double> lap_psi = scalar_laplacian(p0, psi0, closed);
    const std::vector<double> lap_s = scalar_laplacian(p0, S0, closed);
    HeatResiduals out;
    out.stride = stride;
    double a_lo = std::numeric_limits<double>::infinity();
    double a_hi = -a_lo;
    double h_lo = a_lo;
    double h_hi = -a_lo;
    const std::size_t first = closed ? 0 : 1;
    const std::size_t last = closed ? m : m - 1;
    for (std::size_t i = first; i < last; ++i) {
        const double rpsi = (lp.psi[i] - lm.psi[i]) / (2.0 * delta) - lap_psi[i];
        const double rarea = (ap.S[i] - am.S[i]) / (2.0 * delta) - lap_s[i] - psi0[i];
        const double rh = rarea - s0.t * rpsi;
        out.psi = std::max(out.psi, std::abs(rpsi));
        a_lo = std::min(a_lo, rarea);
        a_hi = std::max(a_hi, rarea);
        h_lo = std::min(h_lo, rh);
        h_hi = std::max(h_hi, rh);
    }
    out.area = a_hi - a_lo;
    out.harnack = h_hi - h_lo;
    return out;
}

CheckReport check_heat_residuals(const FlowTrace& window, const VerifyOptions& options) {
    const std::string id = "heat_residuals";
    if (window.snapshots.size() < 2 * kMaxOffset + 1) return inconclusive(id, "window too short for centred time differences");
    const std::size_t n = window.snapshots.front().curve.size();
    if ((n - 1) % 4 != 0) return inconclusive(id, "window node count is not 4k+1");
    const HeatResiduals r4 = heat_residuals_at_stride(window, 4);
    const HeatResiduals r2 = heat_residuals_at_stride(window, 2);
    const HeatResiduals r1 = heat_residuals_at_stride(window, 1);
    CheckReport r = make_report(id);
    const double t_mid = window.snapshots[window.snapshots.size() - 1 - kMaxOffset].t;
    auto rate = [](double coarse, double fine) { return std::log2(coarse / fine); };
    constexpr double kRoundoff = 1e-10;
    std::ostringstream notes;
    notes.precision(4);
    double worst = 0.0;
    const char* names[] = {"psi", "area", "harnack"};
    const double c[3] = {r4.psi, r4.area, r4.harnack};
    const double m[3] = {r2.psi, r2.area, r2.harnack};
    const double f[3] = {r1.psi, r1.area, r1.harnack};
    for (int q = 0; q < 3; ++q) {
        notes << names[q] << " residuals " << c[q] << ", " << m[q] << ", " << f[q];
        if (c[q] < kRoundoff) {
            notes << " (at roundoff); ";
            continue;
        }
        const double r_a = rate(c[q], m[q]);
        const double r_b = rate(m[q], f[q]);
        notes << " rates " << r_a << ", " << r_b << "; ";
        worst = std::max({worst, kMinHeatRate - r_a, kMinHeatRate - r_b});
    }
    r.max_violation = std::max(worst, 0.0);
    if (r.max_violation > 0.0) r.witness = Witness{t_mid, {}, {}, {}, {}};
    r.notes = notes.str() + "violation is the rate shortfall below 1.5";
    finish(r, 0.0, options);
    return r;
}

FlowTrace heat_window(const FlowTrace& trace, const VerifyOptions& options) {
    const Snapshot* start = nullptr;
    for (const Snapshot& s : trace.snapshots) {
        if (options.window_start) {
            if (!start || std::abs(s.t - *options.window_start) < std::abs(start->t - *options.window_start)) start = &s;
        } else if (s.t > 0.0) {
            start = &s;
            break;
        }
    }
    if (!start) start = &trace.snapshots.back();
    const std::size_t n = start->curve.size();
    const std::size_t target = 4 * ((n - 1) / 4) + 1;
    const Snapshot base = target == n ? *start : make_snapshot(start->t, resample_arclength(start->curve, target));
    const double h = min_segment_length(base.curve);
    WindowConfig cfg;
    cfg.dt = options.window_dt_factor * h * h;
    cfg.steps = options.window_steps;
    return fixed_label_window(base, cfg);
}

CheckReport check_blowdown(const FlowTrace& trace, const VerifyOptions& options) {
    const std::string id = "blowdown";
    const TraceContext ctx = trace_context(trace);
    if (!ctx.radial) return inconclusive(id, "initial curve has no radial ends in the canonical range");
    if (!(ctx.beta < kPi)) return inconclusive(id, "no wedge profile for beta = pi");
    for (const Snapshot& s : trace.snapshots) {
        if (const auto bad = concavity_witness(s)) return inconclusive(id, "flow is not convex", node_witness(s.t, *bad));
    }
    const FlowTrace canon = to_frame(trace, Frame::canonical);
    const auto profile = wedge_profile(ctx.beta, kProfileTolerance);
    const std::vector<double> grid = interior_psi_grid(ctx.alpha, 64);
    std::vector<Vec2> target(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) target[k] = profile->gamma_at(grid[k]);
    std::optional<std::pair<double, double>> first;
    std::pair<double, double> last{0.0, 0.0};
    double worst_psi = 0.0;
    for (const Snapshot& s : canon.snapshots) {
        if (!(s.t > 0.0)) continue;
        const PsiTable tab = psi_table(s);
        const double scale = 1.0 / std::sqrt(s.t);
        double d = 0.0;
        double arg = grid.front();
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const Vec2 p{lerp_table(tab.psi, tab.x, grid[k]), lerp_table(tab.psi, tab.y, grid[k])};
            const double e = norm(scale * p - target[k]);
            if (e > d) {
                d = e;
                arg = grid[k];
            }
        }
        if (!first) first = std::pair{s.t, d};
        last = {s.t, d};
        worst_psi = arg;
    }
    if (!first) return inconclusive(id, "no recorded t > 0");
    CheckReport r = make_report(id);
    const double allowed = std::max(0.5 * first->second, kBlowdownTolerance);
    r.max_violation = std::max(last.second - allowed, 0.0);
    if (r.max_violation > 0.0) r.witness = psi_witness(last.first, worst_psi);
    r.notes = "distance " + fmt(first->second) + " at t = " + fmt(first->first) + ", " + fmt(last.second) +
              " at t = " + fmt(last.first) + "; violation is the final distance beyond max(half the first, 0.01)";
    finish(r, 0.0, options);
    return r;
}

const std::vector<std::string>& check_ids() {
    static const std::vector<std::string> ids = {
        "harnack_bounds", "area_control",      "turning_bounds", "graphicality", "total_area_law", "polar_harnack",
        "extremal_turning", "support_curvature", "hamilton",       "end_decay",    "heat_residuals", "blowdown"};
    return ids;
}

namespace {

CheckReport dispatch(const std::string& id, const FlowTrace& trace, const VerifyOptions& options) {
    try {
        if (id == "harnack_bounds") return check_harnack_bounds(trace, options);
        if (id == "area_control") return check_area_control(trace, options);
        if (id == "turning_bounds") return check_turning_bounds(trace, options);
        if (id == "graphicality") return check_graphicality(trace, options);
        if (id == "total_area_law") return check_total_area_law(trace, options);
        if (id == "polar_harnack") return check_polar_harnack(trace, options);
        if (id == "extremal_turning") return check_extremal_turning(trace, options);
        if (id == "support_curvature") return check_support_curvature(trace, options);
        if (id == "hamilton") return check_hamilton(trace, options);
        if (id == "end_decay") return check_end_decay(trace, options);
        if (id == "heat_residuals") return check_heat_residuals(heat_window(trace, options), options);
        if (id == "blowdown") return check_blowdown(trace, options);
    } catch (const ProfileError&) {
        throw;
    } catch (const Error& e) {
        return inconclusive(id, std::string("precondition failed: ") + e.what());
    }
    throw ConfigError("unknown check id: " + id);
}

}  // namespace

std::vector<CheckReport> run_checks(const FlowTrace& trace, const std::vector<std::string>& ids,
                                    const VerifyOptions& options) {
    const std::vector<std::string>& wanted = ids.empty() ? check_ids() : ids;
    for (const std::string& id : wanted) {
        if (std::find(check_ids().begin(), check_ids().end(), id) == check_ids().end())
            throw ConfigError("unknown check id: " + id);
    }
    std::vector<CheckReport> out(wanted.size());
    std::vector<std::exception_ptr> errors(wanted.size());
    std::size_t threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    threads = std::min(threads, wanted.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < wanted.size(); k = next++) {
            try {
                out[k] = dispatch(wanted[k], trace, options);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace csf
