#include "csf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "csf/generators.hpp"
#include "csf/numerics.hpp"

namespace csf {

namespace {

constexpr double kCollision = 1e-12;

double min_spacing(const std::vector<Vec2>& p, bool closed) {
    double h = std::numeric_limits<double>::infinity();
    const std::size_t n = p.size();
    const std::size_t m = closed ? n : n - 1;
    for (std::size_t k = 0; k < m; ++k) h = std::min(h, norm(p[(k + 1) % n] - p[k]));
    return h;
}

PlanarCurve rebuild(std::vector<Vec2> pts, const PlanarCurve& like) {
    if (like.is_closed()) return PlanarCurve::closed(std::move(pts));
    if (like.ends()) {
        const RadialEndSpec& e = *like.ends();
        return PlanarCurve::radial(std::move(pts), e.angle_a, e.angle_b, e.pin_radius);
    }
    return PlanarCurve::open(std::move(pts));
}

}  // namespace

void Stepper::coefficients(const std::vector<Vec2>& p) {
    const std::size_t n = p.size();
    a_.assign(n, 0.0);
    c_.assign(n, 0.0);
    const std::size_t first = closed_ ? 0 : 1;
    const std::size_t last = closed_ ? n : n - 1;
    for (std::size_t i = first; i < last; ++i) {
        const Vec2 prev = p[(i + n - 1) % n];
        const Vec2 next = p[(i + 1) % n];
        const double lm = norm(p[i] - prev);
        const double lp = norm(next - p[i]);
        if (lm < kCollision || lp < kCollision)
            throw StepError("node collision at node " + std::to_string(i) + "; resample the curve more often");
        const double sum = lm + lp;
        a_[i] = 2.0 / (lm * sum);
        c_[i] = 2.0 / (lp * sum);
    }
}

std::vector<Vec2> Stepper::laplacian(const std::vector<Vec2>& p) const {
    Stepper tmp(closed_);
    tmp.coefficients(p);
    const std::size_t n = p.size();
    std::vector<Vec2> out(n);
    const std::size_t first = closed_ ? 0 : 1;
    const std::size_t last = closed_ ? n : n - 1;
    for (std::size_t i = first; i < last; ++i) {
        out[i] = tmp.a_[i] * (p[(i + n - 1) % n] - p[i]) + tmp.c_[i] * (p[(i + 1) % n] - p[i]);
    }
    return out;
}

void Stepper::advance(std::vector<Vec2>& p, double dt, Scheme scheme) {
    const std::size_t n = p.size();
    coefficients(p);
    if (scheme == Scheme::explicit_euler) {
        const double h = min_spacing(p, closed_);
        if (dt > 0.25 * h * h * (1.0 + 1e-12))
            throw StepError("explicit step dt=" + std::to_string(dt) + " exceeds 0.25*h_min^2=" +
                            std::to_string(0.25 * h * h));
        rhs_.assign(p.begin(), p.end());
        const std::size_t first = closed_ ? 0 : 1;
        const std::size_t last = closed_ ? n : n - 1;
        for (std::size_t i = first; i < last; ++i) {
            p[i] = rhs_[i] + dt * (a_[i] * (rhs_[(i + n - 1) % n] - rhs_[i]) + c_[i] * (rhs_[(i + 1) % n] - rhs_[i]));
        }
        return;
    }
    if (!closed_) {
        // Thomas sweep over interior unknowns 1..n-2
        work_.assign(n, 0.0);
        rhs_.assign(n, Vec2{});
        double prev_upper = 0.0;
        Vec2 prev_rhs{};
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double lower = -dt * a_[i];
            const double upper = -dt * c_[i];
            const double diag = 1.0 + dt * (a_[i] + c_[i]);
            Vec2 r = p[i];
            if (i == 1) r -= lower * p[0];
            if (i + 2 == n) r -= upper * p[n - 1];
            const double l = (i == 1) ? 0.0 : lower;
            const double m = diag - l * prev_upper;
            if (!(m > 1e-300) || !std::isfinite(m)) throw StepError("tridiagonal solve broke down at node " + std::to_string(i));
            const double up = (i + 2 == n) ? 0.0 : upper;
            work_[i] = up / m;
            rhs_[i] = (r - l * prev_rhs) / m;
            prev_upper = work_[i];
            prev_rhs = rhs_[i];
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            Vec2 x = rhs_[i];
            if (i + 2 < n) x -= work_[i] * p[i + 1];
            p[i] = x;
            if (i == 1) break;
        }
        return;
    }
    // cyclic system via Sherman-Morrison on a perturbed tridiagonal matrix
    std::vector<double> lower(n);
    std::vector<double> diag(n);
    std::vector<double> upper(n);
    for (std::size_t i = 0; i < n; ++i) {
        lower[i] = -dt * a_[i];
        upper[i] = -dt * c_[i];
        diag[i] = 1.0 + dt * (a_[i] + c_[i]);
    }
    const double corner_top = lower[0];
    const double corner_bottom = upper[n - 1];
    const double gamma = -diag[0];
    std::vector<double> b = diag;
    b[0] -= gamma;
    b[n - 1] -= corner_bottom * corner_top / gamma;
    auto solve = [&](auto& x) {
        std::vector<double> cp(n);
        using T = std::decay_t<decltype(x[0])>;
        std::vector<T> dp(n);
        double m = b[0];
        cp[0] = upper[0] / m;
        dp[0] = x[0] / m;
        for (std::size_t i = 1; i < n; ++i) {
            m = b[i] - lower[i] * cp[i - 1];
            if (!(std::abs(m) > 1e-300)) throw StepError("cyclic tridiagonal solve broke down");
            cp[i] = (i + 1 < n) ? upper[i] / m : 0.0;
            dp[i] = (x[i] - lower[i] * dp[i - 1]) / m;
        }
        x[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
    };
    std::vector<Vec2> x(p.begin(), p.end());
    solve(x);
    std::vector<double> z(n, 0.0);
    z[0] = gamma;
    z[n - 1] = corner_bottom;
    solve(z);
    const double denom = 1.0 + z[0] + corner_top * z[n - 1] / gamma;
    const Vec2 num = x[0] + (corner_top / gamma) * x[n - 1];
    const Vec2 factor = num / denom;
    for (std::size_t i = 0; i < n; ++i) p[i] = x[i] - z[i] * factor;
}

Snapshot make_snapshot(double t, PlanarCurve curve) {
    TangentField lift = tangent_lift(curve);
    CurvatureField curvature = discrete_curvature(curve, lift);
    return Snapshot{t, std::move(curve), std::move(lift), std::move(curvature)};
}

Snapshot step(const Snapshot& snapshot, double dt, Scheme scheme) {
    if (!(dt > 0.0)) throw StepError("dt must be positive");
    std::vector<Vec2> pts(snapshot.curve.points().begin(), snapshot.curve.points().end());
    Stepper stepper(snapshot.curve.is_closed());
    stepper.advance(pts, dt, scheme);
    return make_snapshot(snapshot.t + dt, rebuild(std::move(pts), snapshot.curve));
}

void validate_config(const FlowConfig& config, const PlanarCurve& initial) {
    if (!(config.dt > 0.0) || !std::isfinite(config.dt)) throw ConfigError("dt must be positive");
    if (!(config.t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
    if (config.n_nodes != 0 && config.n_nodes < 3) throw ConfigError("n_nodes must be at least 3");
    for (double t : config.record_times) {
        if (!(t >= 0.0) || t > config.t_end * (1.0 + 1e-12))
            throw ConfigError("record time " + std::to_string(t) + " outside [0, t_end]");
    }
    if (!initial.is_closed()) {
        if (!initial.ends()) throw ConfigError("open initial curve needs radial ends");
        if (!(config.pin_radius >= config.t_end + 6.0))
            throw ConfigError("pin_radius must be at least t_end + 6");
        const double r0 = norm(initial.points().front());
        const double r1 = norm(initial.points().back());
        const double tol = 1e-9 * std::max(1.0, config.pin_radius);
        if (std::abs(r0 - config.pin_radius) > tol || std::abs(r1 - config.pin_radius) > tol)
            throw ConfigError("initial curve ends do not reach pin_radius");
    }
    if (config.scheme == Scheme::explicit_euler) {
        const double h = min_segment_length(initial);
        if (config.dt > 0.25 * h * h) throw ConfigError("explicit scheme needs dt <= 0.25*h_min^2");
    }
}

FlowTrace run(const PlanarCurve& initial, const FlowConfig& config, std::string provenance) {
    const PlanarCurve start =
        (config.n_nodes != 0 && config.n_nodes != initial.size()) ? resample_arclength(initial, config.n_nodes) : initial;
    validate_config(config, start);
    FlowTrace trace;
    trace.config = config;
    trace.provenance = std::move(provenance);
    std::vector<double> times = config.record_times;
    times.push_back(0.0);
    if (config.record_times.empty()) times.push_back(config.t_end);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    trace.snapshots.push_back(make_snapshot(0.0, start));
    std::vector<Vec2> pts(start.points().begin(), start.points().end());
    const bool closed = start.is_closed();
    Stepper stepper(closed);
    double t = 0.0;
    std::size_t steps = 0;
    bool smoothing = config.smoothing_step && config.scheme == Scheme::semi_implicit;
    try {
        for (std::size_t r = 1; r < times.size(); ++r) {
            const double target = times[r];
            while (t < target) {
                Scheme scheme = config.scheme;
                double dt = config.dt;
                if (smoothing) {
                    const double h = min_spacing(pts, closed);
                    dt = std::min(dt, h * h / 8.0);
                    scheme = Scheme::explicit_euler;
                    smoothing = false;
                }
                double next = t + dt;
                if (next >= target - 1e-12 * config.dt) {
                    dt = target - t;
                    next = target;
                }
                stepper.advance(pts, dt, scheme);
                t = next;
                ++steps;
                if (config.resample_every != 0 && steps % config.resample_every == 0)
                    pts = resample_points(pts, closed, pts.size());
            }
            PlanarCurve curve = rebuild(pts, start);
            const EmbeddingReport rep = embeddedness_check(curve);
            if (!rep.ok) throw NotEmbeddedError(rep.first, rep.second);
            trace.snapshots.push_back(make_snapshot(target, std::move(curve)));
        }
    } catch (const Error& e) {
        throw RunError(std::string("flow aborted at t=") + std::to_string(t) + ": " + e.what(), std::move(trace));
    }
    return trace;
}

std::optional<double> frame_rotation(const PlanarCurve& curve, Frame frame) {
    if (!curve.ends()) return std::nullopt;
    const RadialEndSpec& e = *curve.ends();
    double beta;
    try {
        beta = sector_opening(e.angle_a, e.angle_b);
    } catch (const ConfigError&) {
        return std::nullopt;
    }
    const double canonical = canonical_rotation(e.angle_a);
    if (frame == Frame::canonical) return canonical;
    return canonical + beta / 2.0 - std::numbers::pi / 2.0;
}

Snapshot rotated(const Snapshot& snapshot, double angle) {
    return make_snapshot(snapshot.t, rotated(snapshot.curve, angle));
}

FlowTrace rotated(const FlowTrace& trace, double angle) {
    FlowTrace out;
    out.config = trace.config;
    out.provenance = trace.provenance;
    out.snapshots.reserve(trace.snapshots.size());
    for (const Snapshot& s : trace.snapshots) out.snapshots.push_back(rotated(s, angle));
    return out;
}

std::optional<double> max_abs_tangent_angle(const Snapshot& snapshot, Frame frame) {
    const auto rot = frame_rotation(snapshot.curve, frame);
    if (!rot) return std::nullopt;
    const auto& psi = snapshot.lift.psi;
    const double shift = wrap_angle(psi[0] + *rot) - psi[0];
    double worst = 0.0;
    for (double v : psi) worst = std::max(worst, std::abs(v + shift));
    return worst;
}

std::optional<double> detect_graphical_time(const FlowTrace& trace, Frame frame) {
    for (const Snapshot& s : trace.snapshots) {
        if (!(s.t > 0.0)) continue;
        const auto sup = max_abs_tangent_angle(s, frame);
        if (!sup) return std::nullopt;
        if (*sup < std::numbers::pi / 2.0 - kGraphicalMargin) return s.t;
    }
    return std::nullopt;
}

bool line_crosses_once(const PlanarCurve& curve, double theta) {
    const Vec2 d = unit_from_angle(theta);
    const auto pts = curve.points();
    const std::size_t n = pts.size();
    auto sign_of = [&](std::size_t i) {
        const double f = cross(d, pts[i]);
        const double tol = 1e-12 * std::max(1.0, norm(pts[i]));
        if (f > tol) return 1;
        if (f < -tol) return -1;
        return 0;
    };
    if (curve.is_closed()) return false;
    int prev = sign_of(0);
    if (prev == 0 || sign_of(n - 1) == 0) return false;
    int crossings = 0;
    bool in_zero = false;
    for (std::size_t i = 1; i < n; ++i) {
        const int s = sign_of(i);
        if (s == 0) {
            in_zero = true;
            continue;
        }
        if (s != prev) {
            ++crossings;
        } else if (in_zero) {
            return false;
        }
        in_zero = false;
        prev = s;
        if (crossings > 1) return false;
    }
    return crossings == 1;
}

std::optional<std::pair<double, double>> detect_polar_sector(const Snapshot& snapshot) {
    const std::size_t count = static_cast<std::size_t>(std::ceil(std::numbers::pi / kSectorResolution));
    std::vector<char> good(count);
    for (std::size_t k = 0; k < count; ++k)
        good[k] = line_crosses_once(snapshot.curve, static_cast<double>(k) * kSectorResolution) ? 1 : 0;
    if (std::all_of(good.begin(), good.end(), [](char g) { return g != 0; }))
        return std::pair{0.0, static_cast<double>(count - 1) * kSectorResolution};
    std::size_t best_len = 0;
    std::size_t best_start = 0;
    // start scanning just after a bad sample so runs never straddle the scan origin
    std::size_t origin = 0;
    while (good[origin]) ++origin;
    std::size_t run_start = 0;
    std::size_t run_len = 0;
    for (std::size_t j = 1; j <= count; ++j) {
        const std::size_t k = (origin + j) % count;
        if (good[k]) {
            if (run_len == 0) run_start = k;
            ++run_len;
            if (run_len > best_len) {
                best_len = run_len;
                best_start = run_start;
            }
        } else {
            run_len = 0;
        }
    }
    if (best_len == 0) return std::nullopt;
    const double lo = static_cast<double>(best_start) * kSectorResolution;
    return std::pair{lo, lo + static_cast<double>(best_len - 1) * kSectorResolution};
}

FlowTrace fixed_label_window(const Snapshot& start, const WindowConfig& config) {
    if (!(config.dt > 0.0) || config.steps == 0) throw ConfigError("window needs dt > 0 and steps > 0");
    FlowTrace trace;
    trace.config.dt = config.dt;
    trace.config.t_end = start.t + static_cast<double>(config.steps) * config.dt;
    trace.config.scheme = Scheme::explicit_euler;
    trace.config.resample_every = 0;
    trace.config.n_nodes = start.curve.size();
    if (start.curve.ends()) trace.config.pin_radius = start.curve.ends()->pin_radius;
    trace.snapshots.push_back(start);
    std::vector<Vec2> pts(start.curve.points().begin(), start.curve.points().end());
    Stepper stepper(start.curve.is_closed());
    for (std::size_t k = 1; k <= config.steps; ++k) {
        const double h = min_spacing(pts, start.curve.is_closed());
        if (config.dt > 0.25 * h * h)
            throw StepError("window dt exceeds the explicit stability bound 0.25*h_min^2; use a smaller window step");
        stepper.advance(pts, config.dt, Scheme::explicit_euler);
        const double t = start.t + static_cast<double>(k) * config.dt;
        trace.snapshots.push_back(make_snapshot(t, rebuild(pts, start.curve)));
        trace.config.record_times.push_back(t);
    }
    return trace;
}

FlowTrace fixed_label_window(const FlowTrace& trace, double t0, const WindowConfig& config) {
    if (trace.snapshots.empty()) throw ConfigError("empty trace");
    const Snapshot* best = &trace.snapshots.front();
    for (const Snapshot& s : trace.snapshots) {
        if (std::abs(s.t - t0) < std::abs(best->t - t0)) best = &s;
    }
    return fixed_label_window(*best, config);
}

}  // namespace csf
