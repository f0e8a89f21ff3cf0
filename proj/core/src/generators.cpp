#include "csf/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "csf/errors.hpp"
#include "csf/exact.hpp"
#include "csf/numerics.hpp"

namespace csf {

namespace {

constexpr double kPi = std::numbers::pi;

/// A curve piece parametrized on [0,1]; straight pieces are sampled exactly.
struct Piece {
    std::function<Vec2(double)> f;
    bool straight{false};
    std::vector<double> tau;
    std::vector<double> s;
    double length{0.0};
};

Piece radial_piece(double angle, double r0, double r1) {
    Piece p;
    p.straight = true;
    const Vec2 d = unit_from_angle(angle);
    p.f = [d, r0, r1](double t) { return (r0 + t * (r1 - r0)) * d; };
    p.length = std::abs(r1 - r0);
    return p;
}

Piece curved_piece(std::function<Vec2(double)> f, std::size_t samples = 40000) {
    Piece p;
    p.f = std::move(f);
    p.tau.resize(samples + 1);
    p.s.resize(samples + 1);
    Vec2 prev = p.f(0.0);
    p.s[0] = 0.0;
    p.tau[0] = 0.0;
    for (std::size_t k = 1; k <= samples; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(samples);
        const Vec2 q = p.f(t);
        p.tau[k] = t;
        p.s[k] = p.s[k - 1] + norm(q - prev);
        prev = q;
    }
    p.length = p.s.back();
    return p;
}

std::vector<Vec2> sample_pieces(const std::vector<Piece>& pieces, std::size_t n) {
    double total = 0.0;
    std::vector<double> start;
    for (const Piece& p : pieces) {
        start.push_back(total);
        total += p.length;
    }
    const double h = total / static_cast<double>(n - 1);
    std::vector<Vec2> out(n);
    std::size_t piece = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double sk = h * static_cast<double>(k);
        while (piece + 1 < pieces.size() && sk > start[piece] + pieces[piece].length) ++piece;
        const Piece& p = pieces[piece];
        double local = std::clamp(sk - start[piece], 0.0, p.length);
        // snap onto piece boundaries so corners land exactly on a node
        if (std::abs(local - p.length) < 1e-9 * h) local = p.length;
        if (local < 1e-9 * h) local = 0.0;
        double t;
        if (p.straight) {
            t = p.length > 0.0 ? local / p.length : 0.0;
        } else {
            t = lerp_table(p.s, p.tau, local);
        }
        if (local == p.length) t = 1.0;
        out[k] = p.f(t);
    }
    out.front() = pieces.front().f(0.0);
    out.back() = pieces.back().f(1.0);
    return out;
}

double param(const InitialCurveSpec& spec, const std::string& key) {
    const auto& defaults = generator_defaults(spec.generator);
    const auto it = spec.params.find(key);
    if (it != spec.params.end()) return it->second;
    return defaults.at(key);
}

/// Uniform double in [0,1) from raw 64-bit output; independent of library distribution internals.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Vec2 polar_point(double phi, double r) { return r * unit_from_angle(kPi - phi); }

std::vector<Piece> spiral_pieces(const InitialCurveSpec& spec, double alpha) {
    const double turns = param(spec, "turns");
    const double r0 = param(spec, "outer_radius");
    const double pitch = param(spec, "pitch");
    const double c = pitch / (2.0 * kPi);
    const double theta_end = kPi + 2.0 * kPi * turns;
    if (!(turns > 0.0) || !(pitch > 0.0) || r0 - pitch * (turns + 0.75) <= 0.0)
        throw ConfigError("spiral needs outer_radius > pitch * (turns + 3/4)");
    if (r0 - c * alpha >= spec.pin_radius) throw ConfigError("spiral does not fit inside pin_radius");
    std::vector<Piece> pieces;
    pieces.push_back(radial_piece(kPi, spec.pin_radius, r0));
    pieces.push_back(curved_piece([=](double t) {
        const double th = kPi + t * (theta_end - kPi);
        return (r0 - c * (th - kPi)) * unit_from_angle(th);
    }));
    const double r_outer = r0 - c * (theta_end - kPi);
    const double rho = pitch / 4.0;
    const Vec2 u = unit_from_angle(theta_end);
    const Vec2 v = perp(u);
    const Vec2 centre = (r_outer - rho) * u;
    pieces.push_back(curved_piece([=](double t) {
        const double sg = kPi * t;
        return centre + rho * (std::cos(sg) * u + std::sin(sg) * v);
    }, 4000));
    pieces.push_back(curved_piece([=](double t) {
        const double th = theta_end + t * (alpha - theta_end);
        return (r0 - c * (th - kPi) - kPi * c) * unit_from_angle(th);
    }));
    pieces.push_back(radial_piece(alpha, r0 - c * alpha, spec.pin_radius));
    return pieces;
}

std::vector<Piece> zigzag_pieces(const InitialCurveSpec& spec, double beta) {
    long k = std::lround(param(spec, "passes"));
    if (k < 1) throw ConfigError("zigzag needs at least one pass");
    if (k % 2 == 0) ++k;
    const double r_in = param(spec, "inner_radius");
    const double dr = param(spec, "spacing");
    const double margin = param(spec, "margin") * beta;
    const double lo = margin;
    const double hi = beta - margin;
    const double r_last = r_in + dr * static_cast<double>(k - 1);
    if (!(r_in > 0.0) || !(dr > 0.0) || r_last >= spec.pin_radius || !(hi > lo))
        throw ConfigError("zigzag parameters out of range");
    std::vector<Piece> pieces;
    pieces.push_back(radial_piece(kPi, spec.pin_radius, r_in));
    for (long j = 0; j < k; ++j) {
        const double r = r_in + dr * static_cast<double>(j);
        double from = (j % 2 == 0) ? lo : hi;
        double to = (j % 2 == 0) ? hi : lo;
        if (j == 0) from = 0.0;
        if (j == k - 1) to = beta;
        pieces.push_back(curved_piece([=](double t) { return polar_point(from + t * (to - from), r); }, 8000));
        if (j + 1 < k) pieces.push_back(radial_piece(kPi - to, r, r + dr));
    }
    pieces.push_back(radial_piece(kPi - beta, r_last, spec.pin_radius));
    return pieces;
}

std::vector<Piece> wiggle_pieces(const InitialCurveSpec& spec, double beta) {
    const long modes = std::lround(param(spec, "modes"));
    const double amp = param(spec, "amplitude");
    const double r_in = param(spec, "inner_radius");
    const double r_out = param(spec, "outer_radius");
    if (modes < 1 || !(amp > 0.0 && amp < 1.0) || !(r_in > 0.0) || !(r_out > r_in) || r_out >= spec.pin_radius)
        throw ConfigError("random_wiggle parameters out of range");
    std::mt19937_64 rng(spec.seed);
    std::vector<double> a(static_cast<std::size_t>(modes));
    std::vector<double> ph(static_cast<std::size_t>(modes));
    for (long m = 0; m < modes; ++m) {
        a[static_cast<std::size_t>(m)] = (2.0 * uniform01(rng) - 1.0) * 2.0 / std::sqrt(static_cast<double>(m + 1));
        ph[static_cast<std::size_t>(m)] = 2.0 * kPi * uniform01(rng);
    }
    auto f = [=](double t) {
        double sum = 0.0;
        for (std::size_t m = 0; m < a.size(); ++m)
            sum += a[m] * std::sin(2.0 * kPi * static_cast<double>(m + 1) * t + ph[m]);
        const double w = amp * std::tanh(sum);
        const double h = t + w * t * (1.0 - t);
        const double smooth = t * t * (3.0 - 2.0 * t);
        return polar_point(beta * h, r_in + (r_out - r_in) * smooth);
    };
    std::vector<Piece> pieces;
    pieces.push_back(radial_piece(kPi, spec.pin_radius, r_in));
    pieces.push_back(curved_piece(f, 80000));
    pieces.push_back(radial_piece(kPi - beta, r_out, spec.pin_radius));
    return pieces;
}

std::vector<Piece> bent_line_pieces(const InitialCurveSpec& spec, double alpha, double beta) {
    const double rho = param(spec, "corner_radius");
    if (alpha <= 0.0 || rho <= 0.0) {
        return {radial_piece(kPi, spec.pin_radius, 0.0), radial_piece(alpha, 0.0, spec.pin_radius)};
    }
    const double reach = rho / std::tan(beta / 2.0);
    if (reach >= spec.pin_radius) throw ConfigError("corner_radius too large for pin_radius");
    const Vec2 centre{-reach, rho};
    std::vector<Piece> pieces;
    pieces.push_back(radial_piece(kPi, spec.pin_radius, reach));
    pieces.push_back(curved_piece([=](double t) {
        const double sg = -kPi / 2.0 + t * alpha;
        return centre + rho * unit_from_angle(sg);
    }, 8000));
    pieces.push_back(radial_piece(alpha, reach, spec.pin_radius));
    return pieces;
}

std::vector<Piece> perturbed_wedge_pieces(const InitialCurveSpec& spec, double beta) {
    const double radius = param(spec, "radius");
    const double amp = param(spec, "amplitude");
    if (!(radius > 0.0) || amp <= -1.0 || radius * (1.0 + std::max(amp, 0.0)) >= spec.pin_radius)
        throw ConfigError("perturbed_wedge parameters out of range");
    std::vector<Piece> pieces;
    pieces.push_back(radial_piece(kPi, spec.pin_radius, radius));
    pieces.push_back(curved_piece([=](double t) {
        const double s = std::sin(kPi * t);
        return polar_point(beta * t, radius * (1.0 + amp * s * s));
    }, 20000));
    pieces.push_back(radial_piece(kPi - beta, radius, spec.pin_radius));
    return pieces;
}

PlanarCurve finish_radial(std::vector<Vec2> pts, const InitialCurveSpec& spec) {
    const double rot = -canonical_rotation(spec.angle_a);
    if (rot != 0.0) {
        for (Vec2& p : pts) p = rotate(p, rot);
    }
    const EmbeddingReport rep = embeddedness_check(pts, false);
    if (!rep.ok) throw NotEmbeddedError(rep.first, rep.second);
    return PlanarCurve::radial(std::move(pts), spec.angle_a, spec.angle_b, spec.pin_radius);
}

}  // namespace

double sector_opening(double angle_a, double angle_b) {
    double alpha = std::fmod(angle_b + canonical_rotation(angle_a), 2.0 * kPi);
    if (alpha < 0.0) alpha += 2.0 * kPi;
    if (alpha >= 2.0 * kPi - 1e-12) alpha = 0.0;
    if (!(alpha < kPi)) throw ConfigError("end angles give alpha outside [0, pi); reverse the orientation");
    return kPi - alpha;
}

const std::vector<std::string>& generator_names() {
    static const std::vector<std::string> names{"wedge",  "bent_line", "spiral", "zigzag",     "random_wiggle",
                                                "perturbed_wedge", "circle", "oval", "from_points"};
    return names;
}

const std::map<std::string, double>& generator_defaults(const std::string& generator) {
    static const std::map<std::string, std::map<std::string, double>> table{
        {"wedge", {}},
        {"bent_line", {{"corner_radius", 0.5}}},
        {"spiral", {{"turns", 3.0}, {"outer_radius", 0.6}, {"pitch", 0.14}}},
        {"zigzag", {{"passes", 5.0}, {"inner_radius", 0.3}, {"spacing", 0.15}, {"margin", 0.1}}},
        {"random_wiggle", {{"modes", 6.0}, {"amplitude", 0.9}, {"inner_radius", 0.3}, {"outer_radius", 1.0}}},
        {"perturbed_wedge", {{"radius", 0.5}, {"amplitude", 0.5}}},
        {"circle", {{"radius", 1.0}}},
        {"oval", {{"a", 5.0}, {"t", 3.0}}},
        {"from_points", {{"closed", 0.0}}},
    };
    const auto it = table.find(generator);
    if (it == table.end()) throw ConfigError("unknown generator '" + generator + "'");
    return it->second;
}

PlanarCurve build_initial_curve(const InitialCurveSpec& spec) {
    const auto& defaults = generator_defaults(spec.generator);
    for (const auto& [key, value] : spec.params) {
        if (!defaults.contains(key)) throw ConfigError("generator '" + spec.generator + "' has no parameter '" + key + "'");
        if (!std::isfinite(value)) throw ConfigError("parameter '" + key + "' is not finite");
    }
    if (spec.n < 3) throw ConfigError("n must be at least 3");
    const std::string& g = spec.generator;
    if (g == "circle") {
        const double r = param(spec, "radius");
        if (!(r > 0.0)) throw ConfigError("circle radius must be positive");
        std::vector<Vec2> pts(spec.n);
        for (std::size_t i = 0; i < spec.n; ++i)
            pts[i] = r * unit_from_angle(2.0 * kPi * static_cast<double>(i) / static_cast<double>(spec.n));
        return PlanarCurve::closed(std::move(pts));
    }
    if (g == "oval") return angenent_oval(param(spec, "a"), param(spec, "t"), spec.n);
    if (g == "from_points") {
        std::vector<Vec2> pts = spec.points;
        if (pts.size() < 3) throw CurveError("from_points needs at least 3 points");
        const bool closed = param(spec, "closed") != 0.0;
        const EmbeddingReport rep = embeddedness_check(pts, closed);
        if (!rep.ok) throw NotEmbeddedError(rep.first, rep.second);
        if (closed) return PlanarCurve::closed(std::move(pts));
        if (distance_to_ray(pts.front(), spec.angle_a) <= kRayTolerance &&
            distance_to_ray(pts.back(), spec.angle_b) <= kRayTolerance)
            return PlanarCurve::radial(std::move(pts), spec.angle_a, spec.angle_b, spec.pin_radius);
        return PlanarCurve::open(std::move(pts));
    }
    if (!(spec.pin_radius > 0.0)) throw ConfigError("pin_radius must be positive");
    const double beta = sector_opening(spec.angle_a, spec.angle_b);
    const double alpha = kPi - beta;
    std::vector<Piece> pieces;
    if (g == "wedge") {
        pieces = {radial_piece(kPi, spec.pin_radius, 0.0), radial_piece(alpha, 0.0, spec.pin_radius)};
    } else if (g == "bent_line") {
        pieces = bent_line_pieces(spec, alpha, beta);
    } else if (g == "spiral") {
        pieces = spiral_pieces(spec, alpha);
    } else if (g == "zigzag") {
        pieces = zigzag_pieces(spec, beta);
    } else if (g == "random_wiggle") {
        pieces = wiggle_pieces(spec, beta);
    } else if (g == "perturbed_wedge") {
        pieces = perturbed_wedge_pieces(spec, beta);
    } else {
        throw ConfigError("unknown generator '" + g + "'");
    }
    return finish_radial(sample_pieces(pieces, spec.n), spec);
}

}  // namespace csf
