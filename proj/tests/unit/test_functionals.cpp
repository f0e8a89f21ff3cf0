#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace csf;
using namespace csf::test;

namespace {

PairExtrema brute_extrema(const std::vector<double>& g) {
    PairExtrema r;
    for (std::size_t v = 0; v < g.size(); ++v) {
        for (std::size_t w = v; w < g.size(); ++w) {
            const double d = g[w] - g[v];
            if (d > r.max) r.max = d;
            if (d < r.min) r.min = d;
        }
    }
    return r;
}

std::vector<Vec2> reflect_points(std::span<const Vec2> pts) {
    std::vector<Vec2> out;
    for (Vec2 p : pts) out.push_back({p.x, -p.y});
    return out;
}

/// First end from radius 1e4 along the negative x-axis, a quarter circle of radius 1, then up the y-axis.
PlanarCurve long_ray_curve(std::size_t& arc_mid) {
    std::vector<Vec2> pts;
    const int ray = 400;
    for (int k = 0; k < ray; ++k) pts.push_back({-std::pow(1e4, 1.0 - static_cast<double>(k) / ray), 0.0});
    const int arc = 200;
    for (int k = 0; k <= arc; ++k) {
        const double s = kPi / 2 * static_cast<double>(k) / arc;
        pts.push_back({-1.0 + std::sin(s), 1.0 - std::cos(s)});
    }
    arc_mid = ray + arc / 2;
    for (int k = 1; k <= 40; ++k) pts.push_back({0.0, 1.0 + 0.1 * k});
    return PlanarCurve::open(pts);
}

}  // namespace

TEST(PairExtrema, ExampleSequence) {
    const std::vector<double> S{0, 1, -2, 3};
    const PairExtrema e = pair_extrema(S);
    EXPECT_DOUBLE_EQ(e.max, 5.0);
    EXPECT_EQ(e.max_v, 2u);
    EXPECT_EQ(e.max_w, 3u);
    EXPECT_DOUBLE_EQ(e.min, -3.0);
    EXPECT_EQ(e.min_v, 1u);
    EXPECT_EQ(e.min_w, 2u);
}

TEST(PairExtrema, MatchesBruteForce) {
    std::mt19937_64 rng(1234);
    std::normal_distribution<double> step(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> g(1 + trial % 37);
        for (std::size_t i = 1; i < g.size(); ++i) g[i] = g[i - 1] + step(rng);
        const PairExtrema fast = pair_extrema(g);
        const PairExtrema slow = brute_extrema(g);
        ASSERT_DOUBLE_EQ(fast.max, slow.max) << trial;
        ASSERT_DOUBLE_EQ(fast.min, slow.min) << trial;
        ASSERT_LE(fast.max_v, fast.max_w);
        ASSERT_LE(fast.min_v, fast.min_w);
        ASSERT_DOUBLE_EQ(g[fast.max_w] - g[fast.max_v], fast.max);
        ASSERT_DOUBLE_EQ(g[fast.min_w] - g[fast.min_v], fast.min);
    }
}

TEST(PairExtrema, MonotoneSequenceHasZeroMinimum) {
    const std::vector<double> g{0, 0.5, 1.5, 4};
    const PairExtrema e = pair_extrema(g);
    EXPECT_EQ(e.min, 0.0);
    EXPECT_EQ(e.max, 4.0);
}

TEST(PairExtrema, BoundaryFamiliesOnly) {
    const std::vector<double> S{0, 1, -2, 3};
    const PairExtrema b = boundary_extrema(S);
    EXPECT_DOUBLE_EQ(b.max, 5.0);
    EXPECT_EQ(b.max_w, 3u);
    EXPECT_DOUBLE_EQ(b.min, -2.0);
    EXPECT_EQ(b.min_v, 0u);
}

TEST(SweptArea, UnitCircleFullTurn) {
    for (std::size_t n : {64u, 256u, 1024u}) {
        const PlanarCurve c = unit_circle(n);
        const SweptAreaPrefix p = swept_area_prefix(c);
        ASSERT_EQ(p.size(), n + 1);
        const double polygon = 0.5 * static_cast<double>(n) * std::sin(2 * kPi / static_cast<double>(n));
        EXPECT_NEAR(p.area(0, n), -polygon, 1e-12);
        EXPECT_NEAR(p.area(0, n), -kPi, 4.0 * kPi * kPi * kPi / (3.0 * static_cast<double>(n * n)));
    }
}

TEST(SweptArea, MatchesTriangleSumAndIsAdditive) {
    const PlanarCurve c = corpus_curve("random_wiggle", 1201);
    const SweptAreaPrefix p = swept_area_prefix(c);
    const auto pts = c.points();
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
    for (int k = 0; k < 200; ++k) {
        std::size_t v = pick(rng);
        std::size_t w = pick(rng);
        std::size_t u = pick(rng);
        if (v > w) std::swap(v, w);
        u = v + (u % (w - v + 1));
        EXPECT_NEAR(p.area(v, w), triangle_sum(pts, v, w), 1e-9);
        EXPECT_NEAR(p.area(v, u) + p.area(u, w), p.area(v, w), 1e-9);
    }
}

TEST(SweptArea, RadialSegmentsSweepNothing) {
    const PlanarCurve c = PlanarCurve::open({{-5, 0}, {-3, 0}, {-1, 0}});
    EXPECT_EQ(swept_area_prefix(c).S.back(), 0.0);
}

TEST(SweptArea, ExtremaBoundsExample) {
    SweptAreaPrefix p;
    p.S = {0, 1, -2, 3};
    const ExtremaBounds b = extrema_bounds(p);
    EXPECT_DOUBLE_EQ(b.a_plus, 5.0);
    EXPECT_DOUBLE_EQ(b.a_minus, -3.0);
    EXPECT_EQ(b.plus_v, 2u);
    EXPECT_EQ(b.minus_w, 2u);
}

TEST(Turning, QuarterCircle) {
    const PlanarCurve c = quarter_arc(181);
    const TangentField lift = tangent_lift(c);
    EXPECT_NEAR(turning(lift, 0, 180), kPi / 2 - kPi / 360, 1e-12);
    EXPECT_THROW(turning(lift, 5, 4), DomainError);
}

TEST(Harnack, CombinesAreaAndTurning) {
    const PlanarCurve c = corpus_curve("bent_line", 801);
    const TangentField lift = tangent_lift(c);
    const SweptAreaPrefix p = swept_area_prefix(c);
    EXPECT_DOUBLE_EQ(harnack(p, lift, 0.0, 10, 700), p.area(10, 700));
    EXPECT_NEAR(harnack(p, lift, 2.0, 10, 700), p.area(10, 700) - 2.0 * (lift.psi[700] - lift.psi[10]), 1e-14);
    EXPECT_THROW(harnack(p, lift, -1.0, 0, 1), DomainError);
}

TEST(Winding, QuarterCircleEnds) {
    const PlanarCurve c = quarter_arc(181);
    const TangentField lift = tangent_lift(c);
    const double h = 2 * std::sin(kPi / 720);
    EXPECT_NEAR(winding_trace(c, lift, 0).theta[180], kPi / 4, h);
    EXPECT_NEAR(winding_trace(c, lift, 180).theta[0], -kPi / 4, h);
}

TEST(Winding, BaseValueIsZeroAndNeighboursSmall) {
    const PlanarCurve c = corpus_curve("bent_line", 801);
    const TangentField lift = tangent_lift(c);
    const WindingTrace w = winding_trace(c, lift, 400);
    EXPECT_EQ(w.theta[400], 0.0);
    EXPECT_LT(std::abs(w.theta[401]), 0.05);
    EXPECT_LT(std::abs(w.theta[399]), 0.05);
}

TEST(Winding, BulgeUnwindsPastQuarterTurn) {
    const auto [c, v] = bulge_curve();
    const TangentField lift = tangent_lift(c);
    EXPECT_NEAR(lift.psi[v], kPi / 2, 1e-12);
    const WindingTrace w = winding_trace(c, lift, v);
    EXPECT_NEAR(w.theta.back(), kPi / 4, 1e-6);
    double lowest = 0.0;
    for (std::size_t u = v + 1; u < c.size(); ++u) lowest = std::min(lowest, w.theta[u]);
    EXPECT_LT(lowest, -0.2);
    const std::size_t top = c.size() - 41;
    EXPECT_NEAR(c[top].x, 0.0, 1e-15);
    EXPECT_NEAR(c[top].y, 2.0, 1e-15);
    EXPECT_LT(swept_area_prefix(c).area(v, top), 0.0);
    EXPECT_LT(winding_identity_residual(c, lift, v, c.size() - 1), 1e-12);
}

TEST(Winding, IdentityOnRandomSubArcs) {
    for (const std::string& g : {"random_wiggle", "spiral", "zigzag"}) {
        const PlanarCurve c = corpus_curve(g, 1201);
        const TangentField lift = tangent_lift(c);
        std::mt19937_64 rng(7);
        std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
        int used = 0;
        while (used < 200) {
            std::size_t a = pick(rng);
            std::size_t b = pick(rng);
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            EXPECT_LT(winding_identity_residual(c, lift, a, b), 1e-9) << g << " " << a << " " << b;
            ++used;
        }
    }
}

TEST(Winding, FarEndLimitGivesTurning) {
    std::size_t d = 0;
    const PlanarCurve c = long_ray_curve(d);
    const TangentField lift = tangent_lift(c);
    const double psi = turning(lift, 0, d);
    EXPECT_NEAR(psi, kPi / 4, 1e-2);
    EXPECT_NEAR(winding_trace(c, lift, 0).theta[d], 0.0, 1e-3);
    EXPECT_NEAR(psi, -winding_trace(c, lift, d).theta[0], 1e-3);
}

TEST(Winding, OutOfRangeBaseRejected) {
    const PlanarCurve c = quarter_arc(11);
    EXPECT_THROW(winding_trace(c, tangent_lift(c), 11), DomainError);
}

TEST(Support, HorizontalLineIsConstant) {
    std::vector<Vec2> pts;
    for (int k = -50; k <= 50; ++k) pts.push_back({0.1 * k, 0.7});
    const PlanarCurve c = PlanarCurve::open(pts);
    const SupportField f = support_function(c, tangent_lift(c));
    for (double d : f.D) EXPECT_NEAR(d, 0.7, 1e-15);
}

TEST(Support, CircleIsRadius) {
    const PlanarCurve c = PlanarCurve::closed(circle_points(720, 2.5));
    const SupportField f = support_function(c, tangent_lift(c));
    for (double d : f.D) EXPECT_NEAR(d, -2.5, 1e-4);
}

TEST(Support, VanishesOnRadialEnds) {
    const PlanarCurve c = corpus_curve("bent_line", 801);
    const SupportField f = support_function(c, tangent_lift(c));
    EXPECT_NEAR(f.D.front(), 0.0, 1e-12);
    EXPECT_NEAR(f.D.back(), 0.0, 1e-12);
}

TEST(Polar, WedgeCornerIsPolarGraph) {
    const PlanarCurve c = corpus_curve("bent_line", 801);
    const PolarResult r = polar_view(c);
    ASSERT_TRUE(r.ok);
    EXPECT_NEAR(r.view.phis.front(), 0.0, 1e-12);
    EXPECT_NEAR(r.view.phis.back(), kPi / 2, 1e-12);
    const SweptAreaPrefix p = swept_area_prefix(c);
    const double h = max_segment_length(c);
    EXPECT_NEAR(r.view.area(0, 800), p.area(0, 800), 10 * h * h);
    EXPECT_NEAR(r.view.area(100, 500), p.area(100, 500), 10 * h * h);
}

TEST(Polar, ClockwiseArcAboutOrigin) {
    std::vector<Vec2> pts;
    const std::size_t n = 401;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(2.0 * unit_from_angle(kPi - kPi / 2 * static_cast<double>(i) / (n - 1)));
    const PlanarCurve c = PlanarCurve::open(pts);
    const PolarResult r = polar_view(c);
    ASSERT_TRUE(r.ok);
    EXPECT_NEAR(r.view.phis.back(), kPi / 2, 1e-12);
    EXPECT_NEAR(r.view.area(0, n - 1), kPi, 1e-12);
    const double dphi = kPi / 2 / (n - 1);
    const double exact = 2.0 * (n - 1) * std::sin(dphi);
    EXPECT_NEAR(swept_area_prefix(c).area(0, n - 1), exact, 1e-12);
    EXPECT_TRUE(polar_view(reflected_reversed(c)).ok);
    EXPECT_FALSE(polar_view(PlanarCurve::open(reflect_points(c.points()))).ok);
}

TEST(Polar, SpiralFails) {
    const PlanarCurve c = corpus_curve("spiral", 2001);
    const PolarResult r = polar_view(c);
    EXPECT_FALSE(r.ok);
    EXPECT_LT(r.witness_node, c.size());
}

TEST(Polar, OriginNodeThrows) {
    const PlanarCurve c = PlanarCurve::open({{-1, 0}, {0, 0}, {0, 1}});
    EXPECT_THROW(polar_view(c), DomainError);
}

TEST(Reflection, NegatesAreaTurningAndWinding) {
    const PlanarCurve c = corpus_curve("random_wiggle", 801);
    const auto pts = c.points();
    const PlanarCurve r = PlanarCurve::open(reflect_points(pts));
    const TangentField lc = tangent_lift(c);
    const TangentField lr = tangent_lift(r);
    const SweptAreaPrefix pc = swept_area_prefix(c);
    const SweptAreaPrefix pr = swept_area_prefix(r);
    const WindingTrace wc = winding_trace(c, lc, 300);
    const WindingTrace wr = winding_trace(r, lr, 300);
    for (std::size_t w = 0; w < c.size(); w += 7) {
        EXPECT_EQ(pr.area(0, w), -pc.area(0, w));
        EXPECT_NEAR(turning(lr, 0, w), -turning(lc, 0, w), 1e-12);
        EXPECT_NEAR(wr.theta[w], -wc.theta[w], 1e-12);
    }
}

TEST(Reflection, ReflectReverseKeepsFunctionalsUnderRemap) {
    const PlanarCurve c = corpus_curve("zigzag", 801);
    const PlanarCurve r = reflected_reversed(c);
    const std::size_t last = c.size() - 1;
    const TangentField lc = tangent_lift(c);
    const TangentField lr = tangent_lift(r);
    const SweptAreaPrefix pc = swept_area_prefix(c);
    const SweptAreaPrefix pr = swept_area_prefix(r);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, last);
    for (int k = 0; k < 200; ++k) {
        std::size_t v = pick(rng);
        std::size_t w = pick(rng);
        if (v > w) std::swap(v, w);
        EXPECT_NEAR(pr.area(last - w, last - v), pc.area(v, w), 1e-12);
        EXPECT_NEAR(turning(lr, last - w, last - v), turning(lc, v, w), 1e-12);
    }
}
