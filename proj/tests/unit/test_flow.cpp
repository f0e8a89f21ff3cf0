#include <gtest/gtest.h>

#include "support.hpp"

using namespace csf;
using namespace csf::test;

namespace {

FlowConfig open_config(double t_end, double pin = 8.0) {
    FlowConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = t_end;
    cfg.pin_radius = pin;
    for (double t = 0.25; t <= t_end + 1e-12; t += 0.25) cfg.record_times.push_back(t);
    return cfg;
}

PlanarCurve x_axis_line(std::size_t n, double pin) {
    std::vector<Vec2> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = {-pin + 2 * pin * static_cast<double>(i) / static_cast<double>(n - 1), 0.0};
    return PlanarCurve::radial(pts, kPi, 0.0, pin);
}

double mean_radius(const PlanarCurve& c) {
    double sum = 0.0;
    for (Vec2 p : c.points()) sum += norm(p);
    return sum / static_cast<double>(c.size());
}

}  // namespace

TEST(Flow, StaticLineIsFixedPoint) {
    const PlanarCurve line = x_axis_line(400, 8.0);
    const FlowTrace trace = run(line, open_config(1.0));
    const PlanarCurve& end = trace.snapshots.back().curve;
    ASSERT_EQ(end.size(), line.size());
    for (std::size_t i = 0; i < end.size(); ++i) EXPECT_LT(std::abs(end[i].y), 1e-12) << i;
}

TEST(Flow, ShrinkingCircleRadius) {
    FlowConfig cfg;
    cfg.dt = 1e-4;
    cfg.t_end = 0.3;
    cfg.record_times = {0.1, 0.2, 0.3};
    const FlowTrace trace = run(unit_circle(400), cfg);
    ASSERT_EQ(trace.snapshots.size(), 4u);
    for (const Snapshot& s : trace.snapshots) {
        const double exact = std::sqrt(1.0 - 2.0 * s.t);
        EXPECT_NEAR(mean_radius(s.curve), exact, 2e-3) << s.t;
        const PlanarCurve ref = shrinking_circle(1.0, s.t, 4000);
        EXPECT_LT(hausdorff_distance(s.curve.points(), true, ref.points(), true), 2e-3) << s.t;
    }
}

TEST(Flow, OvalFollowsLevelSets) {
    const double a = 5.0;
    FlowConfig cfg;
    cfg.dt = 1e-4;
    cfg.t_end = 0.5;
    cfg.record_times = {0.25, 0.5};
    const FlowTrace trace = run(angenent_oval(a, 3.0, 600), cfg);
    for (const Snapshot& s : trace.snapshots) {
        const PlanarCurve ref = angenent_oval(a, 3.0 + s.t, 4000);
        EXPECT_LT(hausdorff_distance(s.curve.points(), true, ref.points(), true), 5e-3) << s.t;
    }
}

TEST(Flow, ZeroEndTimeRecordsInitialOnly) {
    const PlanarCurve c = corpus_curve("bent_line", 401);
    FlowConfig cfg = open_config(0.0, 8.0);
    const FlowTrace trace = run(c, cfg);
    ASSERT_EQ(trace.snapshots.size(), 1u);
    EXPECT_EQ(trace.snapshots[0].t, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(trace.snapshots[0].curve[i], c[i]);
}

TEST(Flow, SpiralStaysEmbeddedAndEndsStayPinned) {
    const PlanarCurve c = corpus_curve("spiral", 801);
    const FlowTrace trace = run(c, open_config(1.0));
    for (const Snapshot& s : trace.snapshots) {
        EXPECT_TRUE(embeddedness_check(s.curve).ok) << s.t;
        EXPECT_EQ(s.curve.points().front(), c.points().front());
        EXPECT_EQ(s.curve.points().back(), c.points().back());
    }
}

TEST(Flow, LengthDoesNotIncrease) {
    const FlowTrace trace = run(corpus_curve("zigzag", 801), open_config(1.0));
    double prev = total_length(trace.snapshots.front().curve);
    for (std::size_t k = 1; k < trace.snapshots.size(); ++k) {
        const double len = total_length(trace.snapshots[k].curve);
        EXPECT_LE(len, prev + 1e-9) << trace.snapshots[k].t;
        prev = len;
    }
}

TEST(Flow, WedgeMatchesExpanderNearOrigin) {
    const FlowTrace trace = run(corpus_curve("wedge", 1201), open_config(1.0));
    const auto profile = solve_wedge_profile(kPi / 2, 1e-4);
    const std::vector<Vec2> ref = profile.polyline(1.0, 6.0);
    std::vector<Vec2> inner;
    for (Vec2 p : trace.snapshots.back().curve.points())
        if (norm(p) < 3.0) inner.push_back(p);
    EXPECT_LT(directed_distance(inner, ref, false), 5e-3);
}

TEST(Flow, ConfigValidation) {
    const PlanarCurve c = corpus_curve("bent_line", 401);
    FlowConfig cfg = open_config(1.0);
    cfg.dt = 0.0;
    EXPECT_THROW(run(c, cfg), ConfigError);
    cfg = open_config(1.0);
    cfg.t_end = 3.0;
    EXPECT_THROW(run(c, cfg), ConfigError);
    cfg = open_config(1.0);
    cfg.record_times.push_back(2.0);
    EXPECT_THROW(run(c, cfg), ConfigError);
    cfg = open_config(1.0);
    cfg.scheme = Scheme::explicit_euler;
    EXPECT_THROW(run(c, cfg), ConfigError);
    cfg = open_config(1.0, 9.0);
    EXPECT_THROW(run(c, cfg), ConfigError);
}

TEST(Flow, RecordTimesHonoured) {
    FlowConfig cfg = open_config(0.5);
    cfg.record_times = {0.1, 0.35};
    const FlowTrace trace = run(corpus_curve("bent_line", 401), cfg);
    ASSERT_EQ(trace.snapshots.size(), 3u);
    EXPECT_NEAR(trace.snapshots[1].t, 0.1, 1e-12);
    EXPECT_NEAR(trace.snapshots[2].t, 0.35, 1e-12);
}

TEST(Flow, ResamplingKeepsNodeCount) {
    FlowConfig cfg = open_config(0.5);
    cfg.n_nodes = 501;
    const FlowTrace trace = run(corpus_curve("random_wiggle", 801), cfg);
    for (const Snapshot& s : trace.snapshots) EXPECT_EQ(s.curve.size(), 501u);
}

TEST(Frames, CanonicalAndSymmetricRotations) {
    InitialCurveSpec spec;
    spec.generator = "bent_line";
    spec.n = 401;
    spec.angle_a = 0.3;
    spec.angle_b = 0.3 - kPi / 2;
    spec.pin_radius = 8.0;
    const PlanarCurve c = build_initial_curve(spec);
    const auto canon = frame_rotation(c, Frame::canonical);
    ASSERT_TRUE(canon.has_value());
    EXPECT_NEAR(angle_of(rotate(c.points().front(), *canon)), kPi, 1e-9);
    const auto sym = frame_rotation(c, Frame::symmetric);
    ASSERT_TRUE(sym.has_value());
    const Vec2 a = rotate(c.points().front(), *sym);
    const Vec2 b = rotate(c.points().back(), *sym);
    EXPECT_NEAR(a.y, b.y, 1e-9);
    EXPECT_NEAR(a.x, -b.x, 1e-9);
    EXPECT_FALSE(frame_rotation(unit_circle(50), Frame::canonical).has_value());
}

TEST(Graphical, WedgeIsGraphicalAtFirstRecord) {
    const FlowTrace trace = run(corpus_curve("wedge", 801), open_config(1.0));
    const auto t = detect_graphical_time(trace);
    ASSERT_TRUE(t.has_value());
    EXPECT_NEAR(*t, 0.25, 1e-12);
    const auto sup = max_abs_tangent_angle(trace.snapshots.back(), Frame::symmetric);
    ASSERT_TRUE(sup.has_value());
    EXPECT_NEAR(*sup, kPi / 4, 1e-6);
}

TEST(Graphical, SpiralNotGraphicalInitially) {
    const Snapshot s = make_snapshot(0.0, corpus_curve("spiral", 801));
    EXPECT_GT(*max_abs_tangent_angle(s, Frame::symmetric), kPi / 2);
}

TEST(PolarSector, WedgeFlowCoversSecondQuadrant) {
    const FlowTrace trace = run(corpus_curve("wedge", 801), open_config(0.5));
    const auto sector = detect_polar_sector(trace.snapshots.back());
    ASSERT_TRUE(sector.has_value());
    EXPECT_NEAR(sector->first, kPi / 2, 5e-3);
    EXPECT_NEAR(sector->second, kPi, 5e-3);
    EXPECT_TRUE(line_crosses_once(trace.snapshots.back().curve, 3 * kPi / 4));
    EXPECT_FALSE(line_crosses_once(trace.snapshots.back().curve, kPi / 4));
}

TEST(Window, FixedLabelsAndEveryStepRecorded) {
    const Snapshot s = make_snapshot(0.0, corpus_curve("bent_line", 401));
    const double h = min_segment_length(s.curve);
    WindowConfig w;
    w.dt = 0.1 * h * h;
    w.steps = 20;
    const FlowTrace trace = fixed_label_window(s, w);
    ASSERT_EQ(trace.snapshots.size(), 21u);
    for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
        EXPECT_NEAR(trace.snapshots[k].t, static_cast<double>(k) * w.dt, 1e-15);
        EXPECT_EQ(trace.snapshots[k].curve.size(), 401u);
    }
    w.dt = h * h;
    EXPECT_THROW(fixed_label_window(s, w), StepError);
}

TEST(Stepper, LaplacianOfCircleIsInwardCurvature) {
    const std::vector<Vec2> pts = circle_points(360, 2.0);
    Stepper stepper(true);
    const std::vector<Vec2> lap = stepper.laplacian(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        EXPECT_NEAR(lap[i].x, -0.5 * pts[i].x / 2.0, 1e-4);
        EXPECT_NEAR(lap[i].y, -0.5 * pts[i].y / 2.0, 1e-4);
    }
}

TEST(Stepper, PinnedEndsHaveZeroLaplacian) {
    const PlanarCurve c = corpus_curve("bent_line", 201);
    const std::vector<Vec2> pts(c.points().begin(), c.points().end());
    Stepper stepper(false);
    const std::vector<Vec2> lap = stepper.laplacian(pts);
    EXPECT_EQ(lap.front(), (Vec2{0, 0}));
    EXPECT_EQ(lap.back(), (Vec2{0, 0}));
}

TEST(Rotation, PreservesFunctionals) {
    const Snapshot s = make_snapshot(0.0, corpus_curve("zigzag", 801));
    const Snapshot r = rotated(s, 0.7);
    const SweptAreaPrefix a = swept_area_prefix(s.curve);
    const SweptAreaPrefix b = swept_area_prefix(r.curve);
    EXPECT_NEAR(b.S.back(), a.S.back(), 1e-9);
    EXPECT_NEAR(r.lift.psi.back() - r.lift.psi.front(), s.lift.psi.back() - s.lift.psi.front(), 1e-12);
    for (std::size_t i = 0; i < s.curve.size(); i += 50) EXPECT_NEAR(r.curvature.kappa[i], s.curvature.kappa[i], 1e-8);
}
