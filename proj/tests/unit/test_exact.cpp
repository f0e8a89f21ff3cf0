#include <gtest/gtest.h>

#include "support.hpp"

using namespace csf;
using namespace csf::test;

namespace {

double enclosed_area(const PlanarCurve& c) {
    const auto p = c.points();
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += cross(p[i], p[(i + 1) % p.size()]);
    return 0.5 * sum;
}

/// Peak curvature of the expanding profile from an independent support-function ODE solve, frozen.
struct FrozenPeak {
    double beta;
    double kappa_max;
};
constexpr FrozenPeak kFrozenPeaks[] = {
    {kPi / 4, 1.0589706367720413},
    {kPi / 2, 0.5222439959121901},
    {3 * kPi / 4, 0.22992019688955423},
};

}  // namespace

TEST(Oval, SamplesLieOnLevelSet) {
    const double a = 5.0;
    const LevelSetSolution sol = oval_solution(a);
    for (double t : {0.0, 2.0, 4.0}) {
        const PlanarCurve c = angenent_oval(a, t, 500);
        ASSERT_TRUE(c.is_closed());
        for (Vec2 p : c.points()) {
            EXPECT_NEAR(std::sin(p.y), 2 * std::exp(t - a) * std::cosh(p.x - a), 1e-12);
            EXPECT_NEAR(sol.F(p, t), 0.0, 1e-10);
            EXPECT_GT(p.y, 0.0);
            EXPECT_LT(p.y, kPi);
        }
        EXPECT_LT(max_segment_length(c) / min_segment_length(c), 1.01);
        EXPECT_GT(enclosed_area(c), 0.0);
    }
}

TEST(Oval, AreaDecaysAtTwoPi) {
    const double a = 5.0;
    const double dA = enclosed_area(angenent_oval(a, 3.5, 4000)) - enclosed_area(angenent_oval(a, 3.0, 4000));
    EXPECT_NEAR(dA / 0.5, -2 * kPi, 1e-3);
}

TEST(Oval, ExtinctionRejected) {
    EXPECT_THROW(angenent_oval(5.0, 5.0 - std::log(2.0), 100), DomainError);
    EXPECT_NO_THROW(angenent_oval(5.0, 5.0 - std::log(2.0) - 0.01, 100));
}

TEST(Oval, LevelSetResidualSmall) {
    EXPECT_LT(csf_residual(oval_solution(5.0), 3.0, 400, 1e-6), 1e-3);
}

TEST(Reaper, HeightAtShiftedLogTwo) {
    for (double t : {0.0, 0.5, 2.0}) EXPECT_NEAR(grim_reaper_height(t, t + std::log(2.0)), kPi / 6, 1e-15);
    EXPECT_THROW(grim_reaper_height(1.0, 1.0), DomainError);
    EXPECT_THROW(grim_reaper_height(1.0, 0.5), DomainError);
}

TEST(Reaper, SamplesBoundedAndDecreasing) {
    const ReaperSamples s = grim_reaper(1.0, 10.0, 200);
    ASSERT_EQ(s.x.size(), 200u);
    EXPECT_NEAR(s.x.front(), 1.0 + 9.0 / 200, 1e-14);
    EXPECT_NEAR(s.x.back(), 10.0, 1e-14);
    for (std::size_t k = 0; k < s.x.size(); ++k) {
        EXPECT_GT(s.y[k], 0.0);
        EXPECT_LT(s.y[k], kPi / 2);
        EXPECT_LE(s.y[k], (kPi / 2) * std::exp(1.0 - s.x[k]) + 1e-15);
        if (k > 0) EXPECT_LT(s.y[k], s.y[k - 1]);
    }
}

TEST(Reaper, GraphResidualSecondOrder) {
    const double e1 = reaper_graph_residual(0.0, 8.0, 400);
    const double e2 = reaper_graph_residual(0.0, 8.0, 800);
    EXPECT_LT(e2, 2e-3);
    EXPECT_GT(e1 / e2, 3.0);
}

TEST(Circle, ShrinkingRadius) {
    const PlanarCurve c = shrinking_circle(2.0, 1.5, 64);
    for (Vec2 p : c.points()) EXPECT_NEAR(norm(p), 1.0, 1e-14);
    EXPECT_NEAR(c[0].x, 1.0, 1e-14);
    EXPECT_THROW(shrinking_circle(1.0, 0.5, 10), DomainError);
}

TEST(Residual, OvalSecondOrderInSpace) {
    const double e1 = csf_residual(oval_solution(5.0), 3.0, 200, 1e-8);
    const double e2 = csf_residual(oval_solution(5.0), 3.0, 400, 1e-8);
    EXPECT_LT(e2, 1e-4);
    EXPECT_NEAR(e1 / e2, 4.0, 0.2);
}

TEST(Residual, CircleOnlyFirstOrderInTime) {
    const double coarse = csf_residual(circle_solution(1.0), 0.1, 200, 1e-5);
    const double fine = csf_residual(circle_solution(1.0), 0.1, 200, 1e-7);
    EXPECT_LT(fine, 1e-6);
    EXPECT_NEAR(coarse / fine, 100.0, 5.0);
}

TEST(Residual, StaticLine) {
    EXPECT_LT(csf_residual(line_solution(0.4, 5.0), 0.0, 100, 1e-6), 1e-9);
}

TEST(Wedge, PeakCurvatureMatchesFrozenOracle) {
    for (const FrozenPeak& f : kFrozenPeaks) {
        const WedgeProfile p = solve_wedge_profile(f.beta, 1e-4);
        EXPECT_NEAR(p.kappa_max, f.kappa_max, 1e-3) << f.beta;
    }
}

TEST(Wedge, ProfileIdentities) {
    const double beta = kPi / 2;
    const WedgeProfile p = solve_wedge_profile(beta, 1e-4);
    ASSERT_GT(p.psis.size(), 10u);
    EXPECT_NEAR(p.psis.front(), 0.0, 1e-9);
    EXPECT_NEAR(p.psis.back(), kPi - beta, 1e-9);
    for (std::size_t i = 0; i < p.psis.size(); ++i) EXPECT_NEAR(p.D_beta[i], 2 * p.kappa_beta[i], 1e-6) << i;
    EXPECT_NEAR(p.turning_between(0.0, beta), kPi - beta, 1e-6);
    EXPECT_NEAR(p.area_between(0.0, beta), kPi - beta, 1e-3);
    EXPECT_NEAR(p.kappa_at(p.psis[p.psis.size() / 2]), p.kappa_beta[p.psis.size() / 2], 1e-12);
    EXPECT_NEAR(*std::max_element(p.kappa_beta.begin(), p.kappa_beta.end()), p.kappa_max, 1e-6);
}

TEST(Wedge, PolylineScalesWithRootTime) {
    const WedgeProfile p = solve_wedge_profile(kPi / 2, 1e-4);
    const std::vector<Vec2> one = p.polyline(1.0, 50.0);
    const std::vector<Vec2> four = p.polyline(4.0, 100.0);
    const Vec2 tip1 = p.gamma_at(kPi / 4);
    double best = 1e9;
    for (Vec2 q : four) best = std::min(best, norm(q - 2.0 * tip1));
    EXPECT_LT(best, 1e-2);
    EXPECT_NEAR(norm(tip1), 2 * p.kappa_at(kPi / 4), 1e-4);
    EXPECT_FALSE(one.empty());
}

TEST(Wedge, CachedProfileCrossValidated) {
    const auto p = wedge_profile(kPi / 2);
    EXPECT_LT(p->cross_validation_distance, 1e-2);
    EXPECT_EQ(wedge_profile(kPi / 2).get(), p.get());
    EXPECT_NEAR(p->kappa_max, 0.5222439959121901, 1e-3);
}

TEST(Wedge, InvalidOpeningRejected) {
    EXPECT_THROW(solve_wedge_profile(0.0, 1e-3), DomainError);
    EXPECT_THROW(solve_wedge_profile(4.0, 1e-3), DomainError);
}
