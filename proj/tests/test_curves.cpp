#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "crease/curves.hpp"

using namespace crease;

namespace {

double circle_gap(int n) {
    const Grid g(2 * std::numbers::pi, n);
    const auto one = FuncGrid::constant(g, 1.0);
    const auto c = integrate_frame_3d(one, one, FuncGrid::constant(g, 0.0), Vec3::Zero(),
                                      {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()});
    return (c.points.back() - c.points.front()).norm();
}

std::vector<Vec3> helix(const Grid& g, double b) {
    std::vector<Vec3> p(g.n);
    for (int j = 0; j < g.n; ++j) p[j] = Vec3(std::cos(g.node(j)), std::sin(g.node(j)), b * g.node(j));
    return p;
}

}  // namespace

TEST(Frame3D, UnitCircleClosesWithFourthOrderError) {
    const double e401 = circle_gap(401), e801 = circle_gap(801);
    EXPECT_LT(e401, 1e-7);
    EXPECT_GE(e401 / e801, 8.0);
}

TEST(Frame3D, FrameStaysOrthonormal) {
    const Grid g(10.0, 801);
    const auto c = integrate_frame_3d(FuncGrid::constant(g, 1.3), FuncGrid::sample(g, [](double t) { return 1 + 0.5 * std::sin(t); }),
                                      FuncGrid::sample(g, [](double t) { return 0.3 * std::cos(2 * t); }), Vec3::Zero(),
                                      {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()});
    EXPECT_LT(c.frame_drift, 1e-8);
    for (int j = 0; j < g.n; j += 50) {
        EXPECT_NEAR(c.T[j].cross(c.N[j]).dot(c.B[j]), 1.0, 1e-12);
        EXPECT_NEAR(c.T[j].dot(c.N[j]), 0.0, 1e-12);
    }
}

TEST(Frame3D, RejectsBadInitialFrame) {
    const Grid g(1.0, 33);
    const auto one = FuncGrid::constant(g, 1.0);
    EXPECT_THROW(integrate_frame_3d(one, one, one, Vec3::Zero(), {Vec3::UnitX(), Vec3::UnitZ(), Vec3::UnitY()}),
                 CreaseError);
    EXPECT_THROW(integrate_frame_3d(FuncGrid::constant(g, 0.0), one, one, Vec3::Zero(),
                                    {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()}),
                 CreaseError);
}

TEST(Frame2D, CircleOfRadiusTwo) {
    const Grid g(std::numbers::pi, 401);
    const auto c = integrate_frame_2d(FuncGrid::constant(g, 2.0), FuncGrid::constant(g, 0.5), Vec2(2, 0), Vec2(0, 1));
    for (int j = 0; j < g.n; ++j) EXPECT_NEAR(c.points[j].norm(), 2.0, 1e-9);
    EXPECT_NEAR(c.points.back().x(), -2.0, 1e-9);
    EXPECT_THROW(integrate_frame_2d(FuncGrid::constant(g, 1.0), FuncGrid::constant(g, 0.0), Vec2::Zero(), Vec2(2, 0)),
                 CreaseError);
}

TEST(Analyze2D, SignedCurvature) {
    const Grid g(1.0, 201);
    std::vector<Vec2> ccw(g.n), cw(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double t = g.node(j);
        ccw[j] = 3.0 * Vec2(std::cos(t), std::sin(t));
        cw[j] = 3.0 * Vec2(std::cos(t), -std::sin(t));
    }
    const auto a = analyze_curve_2d(ccw, g), b = analyze_curve_2d(cw, g);
    for (int j = 0; j < g.n; ++j) {
        EXPECT_NEAR(a.curvature[j], 1.0 / 3.0, 1e-7);
        EXPECT_NEAR(b.curvature[j], -1.0 / 3.0, 1e-7);
        EXPECT_NEAR(a.speed[j], 3.0, 1e-8);
    }
}

TEST(Analyze2D, RejectsDegenerateSamples) {
    const Grid g(1.0, 5);
    EXPECT_THROW(analyze_curve_2d({Vec2(0, 0), Vec2(1, 0), Vec2(1, 0), Vec2(2, 0), Vec2(3, 0)}, g), CreaseError);
    EXPECT_THROW(analyze_curve_2d({Vec2(0, 0), Vec2(1, 0)}, Grid(1.0, 2)), CreaseError);
}

TEST(Analyze3D, HelixCurvatureAndTorsion) {
    const Grid g(4.0, 401);
    const double b = 0.5;
    const auto c = analyze_curve_3d(helix(g, b), g);
    for (int j = 0; j < g.n; ++j) {
        EXPECT_NEAR(c.curvature[j], 1 / (1 + b * b), 1e-6);
        EXPECT_NEAR(c.torsion[j], b / (1 + b * b), 1e-5);
    }
}

TEST(Analyze3D, StraightLineHasNoFrenetFrame) {
    const Grid g(1.0, 33);
    std::vector<Vec3> p(g.n);
    for (int j = 0; j < g.n; ++j) p[j] = Vec3(g.node(j), 2 * g.node(j), 0);
    EXPECT_THROW(analyze_curve_3d(p, g), CreaseError);
}

TEST(ParallelFrames, ConcentricArcs) {
    const Grid g(1.0, 201);
    std::vector<Vec2> a(g.n), b(g.n);
    for (int j = 0; j < g.n; ++j) {
        const Vec2 d(std::cos(g.node(j)), std::sin(g.node(j)));
        a[j] = d;
        b[j] = 2.5 * d;
    }
    const auto r = parallel_frame_check(analyze_curve_2d(a, g), analyze_curve_2d(b, g));
    EXPECT_LT(r.max_angle, 1e-8);
    EXPECT_LT(r.max_residual, 1e-6);
}

TEST(ArcLength, HelixLength) {
    const Grid g(4.0, 401);
    const auto s = arc_length(helix(g, 0.5), g);
    EXPECT_NEAR(s.back(), 4.0 * std::sqrt(1.25), 1e-9);
}
