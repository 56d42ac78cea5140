#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace crease;

TEST(Roundtrip, ConeCircle) { EXPECT_LT(support::roundtrip_error(support::cone_circle()), 1e-6); }

TEST(Roundtrip, GeneralizedSineCylinder) { EXPECT_LT(support::roundtrip_error(support::sine_cylinder()), 1e-6); }

TEST(Roundtrip, HelixTangentSurface) { EXPECT_LT(support::roundtrip_error(support::helix_tangent()), 1e-6); }

TEST(Develop, PreservesLengthsAndAngles) {
    const auto p = support::cone_circle();
    const auto d = develop_patch(p);
    // The directrix develops to an arc of geodesic curvature cos(phi) K.
    EXPECT_NEAR(arc_length(d.directrix.points, d.directrix.grid).back(),
                arc_length(p.directrix.points, p.directrix.grid).back(), 1e-9);
    for (std::size_t j = 0; j < d.rulings.size(); j += 40) {
        const double a2 = std::acos(d.rulings[j].dot(d.directrix.tangents[j]));
        const double a3 = std::acos(p.rulings[j].dot(p.directrix.T[j]));
        EXPECT_NEAR(a2, a3, 1e-9);
    }
    // Unit circle on the cone with apex height 1: slant 1/sqrt(2), so k = 1/sqrt(2) after unrolling.
    EXPECT_NEAR(d.directrix.curvature[200], 1 / std::sqrt(2.0), 1e-6);
}

TEST(Develop, RejectsTwistedRulings) {
    const Grid g(2.0, 201);
    std::vector<Vec3> x(g.n), r(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double t = g.node(j);
        x[j] = Vec3(std::cos(t), std::sin(t), 0.0);
        r[j] = Vec3(-std::sin(t), std::cos(t), 1.0).normalized();  // hyperboloid of one sheet
    }
    const auto p = support::from_rulings(g, x, r);
    EXPECT_THROW(develop_patch(p), CreaseError);
}

TEST(RulingCurvature, MatchesFormula) {
    const Grid g(1.0, 33);
    const auto k = FuncGrid::constant(g, 2.0), s = FuncGrid::constant(g, 1.5);
    const auto V = ruling_curvature(k, s, FuncGrid::constant(g, std::numbers::pi / 6), FuncGrid::constant(g, std::numbers::pi / 3));
    EXPECT_NEAR(V[0], 1.5 * 2.0 * std::tan(std::numbers::pi / 6) / std::sin(std::numbers::pi / 3), 1e-14);
    EXPECT_THROW(ruling_curvature(k, s, FuncGrid::constant(g, std::numbers::pi / 2), FuncGrid::constant(g, 1.0)),
                 CreaseError);
}

TEST(Procrustes, RecoversRigidMotion) {
    const auto p = support::helix_tangent(101);
    const Eigen::Matrix3d R = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
    std::vector<Vec3> q;
    for (const auto& x : p.directrix.points) q.push_back(R * x + Vec3(1, -2, 0.5));
    const auto fit = procrustes(p.directrix.points, q);
    EXPECT_LT(fit.max_error, 1e-12);
    EXPECT_LT((fit.rotation - R).norm(), 1e-12);
}

TEST(Patch, TransversalityIsRequired) {
    const auto p = support::cone_circle(33);
    EXPECT_THROW(make_patch_3d(p.directrix, p.inclination, FuncGrid::constant(p.directrix.grid, 0.0), p.u_min, p.u_max),
                 CreaseError);
}
