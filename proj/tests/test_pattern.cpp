#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "crease/fixtures.hpp"
#include "crease/pattern.hpp"

using namespace crease;
namespace fx = crease::fixtures;

TEST(Construction, ConeRadialGeometry) {
    const auto p = fx::annulus();
    ASSERT_EQ(p.crease_count(), 2);
    EXPECT_EQ(p.kind, PatternKind::ConeRadial);
    for (int j = 0; j < p.grid.n; j += 50) {
        EXPECT_NEAR(p.curves[2].points[j].norm(), 2.0, 1e-15);
        EXPECT_NEAR(p.curves[1].curvature[j], -1.0, 1e-8);  // clockwise arcs
    }
    const auto th = ruling_angles(p, 1);
    EXPECT_NEAR(th.left.max(), std::numbers::pi / 2, 1e-9);
    EXPECT_NEAR(th.right.min(), std::numbers::pi / 2, 1e-9);
    EXPECT_NEAR(ruling_lengths(p, 1)[7], 1.0, 1e-15);
}

TEST(Construction, OuterAnglesMoveBoundaries) {
    const auto p = fx::catenary_pair();
    const auto x0 = effective_curve(p, 0);
    // The first boundary sits on the outer rulings of crease 1 at the vertical offset's distance.
    const auto r = ruling_directions(p, 0);
    for (int j = 0; j < p.grid.n; j += 40) {
        const Vec2 d = p.curves[1].points[j] - x0[j];
        EXPECT_NEAR(std::abs(cross2(d.normalized(), r[j])), 0.0, 1e-12);
    }
    const auto th = ruling_angles(p, 1);
    for (int j = 0; j < p.grid.n; j += 40) EXPECT_NEAR(th.left[j] + th.right[j], std::numbers::pi, 1e-9);
}

TEST(Validation, ShippedFixturesAreCandidates) {
    for (const auto& p : {fx::annulus(), fx::single_annulus(), fx::pleated_sine(), fx::catenary_pair(),
                          fx::off_center(), fx::straight_pair(), fx::sine_cylinder(), fx::catenary_host(),
                          fx::planar_constant_mix()}) {
        const auto v = validate(p);
        EXPECT_TRUE(v.regular);
        EXPECT_TRUE(v.candidate);
    }
}

TEST(Validation, SharedInflectionsAreFound) {
    const auto v = validate(fx::pleated_sine());
    ASSERT_EQ(v.inflections.size(), 2u);
    EXPECT_NEAR(v.inflections[0], 0.0, 1e-12);
    EXPECT_NEAR(v.inflections[1], std::numbers::pi, 0.01);
}

TEST(Validation, MismatchedInflectionIsNotCandidate) {
    const auto v = validate(fx::mismatched_inflection());
    EXPECT_TRUE(v.regular);
    EXPECT_FALSE(v.candidate);
    ASSERT_FALSE(v.diagnostics.empty());
    EXPECT_EQ(v.diagnostics[0].check, "inflection_mismatch");
    EXPECT_NE(v.diagnostics[0].location.find("curve 2"), std::string::npos);
}

TEST(Validation, CrossingCurvesAreIrregular) {
    const Grid g(1.0, 101);
    const auto p = make_cylinder_pattern(g, {FuncGrid::constant(g, -1.0), FuncGrid::sample(g, [](double t) { return t; }),
                                             FuncGrid::constant(g, 0.5), FuncGrid::constant(g, 2.0)});
    const auto v = validate(p);
    EXPECT_FALSE(v.regular);
    EXPECT_FALSE(v.candidate);
}

TEST(Validation, TangentRulingsAreIrregular) {
    const Grid g(1.0, 101);
    const auto p = make_cylinder_pattern(g, {FuncGrid::constant(g, -1.0), FuncGrid::constant(g, 0.0), FuncGrid::constant(g, 1.0)},
                                         FuncGrid::constant(g, 1e-9));
    EXPECT_FALSE(validate(p).regular);
}

TEST(Inflections, SignChangesAndZeros) {
    const Grid g(2 * std::numbers::pi, 101);
    const auto k = FuncGrid::sample(g, [](double t) { return std::sin(t); });
    const auto z = inflection_nodes(k);
    ASSERT_EQ(z.size(), 3u);
    EXPECT_EQ(z[1], 50);
    EXPECT_TRUE(inflection_nodes(FuncGrid::constant(g, 1.0)).empty());
}

TEST(Straightness, StraightPairIsStraight) {
    const auto p = fx::straight_pair();
    EXPECT_TRUE(is_straight(p.curves[1], pattern_diameter(p)));
    EXPECT_FALSE(is_straight(fx::annulus().curves[1], 3.0));
}

TEST(Documents, RoundTripKeepsEveryKind) {
    for (const auto& p : {fx::annulus(), fx::catenary_pair(), fx::off_center()}) {
        const auto q = load_pattern(to_json(p));
        EXPECT_EQ(q.kind, p.kind);
        EXPECT_EQ(q.first_R.has_value(), p.first_R.has_value());
        for (std::size_t i = 0; i < p.curves.size(); ++i)
            for (int j = 0; j < p.grid.n; ++j) EXPECT_EQ(q.curves[i].points[j], p.curves[i].points[j]);
    }
}

TEST(Documents, ResamplingIsAccurate) {
    const auto p = fx::catenary_pair(401);
    const auto q = load_pattern(to_json(p), 201);
    EXPECT_EQ(q.grid.n, 201);
    for (int j = 0; j < 201; ++j) EXPECT_NEAR(q.lengths[2][j], std::cosh(q.grid.node(j) - 0.6), 1e-10);
}

TEST(Documents, SchemaErrorsAreBadDocument) {
    auto doc = to_json(fx::annulus(33));
    auto expect_bad = [](const nlohmann::json& d) {
        try {
            load_pattern(d);
            FAIL() << "accepted a bad document";
        } catch (const CreaseError& e) {
            EXPECT_EQ(e.code(), ErrorCode::BadDocument);
        }
    };
    auto d1 = doc;
    d1.erase("kind");
    expect_bad(d1);
    auto d2 = doc;
    d2["version"] = 2;
    expect_bad(d2);
    auto d3 = doc;
    d3["curves"][1]["role"] = "boundary";
    expect_bad(d3);
    auto d4 = doc;
    d4["curves"][1]["length"].erase(3);
    expect_bad(d4);
    auto d5 = doc;
    d5["kind"] = "hyperbolic";
    expect_bad(d5);
    auto d6 = doc;
    d6["outer_angles"] = {{"first_L", std::vector<double>(33, 1.0)}};
    expect_bad(d6);
    expect_bad(nlohmann::json::array());
}
