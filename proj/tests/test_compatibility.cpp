#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "crease/append.hpp"
#include "crease/compatibility.hpp"
#include "crease/fixtures.hpp"

using namespace crease;
namespace fx = crease::fixtures;

namespace {

// Radial crease l1 = 1 + 0.1 sin(2t) with straight-through rulings (planar), and
// l1 + 1 with mirrored outer rulings (constant fold-angle).
CreaseRulePattern cone_planar_not_perpendicular() {
    const Grid g(std::numbers::pi / 2, 401);
    const auto l1 = FuncGrid::sample(g, [](double t) { return 1 + 0.1 * std::sin(2 * t); });
    const auto base = make_cone_pattern(g, Vec2::Zero(), {l1 + (-0.5), l1, l1 + 1.0, l1 + 1.5});
    const auto right = ruling_angles(base, 2).right;
    return make_cone_pattern(g, Vec2::Zero(), {l1 + (-0.5), l1, l1 + 1.0, l1 + 1.5}, std::nullopt,
                             right.map([](double th) { return std::numbers::pi - th; }));
}

}  // namespace

TEST(Conditions, AnnulusIsExact) {
    const auto r = compatibility_report(fx::annulus());
    EXPECT_EQ(r.verdict, Verdict::Foldable);
    ASSERT_EQ(r.pairs.size(), 1u);
    EXPECT_LT(r.pairs[0].residuals.resA, 1e-8);
    EXPECT_LT(r.pairs[0].residuals.resB, 1e-8);
    EXPECT_NEAR(r.pairs[0].constants.c3, 1.0, 1e-8);
    EXPECT_NEAR(r.pairs[0].constants.c4, 0.0, 1e-8);
}

TEST(Conditions, PleatedSineCylinder) {
    const auto r = compatibility_report(fx::pleated_sine());
    EXPECT_EQ(r.verdict, Verdict::Foldable);
    EXPECT_LT(r.pairs[0].residuals.resA, 1e-5);
    EXPECT_LT(r.pairs[0].residuals.resB, 1e-5);
    EXPECT_GT(r.pairs[0].residuals.nodes_used, 380);
}

TEST(Conditions, OffCenterIsRejected) {
    const auto r = compatibility_report(fx::off_center());
    EXPECT_EQ(r.verdict, Verdict::Incompatible);
    EXPECT_GT(r.pairs[0].residuals.resA, 0.05);
}

TEST(Conditions, NonCandidateIsDegenerate) {
    const auto r = compatibility_report(fx::mismatched_inflection());
    EXPECT_EQ(r.verdict, Verdict::Degenerate);
    EXPECT_TRUE(r.pairs.empty());
}

TEST(Constants, CatenaryPair) {
    const auto r = compatibility_report(fx::catenary_pair());
    EXPECT_EQ(r.verdict, Verdict::Foldable);
    EXPECT_NEAR(r.pairs[0].constants.c3, 2.0, 1e-6);
    EXPECT_NEAR(r.pairs[0].constants.c4, -3.0, 1e-5);
}

TEST(Constants, StraightPairIsUnconstrained) {
    const auto r = compatibility_report(fx::straight_pair());
    EXPECT_EQ(r.verdict, Verdict::Foldable);
    EXPECT_FALSE(r.pairs[0].constants.determined);
    EXPECT_EQ(r.creases[0].label(), "straight");
    EXPECT_FALSE(r.notes.empty());
}

TEST(Constants, MedianIgnoresOutliers) {
    EXPECT_DOUBLE_EQ(detail::median({5.0, 1.0, 100.0, 2.0, 3.0}), 3.0);
    EXPECT_DOUBLE_EQ(detail::median({4.0, 1.0, 2.0, 3.0}), 2.5);
}

TEST(Classification, CatenaryCreasesAreConstantFold) {
    const auto r = compatibility_report(fx::catenary_pair());
    for (const auto& c : r.creases) EXPECT_EQ(c.label(), "constant-fold");
}

TEST(Classification, AnnulusCreasesAreBoth) {
    const auto r = compatibility_report(fx::annulus());
    for (const auto& c : r.creases) EXPECT_EQ(c.label(), "planar+constant-fold");
}

TEST(Classification, PlanarNextToConstantFoldOnCylinderIsRejected) {
    const auto r = compatibility_report(fx::planar_constant_mix());
    EXPECT_EQ(r.verdict, Verdict::Incompatible);
    EXPECT_EQ(r.creases[0].label(), "planar");
    EXPECT_EQ(r.creases[1].label(), "constant-fold");
    ASSERT_FALSE(r.notes.empty());
    EXPECT_NE(r.notes[0].find("cylinder"), std::string::npos);
}

TEST(Classification, ConeAcceptsPerpendicularPlanarCrease) {
    const auto host = fx::single_annulus();
    const auto ext = append_crease_cone(host, {2.0, 0.1, 0.0}).extended;
    const auto r = compatibility_report(ext);
    EXPECT_EQ(r.verdict, Verdict::Foldable);
    EXPECT_TRUE(r.creases[0].planar);
    EXPECT_TRUE(r.creases[1].constant_fold);
    EXPECT_LT(derivative(ext.lengths[1]).max_abs(), 1e-6);
}

TEST(Classification, ConeRejectsObliquePlanarCrease) {
    const auto p = cone_planar_not_perpendicular();
    const auto r = compatibility_report(p);
    EXPECT_TRUE(r.creases[0].planar);
    EXPECT_FALSE(r.creases[0].constant_fold);
    EXPECT_TRUE(r.creases[1].constant_fold);
    EXPECT_NE(r.verdict, Verdict::Foldable);
}

TEST(Classification, OneConstantFoldCreaseMakesAllConstantFold) {
    for (const auto& p : {fx::annulus(), fx::catenary_pair(), fx::pleated_sine(),
                          append_crease_cone(fx::single_annulus(), {2.0, 0.1, 0.0}).extended}) {
        const auto r = compatibility_report(p);
        ASSERT_EQ(r.verdict, Verdict::Foldable);
        bool any = false, all = true;
        for (const auto& c : r.creases) {
            any = any || c.constant_fold;
            all = all && c.constant_fold;
        }
        EXPECT_TRUE(!any || all);
    }
}

TEST(Report, JsonCarriesResidualsAndClasses) {
    const auto j = to_json(compatibility_report(fx::catenary_pair()));
    EXPECT_EQ(j["verdict"], "foldable");
    EXPECT_NEAR(j["pairs"][0]["c3"].get<double>(), 2.0, 1e-6);
    EXPECT_EQ(j["creases"][1]["class"], "constant-fold");
}
