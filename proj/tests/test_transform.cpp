#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "crease/compatibility.hpp"
#include "crease/fixtures.hpp"
#include "crease/transform.hpp"

using namespace crease;
namespace fx = crease::fixtures;

namespace {

double max_point_gap(const CreaseRulePattern& a, const CreaseRulePattern& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.curves.size(); ++i)
        for (int j = 0; j < a.grid.n; ++j) d = std::max(d, (a.curves[i].points[j] - b.curves[i].points[j]).norm());
    return d;
}

}  // namespace

TEST(ParallelCurve, SineOnVerticalRulings) {
    const Grid g(4.0, 401);
    const auto host = make_cylinder_pattern(g, {FuncGrid::constant(g, -1), FuncGrid::constant(g, 0), FuncGrid::constant(g, 2)});
    std::vector<Vec2> target(g.n);
    for (int j = 0; j < g.n; ++j) target[j] = Vec2(1, 0.2 * std::cos(g.node(j))).normalized();
    const auto res = parallel_curve_on_patch({pattern_patch(host, 1), target, 1.0, {}, {}});
    for (int j = 0; j < g.n; ++j) EXPECT_NEAR(res.l[j], 1 + 0.2 * std::sin(g.node(j)), 1e-9);
    EXPECT_LT(res.max_angle, 1e-8);
    EXPECT_FALSE(res.out_of_extent);
}

TEST(ParallelCurve, LeavingThePatchIsFlagged) {
    const Grid g(4.0, 401);
    const auto host = make_cylinder_pattern(g, {FuncGrid::constant(g, -1), FuncGrid::constant(g, 0), FuncGrid::constant(g, 0.5)});
    std::vector<Vec2> target(g.n);
    for (int j = 0; j < g.n; ++j) target[j] = Vec2(1, 0.2 * std::cos(g.node(j))).normalized();
    EXPECT_TRUE(parallel_curve_on_patch({pattern_patch(host, 1), target, 0.4, {}, {}}).out_of_extent);
}

TEST(ParallelCurve, RulingAlongTargetIsRejected) {
    const Grid g(1.0, 101);
    const auto host = make_cylinder_pattern(g, {FuncGrid::constant(g, -1), FuncGrid::constant(g, 0), FuncGrid::constant(g, 1)});
    std::vector<Vec2> target(g.n, Vec2(0, 1));
    EXPECT_THROW(parallel_curve_on_patch({pattern_patch(host, 1), target, 0.5, {}, {}}), CreaseError);
}

TEST(Combescure, IdentityIsExact) {
    for (const auto& p : {fx::annulus(), fx::catenary_pair(), fx::pleated_sine()}) {
        const auto q = combescure_transform(p, FuncGrid::constant(p.grid, 1.0));
        EXPECT_EQ(q.kind, p.kind);
        EXPECT_LT(max_point_gap(p, q), 1e-12);
    }
}

TEST(Combescure, ScalingTheAnnulus) {
    const auto p = fx::annulus();
    const auto q = combescure_transform(p, FuncGrid::constant(p.grid, 2.0), std::vector<double>{1.0, 2.0, 1.0});
    ASSERT_EQ(q.kind, PatternKind::ConeRadial);
    EXPECT_NEAR(q.lengths[1][100], 2.0, 1e-9);
    EXPECT_NEAR(q.lengths[2][100], 4.0, 1e-9);
    const auto r = compatibility_report(q);
    EXPECT_EQ(r.verdict, Verdict::Foldable);
    EXPECT_NEAR(r.pairs[0].constants.c3, 1.0, 1e-8);
    EXPECT_NEAR(r.pairs[0].constants.c4, 0.0, 1e-8);
}

TEST(Combescure, TangentsAndRulingsStayParallel) {
    const auto p = fx::catenary_pair();
    const auto q = combescure_transform(p, FuncGrid::sample(p.grid, [](double t) { return 1 + 0.08 * std::sin(3 * t); }));
    for (int i = 1; i <= 2; ++i)
        EXPECT_LT(detail::max_tangent_angle(p.curves[i].tangents, q.curves[i].tangents), 1e-7);
    for (int i = 0; i <= 2; ++i)
        EXPECT_LT(detail::max_tangent_angle(ruling_directions(p, i), ruling_directions(q, i)), 1e-7);
}

TEST(Combescure, RandomTransformsPreserveVerdictAndConstants) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (const auto& p : {fx::annulus(), fx::pleated_sine(), fx::catenary_pair()}) {
        const auto r0 = compatibility_report(p);
        for (int k = 0; k < 3; ++k) {
            const double a = 0.02 + 0.08 * U(rng), w = (0.5 + 1.5 * U(rng)) * std::numbers::pi / p.grid.t_max;
            const double ph = 2 * std::numbers::pi * U(rng);
            const auto q = combescure_transform(p, FuncGrid::sample(p.grid, [&](double t) { return 1 + a * std::sin(w * t + ph); }));
            const auto r = compatibility_report(q);
            ASSERT_EQ(r.verdict, r0.verdict);
            EXPECT_NEAR(r.pairs[0].constants.c3, r0.pairs[0].constants.c3, 1e-5);
            EXPECT_NEAR(r.pairs[0].constants.c4, r0.pairs[0].constants.c4, 1e-5);
            for (std::size_t i = 0; i < r.creases.size(); ++i) EXPECT_EQ(r.creases[i].label(), r0.creases[i].label());
        }
    }
}

TEST(Combescure, RejectsNonPositiveScale) {
    const auto p = fx::annulus(101);
    EXPECT_THROW(combescure_transform(p, FuncGrid::sample(p.grid, [](double t) { return 0.5 - t; })), CreaseError);
    EXPECT_THROW(combescure_transform(p, FuncGrid::constant(Grid(1.0, 101), 1.0)), CreaseError);
}

TEST(Pleat, SineCylinderGivesThePleatedCreases) {
    const auto p = add_parallel_pleat(fx::sine_cylinder(), 1.0, 0.7);
    ASSERT_EQ(p.kind, PatternKind::CylinderGraph);
    ASSERT_EQ(p.crease_count(), 2);
    const auto ref = fx::pleated_sine();
    for (int j = 0; j < p.grid.n; ++j) EXPECT_NEAR(p.lengths[2][j], ref.lengths[2][j], 1e-9);
    EXPECT_EQ(compatibility_report(p).verdict, Verdict::Foldable);
}

TEST(Pleat, AnnulusPleatIsConcentric) {
    const auto p = add_parallel_pleat(fx::single_annulus(), 0.5, 0.5);
    ASSERT_EQ(p.kind, PatternKind::ConeRadial);
    EXPECT_NEAR(p.lengths[2].min(), 1.5, 1e-9);
    EXPECT_NEAR(p.lengths[2].max(), 1.5, 1e-9);
    const auto r = compatibility_report(p);
    EXPECT_EQ(r.verdict, Verdict::Foldable);
    EXPECT_NEAR(r.pairs[0].constants.c3, 1.0, 1e-8);
}

TEST(Pleat, CatenaryPleatKeepsItsClasses) {
    const auto p = add_parallel_pleat(fx::catenary_pair(), 0.15, 0.1);
    const auto r = compatibility_report(p);
    ASSERT_EQ(r.verdict, Verdict::Foldable);
    EXPECT_NEAR(r.pairs[0].constants.c3, 2.0, 1e-6);
    EXPECT_NEAR(r.pairs[1].constants.c3, 1.0, 1e-6);
    for (const auto& c : r.creases) EXPECT_EQ(c.label(), "constant-fold");
}

TEST(Pleat, RejectsNonPositiveOffsets) {
    EXPECT_THROW(add_parallel_pleat(fx::single_annulus(101), 0.0, 0.5), CreaseError);
}
