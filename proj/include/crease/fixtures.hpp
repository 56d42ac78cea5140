#pragma once

// Reference patterns with closed-form geometry, shared by the tests and the
// fixture generator.

#include <cmath>
#include <numbers>

#include "crease/pattern.hpp"

namespace crease::fixtures {

inline constexpr int kDefaultSamples = 401;

// Concentric arcs of radii 0.5, 1, 2, 2.5 around the origin: creases at radii 1 and 2.
inline CreaseRulePattern annulus(int n = kDefaultSamples, double scale = 1.0) {
    const Grid g(std::numbers::pi / 2, n);
    std::vector<FuncGrid> l;
    for (double r : {0.5, 1.0, 2.0, 2.5}) l.push_back(FuncGrid::constant(g, scale * r));
    return make_cone_pattern(g, Vec2::Zero(), std::move(l));
}

// One circular crease of radius 1 between boundaries at 0.5 and 2.5.
inline CreaseRulePattern single_annulus(int n = kDefaultSamples) {
    const Grid g(std::numbers::pi / 2, n);
    std::vector<FuncGrid> l;
    for (double r : {0.5, 1.0, 2.5}) l.push_back(FuncGrid::constant(g, r));
    return make_cone_pattern(g, Vec2::Zero(), std::move(l));
}

// Two sine creases one unit apart on a cylinder; t in [0, 4] so that t = pi is interior.
inline CreaseRulePattern pleated_sine(int n = kDefaultSamples) {
    const Grid g(4.0, n);
    return make_cylinder_pattern(g, {FuncGrid::constant(g, -0.5), FuncGrid::sample(g, [](double t) { return 0.2 * std::sin(t); }),
                                     FuncGrid::sample(g, [](double t) { return 0.2 * std::sin(t) + 1.0; }),
                                     FuncGrid::constant(g, 1.7)});
}

// Ruling angle of a cylinder graph against vertical rulings: arccos(l' / sqrt(1 + l'^2)).
inline double cylinder_theta(double dl) { return std::acos(dl / std::sqrt(1.0 + dl * dl)); }

// Constant fold-angle pair on a cylinder: l_1 = cosh(2u)/2, l_2 = cosh u with
// u = t - 0.6, outer rulings mirrored so that theta_R = pi - theta_L on both creases.
inline CreaseRulePattern catenary_pair(int n = kDefaultSamples, double w0 = 0.15, double w3 = 0.3) {
    const Grid g(1.2, n);
    auto u = [](double t) { return t - 0.6; };
    FuncGrid first = FuncGrid::sample(g, [&](double t) { return std::numbers::pi - cylinder_theta(std::sinh(2 * u(t))); });
    FuncGrid last = FuncGrid::sample(g, [&](double t) { return std::numbers::pi - cylinder_theta(std::sinh(u(t))); });
    // The mirrored outer rulings turn quickly, so the boundaries stay close to the creases.
    return make_cylinder_pattern(g,
                                 {FuncGrid::sample(g, [&](double t) { return std::cosh(2 * u(t)) / 2 - w0; }),
                                  FuncGrid::sample(g, [&](double t) { return std::cosh(2 * u(t)) / 2; }),
                                  FuncGrid::sample(g, [&](double t) { return std::cosh(u(t)); }),
                                  FuncGrid::sample(g, [&](double t) { return std::cosh(u(t)) + w3; })},
                                 std::move(first), std::move(last));
}

// One sine crease l = 0.2 sin t on a cylinder, boundaries at -0.5 and 0.2 sin t + 0.7.
inline CreaseRulePattern sine_cylinder(int n = kDefaultSamples) {
    const Grid g(4.0, n);
    return make_cylinder_pattern(g, {FuncGrid::constant(g, -0.5), FuncGrid::sample(g, [](double t) { return 0.2 * std::sin(t); }),
                                     FuncGrid::sample(g, [](double t) { return 0.2 * std::sin(t) + 0.7; })});
}

// Crease 1 of the catenary pair alone, left boundary one unit above it.
inline CreaseRulePattern catenary_host(int n = kDefaultSamples, double w0 = 0.15) {
    const auto p = catenary_pair(n, w0);
    return make_cylinder_pattern(p.grid, {p.lengths[0], p.lengths[1], p.lengths[1] + 1.0}, p.first_R);
}

// Vertical rulings except left of crease 2, whose rulings mirror its right ones:
// crease 1 = cosh u is planar, crease 2 = cosh u + 1 is constant fold-angle.
inline CreaseRulePattern planar_constant_mix(int n = kDefaultSamples) {
    const Grid g(1.2, n);
    auto cosh_u = [&](double c) { return FuncGrid::sample(g, [c](double t) { return std::cosh(t - 0.6) + c; }); };
    FuncGrid right = FuncGrid::sample(g, [](double t) { return std::numbers::pi - cylinder_theta(std::sinh(t - 0.6)); });
    return make_cylinder_pattern(g, {cosh_u(-0.5), cosh_u(0.0), cosh_u(1.0), cosh_u(1.2)}, std::nullopt, std::move(right));
}

// The annulus with crease 2 replaced by a radius-2 circle centred at (0.2, 0).
inline CreaseRulePattern off_center(int n = kDefaultSamples) {
    const Grid g(std::numbers::pi / 2, n);
    auto arc = [&](Vec2 c, double r) {
        std::vector<Vec2> p(g.n);
        for (int j = 0; j < g.n; ++j) p[j] = c + r * cone_direction(g.node(j));
        return p;
    };
    return make_sampled_pattern(g, {arc({0, 0}, 0.5), arc({0, 0}, 1.0), arc({0.2, 0}, 2.0), arc({0, 0}, 2.5)});
}

// A sine crease next to a circular arc: the inflections of the first are not shared.
inline CreaseRulePattern mismatched_inflection(int n = kDefaultSamples) {
    const Grid g(4.0, n);
    std::vector<Vec2> b0(g.n), c1(g.n), c2(g.n), b1(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double t = g.node(j), a = (t - 2.0) / 11.5;
        b0[j] = {t, -0.5};
        c1[j] = {t, 0.2 * std::sin(t)};
        c2[j] = Vec2(2.0, -10.0) + 11.5 * Vec2(std::sin(a), std::cos(a));
        b1[j] = {t, 2.2};
    }
    return make_sampled_pattern(g, {b0, c1, c2, b1});
}

// Two straight parallel creases y = 0 and y = 1 between y = -1 and y = 2.
inline CreaseRulePattern straight_pair(int n = kDefaultSamples) {
    const Grid g(1.0, n);
    return make_cylinder_pattern(g, {FuncGrid::constant(g, -1.0), FuncGrid::constant(g, 0.0), FuncGrid::constant(g, 1.0),
                                     FuncGrid::constant(g, 2.0)});
}

}  // namespace crease::fixtures
