#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "crease/compatibility.hpp"
#include "crease/transform.hpp"

namespace crease {

// Initial values l_2(0), l_2'(0), l_2''(0) of the appended crease.
struct AppendInit {
    double l = 0.0, dl = 0.0, ddl = 0.0;
};

struct AppendResult {
    FuncGrid l2, dl2, ddl2;  // cylinder/cone kinds: the appended length and its derivatives
    FuncGrid theta_2L;
    CreaseRulePattern extended;
};

// Right-hand sides of the third-order append equations, term by term.
// a = (l_1, l_1', l_1'', l_1'''), C = cot(theta_1R), (l2, b1, b2) = (l_2, l_2', l_2'').
inline double cylinder_append_rhs(double a1, double a2, double a3, double C, double b1, double b2) {
    return b2 / 2 *
           ((C - a1) * a2 / (1 + a1 * a1) - (C + a1) * b2 * b2 / (a2 * (1 + b1 * b1)) + 2 * b1 * b2 / (1 + b1 * b1) +
            2 * a3 / a2);
}

inline double cone_append_rhs(double l1, double a1, double a2, double a3, double C, double l2, double b1, double b2) {
    const double f1 = l1 * l1 + 2 * a1 * a1 - l1 * a2, e1 = l1 * l1 + a1 * a1;
    const double f2 = l2 * l2 + 2 * b1 * b1 - l2 * b2, e2 = l2 * l2 + b1 * b1;
    return f2 / (2 * l2) *
           (2 * a1 / l1 - 2 * b1 / l2 + (a1 + l1 * C) * (f1 / (l1 * e1) - l1 * f2 * f2 / (l2 * l2 * e2 * f1)) +
            2 * a1 * (l1 + a2) / e1 - 2 * b1 * (l2 + b2) / e2 + (-2 * a1 * (2 * l1 + 3 * a2) + 2 * l1 * a3) / f1 +
            (4 * l2 * b1 + 6 * b1 * b2) / f2);
}

// cot(theta_2L) making the appended pair satisfy the quadratic condition.
inline double cylinder_cot_2L(double a1, double a2, double C, double b1, double b2) {
    return b2 / a2 * (C + a1) - b1;
}

inline double cone_cot_2L(double l1, double a1, double a2, double C, double l2, double b1, double b2) {
    const double f1 = l1 * l1 + 2 * a1 * a1 - l1 * a2, f2 = l2 * l2 + 2 * b1 * b1 - l2 * b2;
    return (-l2 * b1 + f2 / f1 * (l1 * a1 + l1 * l1 * C)) / (l2 * l2);
}

namespace detail {

inline double cot_to_angle(double c) { return std::atan2(1.0, c); }

// l and its first three derivatives (sixth-order stencils) divided by the
// parameter rate, i.e. derivatives with respect to psi where psi' = rate.
struct HostJet {
    FuncGrid l, a1, a2, a3;
};

inline HostJet host_jet(const FuncGrid& l, const FuncGrid& rate) {
    const Grid& g = l.grid();
    auto d = [&](const FuncGrid& f) { return FuncGrid(g, derivative_values6<double>(g, f.values())) / rate; };
    HostJet j{l, d(l), {}, {}};
    j.a2 = d(j.a1);
    j.a3 = d(j.a2);
    return j;
}

inline void require_no_zero(const FuncGrid& f, const char* what) {
    const auto z = inflection_nodes(f);
    if (!z.empty())
        throw CreaseError(ErrorCode::InflectionInPath, std::string(what) + " vanishes near t = " +
                                                           std::to_string(f.grid().node(z.front())) +
                                                           "; append needs it bounded away from zero");
}

inline FuncGrid cot_theta_1R(const CreaseRulePattern& host) {
    return ruling_angles(host, 1).right.map([](double th) { return 1.0 / std::tan(th); });
}

using State3 = Eigen::Vector3d;

struct ConeCore {
    std::vector<State3> y;  // (L, L_psi, L_psipsi) at the nodes
    FuncGrid theta_2L;
};

// Cone append along a host whose cone parameter psi advances at rate psi'(t).
inline ConeCore cone_core(const HostJet& h, const FuncGrid& C, const FuncGrid& rate, const AppendInit& init) {
    const Grid& g = h.l.grid();
    const FuncGrid f1 = FuncGrid::zip(h.l * h.l + 2.0 * (h.a1 * h.a1), h.l * h.a2, std::minus<>{});
    require_no_zero(f1, "f_1");
    const HalfGridSamples<double> L1(g, h.l.values()), A1(g, h.a1.values()), A2(g, h.a2.values()),
        A3(g, h.a3.values()), CC(g, C.values()), R(g, rate.values());
    const double scale = std::max(init.l * init.l, 1e-300);
    auto check_f2 = [&](double t, const State3& y) {
        const double f2 = y[0] * y[0] + 2 * y[1] * y[1] - y[0] * y[2];
        if (std::abs(f2) <= 1e-9 * std::max(scale, y[0] * y[0] + y[1] * y[1]))
            throw CreaseError(ErrorCode::StraightCreaseDegeneracy,
                              "f_2 = 0 at t = " + std::to_string(t) + ": the appended crease is a straight line on the cone");
    };
    const State3 y0(init.l, init.dl, init.ddl);
    check_f2(0.0, y0);
    auto rhs = [&](double t, const State3& y) {
        if (!(y[0] > 0.0)) throw CreaseError(ErrorCode::OdeBlowUp, "appended crease reached the apex at t = " + std::to_string(t));
        const double y3 = cone_append_rhs(L1(t), A1(t), A2(t), A3(t), CC(t), y[0], y[1], y[2]);
        return State3(R(t) * State3(y[1], y[2], y3));
    };
    ConeCore out{integrate_ode<State3>(rhs, y0, g), {}};
    std::vector<double> th(g.n);
    for (int j = 0; j < g.n; ++j) {
        const auto& y = out.y[j];
        check_f2(g.node(j), y);
        th[j] = cot_to_angle(cone_cot_2L(h.l[j], h.a1[j], h.a2[j], C[j], y[0], y[1], y[2]));
    }
    out.theta_2L = FuncGrid(g, std::move(th));
    return out;
}

inline void require_single_crease(const CreaseRulePattern& host, PatternKind kind) {
    if (host.crease_count() != 1) throw CreaseError(ErrorCode::BadDocument, "append needs a host with exactly one crease");
    if (host.kind != kind) throw CreaseError(ErrorCode::BadDocument, "append needs a " + to_string(kind) + " host");
}

inline void require_left_of(const FuncGrid& l1, const FuncGrid& l2) {
    for (std::size_t j = 0; j < l1.size(); ++j)
        if (!(l2[j] > l1[j]))
            throw CreaseError(ErrorCode::TransformDegenerate,
                              "appended crease meets the host crease at t = " + std::to_string(l1.grid().node(j)));
}

inline FuncGrid component(const std::vector<State3>& y, const Grid& g, int k) {
    std::vector<double> v(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) v[j] = y[j][k];
    return {g, std::move(v)};
}

// Rulings at angle theta_2L from a curve with velocity v; returns the ruling
// directions and the smallest positive distance at which neighbours meet.
struct OuterRulings {
    std::vector<Vec2> r;
    double focal = INFINITY;
};

inline OuterRulings outer_rulings(const Grid& g, const std::vector<Vec2>& v, const FuncGrid& theta) {
    OuterRulings o;
    o.r.resize(g.n);
    for (int j = 0; j < g.n; ++j) {
        const Vec2 t = v[j].normalized();
        o.r[j] = std::cos(theta[j]) * t + std::sin(theta[j]) * rot90(t);
    }
    const auto dr = derivative_values6<Vec2>(g, o.r);
    for (int j = 0; j < g.n; ++j) {
        const double den = cross2(o.r[j], dr[j]);
        if (den == 0.0) continue;
        const double d = cross2(v[j], o.r[j]) / den;
        if (d > 0.0) o.focal = std::min(o.focal, d);
    }
    return o;
}

inline double default_width(double gap, double focal, std::optional<double> width) {
    if (width) {
        if (!(*width > 0.0)) throw CreaseError(ErrorCode::BadDocument, "boundary width must be positive");
        return *width;
    }
    return 0.5 * std::min(gap, focal);
}

}  // namespace detail

// Appends x_2 = (t, l_2(t)) to a cylinder-graph host with one crease. The new
// boundary sits at l_2 + width and carries the rulings at theta_2L.
inline AppendResult append_crease_cylinder(const CreaseRulePattern& host, const AppendInit& init,
                                           std::optional<double> width = {}) {
    detail::require_single_crease(host, PatternKind::CylinderGraph);
    const Grid& g = host.grid;
    const auto h = detail::host_jet(host.lengths[1], FuncGrid::constant(g, 1.0));
    detail::require_no_zero(h.a2, "l_1''");
    const FuncGrid C = detail::cot_theta_1R(host);
    if (std::abs(init.ddl) <= 1e-9 * h.a2.max_abs())
        throw CreaseError(ErrorCode::StraightCreaseDegeneracy, "l_2''(0) = 0: the appended crease is straight");

    const HalfGridSamples<double> A1(g, h.a1.values()), A2(g, h.a2.values()), A3(g, h.a3.values()), CC(g, C.values());
    using S = detail::State3;
    auto rhs = [&](double t, const S& y) {
        return S(y[1], y[2], cylinder_append_rhs(A1(t), A2(t), A3(t), CC(t), y[1], y[2]));
    };
    const auto ys = integrate_ode<S>(rhs, S(init.l, init.dl, init.ddl), g);

    AppendResult out{detail::component(ys, g, 0), detail::component(ys, g, 1), detail::component(ys, g, 2), {}, {}};
    detail::require_left_of(h.l, out.l2);
    std::vector<double> th(g.n);
    for (int j = 0; j < g.n; ++j)
        th[j] = detail::cot_to_angle(cylinder_cot_2L(h.a1[j], h.a2[j], C[j], out.dl2[j], out.ddl2[j]));
    out.theta_2L = FuncGrid(g, std::move(th));
    std::vector<Vec2> v(g.n);
    for (int j = 0; j < g.n; ++j) v[j] = Vec2(1.0, out.dl2[j]);
    // Boundary lengths are vertical offsets; the focal distance along the ruling
    // bounds the offset from above since sin(theta) <= 1.
    const double w = detail::default_width((out.l2 - h.l).min(), detail::outer_rulings(g, v, out.theta_2L).focal, width);
    out.extended = make_cylinder_pattern(g, {host.lengths[0], host.lengths[1], out.l2, out.l2 + w}, host.first_R,
                                         out.theta_2L);
    return out;
}

// Appends x_2 = apex + l_2(t) (cos t, -sin t) to a cone-radial host with one crease.
inline AppendResult append_crease_cone(const CreaseRulePattern& host, const AppendInit& init,
                                       std::optional<double> width = {}) {
    detail::require_single_crease(host, PatternKind::ConeRadial);
    const Grid& g = host.grid;
    const FuncGrid one = FuncGrid::constant(g, 1.0);
    const auto h = detail::host_jet(host.lengths[1], one);
    if (!(init.l > h.l[0]))
        throw CreaseError(ErrorCode::TransformDegenerate, "l_2(0) must exceed l_1(0)");
    const auto core = detail::cone_core(h, detail::cot_theta_1R(host), one, init);

    AppendResult out{detail::component(core.y, g, 0), detail::component(core.y, g, 1), detail::component(core.y, g, 2),
                     core.theta_2L, {}};
    detail::require_left_of(h.l, out.l2);
    std::vector<Vec2> v(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double t = g.node(j);
        v[j] = out.dl2[j] * cone_direction(t) + out.l2[j] * Vec2(-std::sin(t), -std::cos(t));
    }
    const double w = detail::default_width((out.l2 - h.l).min(), detail::outer_rulings(g, v, out.theta_2L).focal, width);
    out.extended = make_cone_pattern(g, host.apex, {host.lengths[0], host.lengths[1], out.l2, out.l2 + w},
                                     host.first_R, out.theta_2L);
    return out;
}

// Local cone reduction of the left patch of a one-crease host: rulings r(t) at
// angle alpha(t), cone parameter psi = alpha(0) - alpha(t), and the cone length
// l~ with l~' = l~ psi' cot(theta_1L), scaled so that the transformed crease
// starts with the original velocity. l~(0) is the distance from x_1(0) to the
// point where neighbouring rulings meet.
struct ConeReduction {
    FuncGrid psi, rate;  // psi and psi'
    FuncGrid l;          // l~ along the host crease
    std::vector<Vec2> rulings, ruling_rate;
};

inline ConeReduction cone_reduction(const CreaseRulePattern& host) {
    if (host.crease_count() != 1) throw CreaseError(ErrorCode::BadDocument, "append needs a host with exactly one crease");
    const Grid& g = host.grid;
    auto f = detail::ruling_field(host, 1);
    std::vector<double> alpha(g.n);
    for (int j = 0; j < g.n; ++j) alpha[j] = std::atan2(f.r[j].y(), f.r[j].x());
    const FuncGrid a = detail::unwrap(g, std::move(alpha));
    ConeReduction red{a.map([a0 = a[0]](double v) { return a0 - v; }), {}, {}, std::move(f.r), std::move(f.dr)};
    red.rate = FuncGrid(g, derivative_values6<double>(g, red.psi.values()));
    const double top = red.rate.max_abs();
    for (int j = 0; j < g.n; ++j)
        if (!(red.rate[j] > 1e-6 * top) || top == 0.0)
            throw CreaseError(ErrorCode::ReductionDegenerate,
                              "rulings parallel or turning counterclockwise near t = " + std::to_string(g.node(j)) +
                                  "; no cone reduction");
    const Curve2D& c = host.curves[1];
    const FuncGrid thL = ruling_angles(host, 1).left;
    const FuncGrid cot = thL.map([](double th) { return 1.0 / std::tan(th); });
    const double l0 = c.speed[0] * std::sin(thL[0]) / red.rate[0];
    red.l = cumulative_integral(red.rate * cot).map([l0](double v) { return l0 * std::exp(v); });
    return red;
}

// Append to a host with a general left patch: solve the cone equation on the
// local cone reduction, then carry the new crease back to the host as the curve
// on the host patch whose tangents match the reduced solution. Initial values
// are those of the reduced cone length, whose host value l~(0) cone_reduction
// reports. Cone-radial and cylinder-graph hosts go to their own solvers.
inline AppendResult append_crease_general(const CreaseRulePattern& host, const AppendInit& init,
                                          std::optional<double> width = {}) {
    if (host.kind == PatternKind::ConeRadial) return append_crease_cone(host, init, width);
    if (host.kind == PatternKind::CylinderGraph) return append_crease_cylinder(host, init, width);
    const Grid& g = host.grid;
    const auto red = cone_reduction(host);
    if (!(init.l > red.l[0])) throw CreaseError(ErrorCode::TransformDegenerate, "l_2(0) must exceed l~_1(0)");
    const auto h = detail::host_jet(red.l, red.rate);
    const auto core = detail::cone_core(h, detail::cot_theta_1R(host), red.rate, init);

    // Tangent of the reduced crease L r(psi) in host directions: L_psi r - L rot90(r).
    std::vector<Vec2> target(g.n);
    for (int j = 0; j < g.n; ++j)
        target[j] = (core.y[j][1] * red.rulings[j] - core.y[j][0] * rot90(red.rulings[j])).normalized();
    const Curve2D& x1 = host.curves[1];
    ParallelCurveProblem prob{{x1, ruling_angles(host, 1).left, red.rulings, {}, {}},
                              target,
                              init.l - red.l[0],
                              derivative_values6<Vec2>(g, x1.points),
                              red.ruling_rate};
    const auto pc = parallel_curve_on_patch(prob);
    for (int j = 0; j < g.n; ++j)
        if (!(pc.l[j] > 0.0))
            throw CreaseError(ErrorCode::TransformDegenerate,
                              "appended crease meets the host crease at t = " + std::to_string(g.node(j)));

    AppendResult out{detail::component(core.y, g, 0), detail::component(core.y, g, 1),
                     detail::component(core.y, g, 2), core.theta_2L, {}};
    const auto outer = detail::outer_rulings(g, pc.velocity, out.theta_2L);
    const double w = detail::default_width(pc.l.min(), outer.focal, width);
    std::vector<Vec2> xb(g.n);
    for (int j = 0; j < g.n; ++j) xb[j] = pc.curve.points[j] + w * outer.r[j];
    out.extended = make_sampled_pattern(g, {host.curves[0].points, x1.points, pc.curve.points, xb}, host.first_R,
                                        out.theta_2L);
    return out;
}

// Constant fold-angle partner on a cylinder: h = c3 arcsinh(l_2') + c4 and
// l_1 = c5 + branch * int_0^t sinh(h). arcsinh(x) = arctanh(x / sqrt(1 + x^2)).
inline FuncGrid constant_fold_pair_cylinder(const FuncGrid& l2, double c3, double c4, double c5, int branch = 1) {
    if (branch != 1 && branch != -1) throw CreaseError(ErrorCode::BadDocument, "branch must be +1 or -1");
    const Grid& g = l2.grid();
    const FuncGrid d2(g, derivative_values6<double>(g, l2.values()));
    const FuncGrid s = d2.map([&](double v) { return std::sinh(c3 * std::asinh(v) + c4); });
    return cumulative_integral(s).map([&](double v) { return c5 + branch * v; });
}

// Constant fold-angle partner on a cone:
// l_1'' = l_1 + 2 l_1'^2 / l_1 - c3 sqrt(e_1) f_2 / (l_2 sqrt(e_2)).
inline FuncGrid constant_fold_pair_cone(const FuncGrid& l2, double c3, double l1_0, double dl1_0) {
    if (!(l1_0 > 0.0)) throw CreaseError(ErrorCode::ApexCollision, "l_1(0) must be positive");
    const Grid& g = l2.grid();
    const auto h = detail::host_jet(l2, FuncGrid::constant(g, 1.0));
    std::vector<double> q(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double l = h.l[j], b1 = h.a1[j], b2 = h.a2[j];
        q[j] = (l * l + 2 * b1 * b1 - l * b2) / (l * std::sqrt(l * l + b1 * b1));
    }
    const HalfGridSamples<double> Q(g, std::move(q));
    using S = Eigen::Vector2d;
    auto rhs = [&](double t, const S& y) {
        if (!(y[0] > 0.0)) throw CreaseError(ErrorCode::ApexCollision, "l_1 reaches the apex at t = " + std::to_string(t));
        return S(y[1], y[0] + 2 * y[1] * y[1] / y[0] - c3 * std::sqrt(y[0] * y[0] + y[1] * y[1]) * Q(t));
    };
    const auto ys = integrate_ode<S>(rhs, S(l1_0, dl1_0), g);
    // l_1 only decays towards the apex, never reaching it at finite t; treat a
    // collapse below 1e-6 of the partner's size as the collision.
    const double floor = 1e-6 * l2.max_abs();
    std::vector<double> l1(g.n);
    for (int j = 0; j < g.n; ++j) {
        l1[j] = ys[j][0];
        if (!(l1[j] > floor))
            throw CreaseError(ErrorCode::ApexCollision, "l_1 collapses onto the apex at t = " + std::to_string(g.node(j)));
    }
    return {g, std::move(l1)};
}

// Two-crease pattern around l_1 < l_2 with mirrored outer rulings
// (theta_1R = pi - theta_1L, theta_2L = pi - theta_2R), the shape every
// constant fold-angle pair takes. Boundaries at l_1 - w0 and l_2 + w3.
inline CreaseRulePattern constant_fold_pattern(PatternKind kind, const FuncGrid& l1, const FuncGrid& l2, double w0,
                                               double w3, const Vec2& apex = Vec2::Zero()) {
    const Grid& g = l1.grid();
    auto mirrored = [&](const FuncGrid& l) {
        const auto h = detail::host_jet(l, FuncGrid::constant(g, 1.0));
        std::vector<double> th(g.n);
        for (int j = 0; j < g.n; ++j) {
            // Radial rulings: cot(theta) = l'/l; vertical rulings: cot(theta) = l'.
            const double c = kind == PatternKind::ConeRadial ? h.a1[j] / h.l[j] : h.a1[j];
            th[j] = std::numbers::pi - detail::cot_to_angle(c);
        }
        return FuncGrid(g, std::move(th));
    };
    std::vector<FuncGrid> l{l1 + (-w0), l1, l2, l2 + w3};
    if (kind == PatternKind::CylinderGraph) return make_cylinder_pattern(g, std::move(l), mirrored(l1), mirrored(l2));
    if (kind == PatternKind::ConeRadial) return make_cone_pattern(g, apex, std::move(l), mirrored(l1), mirrored(l2));
    throw CreaseError(ErrorCode::BadDocument, "constant fold-angle pairs are built on cylinders or cones");
}

}  // namespace crease
