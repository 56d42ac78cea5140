#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "crease/pattern.hpp"

namespace crease {

struct ParallelCurveProblem {
    DevelopablePatch2D host;
    std::vector<Vec2> target_tangents;  // unit tangents the new curve must follow, per node
    double l0 = 0.0;
    std::vector<Vec2> velocity;     // x' of the directrix when known exactly; else differentiated
    std::vector<Vec2> ruling_rate;  // r', likewise
};

struct ParallelCurveResult {
    FuncGrid l;  // offset along the host rulings
    Curve2D curve;
    std::vector<Vec2> velocity;  // x' + l' r + l r', exact given the inputs
    double max_angle = 0.0;  // against the target tangents
    bool out_of_extent = false;
};

// Host patch i of a pattern: directrix x_i (effective geometry for boundaries),
// rulings towards x_{i+1}, extents [0, ruling length].
inline DevelopablePatch2D pattern_patch(const CreaseRulePattern& p, int i) {
    const auto x = effective_curve(p, i);
    Curve2D c = x == p.curves[i].points ? p.curves[i] : analyze_curve_2d(x, p.grid);
    auto r = ruling_directions(p, i);
    std::vector<double> th(p.grid.n);
    for (int j = 0; j < p.grid.n; ++j) th[j] = std::atan2(c.normals[j].dot(r[j]), c.tangents[j].dot(r[j]));
    return {std::move(c), FuncGrid(p.grid, std::move(th)), std::move(r), FuncGrid::constant(p.grid, 0.0),
            ruling_lengths(p, i)};
}

namespace detail {

// l' = a l + b, l(0) = l0, solved as l = e^A (l0 + int e^-A b) with A = int a.
inline FuncGrid solve_linear(const FuncGrid& a, const FuncGrid& b, double l0) {
    const FuncGrid E = cumulative_integral(a).map([](double v) { return std::exp(v); });
    const FuncGrid Q = cumulative_integral(b / E);
    std::vector<double> l(a.size());
    for (std::size_t j = 0; j < l.size(); ++j) l[j] = E[j] * (l0 + Q[j]);
    return {a.grid(), std::move(l)};
}

inline void require_not_parallel(const Grid& g, const std::vector<Vec2>& nt, const std::vector<Vec2>& r) {
    for (int j = 0; j < g.n; ++j)
        if (std::abs(nt[j].dot(r[j])) < 1e-6)
            throw CreaseError(ErrorCode::RulingParallelToTarget,
                              "ruling parallel to the target tangent at t = " + std::to_string(g.node(j)));
}

}  // namespace detail

// Curve x + l r on the host whose tangents follow the target: l' = a l + b with
// a = -(n_t . r') / (n_t . r) and b = -(n_t . x') / (n_t . r).
inline ParallelCurveResult parallel_curve_on_patch(const ParallelCurveProblem& prob) {
    const Curve2D& x = prob.host.directrix;
    const Grid& g = x.grid;
    const auto& r = prob.host.rulings;
    if (static_cast<int>(r.size()) != g.n || static_cast<int>(prob.target_tangents.size()) != g.n)
        throw CreaseError(ErrorCode::BadDocument, "parallel curve data does not match the grid");
    std::vector<Vec2> nt(g.n);
    for (int j = 0; j < g.n; ++j) nt[j] = rot90(prob.target_tangents[j].normalized());
    detail::require_not_parallel(g, nt, r);
    const auto dr = prob.ruling_rate.empty() ? derivative_values<Vec2>(g, r) : prob.ruling_rate;
    const auto dx = prob.velocity.empty() ? derivative_values<Vec2>(g, x.points) : prob.velocity;
    if (static_cast<int>(dx.size()) != g.n || static_cast<int>(dr.size()) != g.n)
        throw CreaseError(ErrorCode::BadDocument, "velocity or ruling rate does not match the grid");
    std::vector<double> a(g.n), b(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double den = nt[j].dot(r[j]);
        a[j] = -nt[j].dot(dr[j]) / den;
        b[j] = -nt[j].dot(dx[j]) / den;
    }
    // The equation is linear: l = e^A (l0 + int e^-A b) with A = int a.
    const FuncGrid fa(g, std::move(a)), fb(g, std::move(b));
    const FuncGrid sol = detail::solve_linear(fa, fb, prob.l0);

    std::vector<double> l(g.n);
    std::vector<Vec2> pts(g.n);
    ParallelCurveResult out;
    out.velocity.resize(g.n);
    for (int j = 0; j < g.n; ++j) {
        l[j] = sol[j];
        pts[j] = x.points[j] + l[j] * r[j];
        out.velocity[j] = dx[j] + (fa[j] * l[j] + fb[j]) * r[j] + l[j] * dr[j];
        if (!prob.host.u_min.values().empty() &&
            (l[j] < prob.host.u_min[j] - 1e-12 || l[j] > prob.host.u_max[j] + 1e-12))
            out.out_of_extent = true;
    }
    out.l = FuncGrid(g, std::move(l));
    out.curve = analyze_curve_2d(pts, g);
    out.max_angle = detail::max_tangent_angle(out.curve.tangents, prob.target_tangents);
    return out;
}

namespace detail {

inline std::vector<Curve2D> effective_curves(const CreaseRulePattern& p) {
    std::vector<Curve2D> out;
    for (int i = 0; i < static_cast<int>(p.curves.size()); ++i) {
        const auto x = effective_curve(p, i);
        out.push_back(x == p.curves[i].points ? p.curves[i] : analyze_curve_2d(x, p.grid));
    }
    return out;
}

// Unit rulings of patch i and their t-derivative, from sixth-order tangents when
// the rulings come from an outer angle.
struct RulingField {
    std::vector<Vec2> r, dr;
};

inline RulingField ruling_field(const CreaseRulePattern& p, int i) {
    const int n = p.crease_count();
    RulingField f{ruling_directions(p, i), {}};
    const FuncGrid* th = (i == 0 && p.first_R) ? &*p.first_R : (i == n && p.last_L) ? &*p.last_L : nullptr;
    if (!th) {
        f.dr = derivative_values6<Vec2>(p.grid, f.r);
        return f;
    }
    const Curve2D& c = p.curves[i == 0 ? 1 : n];
    const auto v = derivative_values6<Vec2>(p.grid, c.points);
    for (int j = 0; j < p.grid.n; ++j) {
        const Vec2 t = v[j].normalized();
        f.r[j] = std::cos((*th)[j]) * t + std::sin((*th)[j]) * rot90(t);
    }
    f.dr = derivative_values6<Vec2>(p.grid, f.r);
    return f;
}

// Velocity of the effective curve idx, differentiating sampled data only.
inline std::vector<Vec2> effective_velocity(const CreaseRulePattern& p, int idx) {
    const int n = p.crease_count();
    const Grid& g = p.grid;
    const bool first = idx == 0 && p.first_R, last = idx == n + 1 && p.last_L;
    if (!first && !last) return derivative_values6<Vec2>(g, p.curves[idx].points);
    const int c = first ? 1 : n;
    const double sgn = first ? -1.0 : 1.0;
    const auto f = ruling_field(p, first ? 0 : n);
    std::vector<double> d(g.n);
    for (int j = 0; j < g.n; ++j) d[j] = (p.curves[idx].points[j] - p.curves[c].points[j]).norm();
    const auto dd = derivative_values6<double>(g, d);
    auto v = derivative_values6<Vec2>(g, p.curves[c].points);
    for (int j = 0; j < g.n; ++j) v[j] += sgn * (dd[j] * f.r[j] + d[j] * f.dr[j]);
    return v;
}

inline void require_regular(const CreaseRulePattern& p, const char* what) {
    const auto v = validate(p);
    if (v.regular) return;
    std::string msg = std::string(what) + " is not regular";
    if (!v.diagnostics.empty()) msg += ": " + v.diagnostics.front().check + " at " + v.diagnostics.front().location;
    throw CreaseError(ErrorCode::TransformDegenerate, msg);
}

// Least-squares common point of the lines x_j + s d_j.
inline Vec2 concurrency_point(const std::vector<Vec2>& x, const std::vector<Vec2>& d) {
    Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
    Vec2 b = Vec2::Zero();
    for (std::size_t j = 0; j < x.size(); ++j) {
        const Eigen::Matrix2d P = Eigen::Matrix2d::Identity() - d[j] * d[j].transpose();
        A += P;
        b += P * x[j];
    }
    return A.ldlt().solve(b);
}

}  // namespace detail

// Re-expresses a sampled pattern as a cylinder graph or a cone-radial pattern when
// its geometry allows it. Boundaries with outer angles keep their per-node distance.
inline CreaseRulePattern recover_kind(const CreaseRulePattern& p, PatternKind kind) {
    if (kind == PatternKind::Sampled) return p;
    const Grid& g = p.grid;
    const int n = p.crease_count();
    const double tol = 1e-8 * std::max(1.0, pattern_diameter(p));
    auto has_angle = [&](int i) { return (i == 0 && p.first_R) || (i == n + 1 && p.last_L); };

    Vec2 apex = Vec2::Zero();
    std::vector<Vec2> dir(g.n);
    for (int j = 0; j < g.n; ++j) dir[j] = kind == PatternKind::CylinderGraph ? Vec2(0, 1) : cone_direction(g.node(j));
    if (kind == PatternKind::ConeRadial) apex = detail::concurrency_point(p.curves[1].points, dir);

    std::vector<FuncGrid> lengths(p.curves.size());
    for (int i = 0; i <= n + 1; ++i) {
        if (has_angle(i)) continue;
        std::vector<double> l(g.n);
        for (int j = 0; j < g.n; ++j) {
            const Vec2& x = p.curves[i].points[j];
            if (kind == PatternKind::CylinderGraph) {
                if (std::abs(x.x() - g.node(j)) > tol) return p;
                l[j] = x.y();
            } else {
                const Vec2 v = x - apex;
                if (std::abs(cross2(dir[j], v)) > tol || !(v.dot(dir[j]) > 0.0)) return p;
                l[j] = v.dot(dir[j]);
            }
        }
        lengths[i] = FuncGrid(g, std::move(l));
    }
    for (int i : {0, n + 1}) {
        if (!has_angle(i)) continue;
        const int c = i == 0 ? 1 : n;
        const double sgn = i == 0 ? -1.0 : 1.0;
        std::vector<double> l(g.n);
        for (int j = 0; j < g.n; ++j) l[j] = lengths[c][j] + sgn * (p.curves[i].points[j] - p.curves[c].points[j]).norm();
        if (kind == PatternKind::ConeRadial && !(*std::min_element(l.begin(), l.end()) > 0.0)) return p;
        lengths[i] = FuncGrid(g, std::move(l));
    }
    if (kind == PatternKind::CylinderGraph) return make_cylinder_pattern(g, std::move(lengths), p.first_R, p.last_L);
    return make_cone_pattern(g, apex, std::move(lengths), p.first_R, p.last_L);
}

// Pattern whose curves have tangents parallel to the source curves and whose
// rulings keep their directions. The first boundary is x0(0) + int p0 x0'; every
// further curve is the parallel curve on the previous transformed patch.
// lengths[i] is the ruling length of patch i at t = 0 (default: the source's).
//
// Everything is carried as a displacement from the source: x~_i = x_i + D_i and
// l~_i = L_i + d_i, where d_i solves the parallel-curve equation forced only by
// the velocity difference D_i'. The identity transform is then exact, and the
// curvature of the image is not polluted by re-integrating the source.
inline CreaseRulePattern combescure_transform(const CreaseRulePattern& p, const FuncGrid& p0,
                                              std::optional<std::vector<double>> lengths = {}) {
    const Grid& g = p.grid;
    const int n = p.crease_count();
    if (!(p0.grid() == g)) throw CreaseError(ErrorCode::BadDocument, "p0 lives on a different grid");
    if (!(p0.min() > 0.0)) throw CreaseError(ErrorCode::TransformDegenerate, "p0 must be positive");
    if (lengths && static_cast<int>(lengths->size()) != n + 1)
        throw CreaseError(ErrorCode::BadDocument, "need one initial length per patch");
    detail::require_regular(p, "source pattern");

    const auto src = detail::effective_curves(p);
    const auto dx0 = detail::effective_velocity(p, 0);
    std::vector<double> vx(g.n), vy(g.n);
    std::vector<Vec2> dv(g.n);  // D'
    for (int j = 0; j < g.n; ++j) {
        dv[j] = (p0[j] - 1.0) * dx0[j];
        vx[j] = dv[j].x(), vy[j] = dv[j].y();
    }
    const FuncGrid ix = cumulative_integral(FuncGrid(g, std::move(vx)));
    const FuncGrid iy = cumulative_integral(FuncGrid(g, std::move(vy)));
    std::vector<Vec2> D(g.n);
    for (int j = 0; j < g.n; ++j) D[j] = Vec2(ix[j], iy[j]);

    std::vector<std::vector<Vec2>> pts(n + 2, std::vector<Vec2>(g.n));
    for (int j = 0; j < g.n; ++j) pts[0][j] = src[0].points[j] + D[j];
    for (int i = 0; i <= n; ++i) {
        const auto [r, dr] = detail::ruling_field(p, i);
        const FuncGrid L = ruling_lengths(p, i);
        const double l0 = lengths ? (*lengths)[i] : L[0];
        if (!(l0 > 0.0)) throw CreaseError(ErrorCode::TransformDegenerate, "initial lengths must be positive");
        std::vector<Vec2> nt(g.n);
        const auto vt = detail::effective_velocity(p, i + 1);
        for (int j = 0; j < g.n; ++j) nt[j] = rot90(vt[j].normalized());
        detail::require_not_parallel(g, nt, r);
        std::vector<double> a(g.n), b(g.n);
        for (int j = 0; j < g.n; ++j) {
            const double den = nt[j].dot(r[j]);
            a[j] = -nt[j].dot(dr[j]) / den;
            b[j] = -nt[j].dot(dv[j]) / den;
        }
        const FuncGrid fa(g, std::move(a)), fb(g, std::move(b));
        const FuncGrid d = detail::solve_linear(fa, fb, l0 - L[0]);
        for (int j = 0; j < g.n; ++j) {
            dv[j] += (fa[j] * d[j] + fb[j]) * r[j] + d[j] * dr[j];
            D[j] += d[j] * r[j];
            pts[i + 1][j] = src[i + 1].points[j] + D[j];
        }
    }
    auto out = make_sampled_pattern(g, pts, p.first_R, p.last_L);
    out = recover_kind(out, p.kind);
    detail::require_regular(out, "transformed pattern");
    return out;
}

// Adds crease x_{n+1} on the last patch with tangents parallel to x_n, starting
// l_n0 along the ruling, and a new boundary at l_n1 beyond it whose rulings meet
// x_{n+1} at theta_{n,R}.
inline CreaseRulePattern add_parallel_pleat(const CreaseRulePattern& p, double l_n0, double l_n1) {
    const Grid& g = p.grid;
    const int n = p.crease_count();
    if (!(l_n0 > 0.0) || !(l_n1 > 0.0)) throw CreaseError(ErrorCode::TransformDegenerate, "pleat offsets must be positive");
    const Curve2D& xn = p.curves[n];
    const auto th = ruling_angles(p, n);

    const auto f = detail::ruling_field(p, n);
    const auto vn = detail::effective_velocity(p, n);
    std::vector<Vec2> tn(g.n);
    for (int j = 0; j < g.n; ++j) tn[j] = vn[j].normalized();
    ParallelCurveProblem crease{{xn, th.left, f.r, {}, {}}, tn, l_n0, vn, f.dr};
    const auto rc = parallel_curve_on_patch(crease);
    const Curve2D& xc = rc.curve;

    std::vector<Vec2> r(g.n);
    for (int j = 0; j < g.n; ++j) r[j] = std::cos(th.right[j]) * tn[j] + std::sin(th.right[j]) * rot90(tn[j]);
    const auto dr = derivative_values6<Vec2>(g, r);
    ParallelCurveProblem bnd{{xc, th.right, r, {}, {}}, tn, l_n1, rc.velocity, dr};
    const Curve2D xb = parallel_curve_on_patch(bnd).curve;

    std::vector<std::vector<Vec2>> pts;
    for (int i = 0; i <= n; ++i) pts.push_back(p.curves[i].points);
    pts.push_back(xc.points);
    pts.push_back(xb.points);
    auto out = make_sampled_pattern(g, pts, p.first_R, th.right);
    out = recover_kind(out, p.kind);
    detail::require_regular(out, "pleated pattern");
    return out;
}

}  // namespace crease
