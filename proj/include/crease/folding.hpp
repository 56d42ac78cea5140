#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "crease/compatibility.hpp"

namespace crease {

struct CreaseFoldSolution {
    FuncGrid phi, K, tau, I;
    double c = 0.0;
    double c_max = 1.0;
};

inline double c_max(const FuncGrid& k, const FuncGrid& speed, const FuncGrid& theta_L, const FuncGrid& theta_R) {
    const FuncGrid I = cumulative_integral(crease_integrand(k, speed, theta_L, theta_R));
    double m = INFINITY;
    for (double x : I.values()) m = std::min(m, std::exp(-x));
    return m;
}

// phi = arcsin(c0 e^I), K = k / cos(phi), tau = (1/2) k (cot theta_R - cot theta_L) tan(phi).
inline CreaseFoldSolution fold_single_crease(const FuncGrid& k, const FuncGrid& speed, const FuncGrid& theta_L,
                                             const FuncGrid& theta_R, double c0) {
    CreaseFoldSolution s;
    s.I = cumulative_integral(crease_integrand(k, speed, theta_L, theta_R));
    s.c_max = INFINITY;
    for (double x : s.I.values()) s.c_max = std::min(s.c_max, std::exp(-x));
    if (!(std::abs(c0) <= s.c_max))
        throw CreaseError(ErrorCode::FoldAngleOutOfRange,
                          "|c| = " + std::to_string(std::abs(c0)) + " exceeds c_max = " + std::to_string(s.c_max));
    s.c = c0;
    const Grid& g = k.grid();
    std::vector<double> phi(g.n), K(g.n), tau(g.n);
    for (int j = 0; j < g.n; ++j) {
        phi[j] = std::asin(std::clamp(c0 * std::exp(s.I[j]), -1.0, 1.0));
        const double cp = std::cos(phi[j]);
        if (cp == 0.0)
            throw CreaseError(ErrorCode::InclinationSingular, "crease fully folded at node " + std::to_string(j));
        K[j] = k[j] / cp;
        tau[j] = 0.5 * k[j] * (1.0 / std::tan(theta_R[j]) - 1.0 / std::tan(theta_L[j])) * std::tan(phi[j]);
    }
    s.phi = FuncGrid(g, std::move(phi));
    s.K = FuncGrid(g, std::move(K));
    s.tau = FuncGrid(g, std::move(tau));
    return s;
}

inline double propagate_fold_constant(double ci, double c3, double c4) {
    const double d = 1.0 - ci * ci * c4;
    if (!(d > 0.0))
        throw CreaseError(ErrorCode::FoldAngleOutOfRange,
                          "1 - c^2 c4 = " + std::to_string(d) + " is not positive for c = " + std::to_string(ci));
    return -ci * c3 / std::sqrt(d);
}

struct FoldedState {
    std::vector<double> constants;  // c_i per crease
    std::vector<CreaseFoldSolution> solutions;
    std::vector<Curve3D> creases;
    std::vector<DevelopablePatch3D> patches;  // patch i lies between creases i and i+1
    double assembly_residual = 0.0;
    double slope_residual = 0.0;
    double curvature_residual = 0.0;
    double bend_residual = 0.0;
};

struct FoldOutcome {
    bool trivial = false;
    std::optional<FoldedState> state;
};

namespace detail {

struct CreaseData {
    FuncGrid theta_L, theta_R, I;
    double c_max = 1.0;
};

inline std::vector<CreaseData> crease_data(const CreaseRulePattern& p) {
    std::vector<CreaseData> out;
    for (int i = 1; i <= p.crease_count(); ++i) {
        auto th = ruling_angles(p, i);
        const auto& c = p.curves[i];
        CreaseData d{th.left, th.right, cumulative_integral(crease_integrand(c.curvature, c.speed, th.left, th.right))};
        d.c_max = INFINITY;
        for (double x : d.I.values()) d.c_max = std::min(d.c_max, std::exp(-x));
        out.push_back(std::move(d));
    }
    return out;
}

inline void require_foldable(const CompatibilityReport& r) {
    if (r.verdict != Verdict::Foldable)
        throw CreaseError(ErrorCode::IncompatiblePattern, "pattern is " + to_string(r.verdict) + ", not foldable");
}

// Propagated constants, or nullopt when c1 leaves a domain.
inline std::optional<std::vector<double>> constant_chain(const CompatibilityReport& r,
                                                         const std::vector<CreaseData>& cd, double c1) {
    std::vector<double> c{c1};
    for (std::size_t i = 0; i < cd.size(); ++i) {
        if (!(std::abs(c[i]) <= cd[i].c_max)) return std::nullopt;
        if (i + 1 == cd.size()) break;
        const auto& k = r.pairs[i].constants;
        if (!(1.0 - c[i] * c[i] * k.c4 > 0.0)) return std::nullopt;
        c.push_back(-c[i] * k.c3 / std::sqrt(1.0 - c[i] * c[i] * k.c4));
    }
    return c;
}

inline Vec3 left_ruling(const Curve3D& X, std::size_t j, double phi, double theta) {
    return std::cos(theta) * X.T[j] + std::sin(theta) * (std::cos(phi) * X.N[j] - std::sin(phi) * X.B[j]);
}

}  // namespace detail

// Largest admissible c1 over the propagated chain, times (1 - 1e-6).
inline double motion_upper_bound(const CreaseRulePattern& p, const CompatibilityReport& r) {
    detail::require_foldable(r);
    const auto cd = detail::crease_data(p);
    auto ok = [&](double c) { return detail::constant_chain(r, cd, c).has_value(); };
    double hi = std::min(1.0, cd[0].c_max);
    if (!ok(hi)) {
        double lo = 0.0;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            (ok(mid) ? lo : hi) = mid;
        }
        hi = lo;
    }
    return hi * (1.0 - 1e-6);
}

// Folded state at c1 = sin(phi_1(0)). Crease 1 starts at its pattern position with
// Frenet frame (t_1, n_1, e_z); every further crease is anchored at t = 0 where the
// ruling of the shared patch reaches it, sharing that patch's tangent plane.
inline FoldOutcome fold_pattern(const CreaseRulePattern& p, const CompatibilityReport& r, double c1) {
    detail::require_foldable(r);
    if (c1 == 0.0) return {true, std::nullopt};
    const auto cd = detail::crease_data(p);
    const int n = p.crease_count();
    const Grid& g = p.grid;

    std::vector<double> cs{c1};
    for (int i = 0; i + 1 < n; ++i) {
        const auto& k = r.pairs[i].constants;
        cs.push_back(propagate_fold_constant(cs[i], k.c3, k.c4));
    }

    FoldedState st;
    st.constants = cs;
    for (int i = 1; i <= n; ++i) {
        const auto& c = p.curves[i];
        st.solutions.push_back(fold_single_crease(c.curvature, c.speed, cd[i - 1].theta_L, cd[i - 1].theta_R, cs[i - 1]));
    }

    st.creases.reserve(n);
    {
        const auto& c = p.curves[1];
        st.creases.push_back(integrate_frame_3d(c.speed, st.solutions[0].K, st.solutions[0].tau, lift(c.points[0]),
                                                {lift(c.tangents[0]), lift(c.normals[0]), Vec3::UnitZ()}));
    }
    const double eps_fit = 1e-4 * pattern_diameter(p);
    for (int i = 1; i < n; ++i) {
        const Curve3D& X = st.creases[i - 1];
        const auto& sol = st.solutions[i - 1];
        const FuncGrid L = ruling_lengths(p, i);
        const double ph = sol.phi[0];
        const Vec3 P = std::cos(ph) * X.B[0] + std::sin(ph) * X.N[0];
        const Vec3 Q = std::cos(ph) * X.N[0] - std::sin(ph) * X.B[0];
        const Vec3 X0 = X.points[0] + L[0] * detail::left_ruling(X, 0, ph, cd[i - 1].theta_L[0]);

        const Curve2D& a = p.curves[i];
        const Curve2D& b = p.curves[i + 1];
        const Vec3 T = (b.tangents[0].dot(a.tangents[0]) * X.T[0] + b.tangents[0].dot(a.normals[0]) * Q).normalized();
        const Vec3 Qn = P.cross(T);
        const double pn = st.solutions[i].phi[0];
        const Vec3 N = std::cos(pn) * Qn - std::sin(pn) * P;
        const Vec3 B = T.cross(N);
        st.creases.push_back(integrate_frame_3d(b.speed, st.solutions[i].K, st.solutions[i].tau, X0, {T, N, B}));

        double gap = 0.0;
        for (int j = 0; j < g.n; ++j) {
            const Vec3 m = X.points[j] + L[j] * detail::left_ruling(X, j, sol.phi[j], cd[i - 1].theta_L[j]);
            gap = std::max(gap, (m - st.creases[i].points[j]).norm());
        }
        st.assembly_residual = std::max(st.assembly_residual, gap);
        if (gap > eps_fit)
            throw CreaseError(ErrorCode::AssemblyMismatch, "crease " + std::to_string(i + 1) + " misses its marched copy by " +
                                                               std::to_string(gap));
    }

    // Patches: right boundary patch on crease 1, interior and left boundary patches.
    st.patches.push_back(make_patch_3d(st.creases[0], -st.solutions[0].phi, cd[0].theta_R, -ruling_lengths(p, 0),
                                       FuncGrid::constant(g, 0.0)));
    for (int i = 1; i <= n; ++i)
        st.patches.push_back(make_patch_3d(st.creases[i - 1], st.solutions[i - 1].phi, cd[i - 1].theta_L,
                                           FuncGrid::constant(g, 0.0), ruling_lengths(p, i)));

    // Residuals of the folded-state system.
    for (int i = 1; i <= n; ++i) {
        const auto& c = p.curves[i];
        const auto& s = st.solutions[i - 1];
        const FuncGrid dphi = derivative(s.phi);
        for (int j = 0; j < g.n; ++j) {
            const double base = c.speed[j] * c.curvature[j] * std::tan(s.phi[j]);
            const double sl = dphi[j] - c.speed[j] * s.tau[j] - base / std::tan(cd[i - 1].theta_L[j]);
            const double sr = dphi[j] + c.speed[j] * s.tau[j] - base / std::tan(cd[i - 1].theta_R[j]);
            st.slope_residual = std::max({st.slope_residual, std::abs(sl), std::abs(sr)});
            st.curvature_residual = std::max(st.curvature_residual, std::abs(c.curvature[j] - s.K[j] * std::cos(s.phi[j])));
        }
    }
    for (int i = 1; i < n; ++i) {
        const auto& a = p.curves[i];
        const auto& b = p.curves[i + 1];
        double diff = 0.0, scale = 0.0;
        for (int j = 0; j < g.n; ++j) {
            const double v1 = a.speed[j] * a.curvature[j] / std::sin(cd[i - 1].theta_L[j]) * std::tan(st.solutions[i - 1].phi[j]);
            const double v2 = b.speed[j] * b.curvature[j] / std::sin(cd[i].theta_R[j]) * std::tan(st.solutions[i].phi[j]);
            diff = std::max(diff, std::abs(v1 + v2));
            scale = std::max({scale, std::abs(v1), std::abs(v2)});
        }
        st.bend_residual = std::max(st.bend_residual, scale > 0.0 ? diff / scale : diff);
    }
    return {false, std::move(st)};
}

struct FoldMotion {
    double c1_upper = 0.0;
    std::vector<double> c1;
    std::vector<FoldedState> states;
};

// c1 = c1_upper * j / (steps + 1), j = 1..steps: increasing, open at both ends.
inline FoldMotion sample_motion(const CreaseRulePattern& p, const CompatibilityReport& r, int steps) {
    if (steps < 1) throw CreaseError(ErrorCode::BadDocument, "motion needs at least one step");
    FoldMotion m;
    m.c1_upper = motion_upper_bound(p, r);
    for (int j = 1; j <= steps; ++j) {
        const double c1 = m.c1_upper * j / (steps + 1);
        auto out = fold_pattern(p, r, c1);
        m.c1.push_back(c1);
        m.states.push_back(std::move(*out.state));
    }
    return m;
}

}  // namespace crease
