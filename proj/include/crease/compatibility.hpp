#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

#include "crease/pattern.hpp"

namespace crease {

inline constexpr double kEpsTheta = 1e-6;
inline constexpr double kConditionTol = 1e-5;
inline constexpr int kInflectionBuffer = 3;

// Integrand of I for one crease: f = (1/2) s' k (cot theta_L + cot theta_R).
inline FuncGrid crease_integrand(const FuncGrid& k, const FuncGrid& speed, const FuncGrid& theta_L,
                                 const FuncGrid& theta_R) {
    std::vector<double> f(k.size());
    for (std::size_t j = 0; j < f.size(); ++j)
        f[j] = 0.5 * speed[j] * k[j] * (1.0 / std::tan(theta_L[j]) + 1.0 / std::tan(theta_R[j]));
    return {k.grid(), std::move(f)};
}

struct PairProfile {
    int patch = 1;  // interior patch between creases patch and patch + 1
    FuncGrid F1, F2;
    FuncGrid I1, I2;
    FuncGrid dI1, dI2;  // integrands, i.e. I' evaluated directly
    FuncGrid mI1, mI2;  // (1/2)|s'k| max(1, |cot theta_L| + |cot theta_R|), the size of I' before cancellation
    std::vector<int> inflections;  // union of both creases' zero sets
};

inline PairProfile pair_profile(const CreaseRulePattern& p, int i) {
    if (i < 1 || i > p.crease_count() - 1) throw CreaseError(ErrorCode::BadDocument, "pair index out of range");
    const Curve2D& a = p.curves[i];
    const Curve2D& b = p.curves[i + 1];
    const auto ta = ruling_angles(p, i), tb = ruling_angles(p, i + 1);
    PairProfile pr;
    pr.patch = i;
    pr.F1 = FuncGrid::zip(a.speed * a.curvature, ta.left, [](double sk, double th) { return sk / std::sin(th); });
    pr.F2 = FuncGrid::zip(b.speed * b.curvature, tb.right, [](double sk, double th) { return sk / std::sin(th); });
    pr.dI1 = crease_integrand(a.curvature, a.speed, ta.left, ta.right);
    pr.dI2 = crease_integrand(b.curvature, b.speed, tb.left, tb.right);
    auto magnitude = [](const Curve2D& c, const RulingAngles& th) {
        std::vector<double> m(c.speed.size());
        for (std::size_t j = 0; j < m.size(); ++j)
            m[j] = 0.5 * std::abs(c.speed[j] * c.curvature[j]) *
                   std::max(1.0, std::abs(1.0 / std::tan(th.left[j])) + std::abs(1.0 / std::tan(th.right[j])));
        return FuncGrid(c.grid, std::move(m));
    };
    pr.mI1 = magnitude(a, ta);
    pr.mI2 = magnitude(b, tb);
    pr.I1 = cumulative_integral(pr.dI1);
    pr.I2 = cumulative_integral(pr.dI2);
    auto z1 = inflection_nodes(a.curvature), z2 = inflection_nodes(b.curvature);
    std::vector<int> z;
    std::set_union(z1.begin(), z1.end(), z2.begin(), z2.end(), std::back_inserter(z));
    pr.inflections = std::move(z);
    return pr;
}

// Nodes kept after removing a buffer of kInflectionBuffer cells around each excluded node.
inline std::vector<int> kept_nodes(int n, const std::vector<int>& excluded, int buffer = kInflectionBuffer) {
    std::vector<char> drop(n, 0);
    for (int j : excluded)
        for (int d = -buffer; d <= buffer; ++d)
            if (j + d >= 0 && j + d < n) drop[j + d] = 1;
    std::vector<int> keep;
    for (int j = 0; j < n; ++j)
        if (!drop[j]) keep.push_back(j);
    return keep;
}

struct ConditionResiduals {
    double resA = 0.0;
    double resB = 0.0;
    int nodes_used = 0;
};

// resA = max |F1'/F1 - F2'/F2 + I1' - I2'| (a rate, left in units of 1/t);
// resB = max |F2^2 I1' - F1^2 I2'| / (max F^2 * max m), m the size of I' before
// the cot terms cancel, floored at |s'k| / 2. Constant fold-angle creases have
// I' = 0 up to round-off, and nearly perpendicular rulings make both cot terms
// noise; normalizing by either would measure noise against noise.
inline ConditionResiduals condition_residuals(const PairProfile& pr, const std::vector<int>& T0) {
    const int n = pr.F1.grid().n;
    const auto keep = kept_nodes(n, T0);
    const FuncGrid dF1 = derivative(pr.F1), dF2 = derivative(pr.F2);
    ConditionResiduals r;
    r.nodes_used = static_cast<int>(keep.size());
    double maxF2 = 0.0, maxI = 0.0, rawB = 0.0;
    for (int j : keep) {
        const double a = dF1[j] / pr.F1[j] - dF2[j] / pr.F2[j] + pr.dI1[j] - pr.dI2[j];
        r.resA = std::max(r.resA, std::abs(a));
        maxF2 = std::max({maxF2, pr.F1[j] * pr.F1[j], pr.F2[j] * pr.F2[j]});
        maxI = std::max({maxI, pr.mI1[j], pr.mI2[j]});
        rawB = std::max(rawB, std::abs(pr.F2[j] * pr.F2[j] * pr.dI1[j] - pr.F1[j] * pr.F1[j] * pr.dI2[j]));
    }
    // Straight creases make every term vanish; then scale by F^2 alone.
    const double t_max = pr.F1.grid().t_max;
    if (maxF2 > 0.0 && maxI * t_max >= 1e-9)
        r.resB = rawB / (maxF2 * maxI);
    else
        r.resB = maxF2 > 0.0 ? rawB / maxF2 : rawB;
    return r;
}

struct IntegratedConstants {
    double c3 = 1.0;
    double c4 = 0.0;
    double c3_fit = 0.0;
    double c4_fit = 0.0;
    bool determined = false;  // false when every node is excluded (straight pair)
};

namespace detail {

inline double median(std::vector<double> v) {
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + m, v.end());
    if (v.size() % 2) return v[m];
    const double hi = v[m];
    return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + m));
}

}  // namespace detail

// c3 = median F1 e^I1 / (F2 e^I2), c4 = median e^{2 I1} - c3^2 e^{2 I2}; with
// constant_fold set (both I identically zero) c4 = 1 - c3^2 exactly.
inline IntegratedConstants integrated_constants(const PairProfile& pr, const std::vector<int>& T0,
                                                bool constant_fold = false) {
    const auto keep = kept_nodes(pr.F1.grid().n, T0);
    IntegratedConstants c;
    if (keep.empty()) return c;
    std::vector<double> r3;
    for (int j : keep) {
        const double q = pr.F1[j] * std::exp(pr.I1[j]) / (pr.F2[j] * std::exp(pr.I2[j]));
        if (!(q > 0.0))
            throw CreaseError(ErrorCode::IncompatiblePattern,
                              "F1/F2 changes sign at t = " + std::to_string(pr.F1.grid().node(j)) +
                                  " (c3 must be one positive constant; check the ruling orientation)");
        r3.push_back(q);
    }
    c.c3 = detail::median(r3);
    for (double q : r3) c.c3_fit = std::max(c.c3_fit, std::abs(q - c.c3));
    if (constant_fold) {
        c.c4 = 1.0 - c.c3 * c.c3;
    } else {
        std::vector<double> r4;
        for (int j : keep) r4.push_back(std::exp(2 * pr.I1[j]) - c.c3 * c.c3 * std::exp(2 * pr.I2[j]));
        c.c4 = detail::median(r4);
        for (double q : r4) c.c4_fit = std::max(c.c4_fit, std::abs(q - c.c4));
    }
    c.determined = true;
    return c;
}

struct CreaseClass {
    bool planar = false;
    bool constant_fold = false;
    bool straight = false;

    std::string label() const {
        if (straight) return "straight";
        if (planar && constant_fold) return "planar+constant-fold";
        if (planar) return "planar";
        if (constant_fold) return "constant-fold";
        return "generic";
    }
};

inline CreaseClass classify_crease(const CreaseRulePattern& p, int i, double eps_theta = kEpsTheta) {
    const auto th = ruling_angles(p, i);
    double dp = 0.0, dc = 0.0;
    for (int j = 0; j < p.grid.n; ++j) {
        dp = std::max(dp, std::abs(th.left[j] - th.right[j]));
        dc = std::max(dc, std::abs(th.left[j] + th.right[j] - std::numbers::pi));
    }
    CreaseClass c;
    c.straight = is_straight(p.curves[i], pattern_diameter(p));
    c.planar = c.straight || dp < eps_theta;
    c.constant_fold = c.straight || dc < eps_theta;
    return c;
}

enum class Verdict { Foldable, Incompatible, Degenerate };

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Foldable: return "foldable";
    case Verdict::Incompatible: return "incompatible";
    case Verdict::Degenerate: return "degenerate";
    }
    return "degenerate";
}

struct PairReport {
    int patch = 1;
    ConditionResiduals residuals;
    IntegratedConstants constants;
    bool pass = false;
    std::string failure;
};

struct CompatibilityReport {
    Verdict verdict = Verdict::Degenerate;
    double tolerance = kConditionTol;
    std::vector<PairReport> pairs;
    std::vector<CreaseClass> creases;  // index 0 is crease 1
    PatternValidation validation;
    std::vector<std::string> notes;
};

inline CompatibilityReport compatibility_report(const CreaseRulePattern& p, double tol = kConditionTol) {
    CompatibilityReport rep;
    rep.tolerance = tol;
    rep.validation = validate(p);
    if (!rep.validation.candidate) {
        rep.verdict = Verdict::Degenerate;
        rep.notes.push_back(rep.validation.regular ? "pattern is regular but not a candidate: inflections are not shared"
                                                   : "pattern is not regular");
        return rep;
    }
    const int n = p.crease_count();
    for (int i = 1; i <= n; ++i) rep.creases.push_back(classify_crease(p, i));

    bool all_pass = true;
    for (int i = 1; i < n; ++i) {
        PairReport pr;
        pr.patch = i;
        const auto prof = pair_profile(p, i);
        pr.residuals = condition_residuals(prof, prof.inflections);
        const bool both_constant = rep.creases[i - 1].constant_fold && rep.creases[i].constant_fold;
        pr.pass = pr.residuals.resA < tol && pr.residuals.resB < tol;
        if (!pr.pass) pr.failure = pr.residuals.resA >= tol ? "condition A" : "condition B";
        try {
            pr.constants = integrated_constants(prof, prof.inflections, both_constant);
        } catch (const CreaseError& e) {
            pr.pass = false;
            pr.failure = e.what();
        }
        if (!pr.constants.determined)
            rep.notes.push_back("pair " + std::to_string(i) + "/" + std::to_string(i + 1) +
                                " has no curved nodes; its fold constants are unconstrained (c3 = 1, c4 = 0 used)");
        all_pass = all_pass && pr.pass;
        rep.pairs.push_back(std::move(pr));
    }
    rep.verdict = all_pass ? Verdict::Foldable : Verdict::Incompatible;

    // Classification cross-checks; the residuals already decide, these explain.
    auto crease_name = [](int i) { return "crease " + std::to_string(i); };
    for (int i = 1; i < n; ++i) {
        const auto& a = rep.creases[i - 1];
        const auto& b = rep.creases[i];
        for (int s = 0; s < 2; ++s) {
            const auto& pl = s == 0 ? a : b;
            const auto& cf = s == 0 ? b : a;
            const int pi = s == 0 ? i : i + 1;
            if (!(pl.planar && !pl.straight && cf.constant_fold && !cf.straight)) continue;
            if (pl.constant_fold) {
                if (p.kind == PatternKind::ConeRadial)
                    rep.notes.push_back(crease_name(pi) + " is planar and perpendicular to the cone rulings");
                continue;
            }
            if (p.kind == PatternKind::CylinderGraph) {
                rep.verdict = Verdict::Incompatible;
                rep.notes.push_back(crease_name(pi) +
                                    " is planar next to a constant fold-angle crease on a cylinder; such a pair "
                                    "only folds when the planar crease is straight");
            } else if (p.kind == PatternKind::ConeRadial) {
                const double lp = derivative(p.lengths[pi]).max_abs();
                if (lp >= 1e-6) {
                    rep.verdict = Verdict::Incompatible;
                    rep.notes.push_back(crease_name(pi) +
                                        " is planar next to a constant fold-angle crease on a cone but is not "
                                        "perpendicular to the rulings (max |l'| = " + std::to_string(lp) + ")");
                }
            }
        }
    }
    if (rep.verdict == Verdict::Foldable) {
        const bool any_constant = std::any_of(rep.creases.begin(), rep.creases.end(),
                                              [](const CreaseClass& c) { return c.constant_fold && !c.straight; });
        const bool all_constant = std::all_of(rep.creases.begin(), rep.creases.end(),
                                              [](const CreaseClass& c) { return c.constant_fold; });
        if (any_constant && !all_constant) {
            rep.verdict = Verdict::Incompatible;
            rep.notes.push_back("a constant fold-angle crease forces every crease to be constant fold-angle, "
                                "but some crease is not");
        }
    }
    return rep;
}

inline nlohmann::json to_json(const CompatibilityReport& r) {
    nlohmann::json j;
    j["verdict"] = to_string(r.verdict);
    j["tolerance"] = r.tolerance;
    j["regular"] = r.validation.regular;
    j["candidate"] = r.validation.candidate;
    auto pairs = nlohmann::json::array();
    for (const auto& p : r.pairs) {
        nlohmann::json q;
        q["creases"] = {p.patch, p.patch + 1};
        q["resA"] = p.residuals.resA;
        q["resB"] = p.residuals.resB;
        q["c3"] = p.constants.c3;
        q["c4"] = p.constants.c4;
        q["c3_fit_residual"] = p.constants.c3_fit;
        q["c4_fit_residual"] = p.constants.c4_fit;
        q["constants_determined"] = p.constants.determined;
        q["pass"] = p.pass;
        if (!p.failure.empty()) q["failure"] = p.failure;
        pairs.push_back(std::move(q));
    }
    j["pairs"] = std::move(pairs);
    auto cs = nlohmann::json::array();
    for (std::size_t i = 0; i < r.creases.size(); ++i) {
        const auto& c = r.creases[i];
        cs.push_back({{"index", i + 1},
                      {"class", c.label()},
                      {"planar", c.planar},
                      {"constant_fold", c.constant_fold},
                      {"straight", c.straight}});
    }
    j["creases"] = std::move(cs);
    auto diags = nlohmann::json::array();
    for (const auto& d : r.validation.diagnostics)
        diags.push_back({{"check", d.check}, {"worst", d.worst}, {"location", d.location}});
    j["diagnostics"] = std::move(diags);
    j["notes"] = r.notes;
    return j;
}

}  // namespace crease
