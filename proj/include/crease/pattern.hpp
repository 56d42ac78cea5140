#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "crease/curves.hpp"
#include "crease/patches.hpp"

namespace crease {

inline constexpr double kEpsLen = 1e-6;
inline constexpr double kEpsKRel = 1e-6;

enum class PatternKind { Sampled, CylinderGraph, ConeRadial };

inline std::string to_string(PatternKind k) {
    switch (k) {
    case PatternKind::Sampled: return "sampled";
    case PatternKind::CylinderGraph: return "cylinder-graph";
    case PatternKind::ConeRadial: return "cone-radial";
    }
    return "sampled";
}

// Curves x_0 .. x_{n+1} ordered right to left; x_0 and x_{n+1} are boundaries.
// Rulings join equal parameter values of neighbouring curves.
struct CreaseRulePattern {
    Grid grid;
    PatternKind kind = PatternKind::Sampled;
    Vec2 apex = Vec2::Zero();
    std::vector<FuncGrid> lengths;  // cylinder-graph and cone-radial only
    std::vector<Curve2D> curves;
    std::optional<FuncGrid> first_R;  // ruling angle on the right of crease 1
    std::optional<FuncGrid> last_L;   // ruling angle on the left of crease n

    int crease_count() const { return static_cast<int>(curves.size()) - 2; }
};

struct Diagnostic {
    std::string check;
    double worst = 0.0;
    std::string location;
};

struct PatternValidation {
    bool regular = true;
    bool candidate = true;
    std::vector<double> inflections;  // T0 as parameter values
    std::vector<int> inflection_nodes;
    std::vector<Diagnostic> diagnostics;
};

// ---------------------------------------------------------------------------
// Construction

inline std::vector<Vec2> cylinder_points(const Grid& g, const FuncGrid& l) {
    std::vector<Vec2> p(g.n);
    for (int j = 0; j < g.n; ++j) p[j] = Vec2(g.node(j), l[j]);
    return p;
}

inline Vec2 cone_direction(double t) { return {std::cos(t), -std::sin(t)}; }

inline std::vector<Vec2> cone_points(const Grid& g, const Vec2& apex, const FuncGrid& l) {
    std::vector<Vec2> p(g.n);
    for (int j = 0; j < g.n; ++j) p[j] = apex + l[j] * cone_direction(g.node(j));
    return p;
}

inline CreaseRulePattern make_sampled_pattern(const Grid& g, const std::vector<std::vector<Vec2>>& pts,
                                              std::optional<FuncGrid> first_R = {},
                                              std::optional<FuncGrid> last_L = {}) {
    if (pts.size() < 3) throw CreaseError(ErrorCode::BadDocument, "a pattern needs two boundaries and a crease");
    CreaseRulePattern p;
    p.grid = g;
    for (const auto& c : pts) p.curves.push_back(analyze_curve_2d(c, g));
    p.first_R = std::move(first_R);
    p.last_L = std::move(last_L);
    return p;
}

inline CreaseRulePattern make_cylinder_pattern(const Grid& g, std::vector<FuncGrid> l,
                                               std::optional<FuncGrid> first_R = {},
                                               std::optional<FuncGrid> last_L = {}) {
    std::vector<std::vector<Vec2>> pts;
    for (const auto& li : l) pts.push_back(cylinder_points(g, li));
    auto p = make_sampled_pattern(g, pts, std::move(first_R), std::move(last_L));
    p.kind = PatternKind::CylinderGraph;
    p.lengths = std::move(l);
    return p;
}

inline CreaseRulePattern make_cone_pattern(const Grid& g, const Vec2& apex, std::vector<FuncGrid> l,
                                           std::optional<FuncGrid> first_R = {},
                                           std::optional<FuncGrid> last_L = {}) {
    std::vector<std::vector<Vec2>> pts;
    for (const auto& li : l) pts.push_back(cone_points(g, apex, li));
    auto p = make_sampled_pattern(g, pts, std::move(first_R), std::move(last_L));
    p.kind = PatternKind::ConeRadial;
    p.apex = apex;
    p.lengths = std::move(l);
    return p;
}

// ---------------------------------------------------------------------------
// Rulings

namespace detail {

inline std::vector<Vec2> angle_rulings(const Curve2D& c, const FuncGrid& theta) {
    std::vector<Vec2> r(c.grid.n);
    for (int j = 0; j < c.grid.n; ++j)
        r[j] = std::cos(theta[j]) * c.tangents[j] + std::sin(theta[j]) * c.normals[j];
    return r;
}

inline std::vector<Vec2> chord_rulings(const Curve2D& a, const Curve2D& b, int patch) {
    std::vector<Vec2> r(a.grid.n);
    for (int j = 0; j < a.grid.n; ++j) {
        const Vec2 d = b.points[j] - a.points[j];
        const double len = d.norm();
        if (len < kEpsLen)
            throw CreaseError(ErrorCode::DegenerateRuling, "ruling of patch " + std::to_string(patch) +
                                                               " shorter than tolerance at node " + std::to_string(j));
        r[j] = d / len;
    }
    return r;
}

}  // namespace detail

// Unit rulings of patch i (between x_i and x_{i+1}), oriented from x_i to x_{i+1}.
// Boundary patches with a stored outer angle use that angle instead of the chord.
inline std::vector<Vec2> ruling_directions(const CreaseRulePattern& p, int i) {
    const int n = p.crease_count();
    if (i < 0 || i > n) throw CreaseError(ErrorCode::BadDocument, "patch index out of range");
    if (i == 0 && p.first_R) return detail::angle_rulings(p.curves[1], *p.first_R);
    if (i == n && p.last_L) return detail::angle_rulings(p.curves[n], *p.last_L);
    return detail::chord_rulings(p.curves[i], p.curves[i + 1], i);
}

inline FuncGrid angles_against(const Curve2D& c, const std::vector<Vec2>& r) {
    std::vector<double> th(c.grid.n);
    for (int j = 0; j < c.grid.n; ++j) {
        th[j] = std::atan2(c.normals[j].dot(r[j]), c.tangents[j].dot(r[j]));
        if (std::abs(std::sin(th[j])) < kMinSinTheta || th[j] <= 0.0)
            throw CreaseError(ErrorCode::RulingTangentToCrease,
                              "ruling tangent to curve or on the wrong side at node " + std::to_string(j));
    }
    return {c.grid, std::move(th)};
}

struct RulingAngles {
    FuncGrid left, right;
};

// (theta_iL, theta_iR) of crease i, both in (0, pi), measured from the tangent
// to rulings that point towards the left neighbour.
inline RulingAngles ruling_angles(const CreaseRulePattern& p, int i) {
    const int n = p.crease_count();
    if (i < 1 || i > n) throw CreaseError(ErrorCode::BadDocument, "crease index out of range");
    const Curve2D& c = p.curves[i];
    FuncGrid L = (i == n && p.last_L) ? *p.last_L : angles_against(c, ruling_directions(p, i));
    FuncGrid R = (i == 1 && p.first_R) ? *p.first_R : angles_against(c, ruling_directions(p, i - 1));
    detail::require_transversal(L);
    detail::require_transversal(R);
    return {std::move(L), std::move(R)};
}

// Boundary curve as used for geometry: with a stored outer angle the boundary is
// reached from the crease along the outer ruling, at the same per-node distance.
inline std::vector<Vec2> effective_curve(const CreaseRulePattern& p, int idx) {
    const int n = p.crease_count();
    if (idx == 0 && p.first_R) {
        const auto r = ruling_directions(p, 0);
        std::vector<Vec2> x(p.grid.n);
        for (int j = 0; j < p.grid.n; ++j) {
            const double d = (p.curves[1].points[j] - p.curves[0].points[j]).norm();
            x[j] = p.curves[1].points[j] - d * r[j];
        }
        return x;
    }
    if (idx == n + 1 && p.last_L) {
        const auto r = ruling_directions(p, n);
        std::vector<Vec2> x(p.grid.n);
        for (int j = 0; j < p.grid.n; ++j) {
            const double d = (p.curves[n + 1].points[j] - p.curves[n].points[j]).norm();
            x[j] = p.curves[n].points[j] + d * r[j];
        }
        return x;
    }
    return p.curves[idx].points;
}

// Per-node ruling length of patch i on the effective geometry.
inline FuncGrid ruling_lengths(const CreaseRulePattern& p, int i) {
    const auto a = effective_curve(p, i), b = effective_curve(p, i + 1);
    std::vector<double> d(p.grid.n);
    for (int j = 0; j < p.grid.n; ++j) d[j] = (b[j] - a[j]).norm();
    return {p.grid, std::move(d)};
}

inline double pattern_diameter(const CreaseRulePattern& p) {
    Eigen::AlignedBox2d box;
    for (int i = 0; i < static_cast<int>(p.curves.size()); ++i)
        for (const auto& x : effective_curve(p, i)) box.extend(x);
    return box.diagonal().norm();
}

inline bool is_straight(const Curve2D& c, double diameter) { return c.curvature.max_abs() * diameter < 1e-8; }

// ---------------------------------------------------------------------------
// Inflections

// Nodes where k is numerically zero relative to its maximum, or where k changes
// sign between neighbouring nodes (the node of smaller |k| is taken).
inline std::vector<int> inflection_nodes(const FuncGrid& k, double rel = kEpsKRel) {
    const double m = k.max_abs();
    std::vector<int> out;
    if (m == 0.0) {
        for (std::size_t j = 0; j < k.size(); ++j) out.push_back(static_cast<int>(j));
        return out;
    }
    const double eps = rel * m;
    std::vector<char> mark(k.size(), 0);
    for (std::size_t j = 0; j < k.size(); ++j)
        if (std::abs(k[j]) < eps) mark[j] = 1;
    for (std::size_t j = 0; j + 1 < k.size(); ++j) {
        if (mark[j] || mark[j + 1]) continue;
        if ((k[j] < 0) != (k[j + 1] < 0)) mark[std::abs(k[j]) <= std::abs(k[j + 1]) ? j : j + 1] = 1;
    }
    for (std::size_t j = 0; j < k.size(); ++j)
        if (mark[j]) out.push_back(static_cast<int>(j));
    return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline bool segments_cross(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
    const double d1 = cross2(a1 - a0, b0 - a0), d2 = cross2(a1 - a0, b1 - a0);
    const double d3 = cross2(b1 - b0, a0 - b0), d4 = cross2(b1 - b0, a1 - b0);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

inline std::string at_node(const Grid& g, int curve, int j) {
    return "curve " + std::to_string(curve) + ", t = " + std::to_string(g.node(j));
}

}  // namespace detail

inline PatternValidation validate(const CreaseRulePattern& p) {
    PatternValidation v;
    const Grid& g = p.grid;
    const int n = p.crease_count();
    auto fail = [&](std::string check, double worst, std::string where) {
        v.regular = false;
        v.diagnostics.push_back({std::move(check), worst, std::move(where)});
    };

    std::vector<std::vector<Vec2>> x;
    std::vector<Curve2D> ec;
    for (int i = 0; i <= n + 1; ++i) {
        x.push_back(effective_curve(p, i));
        const bool moved = (i == 0 && p.first_R) || (i == n + 1 && p.last_L);
        if (!moved) {
            ec.push_back(p.curves[i]);
            continue;
        }
        try {
            ec.push_back(analyze_curve_2d(x.back(), g));
        } catch (const CreaseError& e) {
            fail("boundary_curve", 0.0, e.what());
            ec.push_back(p.curves[i]);
        }
    }

    for (int i = 0; i <= n; ++i) {
        // Ruling lengths.
        double worst_len = INFINITY;
        int worst_j = 0;
        for (int j = 0; j < g.n; ++j) {
            const double d = (x[i + 1][j] - x[i][j]).norm();
            if (d < worst_len) worst_len = d, worst_j = j;
        }
        if (worst_len < kEpsLen) {
            fail("ruling_length", worst_len, detail::at_node(g, i, worst_j));
            continue;
        }
        // Left ordering: x_{i+1} strictly left of x_i, and x_i strictly right of x_{i+1}.
        const Curve2D& a = ec[i];
        const Curve2D& b = ec[i + 1];
        double worst_side = INFINITY;
        worst_j = 0;
        for (int j = 0; j < g.n; ++j) {
            const Vec2 r = (x[i + 1][j] - x[i][j]).normalized();
            const double s = std::min(cross2(a.tangents[j], r), cross2(b.tangents[j], r));
            if (s < worst_side) worst_side = s, worst_j = j;
        }
        if (worst_side <= 0.0)
            fail("left_ordering", worst_side, detail::at_node(g, i + 1, worst_j));
        else if (worst_side < kMinSinTheta)
            fail("transversality", worst_side, detail::at_node(g, i, worst_j));
        // Neighbouring ruling segments must not cross.
        for (int j = 0; j + 1 < g.n; ++j) {
            if (detail::segments_cross(x[i][j], x[i + 1][j], x[i][j + 1], x[i + 1][j + 1])) {
                fail("patch_disjointness", g.node(j), "patch " + std::to_string(i) + ", t = " + std::to_string(g.node(j)));
                break;
            }
        }
    }
    // Outer angles must also be transversal.
    try {
        for (int i = 1; i <= n; ++i) (void)ruling_angles(p, i);
    } catch (const CreaseError& e) {
        fail("transversality", 0.0, e.what());
    }

    v.inflection_nodes = inflection_nodes(p.curves[1].curvature);
    for (int j : v.inflection_nodes) v.inflections.push_back(g.node(j));
    for (int i = 2; i <= n; ++i) {
        const auto zi = inflection_nodes(p.curves[i].curvature);
        std::vector<char> near(g.n, 0);
        for (int j : zi)
            for (int d = -1; d <= 1; ++d)
                if (j + d >= 0 && j + d < g.n) near[j + d] = 1;
        for (int j : v.inflection_nodes) {
            if (!near[j]) {
                v.candidate = false;
                v.diagnostics.push_back({"inflection_mismatch", p.curves[i].curvature[j], detail::at_node(g, i, j)});
                break;
            }
        }
    }
    if (!v.regular) v.candidate = false;
    return v;
}

// ---------------------------------------------------------------------------
// Documents

namespace detail {

inline std::vector<double> read_reals(const nlohmann::json& a, const char* what) {
    if (!a.is_array()) throw CreaseError(ErrorCode::BadDocument, std::string(what) + " must be an array");
    std::vector<double> v;
    v.reserve(a.size());
    for (const auto& x : a) {
        if (!x.is_number()) throw CreaseError(ErrorCode::BadDocument, std::string(what) + " holds a non-number");
        const double d = x.get<double>();
        if (!std::isfinite(d)) throw CreaseError(ErrorCode::BadDocument, std::string(what) + " holds a non-finite value");
        v.push_back(d);
    }
    return v;
}

inline std::vector<Vec2> read_points(const nlohmann::json& a) {
    if (!a.is_array()) throw CreaseError(ErrorCode::BadDocument, "points must be an array");
    std::vector<Vec2> v;
    v.reserve(a.size());
    for (const auto& x : a) {
        const auto c = read_reals(x, "point");
        if (c.size() != 2) throw CreaseError(ErrorCode::BadDocument, "points must be [x, y] pairs");
        v.emplace_back(c[0], c[1]);
    }
    return v;
}

template <class V>
std::vector<V> resample(const Grid& from, const std::vector<V>& v, const Grid& to) {
    if (from == to) return v;
    std::vector<V> out(to.n);
    for (int j = 0; j < to.n; ++j) out[j] = interpolate<V>(from, v, to.node(j) * from.t_max / to.t_max);
    return out;
}

template <class V>
void require_samples(const std::vector<V>& v, int n, const char* what) {
    if (static_cast<int>(v.size()) != n)
        throw CreaseError(ErrorCode::BadDocument, std::string(what) + " length differs from samples");
}

}  // namespace detail

// Parses a pattern document. When resample_n differs from the document's sample
// count every per-node array is Hermite-resampled onto the new grid.
inline CreaseRulePattern load_pattern(const nlohmann::json& doc, std::optional<int> resample_n = {}) {
    if (!doc.is_object()) throw CreaseError(ErrorCode::BadDocument, "document must be an object");
    for (const char* key : {"version", "t_max", "samples", "kind", "curves"})
        if (!doc.contains(key)) throw CreaseError(ErrorCode::BadDocument, std::string("missing field ") + key);
    if (!doc["version"].is_number_integer() || doc["version"].get<int>() != 1)
        throw CreaseError(ErrorCode::BadDocument, "unsupported version");
    if (!doc["t_max"].is_number() || !doc["samples"].is_number_integer() || !doc["kind"].is_string())
        throw CreaseError(ErrorCode::BadDocument, "t_max, samples or kind has the wrong type");
    const int samples = doc["samples"].get<int>();
    if (samples < 16) throw CreaseError(ErrorCode::BadDocument, "samples must be at least 16");
    const Grid src(doc["t_max"].get<double>(), samples);
    const Grid g = resample_n ? Grid(src.t_max, *resample_n) : src;
    if (g.n < 16) throw CreaseError(ErrorCode::BadDocument, "samples must be at least 16");

    const std::string kind = doc["kind"].get<std::string>();
    const auto& cs = doc["curves"];
    if (!cs.is_array() || cs.size() < 3)
        throw CreaseError(ErrorCode::BadDocument, "curves must list two boundaries around at least one crease");
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (!cs[i].is_object() || !cs[i].contains("role") || !cs[i]["role"].is_string())
            throw CreaseError(ErrorCode::BadDocument, "curve " + std::to_string(i) + " lacks a role");
        const std::string role = cs[i]["role"].get<std::string>();
        const bool boundary = i == 0 || i + 1 == cs.size();
        if (role != (boundary ? "boundary" : "crease"))
            throw CreaseError(ErrorCode::BadDocument, "curve " + std::to_string(i) + " has role " + role +
                                                          "; expected boundary, crease..., boundary");
    }

    std::optional<FuncGrid> first_R, last_L;
    if (doc.contains("outer_angles")) {
        const auto& oa = doc["outer_angles"];
        if (!oa.is_object()) throw CreaseError(ErrorCode::BadDocument, "outer_angles must be an object");
        for (const auto& [key, val] : oa.items()) {
            if (key != "first_R" && key != "last_L")
                throw CreaseError(ErrorCode::BadDocument, "unknown outer angle " + key);
            auto a = detail::read_reals(val, key.c_str());
            detail::require_samples(a, samples, key.c_str());
            FuncGrid f(g, detail::resample(src, a, g));
            (key == "first_R" ? first_R : last_L) = std::move(f);
        }
    }

    if (kind == "sampled") {
        std::vector<std::vector<Vec2>> pts;
        for (const auto& c : cs) {
            if (!c.contains("points")) throw CreaseError(ErrorCode::BadDocument, "sampled curves need points");
            auto v = detail::read_points(c["points"]);
            detail::require_samples(v, samples, "points");
            pts.push_back(detail::resample(src, v, g));
        }
        return make_sampled_pattern(g, pts, std::move(first_R), std::move(last_L));
    }
    if (kind == "cylinder-graph" || kind == "cone-radial") {
        std::vector<FuncGrid> l;
        for (const auto& c : cs) {
            if (!c.contains("length")) throw CreaseError(ErrorCode::BadDocument, kind + " curves need length");
            auto v = detail::read_reals(c["length"], "length");
            detail::require_samples(v, samples, "length");
            l.emplace_back(g, detail::resample(src, v, g));
        }
        if (kind == "cylinder-graph") return make_cylinder_pattern(g, std::move(l), std::move(first_R), std::move(last_L));
        if (!doc.contains("apex")) throw CreaseError(ErrorCode::BadDocument, "cone-radial needs apex");
        const auto a = detail::read_reals(doc["apex"], "apex");
        if (a.size() != 2) throw CreaseError(ErrorCode::BadDocument, "apex must be [x, y]");
        return make_cone_pattern(g, Vec2(a[0], a[1]), std::move(l), std::move(first_R), std::move(last_L));
    }
    throw CreaseError(ErrorCode::BadDocument, "unknown kind " + kind);
}

inline nlohmann::json to_json(const CreaseRulePattern& p) {
    nlohmann::json doc;
    doc["version"] = 1;
    doc["t_max"] = p.grid.t_max;
    doc["samples"] = p.grid.n;
    doc["kind"] = to_string(p.kind);
    if (p.kind == PatternKind::ConeRadial) doc["apex"] = {p.apex.x(), p.apex.y()};
    auto curves = nlohmann::json::array();
    for (std::size_t i = 0; i < p.curves.size(); ++i) {
        nlohmann::json c;
        c["role"] = (i == 0 || i + 1 == p.curves.size()) ? "boundary" : "crease";
        if (p.kind == PatternKind::Sampled) {
            auto pts = nlohmann::json::array();
            for (const auto& x : p.curves[i].points) pts.push_back({x.x(), x.y()});
            c["points"] = std::move(pts);
        } else {
            c["length"] = p.lengths[i].values();
        }
        curves.push_back(std::move(c));
    }
    doc["curves"] = std::move(curves);
    if (p.first_R || p.last_L) {
        nlohmann::json oa = nlohmann::json::object();
        if (p.first_R) oa["first_R"] = p.first_R->values();
        if (p.last_L) oa["last_L"] = p.last_L->values();
        doc["outer_angles"] = std::move(oa);
    }
    return doc;
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CreaseError(ErrorCode::BadDocument, "cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw CreaseError(ErrorCode::BadDocument, path + ": " + e.what());
    }
}

inline CreaseRulePattern load_pattern_file(const std::string& path, std::optional<int> resample_n = {}) {
    return load_pattern(read_json_file(path), resample_n);
}

}  // namespace crease
