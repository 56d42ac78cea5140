#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "crease/compatibility.hpp"
#include "crease/folding.hpp"

namespace crease {

inline constexpr int kObjStations = 9;

namespace detail {

inline void put(std::string& out, const char* fmt, double a, double b, double c) {
    char buf[96];
    std::snprintf(buf, sizeof buf, fmt, a, b, c);
    out += buf;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw CreaseError(ErrorCode::BadDocument, "cannot write " + path);
    f << text;
    if (!f) throw CreaseError(ErrorCode::BadDocument, "failed writing " + path);
}

}  // namespace detail

// One object per patch, vertices row-major over (t_j, u_k) with kObjStations
// stations across [u_min, u_max], two triangles per quad. Patch i >= 1 starts
// at crease i, so its first column is that crease; those columns are repeated
// as line elements.
inline std::string folded_state_obj(const FoldedState& st) {
    std::string out = "# folded crease-rule pattern\n";
    const int m = kObjStations;
    long base = 1;
    std::vector<long> crease_base;
    for (std::size_t i = 0; i < st.patches.size(); ++i) {
        const auto& p = st.patches[i];
        const int n = static_cast<int>(p.rulings.size());
        out += "o patch_" + std::to_string(i) + "\n";
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < m; ++k) {
                const double u = p.u_min[j] + (p.u_max[j] - p.u_min[j]) * k / (m - 1);
                const Vec3 x = p.point(j, u);
                detail::put(out, "v %.17g %.17g %.17g\n", x.x(), x.y(), x.z());
            }
        for (int j = 0; j + 1 < n; ++j)
            for (int k = 0; k + 1 < m; ++k) {
                const long a = base + j * m + k, b = a + m;
                out += "f " + std::to_string(a) + " " + std::to_string(b) + " " + std::to_string(b + 1) + "\n";
                out += "f " + std::to_string(a) + " " + std::to_string(b + 1) + " " + std::to_string(a + 1) + "\n";
            }
        if (i >= 1) crease_base.push_back(base);
        base += static_cast<long>(n) * m;
    }
    for (std::size_t c = 0; c < crease_base.size(); ++c) {
        out += "o crease_" + std::to_string(c + 1) + "\nl";
        const int n = static_cast<int>(st.patches[c + 1].rulings.size());
        for (int j = 0; j < n; ++j) out += " " + std::to_string(crease_base[c] + static_cast<long>(j) * m);
        out += "\n";
    }
    return out;
}

inline void write_obj(const std::string& path, const FoldedState& st) { detail::write_text(path, folded_state_obj(st)); }

namespace detail {

inline std::string crease_color(const CreaseClass& c) {
    if (c.straight) return "#555555";
    if (c.planar && c.constant_fold) return "#7b2cbf";
    if (c.planar) return "#1f5fbf";
    if (c.constant_fold) return "#c0392b";
    return "#000000";
}

}  // namespace detail

// SVG 1.1 drawing of the pattern: boundaries, every 8th ruling of each patch and
// the creases colored by class (dashed when straight). y points up in the
// pattern, so the drawing flips it.
inline std::string pattern_svg(const CreaseRulePattern& p, const std::vector<CreaseClass>& classes) {
    std::vector<std::vector<Vec2>> x;
    for (int i = 0; i < static_cast<int>(p.curves.size()); ++i) x.push_back(effective_curve(p, i));
    double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
    for (const auto& c : x)
        for (const auto& v : c) {
            x0 = std::min(x0, v.x()), x1 = std::max(x1, v.x());
            y0 = std::min(y0, v.y()), y1 = std::max(y1, v.y());
        }
    const double pad = 0.02 * std::max(x1 - x0, y1 - y0);
    const double w = x1 - x0 + 2 * pad, h = y1 - y0 + 2 * pad;
    const double stroke = 0.003 * std::max(w, h);
    auto pt = [&](const Vec2& v) {
        char buf[80];
        std::snprintf(buf, sizeof buf, "%.9g,%.9g", v.x(), -v.y());
        return std::string(buf);
    };
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.9g", v);
        return std::string(buf);
    };
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" + num(x0 - pad) + " " + num(-y1 - pad) +
         " " + num(w) + " " + num(h) + "\" width=\"800\" height=\"" + num(800 * h / w) + "\">\n";
    s += "<g fill=\"none\" stroke-linecap=\"round\" stroke-width=\"" + num(stroke) + "\">\n";
    s += "<g class=\"rulings\" stroke=\"#9a9a9a\" stroke-width=\"" + num(0.5 * stroke) + "\">\n";
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        for (int j = 0; j < p.grid.n; j += 8)
            s += "<line x1=\"" + num(x[i][j].x()) + "\" y1=\"" + num(-x[i][j].y()) + "\" x2=\"" + num(x[i + 1][j].x()) +
                 "\" y2=\"" + num(-x[i + 1][j].y()) + "\"/>\n";
    s += "</g>\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        const bool boundary = i == 0 || i + 1 == x.size();
        std::string attrs;
        if (boundary) {
            attrs = "class=\"boundary\" stroke=\"#333333\"";
        } else {
            const CreaseClass c = i - 1 < classes.size() ? classes[i - 1] : CreaseClass{};
            attrs = "class=\"crease " + c.label() + "\" stroke=\"" + detail::crease_color(c) + "\"";
            if (c.straight) attrs += " stroke-dasharray=\"" + num(4 * stroke) + " " + num(2 * stroke) + "\"";
        }
        s += "<polyline " + attrs + " points=\"";
        for (std::size_t j = 0; j < x[i].size(); ++j) s += (j ? " " : "") + pt(x[i][j]);
        s += "\"/>\n";
    }
    s += "</g>\n</svg>\n";
    return s;
}

inline nlohmann::json to_json(const PatternValidation& v) {
    nlohmann::json j;
    j["regular"] = v.regular;
    j["candidate"] = v.candidate;
    j["inflections"] = v.inflections;
    j["inflection_nodes"] = v.inflection_nodes;
    auto d = nlohmann::json::array();
    for (const auto& x : v.diagnostics) d.push_back({{"check", x.check}, {"worst", x.worst}, {"location", x.location}});
    j["diagnostics"] = std::move(d);
    return j;
}

inline nlohmann::json fold_summary(const FoldedState& st, double c1) {
    return {{"c1", c1},
            {"constants", st.constants},
            {"assembly_residual", st.assembly_residual},
            {"slope_residual", st.slope_residual},
            {"curvature_residual", st.curvature_residual},
            {"bend_residual", st.bend_residual}};
}

}  // namespace crease
