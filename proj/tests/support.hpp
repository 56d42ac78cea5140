#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "crease/curves.hpp"
#include "crease/error.hpp"
#include "crease/patches.hpp"

namespace support {

using namespace crease;

// Space developables with known rulings, patch width 0.5 on each side of the directrix.
inline DevelopablePatch3D from_rulings(const Grid& g, const std::vector<Vec3>& x, const std::vector<Vec3>& r) {
    return patch_from_rulings(analyze_curve_3d(x, g), r, FuncGrid::constant(g, -0.25), FuncGrid::constant(g, 0.25));
}

// Circle of radius 1 at height 0 on the cone with apex (0, 0, 1).
inline DevelopablePatch3D cone_circle(int n = 401) {
    const Grid g(2.0, n);
    std::vector<Vec3> x(n), r(n);
    for (int j = 0; j < n; ++j) {
        const double t = g.node(j);
        x[j] = Vec3(std::cos(t), std::sin(t), 0.0);
        r[j] = (Vec3(0, 0, 1) - x[j]).normalized();
    }
    return from_rulings(g, x, r);
}

// Generalized cylinder over the arc (t, 0.5 sin(t + 0.3), 0), rulings along (0, 0.4, 1).
// The arc has no inflection and the rulings stay on one side of its osculating plane.
inline DevelopablePatch3D sine_cylinder(int n = 401) {
    const Grid g(2.5, n);
    std::vector<Vec3> x(n), r(n, Vec3(0.0, 0.4, 1.0).normalized());
    for (int j = 0; j < n; ++j) {
        const double t = g.node(j);
        x[j] = Vec3(t, 0.5 * std::sin(t + 0.3), 0.0);
    }
    return from_rulings(g, x, r);
}

// Tangent surface of the helix (cos t, sin t, t/2), directrix pushed 0.5 along the tangent.
inline DevelopablePatch3D helix_tangent(int n = 401) {
    const Grid g(3.0, n);
    std::vector<Vec3> x(n), r(n);
    for (int j = 0; j < n; ++j) {
        const double t = g.node(j);
        const Vec3 T = Vec3(-std::sin(t), std::cos(t), 0.5).normalized();
        x[j] = Vec3(std::cos(t), std::sin(t), 0.5 * t) + 0.5 * T;
        r[j] = T;
    }
    return from_rulings(g, x, r);
}

// Folds develop -> ruling curvature -> refold and returns the Procrustes error of the directrix.
inline double roundtrip_error(const DevelopablePatch3D& p) {
    const auto dev = develop_patch(p);
    const auto V = ruling_curvature(p);
    const int sign = std::cos(p.inclination[0]) >= 0.0 ? 1 : -1;
    const auto q = refold_from_ruling_curvature(dev, V, sign);
    return procrustes(q.directrix.points, p.directrix.points).max_error;
}

// Code of the CreaseError thrown by f, empty when nothing is thrown.
template <class F>
std::optional<ErrorCode> error_code(F&& f) {
    try {
        f();
    } catch (const CreaseError& e) {
        return e.code();
    }
    return std::nullopt;
}

// Centre of the circle through three points.
inline Vec3 circumcenter(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 u = b - a, v = c - a, w = u.cross(v);
    return a + (u.squaredNorm() * v.cross(w) + v.squaredNorm() * w.cross(u)) / (2.0 * w.squaredNorm());
}

// Largest deviation of |x - centre| from r, the centre taken through the first, middle and last point.
inline double ring_radius_error(const std::vector<Vec3>& x, double r) {
    const Vec3 c = circumcenter(x.front(), x[x.size() / 2], x.back());
    double e = 0.0;
    for (const auto& p : x) e = std::max(e, std::abs((p - c).norm() - r));
    return e;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

// Minimal OBJ reader: vertices and the index lists of line elements.
struct Obj {
    std::vector<Vec3> v;
    std::vector<std::vector<long>> lines;
    std::vector<std::string> objects;
    std::size_t faces = 0;
};

inline Obj parse_obj(const std::string& text) {
    Obj o;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            double a, b, c;
            ls >> a >> b >> c;
            o.v.emplace_back(a, b, c);
        } else if (tag == "l") {
            std::vector<long> idx;
            long k;
            while (ls >> k) idx.push_back(k);
            o.lines.push_back(std::move(idx));
        } else if (tag == "f") {
            ++o.faces;
        } else if (tag == "o") {
            std::string name;
            ls >> name;
            o.objects.push_back(name);
        }
    }
    return o;
}

inline std::vector<Vec3> line_points(const Obj& o, std::size_t i) {
    std::vector<Vec3> x;
    for (long k : o.lines[i]) x.push_back(o.v[k - 1]);
    return x;
}

inline std::string tmp_dir() {
    std::filesystem::create_directories(CREASE_TMP_DIR);
    return CREASE_TMP_DIR;
}

}  // namespace support
