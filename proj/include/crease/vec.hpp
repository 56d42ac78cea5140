#pragma once

#include <Eigen/Dense>

namespace crease {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

// Counterclockwise quarter turn; maps a tangent to its left normal.
inline Vec2 rot90(const Vec2& v) { return {-v.y(), v.x()}; }

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

inline Vec3 lift(const Vec2& v, double z = 0.0) { return {v.x(), v.y(), z}; }

}  // namespace crease
