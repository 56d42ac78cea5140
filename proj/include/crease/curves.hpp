#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "crease/numerics.hpp"
#include "crease/vec.hpp"

namespace crease {

struct Curve2D {
    Grid grid;
    FuncGrid speed;
    FuncGrid curvature;  // signed, counterclockwise positive
    std::vector<Vec2> points;
    std::vector<Vec2> tangents;
    std::vector<Vec2> normals;
};

struct Curve3D {
    Grid grid;
    FuncGrid speed;
    FuncGrid curvature;
    FuncGrid torsion;
    std::vector<Vec3> points;
    std::vector<Vec3> T, N, B;
    // Largest orthonormality defect seen before each Gram-Schmidt correction.
    double frame_drift = 0.0;
};

struct Frame3 {
    Vec3 T, N, B;
};

namespace detail {

inline void require_positive_speed(const FuncGrid& s) {
    if (!(s.min() > 0.0)) throw CreaseError(ErrorCode::DegenerateCurve, "parametrization speed must be positive");
}

inline double orthonormal_defect(const Vec3& T, const Vec3& N, const Vec3& B) {
    Eigen::Matrix3d F;
    F << T, N, B;
    return (F.transpose() * F - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace detail

inline Curve2D integrate_frame_2d(const FuncGrid& speed, const FuncGrid& curvature, const Vec2& x0,
                                  const Vec2& t0) {
    if (std::abs(t0.norm() - 1.0) > 1e-12) throw CreaseError(ErrorCode::BadFrame, "initial tangent is not unit");
    detail::require_positive_speed(speed);
    const Grid& g = speed.grid();
    const FuncGrid turn = speed * curvature;
    using S = Eigen::Vector3d;  // (x, y, tangent angle)
    auto rhs = [&](double t, const S& y) {
        const double s = speed(t);
        return S(s * std::cos(y[2]), s * std::sin(y[2]), turn(t));
    };
    const double a0 = std::atan2(t0.y(), t0.x());
    const auto ys = integrate_ode<S>(rhs, S(x0.x(), x0.y(), a0), g);

    Curve2D c{g, speed, curvature, {}, {}, {}};
    c.points.reserve(g.n);
    for (std::size_t j = 0; j < ys.size(); ++j) {
        c.points.emplace_back(ys[j][0], ys[j][1]);
        Vec2 t = j == 0 ? t0 : Vec2(std::cos(ys[j][2]), std::sin(ys[j][2]));
        c.tangents.push_back(t);
        c.normals.push_back(rot90(t));
    }
    c.points[0] = x0;
    return c;
}

inline Curve3D integrate_frame_3d(const FuncGrid& speed, const FuncGrid& K, const FuncGrid& tau, const Vec3& X0,
                                  const Frame3& f0) {
    if (detail::orthonormal_defect(f0.T, f0.N, f0.B) > 1e-10 || f0.T.cross(f0.N).dot(f0.B) < 0.0)
        throw CreaseError(ErrorCode::BadFrame, "initial frame is not a right-handed orthonormal triple");
    detail::require_positive_speed(speed);
    const Grid& g = speed.grid();
    using S = Eigen::Matrix<double, 12, 1>;
    auto rhs = [&](double t, const S& y) {
        const double s = speed(t), k = K(t), w = tau(t);
        const Vec3 T = y.segment<3>(3), N = y.segment<3>(6), B = y.segment<3>(9);
        S d;
        d.segment<3>(0) = s * T;
        d.segment<3>(3) = s * k * N;
        d.segment<3>(6) = -s * k * T + s * w * B;
        d.segment<3>(9) = -s * w * N;
        if (!d.allFinite()) {
            std::ostringstream os;
            os << "non-finite frame derivative at t = " << t;
            throw CreaseError(ErrorCode::OdeBlowUp, os.str());
        }
        return d;
    };

    Curve3D c{g, speed, K, tau, {}, {}, {}, {}, 0.0};
    S y;
    y << X0, f0.T, f0.N, f0.B;
    auto record = [&](const S& s) {
        c.points.push_back(s.segment<3>(0));
        c.T.push_back(s.segment<3>(3));
        c.N.push_back(s.segment<3>(6));
        c.B.push_back(s.segment<3>(9));
    };
    record(y);
    const double h = g.h();
    for (int j = 1; j < g.n; ++j) {
        y = rk4_step<S>(rhs, g.node(j - 1), y, h);
        Vec3 T = y.segment<3>(3), N = y.segment<3>(6);
        c.frame_drift = std::max(c.frame_drift, detail::orthonormal_defect(T, N, y.segment<3>(9)));
        T.normalize();
        N = (N - N.dot(T) * T).normalized();
        y.segment<3>(3) = T;
        y.segment<3>(6) = N;
        y.segment<3>(9) = T.cross(N);
        record(y);
    }
    return c;
}

inline Curve2D analyze_curve_2d(const std::vector<Vec2>& pts, const Grid& g) {
    if (pts.size() < 5 || static_cast<int>(pts.size()) != g.n)
        throw CreaseError(ErrorCode::GridTooCoarse, "curve needs at least 5 samples matching the grid");
    for (std::size_t j = 1; j < pts.size(); ++j)
        if ((pts[j] - pts[j - 1]).norm() == 0.0)
            throw CreaseError(ErrorCode::DegenerateCurve, "repeated consecutive point at node " + std::to_string(j));
    const auto d1 = derivative_values<Vec2>(g, pts);
    Curve2D c;
    c.grid = g;
    c.points = pts;
    std::vector<double> s(g.n);
    for (int j = 0; j < g.n; ++j) {
        s[j] = d1[j].norm();
        if (!(s[j] > 0.0)) throw CreaseError(ErrorCode::DegenerateCurve, "zero speed at node " + std::to_string(j));
        c.tangents.push_back(d1[j] / s[j]);
        c.normals.push_back(rot90(c.tangents.back()));
    }
    // k = (t'.n)/s' = cross(x', x'')/s'^3, with x'' from a direct second-difference stencil.
    const auto d2 = second_derivative_values<Vec2>(g, pts);
    std::vector<double> k(g.n);
    for (int j = 0; j < g.n; ++j) k[j] = cross2(d1[j], d2[j]) / (s[j] * s[j] * s[j]);
    c.speed = FuncGrid(g, std::move(s));
    c.curvature = FuncGrid(g, std::move(k));
    return c;
}

// Frenet data of a sampled space curve; requires non-vanishing curvature.
inline Curve3D analyze_curve_3d(const std::vector<Vec3>& pts, const Grid& g) {
    if (pts.size() < 5 || static_cast<int>(pts.size()) != g.n)
        throw CreaseError(ErrorCode::GridTooCoarse, "curve needs at least 5 samples matching the grid");
    const auto d1 = derivative_values<Vec3>(g, pts);
    const auto d2 = second_derivative_values<Vec3>(g, pts);
    const auto d3 = derivative_values<Vec3>(g, d2);
    Curve3D c;
    c.grid = g;
    c.points = pts;
    std::vector<double> s(g.n), K(g.n), w(g.n);
    for (int j = 0; j < g.n; ++j) {
        const Vec3 c12 = d1[j].cross(d2[j]);
        s[j] = d1[j].norm();
        if (!(s[j] > 0.0) || c12.norm() < 1e-14 * s[j] * s[j] * s[j])
            throw CreaseError(ErrorCode::DegenerateCurve, "Frenet frame undefined at node " + std::to_string(j));
        K[j] = c12.norm() / (s[j] * s[j] * s[j]);
        w[j] = c12.dot(d3[j]) / c12.squaredNorm();
        c.T.push_back(d1[j] / s[j]);
        c.B.push_back(c12.normalized());
        c.N.push_back(c.B.back().cross(c.T.back()));
    }
    c.speed = FuncGrid(g, std::move(s));
    c.curvature = FuncGrid(g, std::move(K));
    c.torsion = FuncGrid(g, std::move(w));
    return c;
}

struct ParallelFrameCheck {
    double max_angle = 0.0;
    double max_residual = 0.0;
};

namespace detail {

template <class V>
double max_tangent_angle(const std::vector<V>& a, const std::vector<V>& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        // Half-angle form: acos loses everything below sqrt(eps).
        const V u = a[j].normalized(), v = b[j].normalized();
        m = std::max(m, 2.0 * std::atan2((u - v).norm(), (u + v).norm()));
    }
    return m;
}

inline double max_product_residual(const FuncGrid& sa, const FuncGrid& ka, const FuncGrid& sb,
                                   const FuncGrid& kb) {
    double m = 0.0;
    for (std::size_t j = 0; j < sa.size(); ++j) m = std::max(m, std::abs(sa[j] * ka[j] - sb[j] * kb[j]));
    return m;
}

}  // namespace detail

inline ParallelFrameCheck parallel_frame_check(const Curve2D& a, const Curve2D& b) {
    if (!(a.grid == b.grid)) throw CreaseError(ErrorCode::BadDocument, "curves live on different grids");
    return {detail::max_tangent_angle(a.tangents, b.tangents),
            detail::max_product_residual(a.speed, a.curvature, b.speed, b.curvature)};
}

inline ParallelFrameCheck parallel_frame_check(const Curve3D& a, const Curve3D& b) {
    if (!(a.grid == b.grid)) throw CreaseError(ErrorCode::BadDocument, "curves live on different grids");
    return {detail::max_tangent_angle(a.T, b.T),
            std::max(detail::max_product_residual(a.speed, a.curvature, b.speed, b.curvature),
                     detail::max_product_residual(a.speed, a.torsion, b.speed, b.torsion))};
}

// Arc length of a sampled curve, integrating |x'| with the grid quadrature.
template <class V>
FuncGrid arc_length(const std::vector<V>& pts, const Grid& g) {
    const auto d = derivative_values6<V>(g, pts);
    std::vector<double> s(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) s[j] = d[j].norm();
    return cumulative_integral(FuncGrid(g, std::move(s)));
}

}  // namespace crease
