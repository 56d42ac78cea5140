#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "crease/curves.hpp"

namespace crease {

inline constexpr double kEpsDev = 1e-5;
inline constexpr double kMinSinTheta = 1e-6;

struct DevelopablePatch3D {
    Curve3D directrix;
    FuncGrid inclination;   // phi
    FuncGrid ruling_angle;  // theta
    std::vector<Vec3> rulings;
    std::vector<Vec3> normals;
    FuncGrid u_min, u_max;

    Vec3 point(std::size_t j, double u) const { return directrix.points[j] + u * rulings[j]; }
};

struct DevelopablePatch2D {
    Curve2D directrix;
    FuncGrid ruling_angle;
    std::vector<Vec2> rulings;
    FuncGrid u_min, u_max;

    Vec2 point(std::size_t j, double u) const { return directrix.points[j] + u * rulings[j]; }
};

namespace detail {

inline void require_transversal(const FuncGrid& theta) {
    for (std::size_t j = 0; j < theta.size(); ++j)
        if (std::abs(std::sin(theta[j])) < kMinSinTheta)
            throw CreaseError(ErrorCode::RulingTangentToCrease,
                              "ruling tangent to directrix at node " + std::to_string(j));
}

inline FuncGrid unwrap(const Grid& g, std::vector<double> a) {
    for (std::size_t j = 1; j < a.size(); ++j) {
        while (a[j] - a[j - 1] > std::numbers::pi) a[j] -= 2 * std::numbers::pi;
        while (a[j] - a[j - 1] < -std::numbers::pi) a[j] += 2 * std::numbers::pi;
    }
    return {g, std::move(a)};
}

}  // namespace detail

// Ruling R = cos(theta) T + sin(theta) (cos(phi) N - sin(phi) B), plane normal P = cos(phi) B + sin(phi) N.
inline DevelopablePatch3D make_patch_3d(Curve3D directrix, FuncGrid phi, FuncGrid theta, FuncGrid u_min,
                                        FuncGrid u_max) {
    detail::require_transversal(theta);
    DevelopablePatch3D p{std::move(directrix), std::move(phi), std::move(theta), {}, {}, std::move(u_min),
                         std::move(u_max)};
    const auto& c = p.directrix;
    for (std::size_t j = 0; j < p.inclination.size(); ++j) {
        const double cp = std::cos(p.inclination[j]), sp = std::sin(p.inclination[j]);
        const double ct = std::cos(p.ruling_angle[j]), st = std::sin(p.ruling_angle[j]);
        p.rulings.push_back(ct * c.T[j] + st * (cp * c.N[j] - sp * c.B[j]));
        p.normals.push_back(cp * c.B[j] + sp * c.N[j]);
    }
    return p;
}

// Recovers (phi, theta) from given unit rulings lying off the directrix tangent.
inline DevelopablePatch3D patch_from_rulings(Curve3D directrix, const std::vector<Vec3>& R, FuncGrid u_min,
                                             FuncGrid u_max) {
    const Grid g = directrix.grid;
    std::vector<double> th(g.n), ph(g.n);
    for (int j = 0; j < g.n; ++j) {
        const Vec3 r = R[j].normalized();
        const double a = r.dot(directrix.T[j]);
        const double rn = r.dot(directrix.N[j]), rb = r.dot(directrix.B[j]);
        th[j] = std::atan2(std::hypot(rn, rb), a);
        ph[j] = std::atan2(-rb, rn);
    }
    return make_patch_3d(std::move(directrix), detail::unwrap(g, std::move(ph)), FuncGrid(g, std::move(th)),
                         std::move(u_min), std::move(u_max));
}

// det(X', R, R') per node.
inline FuncGrid developability_residual(const Curve3D& c, const std::vector<Vec3>& R) {
    const auto dR = derivative_values<Vec3>(c.grid, R);
    std::vector<double> d(c.grid.n);
    for (int j = 0; j < c.grid.n; ++j) d[j] = (c.speed[j] * c.T[j]).dot(R[j].cross(dR[j]));
    return {c.grid, std::move(d)};
}

// Scale-free variant det(X'/|X'|, R, R'/max(|R'|, 1)) used for the developability tolerance.
inline FuncGrid normalized_developability_residual(const Curve3D& c, const std::vector<Vec3>& R) {
    const auto dR = derivative_values<Vec3>(c.grid, R);
    std::vector<double> d(c.grid.n);
    for (int j = 0; j < c.grid.n; ++j)
        d[j] = c.T[j].dot(R[j].cross(dR[j] / std::max(dR[j].norm(), 1.0)));
    return {c.grid, std::move(d)};
}

inline DevelopablePatch2D develop_patch(const DevelopablePatch3D& p, double eps_dev = kEpsDev) {
    const double res = normalized_developability_residual(p.directrix, p.rulings).max_abs();
    if (!(res < eps_dev))
        throw CreaseError(ErrorCode::NotDevelopable, "developability residual " + std::to_string(res));
    const auto& c = p.directrix;
    const FuncGrid k = FuncGrid::zip(c.curvature, p.inclination, [](double K, double f) { return K * std::cos(f); });
    DevelopablePatch2D d{integrate_frame_2d(c.speed, k, Vec2(0, 0), Vec2(1, 0)), p.ruling_angle, {}, p.u_min,
                         p.u_max};
    for (std::size_t j = 0; j < k.size(); ++j)
        d.rulings.push_back(std::cos(p.ruling_angle[j]) * d.directrix.tangents[j] +
                            std::sin(p.ruling_angle[j]) * d.directrix.normals[j]);
    return d;
}

// V = s' k tan(phi) / sin(theta).
inline FuncGrid ruling_curvature(const FuncGrid& k, const FuncGrid& speed, const FuncGrid& phi,
                                 const FuncGrid& theta) {
    std::vector<double> v(k.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double c = std::cos(phi[j]);
        if (std::abs(c) < 1e-9)
            throw CreaseError(ErrorCode::InclinationSingular, "cos(phi) vanishes at node " + std::to_string(j));
        v[j] = speed[j] * k[j] * std::sin(phi[j]) / c / std::sin(theta[j]);
    }
    return {k.grid(), std::move(v)};
}

inline FuncGrid ruling_curvature(const DevelopablePatch3D& p) {
    const auto& c = p.directrix;
    const FuncGrid k = FuncGrid::zip(c.curvature, p.inclination, [](double K, double f) { return K * std::cos(f); });
    return ruling_curvature(k, c.speed, p.inclination, p.ruling_angle);
}

// Rebuilds the bent patch from its development and ruling curvature, anchored at
// X(0) = 0 with the identity Frenet frame. sign = -1 selects the branch cos(phi) < 0,
// which describes the same surface with the principal normal reversed.
inline DevelopablePatch3D refold_from_ruling_curvature(const DevelopablePatch2D& dev, const FuncGrid& V,
                                                       int sign = 1) {
    const auto& c = dev.directrix;
    const Grid& g = c.grid;
    const FuncGrid sk = c.speed * c.curvature;
    const double eps_k = 1e-9 * std::max(sk.max_abs(), 1e-300);
    std::vector<double> phi(g.n, 0.0);
    std::vector<int> good;
    for (int j = 0; j < g.n; ++j) {
        if (sk.max_abs() > 0.0 && std::abs(sk[j]) > eps_k) {
            phi[j] = std::atan(V[j] * std::sin(dev.ruling_angle[j]) / sk[j]);
            good.push_back(j);
        }
    }
    if (good.empty()) {
        if (V.max_abs() > 1e-12)
            throw CreaseError(ErrorCode::InconsistentBend, "straight development cannot carry nonzero ruling curvature");
    } else {
        // Fill isolated zeros of k by linear interpolation between valid neighbours.
        std::size_t gi = 0;
        for (int j = 0; j < g.n; ++j) {
            while (gi < good.size() && good[gi] < j) ++gi;
            if (gi < good.size() && good[gi] == j) continue;
            if (gi == 0) {
                phi[j] = phi[good.front()];
            } else if (gi == good.size()) {
                phi[j] = phi[good.back()];
            } else {
                const int a = good[gi - 1], b = good[gi];
                phi[j] = phi[a] + (phi[b] - phi[a]) * (j - a) / double(b - a);
            }
        }
    }
    if (sign < 0)
        for (double& f : phi) f += std::numbers::pi;
    FuncGrid Phi(g, std::move(phi));
    const FuncGrid dphi = derivative(Phi);
    std::vector<double> K(g.n), tau(g.n);
    for (int j = 0; j < g.n; ++j) {
        K[j] = c.curvature[j] / std::cos(Phi[j]);
        tau[j] = dphi[j] / c.speed[j] - K[j] * std::sin(Phi[j]) / std::tan(dev.ruling_angle[j]);
    }
    Curve3D X = integrate_frame_3d(c.speed, FuncGrid(g, std::move(K)), FuncGrid(g, std::move(tau)), Vec3::Zero(),
                                   {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()});
    return make_patch_3d(std::move(X), std::move(Phi), dev.ruling_angle, dev.u_min, dev.u_max);
}

struct RigidFit {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Vec3 translation = Vec3::Zero();
    double max_error = 0.0;
};

// Best rotation + translation carrying a onto b (Kabsch), with the worst vertex error.
inline RigidFit procrustes(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    if (a.size() != b.size() || a.empty())
        throw CreaseError(ErrorCode::BadDocument, "procrustes needs two equally sized point sets");
    Vec3 ca = Vec3::Zero(), cb = Vec3::Zero();
    for (std::size_t i = 0; i < a.size(); ++i) {
        ca += a[i];
        cb += b[i];
    }
    ca /= double(a.size());
    cb /= double(b.size());
    Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < a.size(); ++i) H += (a[i] - ca) * (b[i] - cb).transpose();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d D = Eigen::Matrix3d::Identity();
    if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0) D(2, 2) = -1;
    RigidFit f;
    f.rotation = svd.matrixV() * D * svd.matrixU().transpose();
    f.translation = cb - f.rotation * ca;
    for (std::size_t i = 0; i < a.size(); ++i)
        f.max_error = std::max(f.max_error, (f.rotation * a[i] + f.translation - b[i]).norm());
    return f;
}

}  // namespace crease
