#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "crease/error.hpp"

namespace crease {

// Uniform parameter grid on [0, t_max].
struct Grid {
    double t_max = 1.0;
    int n = 2;

    Grid() = default;
    Grid(double t_max_, int n_) : t_max(t_max_), n(n_) {
        if (!(t_max > 0.0) || !std::isfinite(t_max))
            throw CreaseError(ErrorCode::BadDocument, "grid t_max must be positive and finite");
        if (n < 2) throw CreaseError(ErrorCode::GridTooCoarse, "grid needs at least 2 nodes");
    }

    double h() const { return t_max / (n - 1); }
    double node(int j) const { return j == n - 1 ? t_max : j * h(); }

    friend bool operator==(const Grid& a, const Grid& b) { return a.n == b.n && a.t_max == b.t_max; }
};

namespace detail {

// Fourth-order first derivative at node j. V is double or a fixed-size Eigen vector.
template <class V>
V fd_slope(std::span<const V> f, double h, std::size_t j) {
    const std::size_t n = f.size();
    if (j >= 2 && j + 2 < n)
        return V((f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * h));
    if (j == 0)
        return V((-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h));
    if (j == 1)
        return V((-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h));
    const std::size_t m = n - 1;
    if (j == m)
        return V((25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) /
                 (12.0 * h));
    return V((3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) / (12.0 * h));
}

// Fourth-order second derivative at node j (six-point one-sided stencils near the ends).
template <class V>
V fd_second(std::span<const V> f, double h, std::size_t j) {
    const std::size_t n = f.size();
    const double q = 12.0 * h * h;
    if (j >= 2 && j + 2 < n) return V((-f[j - 2] + 16.0 * f[j - 1] - 30.0 * f[j] + 16.0 * f[j + 1] - f[j + 2]) / q);
    if (j == 0) return V((45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] - 10.0 * f[5]) / q);
    if (j == 1) return V((10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]) / q);
    const std::size_t m = n - 1;
    if (j == m)
        return V((45.0 * f[m] - 154.0 * f[m - 1] + 214.0 * f[m - 2] - 156.0 * f[m - 3] + 61.0 * f[m - 4] - 10.0 * f[m - 5]) / q);
    return V((10.0 * f[m] - 15.0 * f[m - 1] - 4.0 * f[m - 2] + 14.0 * f[m - 3] - 6.0 * f[m - 4] + f[m - 5]) / q);
}

inline void require_stencil(std::size_t n) {
    if (n < 5) throw CreaseError(ErrorCode::GridTooCoarse, "derivative needs at least 5 nodes");
}

}  // namespace detail

template <class V>
std::vector<V> derivative_values(const Grid& g, std::span<const V> f) {
    detail::require_stencil(f.size());
    std::vector<V> out;
    out.reserve(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) out.push_back(detail::fd_slope<V>(f, g.h(), j));
    return out;
}

template <class V>
std::vector<V> derivative_values(const Grid& g, const std::vector<V>& f) {
    return derivative_values<V>(g, std::span<const V>(f));
}

template <class V>
std::vector<V> second_derivative_values(const Grid& g, const std::vector<V>& f) {
    if (f.size() < 6) throw CreaseError(ErrorCode::GridTooCoarse, "second derivative needs at least 6 nodes");
    std::vector<V> out;
    out.reserve(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) out.push_back(detail::fd_second<V>(std::span<const V>(f), g.h(), j));
    return out;
}

// Sixth-order first derivative (seven-point stencils). For velocities that are
// integrated again: their one-sided end errors would otherwise show up as kinks.
template <class V>
std::vector<V> derivative_values6(const Grid& g, const std::vector<V>& f) {
    static constexpr double w[3][7] = {{-147, 360, -450, 400, -225, 72, -10},
                                       {-10, -77, 150, -100, 50, -15, 2},
                                       {2, -24, -35, 80, -30, 8, -1}};
    static constexpr double c[7] = {-1, 9, -45, 0, 45, -9, 1};
    const int n = static_cast<int>(f.size());
    if (n < 7) return derivative_values<V>(g, f);
    const double q = 60.0 * g.h();
    std::vector<V> out(n);
    for (int j = 0; j < n; ++j) {
        V acc = f[0] * 0.0;
        if (j >= 3 && j + 3 < n) {
            for (int k = 0; k < 7; ++k) acc += c[k] * f[j - 3 + k];
        } else if (j < 3) {
            for (int k = 0; k < 7; ++k) acc += w[j][k] * f[k];
        } else {
            const int m = n - 1 - j;
            for (int k = 0; k < 7; ++k) acc -= w[m][k] * f[n - 1 - k];
        }
        out[j] = acc / q;
    }
    return out;
}

// Values at the cell midpoints t_j + h/2 by six-point Lagrange interpolation
// (sixth order, one-sided in the first and last two cells).
template <class V>
std::vector<V> midpoint_values(const std::vector<V>& f) {
    static constexpr double w0[6] = {63, 315, -210, 126, -45, 7};
    static constexpr double w1[6] = {-7, 105, 210, -70, 21, -3};
    static constexpr double wc[6] = {3, -25, 150, 150, -25, 3};
    const int n = static_cast<int>(f.size());
    if (n < 6) throw CreaseError(ErrorCode::GridTooCoarse, "midpoint interpolation needs at least 6 nodes");
    std::vector<V> out(n - 1);
    for (int j = 0; j + 1 < n; ++j) {
        V acc = f[0] * 0.0;
        if (j >= 2 && j + 3 < n) {
            for (int k = 0; k < 6; ++k) acc += wc[k] * f[j - 2 + k];
        } else if (j < 2) {
            const double* w = j == 0 ? w0 : w1;
            for (int k = 0; k < 6; ++k) acc += w[k] * f[k];
        } else {
            const double* w = j == n - 2 ? w0 : w1;
            for (int k = 0; k < 6; ++k) acc += w[k] * f[n - 1 - k];
        }
        out[j] = acc / 256.0;
    }
    return out;
}

// Node and midpoint samples of a function, looked up by t on the RK4 half grid.
template <class V>
struct HalfGridSamples {
    Grid grid;
    std::vector<V> nodes, mids;

    HalfGridSamples(const Grid& g, std::vector<V> v) : grid(g), nodes(std::move(v)), mids(midpoint_values(nodes)) {}

    V operator()(double t) const {
        const long k = std::lround(2.0 * t / grid.h());
        const long m = std::clamp<long>(k, 0, 2L * (grid.n - 1));
        return m % 2 == 0 ? nodes[m / 2] : mids[m / 2];
    }
};

// Cubic Hermite interpolation with finite-difference slopes; exact at nodes.
template <class V>
V interpolate(const Grid& g, std::span<const V> f, double t) {
    detail::require_stencil(f.size());
    const double h = g.h();
    double s = t / h;
    auto j = static_cast<std::ptrdiff_t>(std::floor(s));
    j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(f.size()) - 2);
    const double u = s - static_cast<double>(j);
    const auto ju = static_cast<std::size_t>(j);
    if (u == 0.0) return f[ju];
    const V m0 = detail::fd_slope<V>(f, h, ju);
    const V m1 = detail::fd_slope<V>(f, h, ju + 1);
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
    return V(h00 * f[ju] + h10 * h * m0 + h01 * f[ju + 1] + h11 * h * m1);
}

template <class V>
V interpolate(const Grid& g, const std::vector<V>& f, double t) {
    return interpolate<V>(g, std::span<const V>(f), t);
}

class FuncGrid {
public:
    FuncGrid() = default;
    FuncGrid(const Grid& g, std::vector<double> v) : grid_(g), v_(std::move(v)) {
        if (static_cast<int>(v_.size()) != g.n)
            throw CreaseError(ErrorCode::BadDocument, "FuncGrid size does not match grid");
        for (std::size_t j = 0; j < v_.size(); ++j) {
            if (!std::isfinite(v_[j])) {
                std::ostringstream os;
                os << "non-finite value at node " << j;
                throw CreaseError(ErrorCode::BadDocument, os.str());
            }
        }
    }

    template <class F>
    static FuncGrid sample(const Grid& g, F&& f) {
        std::vector<double> v(g.n);
        for (int j = 0; j < g.n; ++j) v[j] = f(g.node(j));
        return {g, std::move(v)};
    }

    static FuncGrid constant(const Grid& g, double c) { return {g, std::vector<double>(g.n, c)}; }

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }
    double operator[](std::size_t j) const { return v_[j]; }
    const std::vector<double>& values() const { return v_; }
    double front() const { return v_.front(); }
    double back() const { return v_.back(); }

    double operator()(double t) const { return interpolate<double>(grid_, v_, t); }

    double max_abs() const {
        double m = 0.0;
        for (double x : v_) m = std::max(m, std::abs(x));
        return m;
    }
    double min() const { return *std::min_element(v_.begin(), v_.end()); }
    double max() const { return *std::max_element(v_.begin(), v_.end()); }

    template <class F>
    FuncGrid map(F&& f) const {
        std::vector<double> v(v_.size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(v_[j]);
        return {grid_, std::move(v)};
    }

    friend FuncGrid operator+(const FuncGrid& a, const FuncGrid& b) { return zip(a, b, std::plus<>{}); }
    friend FuncGrid operator-(const FuncGrid& a, const FuncGrid& b) { return zip(a, b, std::minus<>{}); }
    friend FuncGrid operator*(const FuncGrid& a, const FuncGrid& b) { return zip(a, b, std::multiplies<>{}); }
    friend FuncGrid operator/(const FuncGrid& a, const FuncGrid& b) { return zip(a, b, std::divides<>{}); }
    friend FuncGrid operator*(double c, const FuncGrid& a) {
        return a.map([c](double x) { return c * x; });
    }
    friend FuncGrid operator+(const FuncGrid& a, double c) {
        return a.map([c](double x) { return x + c; });
    }
    FuncGrid operator-() const {
        return map([](double x) { return -x; });
    }

    template <class F>
    static FuncGrid zip(const FuncGrid& a, const FuncGrid& b, F&& f) {
        if (!(a.grid_ == b.grid_)) throw CreaseError(ErrorCode::BadDocument, "FuncGrid grids differ");
        std::vector<double> v(a.size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(a.v_[j], b.v_[j]);
        return {a.grid_, std::move(v)};
    }

private:
    Grid grid_;
    std::vector<double> v_;
};

inline FuncGrid derivative(const FuncGrid& f) {
    return {f.grid(), derivative_values<double>(f.grid(), f.values())};
}

// Running integral from 0. Each interval uses the Hermite-corrected trapezoid
// h/2 (f0 + f1) + h^2/12 (f0' - f1'), which telescopes to a single end correction.
inline FuncGrid cumulative_integral(const FuncGrid& f) {
    const Grid& g = f.grid();
    const double h = g.h();
    std::vector<double> out(f.size(), 0.0);
    if (f.size() < 5) {
        for (std::size_t j = 1; j < f.size(); ++j) out[j] = out[j - 1] + 0.5 * h * (f[j - 1] + f[j]);
        return {g, std::move(out)};
    }
    const auto df = derivative_values<double>(g, f.values());
    double trap = 0.0;
    for (std::size_t j = 1; j < f.size(); ++j) {
        trap += 0.5 * h * (f[j - 1] + f[j]);
        out[j] = trap + h * h / 12.0 * (df[0] - df[j]);
    }
    return {g, std::move(out)};
}

template <class State, class Rhs>
State rk4_step(Rhs& rhs, double t, const State& y, double h) {
    const State k1 = rhs(t, y);
    const State k2 = rhs(t + 0.5 * h, State(y + 0.5 * h * k1));
    const State k3 = rhs(t + 0.5 * h, State(y + 0.5 * h * k2));
    const State k4 = rhs(t + h, State(y + h * k3));
    return State(y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

// Classical RK4 with step equal to the grid spacing; one state per node.
// State is a fixed-size Eigen column vector of dimension at most 16.
template <class State, class Rhs>
std::vector<State> integrate_ode(Rhs&& rhs, const State& y0, const Grid& grid) {
    static_assert(State::ColsAtCompileTime == 1 && State::RowsAtCompileTime > 0 &&
                      State::RowsAtCompileTime <= 16,
                  "state must be a fixed-size column vector of dimension <= 16");
    std::vector<State> out;
    out.reserve(grid.n);
    out.push_back(y0);
    const double h = grid.h();
    auto checked = [&](double t, const State& y) {
        State d = rhs(t, y);
        if (!d.allFinite()) {
            std::ostringstream os;
            os << "non-finite right-hand side at t = " << t;
            throw CreaseError(ErrorCode::OdeBlowUp, os.str());
        }
        return d;
    };
    for (int j = 1; j < grid.n; ++j) {
        State y = rk4_step<State>(checked, grid.node(j - 1), out.back(), h);
        if (!y.allFinite()) {
            std::ostringstream os;
            os << "solution became non-finite at t = " << grid.node(j);
            throw CreaseError(ErrorCode::OdeBlowUp, os.str());
        }
        out.push_back(y);
    }
    return out;
}

}  // namespace crease
