#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "singshock/errors.hpp"
#include "singshock/grid.hpp"
#include "singshock/systems.hpp"

namespace singshock {

/// Piecewise-linear (u, v) through the nodes x[k]; constant beyond the end nodes.
struct TabulatedProfile {
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> v;
};

using InitialData = std::variant<RiemannData, TabulatedProfile>;

namespace detail {

// Exact integral over [a, b] of the piecewise-linear interpolant of (xs, ys).
inline double integrate_linear(const std::vector<double>& xs, const std::vector<double>& ys, double a, double b) {
    auto value_at = [&](double x) {
        if (x <= xs.front()) return ys.front();
        if (x >= xs.back()) return ys.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t k = static_cast<std::size_t>(it - xs.begin());
        const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
        return ys[k - 1] + w * (ys[k] - ys[k - 1]);
    };
    std::vector<double> pts{a};
    for (double x : xs)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        total += 0.5 * (value_at(pts[k]) + value_at(pts[k + 1])) * (pts[k + 1] - pts[k]);
    return total;
}

} // namespace detail

/// Cell values are exact means of the initial data over each cell.
inline StateField discretize_initial(const RiemannData& ic, const GridSpec& grid) {
    if (!(ic.jump_x > grid.x_min && ic.jump_x < grid.x_max))
        throw ConfigError("initial data: jump at x = " + std::to_string(ic.jump_x) + " lies outside ("
                          + std::to_string(grid.x_min) + ", " + std::to_string(grid.x_max) + ")");
    StateField s = StateField::constant(grid, 0.0, 0.0);
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
        double left_len = std::clamp(ic.jump_x - grid.left_edge(i), 0.0, grid.h);
        // A jump that sits on an edge up to rounding of x_min + i*h is treated as on the edge.
        if (left_len < 1e-9 * grid.h) left_len = 0.0;
        if (grid.h - left_len < 1e-9 * grid.h) left_len = grid.h;
        if (left_len == grid.h) {
            s.u[i] = ic.u_l;
            s.v[i] = ic.v_l;
        } else if (left_len == 0.0) {
            s.u[i] = ic.u_r;
            s.v[i] = ic.v_r;
        } else {
            const double w = left_len / grid.h;
            s.u[i] = w * ic.u_l + (1.0 - w) * ic.u_r;
            s.v[i] = w * ic.v_l + (1.0 - w) * ic.v_r;
        }
    }
    return s;
}

inline StateField discretize_initial(const TabulatedProfile& ic, const GridSpec& grid) {
    if (ic.x.empty() || ic.x.size() != ic.u.size() || ic.x.size() != ic.v.size())
        throw ConfigError("tabulated initial data: x, u, v must be non-empty and of equal length");
    if (!std::is_sorted(ic.x.begin(), ic.x.end()) || std::adjacent_find(ic.x.begin(), ic.x.end()) != ic.x.end())
        throw ConfigError("tabulated initial data: nodes must be strictly increasing");
    StateField s = StateField::constant(grid, 0.0, 0.0);
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
        const double a = grid.left_edge(i), b = a + grid.h;
        s.u[i] = detail::integrate_linear(ic.x, ic.u, a, b) / grid.h;
        s.v[i] = detail::integrate_linear(ic.x, ic.v, a, b) / grid.h;
    }
    return s;
}

inline StateField discretize_initial(const InitialData& ic, const GridSpec& grid) {
    return std::visit([&](const auto& d) { return discretize_initial(d, grid); }, ic);
}

} // namespace singshock
