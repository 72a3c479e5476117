#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "singshock/errors.hpp"

namespace singshock {

/// Uniform 1-D grid; cell i spans ]x_min + i*h, x_min + (i+1)*h[.
struct GridSpec {
    double x_min = 0.0;
    double x_max = 1.0;
    double h = 1.0;
    std::size_t n_cells = 1;

    double left_edge(std::size_t i) const { return x_min + static_cast<double>(i) * h; }
    double center(std::size_t i) const { return x_min + (static_cast<double>(i) + 0.5) * h; }
    double length() const { return x_max - x_min; }

    /// Builds the grid from the domain and cell width; h must divide the domain.
    static GridSpec from_width(double x_min, double x_max, double h) {
        if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
            throw ConfigError("grid: domain must satisfy x_min < x_max");
        if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("grid: h must be positive");
        const double len = x_max - x_min;
        const double n = std::round(len / h);
        if (n < 1.0) throw ConfigError("grid: h larger than the domain");
        if (std::abs(n * h - len) > 1e-9 * len)
            throw ConfigError("grid: h = " + std::to_string(h) + " does not divide the domain length "
                              + std::to_string(len));
        return GridSpec{x_min, x_max, h, static_cast<std::size_t>(n)};
    }

    static GridSpec from_count(double x_min, double x_max, std::size_t n_cells) {
        if (n_cells == 0) throw ConfigError("grid: n_cells must be positive");
        if (!(x_max > x_min)) throw ConfigError("grid: domain must satisfy x_min < x_max");
        return GridSpec{x_min, x_max, (x_max - x_min) / static_cast<double>(n_cells), n_cells};
    }
};

/// Cell averages {u_i^n, v_i^n} at time level n.
struct StateField {
    GridSpec grid;
    std::vector<double> u;
    std::vector<double> v;
    double t = 0.0;
    std::int64_t n = 0;

    std::size_t size() const { return u.size(); }

    static StateField constant(const GridSpec& grid, double u0, double v0) {
        return StateField{grid, std::vector<double>(grid.n_cells, u0),
                          std::vector<double>(grid.n_cells, v0), 0.0, 0};
    }
};

/// Throws ConfigError unless lengths match the grid and every entry is finite.
inline void validate(const StateField& s) {
    if (s.u.size() != s.grid.n_cells || s.v.size() != s.grid.n_cells)
        throw ConfigError("state: field length does not match grid");
    for (std::size_t i = 0; i < s.u.size(); ++i)
        if (!std::isfinite(s.u[i]) || !std::isfinite(s.v[i]))
            throw ConfigError("state: non-finite value at cell " + std::to_string(i));
}

// Left-to-right reductions; the fixed order keeps monitor tables bit-reproducible.
inline double sum(const std::vector<double>& a) {
    double s = 0.0;
    for (double x : a) s += x;
    return s;
}

inline double sum_abs(const std::vector<double>& a) {
    double s = 0.0;
    for (double x : a) s += std::abs(x);
    return s;
}

inline double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

} // namespace singshock
