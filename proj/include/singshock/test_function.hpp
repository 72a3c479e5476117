#pragma once

#include <cmath>
#include <string>

#include "singshock/errors.hpp"
#include "singshock/grid.hpp"

namespace singshock {

/// g(s) = exp(-1/(1-s²)) on |s| < 1, zero elsewhere.
inline double bump(double s) {
    const double q = 1.0 - s * s;
    return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

/// g'(s) = -2s / (1-s²)² · g(s).
inline double bump_derivative(double s) {
    const double q = 1.0 - s * s;
    return q > 0.0 ? -2.0 * s / (q * q) * std::exp(-1.0 / q) : 0.0;
}

/// ψ(x,t) = amplitude · g((x-x_center)/x_width) · g((t-t_center)/t_width).
struct TestFunction {
    double x_center = 0.0;
    double x_width = 1.0;
    double t_center = 0.5;
    double t_width = 0.25;
    double amplitude = 1.0;

    double operator()(double x, double t) const {
        return amplitude * bump((x - x_center) / x_width) * bump((t - t_center) / t_width);
    }
    double dt(double x, double t) const {
        return amplitude * bump((x - x_center) / x_width) * bump_derivative((t - t_center) / t_width) / t_width;
    }
    double dx(double x, double t) const {
        return amplitude * bump_derivative((x - x_center) / x_width) / x_width * bump((t - t_center) / t_width);
    }

    double x_lo() const { return x_center - x_width; }
    double x_hi() const { return x_center + x_width; }
    double t_lo() const { return t_center - t_width; }
    double t_hi() const { return t_center + t_width; }
};

/// Support must sit inside the domain in x and inside ]0, T[ in t.
inline void validate(const TestFunction& psi, const GridSpec& grid, double T) {
    if (!(psi.x_width > 0.0) || !(psi.t_width > 0.0))
        throw ConfigError("test function: widths must be positive");
    if (psi.x_lo() < grid.x_min || psi.x_hi() > grid.x_max)
        throw ConfigError("test function: spatial support [" + std::to_string(psi.x_lo()) + ", "
                          + std::to_string(psi.x_hi()) + "] exceeds the domain");
    if (!(psi.t_lo() > 0.0) || !(psi.t_hi() < T))
        throw ConfigError("test function: time support [" + std::to_string(psi.t_lo()) + ", "
                          + std::to_string(psi.t_hi()) + "] not inside ]0, " + std::to_string(T) + "[");
}

} // namespace singshock
