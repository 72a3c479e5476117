#pragma once

// Distributional residuals of a step-function solution against test functions:
//   I_u(ψ) = ∫∫ u ψ_t + (uΦ - A) ψ_x,   I_v(ψ) = ∫∫ v ψ_t + (vΦ - B) ψ_x.
// u_i^n is constant on I_i × ]t_n, t_{n+1}[, so only the ψ derivatives are
// integrated, with a tensor Gauss–Legendre rule per space-time cell.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "singshock/errors.hpp"
#include "singshock/fit.hpp"
#include "singshock/grid.hpp"
#include "singshock/io_format.hpp"
#include "singshock/simulation.hpp"
#include "singshock/systems.hpp"
#include "singshock/test_function.hpp"

namespace singshock {

struct GaussRule {
    std::vector<double> nodes;  // on [-1, 1]
    std::vector<double> weights;
};

inline GaussRule gauss_legendre(int points) {
    switch (points) {
    case 1: return {{0.0}, {2.0}};
    case 2: {
        const double a = 1.0 / std::sqrt(3.0);
        return {{-a, a}, {1.0, 1.0}};
    }
    case 3: {
        const double a = std::sqrt(0.6);
        return {{-a, 0.0, a}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}};
    }
    case 4: {
        const double s = std::sqrt(6.0 / 5.0);
        const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * s), b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * s);
        const double wa = (18.0 + std::sqrt(30.0)) / 36.0, wb = (18.0 - std::sqrt(30.0)) / 36.0;
        return {{-b, -a, a, b}, {wb, wa, wa, wb}};
    }
    default: throw ConfigError("gauss_legendre: supported point counts are 1 to 4");
    }
}

namespace detail {

// ∫_a^{a+len} f with the rule mapped to the interval.
template <class F>
double integrate(const GaussRule& rule, double a, double len, F f) {
    double s = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * f(a + 0.5 * len * (1.0 + rule.nodes[k]));
    return 0.5 * len * s;
}

} // namespace detail

/// Streams I_u, I_v for a family of test functions over the levels of a run.
class ResidualAccumulator : public Observer {
public:
    ResidualAccumulator(const SystemDefinition& system, std::vector<TestFunction> tests, double T,
                        int quad_points = 2)
        : system_(system), tests_(std::move(tests)), T_(T), rule_(gauss_legendre(quad_points)) {}

    void begin(const RunInfo& info) override {
        dt_ = info.dt;
        const GridSpec& g = info.grid;
        slots_.clear();
        for (const auto& psi : tests_) {
            validate(psi, g, T_);
            Slot s;
            const double lo = (psi.x_lo() - g.x_min) / g.h, hi = (psi.x_hi() - g.x_min) / g.h;
            s.first = static_cast<std::size_t>(std::max(0.0, std::floor(lo)));
            s.last = std::min(g.n_cells, static_cast<std::size_t>(std::ceil(hi)) + 1);
            for (std::size_t i = s.first; i < s.last; ++i) {
                const double a = g.left_edge(i);
                s.gx.push_back(detail::integrate(rule_, a, g.h, [&](double x) { return bump((x - psi.x_center) / psi.x_width); }));
                s.gpx.push_back(detail::integrate(rule_, a, g.h, [&](double x) {
                    return bump_derivative((x - psi.x_center) / psi.x_width) / psi.x_width;
                }));
            }
            slots_.push_back(std::move(s));
        }
    }

    void observe(const StateField& level) override {
        const double t0 = level.t, t1 = level.t + dt_;
        for (std::size_t k = 0; k < tests_.size(); ++k) {
            const auto& psi = tests_[k];
            if (t1 <= psi.t_lo() || t0 >= psi.t_hi()) continue;
            Slot& s = slots_[k];
            const double tt = psi.amplitude * detail::integrate(rule_, t0, dt_, [&](double t) {
                return bump_derivative((t - psi.t_center) / psi.t_width) / psi.t_width;
            });
            const double tg = psi.amplitude * detail::integrate(rule_, t0, dt_, [&](double t) {
                return bump((t - psi.t_center) / psi.t_width);
            });
            const std::size_t m = s.last - s.first;
            const std::span<const double> u(level.u.data() + s.first, m), v(level.v.data() + s.first, m);
            phi_.resize(m);
            a_.resize(m);
            b_.resize(m);
            system_.phi.evaluate(u, v, phi_);
            system_.a_flux.evaluate(u, v, a_);
            system_.b_flux.evaluate(u, v, b_);
            double su = 0.0, sv = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double pt = s.gx[j] * tt, px = s.gpx[j] * tg;
                su += u[j] * pt + (u[j] * phi_[j] - a_[j]) * px;
                sv += v[j] * pt + (v[j] * phi_[j] - b_[j]) * px;
            }
            s.i_u += su;
            s.i_v += sv;
        }
    }

    std::size_t size() const noexcept { return tests_.size(); }
    const std::vector<TestFunction>& tests() const noexcept { return tests_; }
    std::pair<double, double> integrals(std::size_t k) const { return {slots_.at(k).i_u, slots_.at(k).i_v}; }

private:
    struct Slot {
        std::size_t first = 0, last = 0;
        std::vector<double> gx, gpx;  // per-cell ∫ g and ∫ ∂x g
        double i_u = 0.0, i_v = 0.0;
    };

    const SystemDefinition& system_;
    std::vector<TestFunction> tests_;
    double T_;
    GaussRule rule_;
    double dt_ = 0.0;
    std::vector<Slot> slots_;
    std::vector<double> phi_, a_, b_;
};

/// (I_u, I_v) over a stored trajectory whose levels are evenly spaced in time.
inline std::pair<double, double> residual_integrals(std::span<const StateField> trajectory,
                                                    const SystemDefinition& system, const TestFunction& psi,
                                                    int quad_points = 2) {
    if (trajectory.size() < 2) throw InsufficientData("residual_integrals needs at least two time levels");
    const double dt = trajectory[1].t - trajectory[0].t;
    ResidualAccumulator acc(system, {psi}, trajectory.back().t, quad_points);
    acc.begin(RunInfo{trajectory.front().grid, dt / trajectory.front().grid.h, dt,
                      static_cast<std::int64_t>(trajectory.size() - 1), 0});
    for (const auto& level : trajectory) acc.observe(level);
    return acc.integrals(0);
}

struct ResidualRow {
    double h = 0.0;
    std::size_t psi_id = 0;
    double i_u = 0.0;
    double i_v = 0.0;
};

struct ResidualReport {
    std::vector<ResidualRow> rows;
    std::vector<TestFunction> tests;

    void add(double h, const ResidualAccumulator& acc) {
        for (std::size_t k = 0; k < acc.size(); ++k) {
            const auto [iu, iv] = acc.integrals(k);
            rows.push_back({h, k, iu, iv});
        }
    }
};

struct OrderEstimate {
    std::size_t psi_id = 0;
    std::optional<double> p_u;  // empty: indeterminate
    std::optional<double> p_v;
    std::size_t grids_u = 0;
    std::size_t grids_v = 0;
};

constexpr double residual_noise_floor = 1e-14;
constexpr std::size_t min_order_grids = 3;

/// Slope of log|I| against log h over values above the noise floor.
inline std::optional<double> fit_order(std::span<const double> h, std::span<const double> values, std::size_t& used) {
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < h.size(); ++k)
        if (std::abs(values[k]) >= residual_noise_floor) {
            lx.push_back(std::log(h[k]));
            ly.push_back(std::log(std::abs(values[k])));
        }
    used = lx.size();
    if (lx.size() < min_order_grids) return std::nullopt;
    return least_squares_slope(lx, ly);
}

inline std::vector<OrderEstimate> order_estimate(const ResidualReport& report) {
    std::map<std::size_t, std::vector<ResidualRow>> by_psi;
    for (const auto& row : report.rows) by_psi[row.psi_id].push_back(row);
    std::vector<OrderEstimate> out;
    for (auto& [id, rows] : by_psi) {
        if (rows.size() < min_order_grids)
            throw InsufficientData("order estimate for psi " + std::to_string(id) + " needs at least 3 grids");
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.h > b.h; });
        std::vector<double> h, iu, iv;
        for (const auto& r : rows) {
            h.push_back(r.h);
            iu.push_back(r.i_u);
            iv.push_back(r.i_v);
        }
        OrderEstimate e{id, {}, {}, 0, 0};
        e.p_u = fit_order(h, iu, e.grids_u);
        e.p_v = fit_order(h, iv, e.grids_v);
        out.push_back(e);
    }
    return out;
}

inline std::string residual_csv(const ResidualReport& report) {
    std::string out = "h,psi_id,I_u,I_v\n";
    for (const auto& r : report.rows)
        out += format_double(r.h) + "," + std::to_string(r.psi_id) + "," + format_double(r.i_u) + ","
               + format_double(r.i_v) + "\n";
    return out;
}

inline std::string order_csv(const std::vector<OrderEstimate>& orders) {
    auto fmt = [](const std::optional<double>& p) {
        if (!p) return std::string("indeterminate");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", *p);
        return std::string(buf);
    };
    std::string out = "psi_id,p_u,p_v,grids_used\n";
    for (const auto& o : orders)
        out += std::to_string(o.psi_id) + "," + fmt(o.p_u) + "," + fmt(o.p_v) + ","
               + std::to_string(std::min(o.grids_u, o.grids_v)) + "\n";
    return out;
}

} // namespace singshock
