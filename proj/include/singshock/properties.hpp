#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "singshock/errors.hpp"
#include "singshock/grid.hpp"
#include "singshock/overlap.hpp"
#include "singshock/scheme.hpp"
#include "singshock/systems.hpp"

namespace singshock {

/// Outcome of one randomized property suite.
struct PropertyResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline std::string num(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

// Zero padding wide enough that nothing reaches the edges at speed <= 1/2 cell per step.
inline std::vector<double> random_block_field(std::mt19937_64& rng, std::size_t active, std::size_t pad,
                                              double amplitude) {
    std::uniform_real_distribution<double> value(-amplitude, amplitude);
    std::uniform_int_distribution<std::size_t> run(1, 8);
    std::vector<double> f(active + 2 * pad, 0.0);
    for (std::size_t i = pad; i < pad + active;) {
        const std::size_t len = run(rng);
        const double c = value(rng);
        for (std::size_t k = 0; k < len && i < pad + active; ++k, ++i) f[i] = c;
    }
    return f;
}

} // namespace detail

/// Partition of unity and range of the overlap weights for `samples` random shifts in [-1, 1].
inline PropertyResult check_overlap_partition(std::uint64_t seed, std::size_t samples = 10000) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> shift(-1.0, 1.0), any(-3.0, 3.0);
    double worst_sum = 0.0;
    bool in_range = true;
    for (std::size_t k = 0; k < samples; ++k) {
        const DonorWeights w = donor_weights(shift(rng));
        worst_sum = std::max(worst_sum, std::abs(w.to_right + w.stay + w.to_left - 1.0));
        double a = any(rng), b = any(rng);
        if (a > b) std::swap(a, b);
        const double l = overlap_length(a, b);
        for (double x : {w.to_right, w.stay, w.to_left, l}) in_range = in_range && x >= 0.0 && x <= 1.0;
    }
    return {"overlap partition", worst_sum <= 1e-15 && in_range,
            "max |sum - 1| = " + detail::num(worst_sum) + (in_range ? "" : ", weight outside [0,1]")};
}

/// Per-step statistics of randomized Korchinski runs with r max|u0| <= 1/2 and alpha = 0.
struct KorchinskiSweep {
    std::size_t fields = 0;
    std::size_t steps = 0;
    double max_principle_excess = 0.0;    // worst amount a new value leaves its three-point hull
    double l1_increase_u = 0.0;           // worst Σ|u^{n+1}|h - Σ|u^n|h
    double l1_increase_v = 0.0;
    std::array<std::uint64_t, 8> sign_cases{};  // sign patterns of (u_{i-1}, u_i, u_{i+1}), all nonzero
};

inline KorchinskiSweep korchinski_sweep(std::uint64_t seed, std::size_t fields = 200, std::size_t steps = 500,
                                        std::size_t active = 64) {
    const SystemDefinition sys = system_korchinski();
    const std::size_t pad = steps / 2 + 8;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ratio(0.2, 1.0), fill(0.5, 1.0);
    KorchinskiSweep out;
    out.fields = fields;
    out.steps = steps;
    for (std::size_t f = 0; f < fields; ++f) {
        SchemeParams p;
        p.r = ratio(rng);
        p.alpha = 0.0;
        const double amp = fill(rng) * 0.5 / p.r;
        std::vector<double> u = detail::random_block_field(rng, active, pad, amp);
        std::vector<double> v = detail::random_block_field(rng, active, pad, 1.0);
        const double m = max_abs(u);
        for (double& x : u) x *= amp / m;  // r max|u0| = fill/2 exactly
        const GridSpec grid = GridSpec::from_count(0.0, 1.0, u.size());
        StateField s{grid, std::move(u), std::move(v), 0.0, 0};
        WorkBuffers work(s.size());
        const std::size_t n = s.size();
        for (std::size_t k = 0; k < steps; ++k) {
            const StateField prev = s;
            advance(s, sys, p, work);
            for (std::size_t i = 0; i < n; ++i) {
                const double l = prev.u[i > 0 ? i - 1 : 0], c = prev.u[i], r = prev.u[i + 1 < n ? i + 1 : n - 1];
                const double lo = std::min({l, c, r}), hi = std::max({l, c, r});
                out.max_principle_excess = std::max({out.max_principle_excess, lo - s.u[i], s.u[i] - hi});
                if (l != 0.0 && c != 0.0 && r != 0.0)
                    ++out.sign_cases[(l > 0.0 ? 4u : 0u) | (c > 0.0 ? 2u : 0u) | (r > 0.0 ? 1u : 0u)];
            }
            const double h = grid.h;
            out.l1_increase_u = std::max(out.l1_increase_u, sum_abs(s.u) * h - sum_abs(prev.u) * h);
            out.l1_increase_v = std::max(out.l1_increase_v, sum_abs(s.v) * h - sum_abs(prev.v) * h);
        }
    }
    return out;
}

inline PropertyResult max_principle_result(const KorchinskiSweep& s) {
    const bool all_cases = std::all_of(s.sign_cases.begin(), s.sign_cases.end(), [](auto c) { return c > 0; });
    std::string d = "worst excess " + detail::num(s.max_principle_excess) + " over " + std::to_string(s.fields)
                    + " fields x " + std::to_string(s.steps) + " steps; sign cases";
    for (auto c : s.sign_cases) d += " " + std::to_string(c);
    return {"korchinski maximum principle", s.max_principle_excess <= 1e-12 && all_cases, d};
}

inline PropertyResult l1_stability_result(const KorchinskiSweep& s) {
    return {"l1 stability", s.l1_increase_u <= 1e-12 && s.l1_increase_v <= 1e-12,
            "worst increase u " + detail::num(s.l1_increase_u) + ", v " + detail::num(s.l1_increase_v)};
}

/// Worst per-stage drift of Σu and Σv relative to Σ|u0| (resp. Σ|v0|) on compactly supported data.
struct StageMass {
    double transport = 0.0;
    double averaging = 0.0;
    double correction = 0.0;
    std::size_t steps = 0;
};

inline StageMass stage_mass_drift(const SystemDefinition& sys, std::uint64_t seed, std::size_t trials = 20,
                                  std::size_t steps = 200, double alpha = 0.2) {
    std::mt19937_64 rng(seed);
    StageMass out;
    const std::size_t active = 64, pad = steps + 16;
    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<double> u = detail::random_block_field(rng, active, pad, 0.5);
        std::vector<double> v = detail::random_block_field(rng, active, pad, 0.5);
        const GridSpec grid = GridSpec::from_count(0.0, 1.0, u.size());
        StateField s{grid, std::move(u), std::move(v), 0.0, 0};
        const double mu0 = sum_abs(s.u), mv0 = sum_abs(s.v);
        const double r = 0.4 / std::max(1.0, max_abs(s.u));
        const std::size_t n = s.size();
        std::vector<double> phi(n), ub(n), vb(n), ut(n), vt(n), flux(n), un(n), vn(n);
        auto drift = [](const std::vector<double>& a, const std::vector<double>& b, double scale) {
            return std::abs(sum(a) - sum(b)) / scale;
        };
        for (std::size_t k = 0; k < steps; ++k) {
            kernel::velocity(sys, s.u, s.v, s.n, phi);
            if (r * max_abs(phi) > 1.0) break;  // data left the stable range; stop this trial
            kernel::transport(s.u, s.v, phi, r, ub, vb);
            kernel::average(ub, alpha, ut);
            kernel::average(vb, alpha, vt);
            kernel::correction(sys.a_flux, s.u, s.v, ut, r, s.n, flux, un);
            kernel::correction(sys.b_flux, s.u, s.v, vt, r, s.n, flux, vn);
            out.transport = std::max({out.transport, drift(ub, s.u, mu0), drift(vb, s.v, mv0)});
            out.averaging = std::max({out.averaging, drift(ut, ub, mu0), drift(vt, vb, mv0)});
            out.correction = std::max({out.correction, drift(un, ut, mu0), drift(vn, vt, mv0)});
            s.u.swap(un);
            s.v.swap(vn);
            ++s.n;
            ++out.steps;
        }
    }
    return out;
}

inline PropertyResult check_mass_conservation(std::uint64_t seed) {
    PropertyResult res{"mass conservation", true, {}};
    for (const auto& sys : {system_keyfitz_kranzer(), system_korchinski()}) {
        const StageMass m = stage_mass_drift(sys, seed);
        const bool ok = m.steps > 0 && m.transport <= 1e-12 && m.averaging <= 1e-12 && m.correction <= 1e-12;
        res.passed = res.passed && ok;
        res.detail += sys.name + ": transport " + detail::num(m.transport) + " averaging " + detail::num(m.averaging)
                      + " correction " + detail::num(m.correction) + " (" + std::to_string(m.steps) + " steps); ";
    }
    return res;
}

/// uΦ - A and vΦ - B against the unsplit fluxes on random states in [-10, 10]².
inline PropertyResult check_recombination(std::uint64_t seed, std::size_t samples = 10000) {
    struct Case {
        SystemDefinition sys;
        double (*f)(double, double);
        double (*g)(double, double);
    };
    const Case cases[] = {
        {system_keyfitz_kranzer(), [](double u, double v) { return u * u - v; },
         [](double u, double) { return u * u * u / 3.0 - u; }},
        {system_korchinski(), [](double u, double) { return u * u; }, [](double u, double v) { return u * v; }},
    };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    double worst = 0.0;
    for (const auto& c : cases)
        for (std::size_t k = 0; k < samples; ++k) {
            const double u = d(rng), v = d(rng);
            const double fu = c.sys.flux_u(u, v), fv = c.sys.flux_v(u, v);
            const double eu = c.f(u, v), ev = c.g(u, v);
            worst = std::max(worst, std::abs(fu - eu) / std::max(1.0, std::abs(eu)));
            worst = std::max(worst, std::abs(fv - ev) / std::max(1.0, std::abs(ev)));
        }
    return {"flux recombination", worst <= 1e-12, "worst relative error " + detail::num(worst)};
}

/// Every suite run by the `verify` command.
inline std::vector<PropertyResult> run_property_suites(std::uint64_t seed) {
    const KorchinskiSweep sweep = korchinski_sweep(seed + 1);
    return {check_overlap_partition(seed), max_principle_result(sweep), l1_stability_result(sweep),
            check_mass_conservation(seed + 2), check_recombination(seed + 3)};
}

} // namespace singshock
