#pragma once

// One time step of the splitting scheme:
//   1. transport of (u, v) with velocity Φ over a time r*h (donor-cell overlaps),
//   2. three-point averaging with weight α,
//   3. centered correction with A, B evaluated on the time-n values.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "singshock/errors.hpp"
#include "singshock/grid.hpp"
#include "singshock/overlap.hpp"
#include "singshock/systems.hpp"

namespace singshock {

enum class RMode { fixed, automatic };

inline const char* to_string(RMode m) { return m == RMode::fixed ? "fixed" : "auto"; }

/// Ghost cells copy the edge value of whatever array a stage consumes.
enum class BoundaryPolicy { constant_extension };

struct SchemeParams {
    double r = 0.5;          // Δt = r*h
    double alpha = 0.0;      // averaging weight, [0, 0.5)
    double beta = 0.0;       // velocity-growth exponent of the q27 monitor
    double gamma = 0.0;      // flux-sum exponent of the q29 monitor
    double T = 1.0;
    double cfl_target = 0.9; // auto mode: r0 = cfl_target / max|Φ(u0)|
    RMode r_mode = RMode::fixed;
    BoundaryPolicy boundary = BoundaryPolicy::constant_extension;
    double blowup_cap = 1e12;
};

inline void validate(const SchemeParams& p) {
    if (!(p.alpha >= 0.0 && p.alpha < 0.5)) throw ConfigError("alpha must lie in [0, 0.5)");
    if (!(p.beta >= 0.0 && p.beta < 1.0)) throw ConfigError("beta must lie in [0, 1)");
    if (!(p.gamma >= 0.0 && p.gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
    if (!(p.r > 0.0) || !std::isfinite(p.r)) throw ConfigError("r must be positive");
    if (!(p.T >= 0.0) || !std::isfinite(p.T)) throw ConfigError("T must be non-negative");
    if (!(p.cfl_target > 0.0 && p.cfl_target <= 1.0)) throw ConfigError("cfl_target must lie in (0, 1]");
    if (!(p.blowup_cap > 0.0)) throw ConfigError("blowup_cap must be positive");
}

/// Non-finite values, or magnitudes above the cap. Carries the last valid level.
class Blowup : public Error {
public:
    Blowup(const std::string& what, double t, double max_u, double max_v, std::optional<StateField> last)
        : Error(what), t_(t), max_u_(max_u), max_v_(max_v), last_valid_(std::move(last)) {}

    double t() const noexcept { return t_; }
    double max_u() const noexcept { return max_u_; }
    double max_v() const noexcept { return max_v_; }
    const std::optional<StateField>& last_valid() const noexcept { return last_valid_; }

private:
    double t_, max_u_, max_v_;
    std::optional<StateField> last_valid_;
};

struct WorkBuffers {
    std::vector<double> phi;
    std::vector<double> u_bar, v_bar;
    std::vector<double> u_tld, v_tld;
    std::vector<double> flux;
    std::vector<double> u_next, v_next;

    explicit WorkBuffers(std::size_t n = 0) { resize(n); }

    void resize(std::size_t n) {
        for (auto* b : {&phi, &u_bar, &v_bar, &u_tld, &v_tld, &flux, &u_next, &v_next}) b->assign(n, 0.0);
    }
};

namespace kernel {

inline void velocity(const SystemDefinition& sys, std::span<const double> u, std::span<const double> v,
                     std::int64_t step, std::span<double> phi) {
    sys.phi.evaluate(u, v, phi);
    for (std::size_t i = 0; i < phi.size(); ++i)
        if (!std::isfinite(phi[i]))
            throw Blowup("non-finite velocity at cell " + std::to_string(i) + ", step " + std::to_string(step),
                         0.0, max_abs(std::vector<double>(u.begin(), u.end())),
                         max_abs(std::vector<double>(v.begin(), v.end())), std::nullopt);
}

inline void check_cfl(std::span<const double> phi, double r, std::int64_t step) {
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double c = r * std::abs(phi[i]);
        if (!(c <= 1.0)) throw CflViolation(i, step, c);
    }
}

/// ū_i = u_{i-1} L(-1+a_{i-1}, a_{i-1}) + u_i L(a_i, 1+a_i) + u_{i+1} L(1+a_{i+1}, 2+a_{i+1}), a = rΦ.
inline void transport(std::span<const double> u, std::span<const double> v, std::span<const double> phi,
                      double r, std::span<double> u_bar, std::span<double> v_bar) {
    const std::size_t n = u.size();
    if (n == 0) return;
    DonorWeights left = donor_weights(r * phi[0]);  // ghost copy of cell 0
    DonorWeights mid = left;
    double ul = u[0], vl = v[0];
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ir = i + 1 < n ? i + 1 : n - 1;
        const DonorWeights right = ir == i ? mid : donor_weights(r * phi[ir]);
        u_bar[i] = ul * left.to_right + u[i] * mid.stay + u[ir] * right.to_left;
        v_bar[i] = vl * left.to_right + v[i] * mid.stay + v[ir] * right.to_left;
        ul = u[i];
        vl = v[i];
        left = mid;
        mid = right;
    }
}

/// out_i = α in_{i-1} + (1-2α) in_i + α in_{i+1}.
inline void average(std::span<const double> in, double alpha, std::span<double> out) {
    const std::size_t n = in.size();
    if (n == 0) return;
    if (alpha == 0.0) {
        std::copy(in.begin(), in.end(), out.begin());
        return;
    }
    const double c = 1.0 - 2.0 * alpha;
    for (std::size_t i = 0; i < n; ++i) {
        const double l = in[i > 0 ? i - 1 : 0];
        const double r = in[i + 1 < n ? i + 1 : n - 1];
        out[i] = alpha * l + c * in[i] + alpha * r;
    }
}

/// out_i = in_i + (r/2)(F_{i+1} - F_{i-1}), F sampled on the time-n values.
inline void centered(std::span<const double> in, std::span<const double> flux, double r, std::span<double> out) {
    const std::size_t n = in.size();
    const double half_r = 0.5 * r;
    for (std::size_t i = 0; i < n; ++i) {
        const double fl = flux[i > 0 ? i - 1 : 0];
        const double fr = flux[i + 1 < n ? i + 1 : n - 1];
        out[i] = in[i] + half_r * (fr - fl);
    }
}

inline void correction(const Flux& f, std::span<const double> u, std::span<const double> v,
                       std::span<const double> in, double r, std::int64_t step, std::span<double> flux,
                       std::span<double> out) {
    if (f.identically_zero()) {
        std::copy(in.begin(), in.end(), out.begin());
        return;
    }
    f.evaluate(u, v, flux);
    for (std::size_t i = 0; i < flux.size(); ++i)
        if (!std::isfinite(flux[i]))
            throw Blowup("non-finite correction flux at cell " + std::to_string(i) + ", step "
                             + std::to_string(step),
                         0.0, 0.0, 0.0, std::nullopt);
    centered(in, flux, r, out);
}

} // namespace kernel

/// Φ_i = Φ(u_i, v_i).
inline std::vector<double> compute_velocity(const StateField& state, const SystemDefinition& system) {
    std::vector<double> phi(state.size());
    kernel::velocity(system, state.u, state.v, state.n, phi);
    return phi;
}

/// Throws CflViolation if r*|Φ_i| > 1 anywhere.
inline std::pair<std::vector<double>, std::vector<double>>
transport_step(const StateField& state, std::span<const double> phi, double r) {
    if (phi.size() != state.size()) throw ConfigError("transport_step: phi length mismatch");
    kernel::check_cfl(phi, r, state.n);
    std::vector<double> ub(state.size()), vb(state.size());
    kernel::transport(state.u, state.v, phi, r, ub, vb);
    return {std::move(ub), std::move(vb)};
}

inline std::pair<std::vector<double>, std::vector<double>>
averaging_step(std::span<const double> u_bar, std::span<const double> v_bar, double alpha) {
    if (!(alpha >= 0.0 && alpha < 0.5)) throw ConfigError("alpha must lie in [0, 0.5)");
    std::vector<double> ut(u_bar.size()), vt(v_bar.size());
    kernel::average(u_bar, alpha, ut);
    kernel::average(v_bar, alpha, vt);
    return {std::move(ut), std::move(vt)};
}

/// A and B are evaluated on state_n, not on the transported or averaged fields.
inline StateField centered_step(const StateField& state_n, std::span<const double> u_tld,
                                std::span<const double> v_tld, const SystemDefinition& system, double r) {
    StateField next{state_n.grid, std::vector<double>(state_n.size()), std::vector<double>(state_n.size()),
                    static_cast<double>(state_n.n + 1) * r * state_n.grid.h, state_n.n + 1};
    std::vector<double> flux(state_n.size());
    kernel::correction(system.a_flux, state_n.u, state_n.v, u_tld, r, state_n.n, flux, next.u);
    kernel::correction(system.b_flux, state_n.u, state_n.v, v_tld, r, state_n.n, flux, next.v);
    return next;
}

/// Advances `state` by one step in place. On failure `state` is left at level n.
inline void advance(StateField& state, const SystemDefinition& system, const SchemeParams& params,
                    WorkBuffers& work) {
    const std::size_t n = state.size();
    if (work.phi.size() != n) work.resize(n);
    const double r = params.r;
    kernel::velocity(system, state.u, state.v, state.n, work.phi);
    kernel::check_cfl(work.phi, r, state.n);
    kernel::transport(state.u, state.v, work.phi, r, work.u_bar, work.v_bar);
    kernel::average(work.u_bar, params.alpha, work.u_tld);
    kernel::average(work.v_bar, params.alpha, work.v_tld);
    kernel::correction(system.a_flux, state.u, state.v, work.u_tld, r, state.n, work.flux, work.u_next);
    kernel::correction(system.b_flux, state.u, state.v, work.v_tld, r, state.n, work.flux, work.v_next);

    double mu = 0.0, mv = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::abs(work.u_next[i]), b = std::abs(work.v_next[i]);
        finite = finite && std::isfinite(a) && std::isfinite(b);
        mu = std::max(mu, a);
        mv = std::max(mv, b);
    }
    const double t_next = static_cast<double>(state.n + 1) * r * state.grid.h;
    if (!finite || mu > params.blowup_cap || mv > params.blowup_cap)
        throw Blowup("blow-up at step " + std::to_string(state.n + 1) + ", t = " + std::to_string(t_next)
                         + ": max|u| = " + std::to_string(mu) + ", max|v| = " + std::to_string(mv),
                     t_next, mu, mv, state);
    state.u.swap(work.u_next);
    state.v.swap(work.v_next);
    state.n += 1;
    state.t = t_next;
}

/// centered_step ∘ averaging_step ∘ transport_step ∘ compute_velocity.
inline StateField full_step(const StateField& state, const SystemDefinition& system, const SchemeParams& params) {
    StateField next = state;
    WorkBuffers work(state.size());
    advance(next, system, params, work);
    return next;
}

} // namespace singshock
