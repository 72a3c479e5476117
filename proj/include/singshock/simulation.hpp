#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "singshock/errors.hpp"
#include "singshock/grid.hpp"
#include "singshock/scheme.hpp"
#include "singshock/systems.hpp"

namespace singshock {

/// Parameters of one attempt of a run, handed to observers before the first level.
struct RunInfo {
    GridSpec grid;
    double r;
    double dt;
    std::int64_t steps;
    int attempt;
};

/// Called with every time level, including the initial one. Observers must not
/// alter the run; `begin` is called again after an auto-r restart and must reset.
class Observer {
public:
    virtual ~Observer() = default;
    virtual void begin(const RunInfo&) {}
    virtual void observe(const StateField& level) = 0;
    virtual void end(const StateField&) {}
};

struct SimulationResult {
    StateField final_state;
    double r = 0.0;
    RMode r_mode = RMode::fixed;
    int restarts = 0;
    std::int64_t steps = 0;
    std::vector<std::string> warnings;
};

constexpr int max_cfl_restarts = 10;

/// Number of steps of size r*h needed to reach T; the last step may overshoot.
inline std::int64_t step_count(double T, double r, double h) {
    if (T <= 0.0) return 0;
    const double ratio = T / (r * h);
    return static_cast<std::int64_t>(std::ceil(ratio * (1.0 - 1e-9)));
}

/// Initial ratio for auto mode.
inline double auto_r(const StateField& ic, const SystemDefinition& system, double cfl_target) {
    const double vmax = max_abs(compute_velocity(ic, system));
    return vmax > 0.0 ? cfl_target / vmax : cfl_target;
}

namespace detail {

// Flags waves reaching the outermost cells (4 per side).
class BoundaryWatch {
public:
    explicit BoundaryWatch(const StateField& ic) {
        const std::size_t n = ic.size();
        for (std::size_t k = 0; k < std::min<std::size_t>(4, n); ++k) {
            cells_.push_back(k);
            if (n - 1 - k >= 4) cells_.push_back(n - 1 - k);
        }
        for (std::size_t c : cells_) ref_.push_back({ic.u[c], ic.v[c]});
        scale_ = {std::max(max_abs(ic.u), 1e-300), std::max(max_abs(ic.v), 1e-300)};
    }

    void check(const StateField& s, std::vector<std::string>& warnings) {
        if (fired_) return;
        for (std::size_t k = 0; k < cells_.size(); ++k) {
            const std::size_t c = cells_[k];
            if (changed(s.u[c], ref_[k][0], scale_[0]) || changed(s.v[c], ref_[k][1], scale_[1])) {
                warnings.push_back("wave reached boundary cell " + std::to_string(c) + " at t = "
                                   + std::to_string(s.t) + "; monitor values may be polluted");
                fired_ = true;
                return;
            }
        }
    }

private:
    // Relative to the field's initial magnitude, so exponentially small averaging
    // tails entering a zero far field do not count.
    static bool changed(double now, double ref, double scale) {
        return std::abs(now - ref) > 1e-10 * std::max(std::abs(ref), scale);
    }

    std::vector<std::size_t> cells_;
    std::vector<std::array<double, 2>> ref_;
    std::array<double, 2> scale_{};
    bool fired_ = false;
};

} // namespace detail

/// Steps from `ic` until t >= T with a constant r.
///
/// Fixed mode propagates CflViolation. Auto mode starts from
/// r0 = cfl_target / max|Φ(u0)| and restarts the whole run with r halved on a
/// violation, at most `max_cfl_restarts` times.
inline SimulationResult run_simulation(const StateField& ic, const SystemDefinition& system,
                                       const SchemeParams& params, const std::vector<Observer*>& observers = {}) {
    validate(ic);
    validate(params);
    SchemeParams p = params;
    if (p.r_mode == RMode::automatic) p.r = auto_r(ic, system, p.cfl_target);

    for (int attempt = 0;; ++attempt) {
        SimulationResult result{ic, p.r, p.r_mode, attempt, 0, {}};
        const std::int64_t steps = step_count(p.T, p.r, ic.grid.h);
        const RunInfo info{ic.grid, p.r, p.r * ic.grid.h, steps, attempt};
        for (auto* o : observers) o->begin(info);
        for (auto* o : observers) o->observe(ic);

        StateField& state = result.final_state;
        WorkBuffers work(state.size());
        detail::BoundaryWatch watch(ic);
        try {
            for (std::int64_t k = 0; k < steps; ++k) {
                advance(state, system, p, work);
                watch.check(state, result.warnings);
                for (auto* o : observers) o->observe(state);
            }
        } catch (const CflViolation&) {
            if (p.r_mode != RMode::automatic) throw;
            if (attempt >= max_cfl_restarts) throw CflExhausted(attempt, p.r);
            p.r *= 0.5;
            continue;
        }
        result.steps = steps;
        for (auto* o : observers) o->end(state);
        return result;
    }
}

} // namespace singshock
