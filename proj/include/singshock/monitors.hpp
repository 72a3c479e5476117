#pragma once

// Streaming statistics for the consistency assumptions:
//   h/r → 0,  r|Φ| ≤ 1,  h^β max|Φ| = O(1),  Σ|u|h, Σ|v|h = O(1),
//   Σ|A|h^{1+γ}, Σ|B|h^{1+γ} = O(1).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "singshock/errors.hpp"
#include "singshock/fit.hpp"
#include "singshock/grid.hpp"
#include "singshock/scheme.hpp"
#include "singshock/simulation.hpp"
#include "singshock/systems.hpp"

namespace singshock {

struct MonitorReport {
    double h = 0.0;
    double r = 0.0;
    double h_over_r = 0.0;
    double cfl_max = 0.0;  // max r|Φ_i^n|
    double q27 = 0.0;      // h^β max |Φ_i^n|
    double q28 = 0.0;      // max_n max(Σ|u|h, Σ|v|h)
    double q29 = 0.0;      // max_n max(Σ|A|h^{1+γ}, Σ|B|h^{1+γ})
    double peak_v = 0.0;   // max |v_i^n|
    std::int64_t steps = 0;
    std::int64_t levels = 0;  // observed levels, steps + 1 on a finished run
};

namespace detail {

inline double max_abs_span(std::span<const double> a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

inline double sum_abs_span(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s += std::abs(x);
    return s;
}

} // namespace detail

/// Folds one time level into `report`. params.r must be the ratio actually used.
inline void monitor_observe(const StateField& state, const SystemDefinition& system, const SchemeParams& params,
                            MonitorReport& report, std::vector<double>& scratch) {
    const double h = state.grid.h;
    if (report.levels == 0) {
        report.h = h;
        report.r = params.r;
        report.h_over_r = h / params.r;
    }
    scratch.resize(state.size());

    system.phi.evaluate(state.u, state.v, scratch);
    const double phi_max = detail::max_abs_span(scratch);
    report.cfl_max = std::max(report.cfl_max, params.r * phi_max);
    report.q27 = std::max(report.q27, std::pow(h, params.beta) * phi_max);

    report.q28 = std::max({report.q28, sum_abs(state.u) * h, sum_abs(state.v) * h});

    const double w = std::pow(h, 1.0 + params.gamma);
    double sa = 0.0, sb = 0.0;
    if (!system.a_flux.identically_zero()) {
        system.a_flux.evaluate(state.u, state.v, scratch);
        sa = detail::sum_abs_span(scratch) * w;
    }
    if (!system.b_flux.identically_zero()) {
        system.b_flux.evaluate(state.u, state.v, scratch);
        sb = detail::sum_abs_span(scratch) * w;
    }
    report.q29 = std::max({report.q29, sa, sb});
    report.peak_v = std::max(report.peak_v, max_abs(state.v));
    report.steps = state.n;
    report.levels += 1;
}

inline void monitor_observe(const StateField& state, const SystemDefinition& system, const SchemeParams& params,
                            MonitorReport& report) {
    std::vector<double> scratch;
    monitor_observe(state, system, params, report, scratch);
}

/// Observer adapter; resets on every (re)start of a run.
class MonitorObserver : public Observer {
public:
    MonitorObserver(const SystemDefinition& system, const SchemeParams& params)
        : system_(system), params_(params) {}

    void begin(const RunInfo& info) override {
        report_ = MonitorReport{};
        params_.r = info.r;
    }
    void observe(const StateField& level) override { monitor_observe(level, system_, params_, report_, scratch_); }

    const MonitorReport& report() const noexcept { return report_; }

private:
    const SystemDefinition& system_;
    SchemeParams params_;
    MonitorReport report_;
    std::vector<double> scratch_;
};

struct AssumptionVerdict {
    bool h_over_r_decreasing = false;
    double h_over_r_slope = 0.0;  // d log(h/r) / d log h
    double max_q27 = 0.0, max_q28 = 0.0, max_q29 = 0.0;
    bool q27_possibly_unbounded = false;
    bool q28_possibly_unbounded = false;
    bool q29_possibly_unbounded = false;

    bool bounded() const { return !q27_possibly_unbounded && !q28_possibly_unbounded && !q29_possibly_unbounded; }
};

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Last value more than 25% above the median of the earlier ones.
inline bool grows_at_end(const std::vector<double>& values) {
    const std::vector<double> earlier(values.begin(), values.end() - 1);
    return values.back() > 1.25 * median(earlier);
}

} // namespace detail

/// Empirical check over a refinement sequence ordered by decreasing h.
inline AssumptionVerdict assumption_verdict(const std::vector<MonitorReport>& reports) {
    if (reports.size() < 3)
        throw InsufficientData("assumption verdict needs at least 3 runs, got " + std::to_string(reports.size()));
    AssumptionVerdict v;
    v.h_over_r_decreasing = true;
    std::vector<double> lh, lhr, q27, q28, q29;
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const auto& rep = reports[k];
        if (k > 0 && !(rep.h_over_r < reports[k - 1].h_over_r)) v.h_over_r_decreasing = false;
        lh.push_back(std::log(rep.h));
        lhr.push_back(std::log(rep.h_over_r));
        q27.push_back(rep.q27);
        q28.push_back(rep.q28);
        q29.push_back(rep.q29);
    }
    try {
        v.h_over_r_slope = least_squares_slope(lh, lhr);
    } catch (const InsufficientData&) {
        v.h_over_r_slope = std::nan("");
    }
    v.max_q27 = *std::max_element(q27.begin(), q27.end());
    v.max_q28 = *std::max_element(q28.begin(), q28.end());
    v.max_q29 = *std::max_element(q29.begin(), q29.end());
    v.q27_possibly_unbounded = detail::grows_at_end(q27);
    v.q28_possibly_unbounded = detail::grows_at_end(q28);
    v.q29_possibly_unbounded = detail::grows_at_end(q29);
    return v;
}

inline std::string monitor_csv_header() { return "h,r,h_over_r,q27,q28,q29,peak_v,steps\n"; }

/// One table row in the layout of the published tables.
inline std::string monitor_csv_row(const MonitorReport& rep) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.7g,%.4g,%.4f,%.4f,%.4f,%.4f,%.6g,%lld\n", rep.h, rep.r, rep.h_over_r, rep.q27,
                  rep.q28, rep.q29, rep.peak_v, static_cast<long long>(rep.steps));
    return buf;
}

inline std::string monitor_csv(const std::vector<MonitorReport>& reports) {
    std::string out = monitor_csv_header();
    for (const auto& r : reports) out += monitor_csv_row(r);
    return out;
}

inline std::string describe(const AssumptionVerdict& v) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "h/r decreasing: %s\nslope d log(h/r)/d log h: %.4f\nmax q27: %.4f%s\nmax q28: %.4f%s\n"
                  "max q29: %.4f%s\nverdict: %s\n",
                  v.h_over_r_decreasing ? "yes" : "no", v.h_over_r_slope, v.max_q27,
                  v.q27_possibly_unbounded ? " (possibly unbounded)" : "", v.max_q28,
                  v.q28_possibly_unbounded ? " (possibly unbounded)" : "", v.max_q29,
                  v.q29_possibly_unbounded ? " (possibly unbounded)" : "", v.bounded() ? "bounded" : "possibly unbounded");
    return buf;
}

} // namespace singshock
