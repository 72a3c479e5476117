#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "singshock/errors.hpp"
#include "singshock/grid.hpp"
#include "singshock/initial.hpp"
#include "singshock/monitors.hpp"
#include "singshock/parallel.hpp"
#include "singshock/scheme.hpp"
#include "singshock/simulation.hpp"
#include "singshock/systems.hpp"
#include "singshock/test_function.hpp"
#include "singshock/weak_residual.hpp"

namespace singshock {

struct GridRow {
    double h = 0.0;
    double r = 0.0;  // ignored in auto mode
};

struct ExperimentPreset {
    std::string name;
    std::string system = "kk";
    RiemannData ic;
    double x_min = -1.0;
    double x_max = 1.0;
    double T = 1.0;
    double alpha = 0.2;
    double beta = 0.0;
    double gamma = 0.0;
    std::vector<GridRow> rows;           // monitor table sweep
    std::vector<GridRow> residual_rows;  // convergence study, successive halvings
    bool auto_r = false;
    double cfl_target = 0.9;
    bool monitors = true;
    bool residuals = true;
    std::optional<double> front_speed;   // defaults to the Rankine–Hugoniot speed of the u equation
    std::vector<TestFunction> test_functions;  // empty: default family
    double delta_window = 0.1;           // half-width of the v-mass window around the jump
};

/// Singular shock on [-4, 4], T = 5, with r shrinking faster than sqrt(h).
inline ExperimentPreset preset_kk_singular() {
    ExperimentPreset p;
    p.name = "kk-singular";
    p.ic = {1.5, 0.0, -2.065426, 1.410639, 0.0};
    p.x_min = -4.0;
    p.x_max = 4.0;
    p.T = 5.0;
    p.alpha = 0.2;
    p.beta = 0.5;
    p.gamma = 0.4;
    p.rows = {{0.04, 0.300},    {0.02, 0.240},   {0.01, 0.170},  {0.005, 0.132},
              {0.0025, 0.095},  {0.00125, 0.065}, {0.000625, 0.040}, {0.0003125, 0.025}};
    p.residual_rows = {p.rows[3], p.rows[4], p.rows[5]};
    return p;
}

/// The same Riemann problem on [-0.5, 0.5], T = 1, down to h = 1.25e-5.
inline ExperimentPreset preset_kk_singular_small() {
    ExperimentPreset p = preset_kk_singular();
    p.name = "kk-singular-small";
    p.x_min = -0.5;
    p.x_max = 0.5;
    p.T = 1.0;
    p.rows = {{0.002, 0.18},          {0.001, 0.13},          {0.0005, 0.09},   {0.00025, 0.06},
              {0.000125, 0.043},      {1.0 / 12000.0, 0.035}, {0.0000625, 0.030}, {0.00005, 0.026},
              {1.0 / 30000.0, 0.021}, {0.000025, 0.019},      {1.0 / 60000.0, 0.015}, {0.0000125, 0.012}};
    p.residual_rows = {p.rows[0], p.rows[1], p.rows[2], p.rows[3], p.rows[4]};
    return p;
}

/// Intermediate overcompressive shock, bounded velocity, r = 0.45.
inline ExperimentPreset preset_kk_overcompressive() {
    ExperimentPreset p;
    p.name = "kk-overcompressive";
    p.ic = {1.5, 0.0, -1.895644, 1.343466, 0.0};
    p.x_min = -0.5;
    p.x_max = 0.5;
    p.T = 1.0;
    p.alpha = 0.2;
    for (double h : {0.005, 0.001, 0.0005, 0.00025, 0.000125, 0.0000625}) p.rows.push_back({h, 0.45});
    p.residual_rows = {{0.001, 0.45}, {0.0005, 0.45}, {0.00025, 0.45}, {0.000125, 0.45}};
    return p;
}

/// Classical shocks, no singular shock; same parameters as the overcompressive case.
inline ExperimentPreset preset_kk_classic() {
    ExperimentPreset p = preset_kk_overcompressive();
    p.name = "kk-classic";
    p.ic = {1.5, 0.0, -1.725862, 1.276293, 0.0};
    return p;
}

/// Delta shock in v: stationary u-shock (speed u_l + u_r = 0) collecting v.
inline ExperimentPreset preset_korchinski_delta() {
    ExperimentPreset p;
    p.name = "korchinski-delta";
    p.system = "korchinski";
    p.ic = {1.0, 1.0, -1.0, 1.0, 0.0};
    p.x_min = -1.0;
    p.x_max = 1.0;
    p.T = 0.5;
    p.alpha = 0.0;
    p.rows = {{0.008, 0.45}, {0.004, 0.45}, {0.002, 0.45}};
    p.residual_rows = {{0.004, 0.45}, {0.002, 0.45}, {0.001, 0.45}, {0.0005, 0.45}};
    return p;
}

/// Centered rarefaction u: -1 → 1 with v leaving a vacuum in the fan.
inline ExperimentPreset preset_korchinski_rarefaction() {
    ExperimentPreset p = preset_korchinski_delta();
    p.name = "korchinski-rarefaction";
    p.ic = {-1.0, 1.0, 1.0, 1.0, 0.0};
    p.front_speed = 1.0;  // right edge of the fan
    p.residual_rows = {{0.0025, 0.45}, {0.00125, 0.45}, {0.000625, 0.45}, {0.0003125, 0.45}};
    return p;
}

/// Classical Burgers shock u: 1 → 0 with v ≡ 0.
inline ExperimentPreset preset_korchinski_shock() {
    ExperimentPreset p = preset_korchinski_delta();
    p.name = "korchinski-shock";
    p.ic = {1.0, 0.0, 0.0, 0.0, 0.0};
    p.rows = {{0.01, 0.45}, {0.005, 0.45}, {0.0025, 0.45}};
    return p;
}

inline std::vector<std::string> preset_names() {
    return {"kk-singular", "kk-singular-small", "kk-overcompressive", "kk-classic",
            "korchinski-delta", "korchinski-rarefaction", "korchinski-shock"};
}

inline ExperimentPreset preset_by_name(const std::string& name) {
    if (name == "kk-singular") return preset_kk_singular();
    if (name == "kk-singular-small") return preset_kk_singular_small();
    if (name == "kk-overcompressive") return preset_kk_overcompressive();
    if (name == "kk-classic") return preset_kk_classic();
    if (name == "korchinski-delta") return preset_korchinski_delta();
    if (name == "korchinski-rarefaction") return preset_korchinski_rarefaction();
    if (name == "korchinski-shock") return preset_korchinski_shock();
    throw ConfigError("unknown preset \"" + name + "\"");
}

inline void validate(const ExperimentPreset& p) {
    if (!(p.x_max > p.x_min)) throw ConfigError("preset " + p.name + ": empty domain");
    for (const auto* rows : {&p.rows, &p.residual_rows})
        for (const auto& row : *rows) {
            const GridSpec g = GridSpec::from_width(p.x_min, p.x_max, row.h);
            if (g.n_cells < 16)
                throw ConfigError("preset " + p.name + ": h = " + std::to_string(row.h) + " gives fewer than 16 cells");
            if (!p.auto_r && !(row.r > 0.0)) throw ConfigError("preset " + p.name + ": r must be positive");
        }
}

inline SchemeParams scheme_params(const ExperimentPreset& p, const GridRow& row) {
    SchemeParams s;
    s.r = p.auto_r ? 0.5 : row.r;
    s.alpha = p.alpha;
    s.beta = p.beta;
    s.gamma = p.gamma;
    s.T = p.T;
    s.cfl_target = p.cfl_target;
    s.r_mode = p.auto_r ? RMode::automatic : RMode::fixed;
    return s;
}

/// Rankine–Hugoniot speed of the u equation, [uΦ - A] / [u].
inline double jump_speed(const SystemDefinition& sys, const RiemannData& ic) {
    if (ic.u_l == ic.u_r) return sys.phi(ic.u_l, ic.v_l);
    return (sys.flux_u(ic.u_r, ic.v_r) - sys.flux_u(ic.u_l, ic.v_l)) / (ic.u_r - ic.u_l);
}

/// Three bumps of spatial width w = L/10 over t in ]0.1T, 0.9T[, placed relative to
/// the front position x_f at t = T/2: one centered on it, one straddling it
/// (shifted by w/2), one on the left far-field side whose support ends at x_f.
inline std::vector<TestFunction> default_test_functions(const ExperimentPreset& p, const SystemDefinition& sys) {
    if (!p.test_functions.empty()) return p.test_functions;
    const double s = p.front_speed.value_or(jump_speed(sys, p.ic));
    const double w = 0.1 * (p.x_max - p.x_min);
    const double tc = 0.5 * p.T, tw = 0.4 * p.T;
    const double xf = p.ic.jump_x + s * tc;
    return {{xf, w, tc, tw, 1.0}, {xf + 0.5 * w, w, tc, tw, 1.0}, {xf - w, w, tc, tw, 1.0}};
}

struct RowResult {
    GridRow row;
    std::optional<MonitorReport> report;
    std::optional<SimulationResult> run;  // final state and run metadata
    std::string error;
};

struct TableResult {
    std::string preset;
    std::vector<RowResult> rows;
    std::optional<AssumptionVerdict> verdict;
    std::string verdict_error;

    std::vector<MonitorReport> reports() const {
        std::vector<MonitorReport> out;
        for (const auto& r : rows)
            if (r.report) out.push_back(*r.report);
        return out;
    }
};

inline RowResult run_row(const ExperimentPreset& p, const SystemDefinition& sys, const GridRow& row,
                         std::vector<Observer*> extra = {}) {
    RowResult out{row, std::nullopt, std::nullopt, {}};
    try {
        const GridSpec grid = GridSpec::from_width(p.x_min, p.x_max, row.h);
        const StateField ic = discretize_initial(p.ic, grid);
        const SchemeParams params = scheme_params(p, row);
        MonitorObserver monitor(sys, params);
        extra.push_back(&monitor);
        out.run = run_simulation(ic, sys, params, extra);
        out.report = monitor.report();
    } catch (const Error& e) {
        out.error = e.what();
    }
    return out;
}

/// Runs every row (rows with h below h_min skipped) and forms the verdict.
inline TableResult run_table(const ExperimentPreset& p, double h_min = 0.0) {
    validate(p);
    const SystemDefinition sys = system_by_name(p.system);
    std::vector<GridRow> rows;
    for (const auto& r : p.rows)
        if (r.h >= h_min) rows.push_back(r);
    TableResult table{p.name, std::vector<RowResult>(rows.size()), std::nullopt, {}};
    parallel_for(rows.size(), [&](std::size_t k) { table.rows[k] = run_row(p, sys, rows[k]); });
    try {
        table.verdict = assumption_verdict(table.reports());
    } catch (const InsufficientData& e) {
        table.verdict_error = e.what();
    }
    return table;
}

struct ResidualStudy {
    std::string preset;
    ResidualReport report;
    std::vector<OrderEstimate> orders;
    std::vector<RowResult> rows;
    std::string order_error;
};

inline ResidualStudy residual_study(const ExperimentPreset& p, int quad_points = 2) {
    validate(p);
    const SystemDefinition sys = system_by_name(p.system);
    const auto tests = default_test_functions(p, sys);
    ResidualStudy study{p.name, {{}, tests}, {}, std::vector<RowResult>(p.residual_rows.size()), {}};
    std::vector<std::vector<std::pair<double, double>>> integrals(p.residual_rows.size());
    parallel_for(p.residual_rows.size(), [&](std::size_t k) {
        ResidualAccumulator acc(sys, tests, p.T, quad_points);
        study.rows[k] = run_row(p, sys, p.residual_rows[k], {&acc});
        if (study.rows[k].report)
            for (std::size_t j = 0; j < acc.size(); ++j) integrals[k].push_back(acc.integrals(j));
    });
    for (std::size_t k = 0; k < p.residual_rows.size(); ++k)
        for (std::size_t j = 0; j < integrals[k].size(); ++j)
            study.report.rows.push_back({p.residual_rows[k].h, j, integrals[k][j].first, integrals[k][j].second});
    try {
        study.orders = order_estimate(study.report);
    } catch (const InsufficientData& e) {
        study.order_error = e.what();
    }
    return study;
}

/// Rankine–Hugoniot speed for flux u²: (u_l² - u_r²)/(u_l - u_r) = u_l + u_r.
constexpr double oracle_burgers_shock(double u_l, double u_r) { return u_l + u_r; }

/// First crossing of `level` by u, linearly interpolated between cell centers.
inline double measure_shock_position(const StateField& s, double level) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const double d0 = s.u[i] - level, d1 = s.u[i + 1] - level;
        if (d0 == 0.0) return s.grid.center(i);
        if ((d0 < 0.0) != (d1 < 0.0) && d1 != 0.0) return s.grid.center(i) + s.grid.h * d0 / (d0 - d1);
        if (d1 == 0.0) return s.grid.center(i + 1);
    }
    throw Error("measure_shock_position: u never crosses level " + std::to_string(level));
}

/// Σ v_i h over cells whose centers lie in [lo, hi].
inline double v_mass(const StateField& s, double lo, double hi) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double x = s.grid.center(i);
        if (x >= lo && x <= hi) m += s.v[i];
    }
    return m * s.grid.h;
}

/// Records (t, v-mass in a window) at every level.
class MassObserver : public Observer {
public:
    MassObserver(double lo, double hi) : lo_(lo), hi_(hi) {}
    void begin(const RunInfo&) override {
        t_.clear();
        m_.clear();
    }
    void observe(const StateField& s) override {
        t_.push_back(s.t);
        m_.push_back(v_mass(s, lo_, hi_));
    }
    const std::vector<double>& times() const noexcept { return t_; }
    const std::vector<double>& masses() const noexcept { return m_; }

    /// Least-squares slope of mass over levels with t in [t0, t1].
    double growth_rate(double t0, double t1) const {
        std::vector<double> t, m;
        for (std::size_t k = 0; k < t_.size(); ++k)
            if (t_[k] >= t0 && t_[k] <= t1) {
                t.push_back(t_[k]);
                m.push_back(m_[k]);
            }
        return least_squares_slope(t, m);
    }

private:
    double lo_, hi_;
    std::vector<double> t_, m_;
};

// Preset JSON mirrors ExperimentPreset field by field.

inline nlohmann::json to_json(const TestFunction& t) {
    return {{"x_center", t.x_center}, {"x_width", t.x_width}, {"t_center", t.t_center},
            {"t_width", t.t_width}, {"amplitude", t.amplitude}};
}

inline TestFunction test_function_from_json(const nlohmann::json& j) {
    TestFunction t;
    t.x_center = j.at("x_center").get<double>();
    t.x_width = j.at("x_width").get<double>();
    t.t_center = j.at("t_center").get<double>();
    t.t_width = j.at("t_width").get<double>();
    t.amplitude = j.value("amplitude", 1.0);
    return t;
}

inline nlohmann::json to_json(const ExperimentPreset& p) {
    auto rows = [](const std::vector<GridRow>& rs) {
        auto a = nlohmann::json::array();
        for (const auto& r : rs) a.push_back({{"h", r.h}, {"r", r.r}});
        return a;
    };
    nlohmann::json j = {{"name", p.name},
                        {"system", p.system},
                        {"ic", {{"u_l", p.ic.u_l}, {"v_l", p.ic.v_l}, {"u_r", p.ic.u_r}, {"v_r", p.ic.v_r}, {"jump_x", p.ic.jump_x}}},
                        {"domain", {p.x_min, p.x_max}},
                        {"T", p.T},
                        {"alpha", p.alpha},
                        {"beta", p.beta},
                        {"gamma", p.gamma},
                        {"rows", rows(p.rows)},
                        {"residual_rows", rows(p.residual_rows)},
                        {"auto_r", p.auto_r},
                        {"cfl_target", p.cfl_target},
                        {"monitors", p.monitors},
                        {"residuals", p.residuals},
                        {"delta_window", p.delta_window}};
    if (p.front_speed) j["front_speed"] = *p.front_speed;
    if (!p.test_functions.empty()) {
        j["test_functions"] = nlohmann::json::array();
        for (const auto& t : p.test_functions) j["test_functions"].push_back(to_json(t));
    }
    return j;
}

inline ExperimentPreset preset_from_json(const nlohmann::json& j) {
    try {
        ExperimentPreset p;
        p.name = j.at("name").get<std::string>();
        p.system = j.value("system", std::string("kk"));
        const auto& ic = j.at("ic");
        p.ic = {ic.at("u_l").get<double>(), ic.at("v_l").get<double>(), ic.at("u_r").get<double>(),
                ic.at("v_r").get<double>(), ic.value("jump_x", 0.0)};
        const auto& dom = j.at("domain");
        p.x_min = dom.at(0).get<double>();
        p.x_max = dom.at(1).get<double>();
        p.T = j.at("T").get<double>();
        p.alpha = j.value("alpha", 0.0);
        p.beta = j.value("beta", 0.0);
        p.gamma = j.value("gamma", 0.0);
        auto rows = [&](const char* key) {
            std::vector<GridRow> out;
            if (j.contains(key))
                for (const auto& r : j.at(key)) out.push_back({r.at("h").get<double>(), r.value("r", 0.0)});
            return out;
        };
        p.rows = rows("rows");
        p.residual_rows = rows("residual_rows");
        p.auto_r = j.value("auto_r", false);
        p.cfl_target = j.value("cfl_target", 0.9);
        p.monitors = j.value("monitors", true);
        p.residuals = j.value("residuals", true);
        p.delta_window = j.value("delta_window", 0.1);
        if (j.contains("front_speed")) p.front_speed = j.at("front_speed").get<double>();
        if (j.contains("test_functions"))
            for (const auto& t : j.at("test_functions")) p.test_functions.push_back(test_function_from_json(t));
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("preset json: ") + e.what());
    }
}

} // namespace singshock
