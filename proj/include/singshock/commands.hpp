#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "singshock/cli.hpp"
#include "singshock/errors.hpp"
#include "singshock/experiments.hpp"
#include "singshock/initial.hpp"
#include "singshock/io.hpp"
#include "singshock/monitors.hpp"
#include "singshock/properties.hpp"
#include "singshock/simulation.hpp"
#include "singshock/weak_residual.hpp"

namespace singshock {

/// Keeps copies of the levels at the requested times, each rounded down to the
/// last completed step. Written after the run so an auto-r restart leaves no stale files.
class SnapshotObserver : public Observer {
public:
    explicit SnapshotObserver(std::vector<double> times) : times_(std::move(times)) {
        std::sort(times_.begin(), times_.end());
        times_.erase(std::unique(times_.begin(), times_.end()), times_.end());
    }

    void begin(const RunInfo& info) override {
        dt_ = info.dt;
        next_ = 0;
        taken_.clear();
    }

    void observe(const StateField& level) override {
        const double t_next = level.t + dt_;
        bool keep = false;
        while (next_ < times_.size() && times_[next_] < t_next * (1.0 - 1e-12)) {
            ++next_;
            keep = true;
        }
        if (keep) taken_.push_back(level);
    }

    void end(const StateField& last) override {
        if (next_ < times_.size() && (taken_.empty() || taken_.back().n != last.n)) taken_.push_back(last);
        next_ = times_.size();
    }

    const std::vector<StateField>& snapshots() const noexcept { return taken_; }

private:
    std::vector<double> times_;
    double dt_ = 0.0;
    std::size_t next_ = 0;
    std::vector<StateField> taken_;
};

inline std::string snapshot_path(const std::string& prefix, double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "_t%.9g.csv", t);
    return prefix + buf;
}

namespace detail {

inline void ensure_parent(const std::string& prefix) {
    const auto parent = std::filesystem::path(prefix).parent_path();
    if (parent.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw IoError(parent.string(), "cannot create output directory");
}

inline int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const SystemDefinition sys = system_by_name(cfg.system);
    const GridSpec grid = cfg.grid();
    const StateField ic = discretize_initial(*cfg.ic, grid);

    std::vector<Observer*> observers;
    MonitorObserver monitor(sys, cfg.params);
    if (cfg.monitor) observers.push_back(&monitor);
    SnapshotObserver snaps(cfg.snapshots);
    if (!cfg.snapshots.empty()) observers.push_back(&snaps);
    std::optional<ResidualAccumulator> residual;
    if (cfg.residual) {
        residual.emplace(sys, default_test_functions(cfg.as_preset(), sys), cfg.params.T, cfg.quad_points);
        observers.push_back(&*residual);
    }

    ensure_parent(cfg.out);
    SimulationResult res;
    try {
        res = run_simulation(ic, sys, cfg.params, observers);
    } catch (const Blowup& b) {
        if (b.last_valid()) {
            write_profile_csv(*b.last_valid(), cfg.out + "_last_valid.csv");
            err << "wrote last valid state to " << cfg.out << "_last_valid.csv\n";
        }
        throw;
    }
    for (const auto& w : res.warnings) err << "warning: " << w << '\n';

    std::vector<std::string> profiles;
    for (const auto& s : snaps.snapshots()) {
        profiles.push_back(snapshot_path(cfg.out, s.t));
        write_profile_csv(s, profiles.back());
    }
    profiles.push_back(cfg.out + "_final.csv");
    write_profile_csv(res.final_state, profiles.back());
    emit_plot_script(profiles, cfg.out + ".gp");

    out << "system " << sys.name << ", " << grid.n_cells << " cells, h = " << grid.h << ", r = " << res.r
        << " (" << to_string(res.r_mode) << ", " << res.restarts << " restarts), " << res.steps << " steps to t = " << res.final_state.t << '\n';
    if (cfg.monitor) {
        const std::string csv = monitor_csv({monitor.report()});
        write_text_file(cfg.out + "_monitor.csv", csv);
        out << csv;
    }
    if (residual) {
        ResidualReport report{{}, residual->tests()};
        report.add(grid.h, *residual);
        write_text_file(cfg.out + "_residual.csv", residual_csv(report));
        out << residual_csv(report);
    }
    for (const auto& p : profiles) out << "wrote " << p << '\n';
    return 0;
}

inline int table_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const TableResult table = run_table(*cfg.preset, cfg.h_min);
    bool ok = true;
    for (const auto& row : table.rows)
        if (!row.report) {
            err << "row h = " << row.row.h << " failed: " << row.error << '\n';
            ok = false;
        } else {
            for (const auto& w : row.run->warnings) err << "warning (h = " << row.row.h << "): " << w << '\n';
        }
    ensure_parent(cfg.out);
    const std::string csv = monitor_csv(table.reports());
    write_text_file(cfg.out + "_table.csv", csv);
    out << "preset " << table.preset << '\n' << csv;
    if (table.verdict) out << describe(*table.verdict) << '\n';
    else out << "verdict: " << table.verdict_error << '\n';
    out << "wrote " << cfg.out << "_table.csv\n";
    return ok ? 0 : 1;
}

inline int residual_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const ResidualStudy study = residual_study(*cfg.preset, cfg.quad_points);
    for (const auto& row : study.rows)
        if (!row.report) err << "row h = " << row.row.h << " failed: " << row.error << '\n';
    ensure_parent(cfg.out);
    write_text_file(cfg.out + "_residual.csv", residual_csv(study.report));
    write_text_file(cfg.out + "_orders.csv", order_csv(study.orders));
    out << "preset " << study.preset << '\n' << residual_csv(study.report) << order_csv(study.orders);
    out << "wrote " << cfg.out << "_residual.csv and " << cfg.out << "_orders.csv\n";
    if (!study.order_error.empty()) {
        err << "order estimate: " << study.order_error << '\n';
        return 1;
    }
    return 0;
}

inline int verify_command(const RunConfig& cfg, std::ostream& out) {
    bool ok = true;
    for (const auto& r : run_property_suites(cfg.seed)) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

} // namespace detail

/// Runs the parsed command. Returns the process exit code: 0 on success, 2 for
/// configuration errors found late, 1 for any other failure.
inline int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        switch (cfg.command) {
        case Command::run: return detail::run_command(cfg, out, err);
        case Command::table: return detail::table_command(cfg, out, err);
        case Command::residual: return detail::residual_command(cfg, out, err);
        case Command::verify: return detail::verify_command(cfg, out);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace singshock
