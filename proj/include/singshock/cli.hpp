#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "singshock/errors.hpp"
#include "singshock/experiments.hpp"
#include "singshock/grid.hpp"
#include "singshock/scheme.hpp"
#include "singshock/systems.hpp"
#include "singshock/test_function.hpp"

namespace singshock {

enum class Command { run, table, residual, verify };

inline const char* to_string(Command c) {
    switch (c) {
    case Command::run: return "run";
    case Command::table: return "table";
    case Command::residual: return "residual";
    case Command::verify: return "verify";
    }
    return "?";
}

/// Bad command line. `exit_code` is 2 for usage errors and 0 for --help.
class UsageError : public ConfigError {
public:
    UsageError(const std::string& what, int exit_code) : ConfigError(what), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

struct RunConfig {
    Command command = Command::run;
    std::string system = "kk";
    std::optional<ExperimentPreset> preset;
    std::optional<RiemannData> ic;
    double x_min = -1.0;
    double x_max = 1.0;
    std::optional<double> h;
    std::optional<std::size_t> n_cells;
    SchemeParams params;
    std::string out = "singshock";
    std::vector<double> snapshots;
    bool residual = false;
    std::vector<TestFunction> test_functions;  // empty: default family
    int quad_points = 2;
    bool monitor = true;
    std::uint64_t seed = 1;
    double h_min = 0.0;

    /// Grid for `run`; h and n_cells are already reconciled by parse_cli.
    GridSpec grid() const {
        if (n_cells) return GridSpec::from_count(x_min, x_max, *n_cells);
        if (!h) throw ConfigError("no grid: give --h or --n-cells");
        return GridSpec::from_width(x_min, x_max, *h);
    }

    /// The run as a one-row preset, used to build default test functions.
    ExperimentPreset as_preset() const {
        ExperimentPreset p = preset.value_or(ExperimentPreset{});
        if (!preset) p.name = "run";
        p.system = system;
        if (ic) p.ic = *ic;
        p.x_min = x_min;
        p.x_max = x_max;
        p.T = params.T;
        p.alpha = params.alpha;
        p.beta = params.beta;
        p.gamma = params.gamma;
        p.auto_r = params.r_mode == RMode::automatic;
        p.cfl_target = params.cfl_target;
        if (!test_functions.empty()) p.test_functions = test_functions;
        return p;
    }
};

namespace detail {

// One configuration layer (JSON file or command line); unset fields leave lower layers alone.
struct ConfigLayer {
    std::optional<std::string> system, preset, out;
    std::optional<std::vector<double>> ic, domain, snapshots;
    std::optional<double> jump, h, r, cfl_target, alpha, beta, gamma, T, blowup_cap, h_min;
    std::optional<std::size_t> n_cells;
    std::optional<bool> auto_r, residual, monitor;
    std::optional<std::vector<TestFunction>> test_functions;
    std::optional<int> quad_points;
    std::optional<std::uint64_t> seed;
};

inline ExperimentPreset resolve_preset(const std::string& name) {
    for (const auto& known : preset_names())
        if (known == name) return preset_by_name(name);
    if (std::filesystem::exists(name)) {
        std::ifstream in(name);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("preset file " + name + ": " + e.what());
        }
        return preset_from_json(j);
    }
    std::string list;
    for (const auto& known : preset_names()) list += (list.empty() ? "" : ", ") + known;
    throw ConfigError("unknown preset \"" + name + "\" (known: " + list + ", or a preset JSON file)");
}

inline ConfigLayer layer_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": top level must be an object");
    ConfigLayer c;
    try {
        for (const auto& [key, val] : j.items()) {
            if (key == "system") c.system = val.get<std::string>();
            else if (key == "preset") c.preset = val.get<std::string>();
            else if (key == "out") c.out = val.get<std::string>();
            else if (key == "ic") {
                if (val.is_object()) {
                    c.ic = std::vector<double>{val.at("u_l").get<double>(), val.at("v_l").get<double>(),
                                               val.at("u_r").get<double>(), val.at("v_r").get<double>()};
                    if (val.contains("jump_x")) c.jump = val.at("jump_x").get<double>();
                } else {
                    c.ic = val.get<std::vector<double>>();
                }
            }
            else if (key == "jump_x") c.jump = val.get<double>();
            else if (key == "domain") c.domain = val.get<std::vector<double>>();
            else if (key == "snapshots") c.snapshots = val.get<std::vector<double>>();
            else if (key == "h") c.h = val.get<double>();
            else if (key == "n_cells") c.n_cells = val.get<std::size_t>();
            else if (key == "r") c.r = val.get<double>();
            else if (key == "auto_r") c.auto_r = val.get<bool>();
            else if (key == "cfl_target") c.cfl_target = val.get<double>();
            else if (key == "alpha") c.alpha = val.get<double>();
            else if (key == "beta") c.beta = val.get<double>();
            else if (key == "gamma") c.gamma = val.get<double>();
            else if (key == "T") c.T = val.get<double>();
            else if (key == "blowup_cap") c.blowup_cap = val.get<double>();
            else if (key == "h_min") c.h_min = val.get<double>();
            else if (key == "residual") c.residual = val.get<bool>();
            else if (key == "monitor") c.monitor = val.get<bool>();
            else if (key == "quad_points") c.quad_points = val.get<int>();
            else if (key == "seed") c.seed = val.get<std::uint64_t>();
            else if (key == "test_functions") {
                std::vector<TestFunction> tf;
                for (const auto& t : val) tf.push_back(test_function_from_json(t));
                c.test_functions = std::move(tf);
            }
            else throw ConfigError(where + ": unknown key \"" + key + "\"");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
    return c;
}

inline ConfigLayer load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    return layer_from_json(j, "config " + path);
}

inline void apply_preset(const ExperimentPreset& p, RunConfig& cfg) {
    cfg.preset = p;
    cfg.system = p.system;
    cfg.ic = p.ic;
    cfg.x_min = p.x_min;
    cfg.x_max = p.x_max;
    cfg.params.T = p.T;
    cfg.params.alpha = p.alpha;
    cfg.params.beta = p.beta;
    cfg.params.gamma = p.gamma;
    cfg.params.cfl_target = p.cfl_target;
    cfg.params.r_mode = p.auto_r ? RMode::automatic : RMode::fixed;
    cfg.test_functions = p.test_functions;
    if (!p.rows.empty()) {  // `run --preset` uses the coarsest row
        cfg.h = p.rows.front().h;
        cfg.n_cells.reset();
        cfg.params.r = p.rows.front().r;
    }
}

inline void apply_layer(const ConfigLayer& c, RunConfig& cfg, const std::string& where) {
    if (c.system) cfg.system = *c.system;
    if (c.ic) {
        if (c.ic->size() != 4) throw ConfigError(where + ": ic needs four values u_l,v_l,u_r,v_r");
        const double jump = cfg.ic ? cfg.ic->jump_x : 0.0;
        cfg.ic = RiemannData{(*c.ic)[0], (*c.ic)[1], (*c.ic)[2], (*c.ic)[3], jump};
    }
    if (c.jump) {
        if (!cfg.ic) throw ConfigError(where + ": jump position given without initial states");
        cfg.ic->jump_x = *c.jump;
    }
    if (c.domain) {
        if (c.domain->size() != 2) throw ConfigError(where + ": domain needs two values x_min,x_max");
        cfg.x_min = (*c.domain)[0];
        cfg.x_max = (*c.domain)[1];
    }
    if (c.h && c.n_cells) {
        const double len = cfg.x_max - cfg.x_min;
        if (std::abs(*c.h * static_cast<double>(*c.n_cells) - len) > 1e-9 * std::abs(len))
            throw ConfigError(where + ": conflicting h = " + format_double(*c.h) + " and n_cells = "
                              + std::to_string(*c.n_cells) + " for a domain of length " + format_double(len));
    }
    if (c.h) {
        cfg.h = c.h;
        cfg.n_cells.reset();
    }
    if (c.n_cells) {
        cfg.n_cells = c.n_cells;
        cfg.h.reset();
    }
    if (c.r) cfg.params.r = *c.r;
    if (c.auto_r) cfg.params.r_mode = *c.auto_r ? RMode::automatic : RMode::fixed;
    if (c.cfl_target) cfg.params.cfl_target = *c.cfl_target;
    if (c.alpha) cfg.params.alpha = *c.alpha;
    if (c.beta) cfg.params.beta = *c.beta;
    if (c.gamma) cfg.params.gamma = *c.gamma;
    if (c.T) cfg.params.T = *c.T;
    if (c.blowup_cap) cfg.params.blowup_cap = *c.blowup_cap;
    if (c.h_min) cfg.h_min = *c.h_min;
    if (c.out) cfg.out = *c.out;
    if (c.snapshots) cfg.snapshots = *c.snapshots;
    if (c.residual) cfg.residual = *c.residual;
    if (c.monitor) cfg.monitor = *c.monitor;
    if (c.test_functions) cfg.test_functions = *c.test_functions;
    if (c.quad_points) cfg.quad_points = *c.quad_points;
    if (c.seed) cfg.seed = *c.seed;
}

inline void check_finished(RunConfig& cfg, const ConfigLayer& flags) {
    (void)system_by_name(cfg.system);  // unknown names and missing custom files fail here
    validate(cfg.params);
    if (cfg.quad_points < 1 || cfg.quad_points > 4) throw ConfigError("quad_points must be 1..4");
    if (cfg.h_min < 0.0) throw ConfigError("h_min must be >= 0");

    if (cfg.command == Command::table || cfg.command == Command::residual) {
        if (!cfg.preset) throw ConfigError(std::string(to_string(cfg.command)) + " requires --preset");
        if (flags.h || flags.n_cells || flags.r)
            throw ConfigError(std::string(to_string(cfg.command))
                              + " takes its grids from the preset; --h, --n-cells and --r do not apply");
        ExperimentPreset& p = *cfg.preset;
        p = cfg.as_preset();
        validate(p);
        if (cfg.command == Command::residual && p.residual_rows.size() < min_order_grids)
            throw ConfigError("preset " + p.name + " has fewer than 3 residual grids");
        return;
    }
    if (cfg.command != Command::run) return;

    if (cfg.h && !(*cfg.h > 0.0 && std::isfinite(*cfg.h)))
        throw ConfigError("h must be positive and finite, got " + format_double(*cfg.h));
    if (cfg.n_cells && *cfg.n_cells == 0) throw ConfigError("n_cells must be positive");
    if (!cfg.h && !cfg.n_cells) throw ConfigError("run needs a grid: give --h, --n-cells or --preset");
    if (!cfg.ic) throw ConfigError("run needs initial data: give --ic or --preset");
    const GridSpec g = cfg.grid();
    if (!(cfg.ic->jump_x > g.x_min && cfg.ic->jump_x < g.x_max))
        throw ConfigError("jump position " + format_double(cfg.ic->jump_x) + " is outside the domain");
    for (double t : cfg.snapshots)
        if (!(t >= 0.0 && t <= cfg.params.T))
            throw ConfigError("snapshot time " + format_double(t) + " outside [0, T]");
    for (const auto& psi : cfg.test_functions) validate(psi, g, cfg.params.T);
}

} // namespace detail

/// Builds a RunConfig from argv. Layers apply in the order built-in defaults,
/// preset, --config file, explicit flags. Throws UsageError (exit 2, or 0 for
/// --help) on any invalid input.
inline RunConfig parse_cli(int argc, const char* const* argv) {
    CLI::App app{"Splitting scheme for two-equation conservation laws with singular and delta shocks",
                 "singshock"};
    app.set_help_flag("--help", "Print help and exit");
    app.require_subcommand(1, 1);

    detail::ConfigLayer flags;
    std::string config_path;
    bool auto_r = false, residual = false, no_monitor = false;

    struct Sub {
        Command cmd;
        CLI::App* app;
    };
    std::vector<Sub> subs;
    auto add = [&](Command cmd, const char* help) {
        CLI::App* s = app.add_subcommand(to_string(cmd), help);
        s->set_help_flag("--help", "Print help and exit");
        s->add_option("--config", config_path, "JSON config file; explicit flags override it");
        s->add_option("--preset", flags.preset, "Preset name or preset JSON file");
        s->add_option("--system", flags.system, "kk | korchinski | custom:<path>");
        s->add_option("--seed", flags.seed, "Seed for randomized property suites");
        s->add_option("--out", flags.out, "Output path prefix");
        if (cmd != Command::verify) {
            s->add_option("--ic", flags.ic, "Riemann states u_l,v_l,u_r,v_r")->delimiter(',')->expected(4);
            s->add_option("--jump", flags.jump, "Jump position (default 0)");
            s->add_option("--domain", flags.domain, "x_min,x_max")->delimiter(',')->expected(2);
            s->add_option("--h", flags.h, "Cell width");
            s->add_option("--n-cells", flags.n_cells, "Number of cells (alternative to --h)");
            s->add_option("--r", flags.r, "Ratio dt/h");
            s->add_flag("--auto-r", auto_r, "Pick r from --cfl-target and halve it on CFL violations");
            s->add_option("--cfl-target", flags.cfl_target, "Target r*max|phi| in auto mode");
            s->add_option("--alpha", flags.alpha, "Averaging weight in [0, 0.5)");
            s->add_option("--beta", flags.beta, "Exponent of the velocity monitor");
            s->add_option("--gamma", flags.gamma, "Exponent of the flux monitor");
            s->add_option("--T", flags.T, "Final time");
            s->add_option("--blowup-cap", flags.blowup_cap, "Abort when max|u| or max|v| exceeds this");
            s->add_option("--quad-points", flags.quad_points, "Gauss points per direction for residuals");
        }
        if (cmd == Command::run) {
            s->add_option("--snapshots", flags.snapshots, "Times at which to write profiles")->delimiter(',');
            s->add_flag("--residual", residual, "Accumulate weak-form residuals during the run");
            s->add_flag("--no-monitor", no_monitor, "Skip the monitor report");
        }
        if (cmd == Command::table) s->add_option("--h-min", flags.h_min, "Skip rows with h below this");
        subs.push_back({cmd, s});
    };
    add(Command::run, "Run a single simulation");
    add(Command::table, "Run a preset's monitor table");
    add(Command::residual, "Run a preset's weak-residual convergence study");
    add(Command::verify, "Run the randomized property suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw UsageError(app.help(), 0);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) throw UsageError(app.help(), 0);
        throw UsageError(std::string(e.what()) + "\nRun with --help for usage.", 2);
    }

    RunConfig cfg;
    for (const auto& s : subs)
        if (s.app->parsed()) cfg.command = s.cmd;
    if (auto_r) flags.auto_r = true;
    if (residual) flags.residual = true;
    if (no_monitor) flags.monitor = false;

    try {
        std::optional<detail::ConfigLayer> file;
        if (!config_path.empty()) file = detail::load_config_file(config_path);
        const auto preset_name = flags.preset ? flags.preset : (file ? file->preset : std::nullopt);
        if (preset_name) detail::apply_preset(detail::resolve_preset(*preset_name), cfg);
        if (file) detail::apply_layer(*file, cfg, "config " + config_path);
        detail::apply_layer(flags, cfg, "command line");
        detail::check_finished(cfg, flags);
    } catch (const UsageError&) {
        throw;
    } catch (const Error& e) {
        throw UsageError(e.what(), 2);
    }
    return cfg;
}

inline RunConfig parse_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"singshock"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return parse_cli(static_cast<int>(argv.size()), argv.data());
}

} // namespace singshock
