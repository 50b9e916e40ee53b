// brine-sim: command-line front end for the brine-inclusion models.
//
// Subcommands: dump-defaults, equilibrium-pore, evolve, suite, convergence,
// drift, phasefield-1d. Exit code 0 on success with all assertions passing,
// 2 when an assertion fails, 1 on errors.

#include "CLI11.hpp"

#include "brine/io.hpp"
#include "brine/model.hpp"
#include "brine/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace brine;

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file");
    cmd->add_option("--set", args.sets, "override key=value (repeatable)")
        ->take_all();
    cmd->add_option("--out", args.out_dir, "output directory");
}

io::RunConfig load_config(const CommonArgs& args,
                          const std::vector<std::string>& allowed_options) {
    io::RunConfig cfg;
    cfg.out_dir = args.out_dir;
    if (!args.config_path.empty()) {
        std::ifstream f(args.config_path);
        if (!f)
            throw io::config_error("cannot read config file: " + args.config_path);
        nlohmann::json j;
        f >> j;
        cfg = io::config_from_json(j, allowed_options);
        if (j.find("out_dir") == j.end())
            cfg.out_dir = args.out_dir;
    }
    for (const std::string& kv : args.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw io::config_error("--set expects key=value, got: " + kv);
        io::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1), allowed_options);
    }
    return cfg;
}

double option_or(const io::RunConfig& cfg, const std::string& key, double fallback) {
    const auto it = cfg.options.find(key);
    return it == cfg.options.end() ? fallback : it->second;
}

int finish(const scenario::RunReport& rep) {
    std::cout << io::report_text(rep);
    return rep.all_passed() ? 0 : 2;
}

int cmd_dump_defaults(bool with_table) {
    nlohmann::json j = io::params_to_json(ModelParams::defaults());
    if (with_table) {
        j["physical_table"] = {{"water_density", physical_table::water_density},
                               {"specific_heat_ice", physical_table::specific_heat_ice},
                               {"salt_molar_entropy", physical_table::salt_molar_entropy},
                               {"water_molar_density", physical_table::water_molar_density},
                               {"gravity", physical_table::gravity},
                               {"e_s", physical_table::e_s},
                               {"e_N", physical_table::e_N},
                               {"e_g", physical_table::e_g},
                               {"e_1", physical_table::e_1},
                               {"L_b", physical_table::L_b},
                               {"L_li", physical_table::L_li}};
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_equilibrium_pore(const CommonArgs& args, bool sweep) {
    const std::vector<std::string> keys{"r0", "a0", "b0", "x3_max"};
    const io::RunConfig cfg = load_config(args, keys);
    const fs::path dir = fs::path(cfg.out_dir) / "equilibrium-pore";

    if (sweep) {
        scenario::GradientSweepResult res = scenario::run_gradient_sweep(cfg.params);
        for (std::size_t i = 0; i < res.profiles.size(); ++i) {
            char name[64];
            std::snprintf(name, sizeof name, "pore_b0_%g.csv", res.gradients[i] * 1000.0);
            io::write_pore_profile(dir / name, res.profiles[i]);
        }
        io::write_report(dir / "report.json", res.report);
        return finish(res.report);
    }

    const double r0 = option_or(cfg, "r0", 2.0);
    const double a0 = option_or(cfg, "a0", -4.0);
    const double b0 = option_or(cfg, "b0", 0.015);
    const double x3_max = option_or(cfg, "x3_max", 40.0);

    const stefan::PoreProfile prof = stefan::equilibrium_pore(r0, a0, b0, x3_max, cfg.params);
    io::write_pore_profile(dir / "pore.csv", prof);

    scenario::RunReport rep;
    rep.name = "equilibrium-pore";
    rep.assertions.push_back({"profile integrated", true,
                              static_cast<double>(prof.r.size()),
                              std::string("termination: ") + stefan::to_string(prof.termination)});
    std::vector<stefan::PinchEvent> events;
    if (prof.termination == stefan::PoreTermination::PinchOff)
        events.push_back({0.0, 0.0, prof.end_x3});
    io::write_events(dir / "events.json", events);
    rep.events = events;
    rep.assertions.push_back({"regime", true,
                              static_cast<double>(stefan::classify_pore_regime(prof)),
                              stefan::to_string(stefan::classify_pore_regime(prof))});
    io::write_report(dir / "report.json", rep);
    return finish(rep);
}

int cmd_evolve(const CommonArgs& args, const std::string& scenario_flag,
               const std::string& scenario_file, const std::string& dump_name) {
    if (!dump_name.empty()) {
        std::cout << io::scenario_to_json(scenario::find_scenario(dump_name)).dump(2) << '\n';
        return 0;
    }
    const std::vector<std::string> keys{"nodes", "dtau"};
    io::RunConfig cfg = load_config(args, keys);
    if (!scenario_flag.empty())
        cfg.scenario = scenario_flag;

    scenario::Scenario sc;
    if (!scenario_file.empty()) {
        std::ifstream f(scenario_file);
        if (!f)
            throw io::config_error("cannot read scenario file: " + scenario_file);
        nlohmann::json j;
        f >> j;
        sc = io::scenario_from_json(j);
    } else if (!cfg.scenario.empty()) {
        sc = scenario::find_scenario(cfg.scenario);
    } else {
        throw io::config_error("evolve requires --scenario <name> or --scenario-file <path>");
    }
    sc.nodes = static_cast<int>(option_or(cfg, "nodes", sc.nodes));
    sc.dtau = option_or(cfg, "dtau", sc.dtau);

    scenario::ScenarioResult res = scenario::run_scenario(sc, cfg.params);
    const fs::path dir = fs::path(cfg.out_dir) / sc.name;
    io::write_curve_frames(dir / "frames.csv", res.frames);
    io::write_events(dir / "events.json", res.report.events);
    io::write_report(dir / "report.json", res.report);
    std::ofstream(dir / "report.txt") << io::report_text(res.report);
    return finish(res.report);
}

int cmd_suite(const CommonArgs& args) {
    const std::vector<std::string> keys{"nodes", "dtau"};
    const io::RunConfig cfg = load_config(args, keys);
    std::vector<scenario::RunReport> reports;
    int worst = 0;

    for (const scenario::Scenario& sc : scenario::built_in_scenarios()) {
        scenario::ScenarioResult res = scenario::run_scenario(sc, cfg.params);
        const fs::path dir = fs::path(cfg.out_dir) / "suite" / sc.name;
        io::write_curve_frames(dir / "frames.csv", res.frames);
        io::write_events(dir / "events.json", res.report.events);
        std::cout << io::report_text(res.report);
        if (!res.report.all_passed()) worst = 2;
        reports.push_back(std::move(res.report));
    }
    scenario::GradientSweepResult sweep = scenario::run_gradient_sweep(cfg.params);
    std::cout << io::report_text(sweep.report);
    if (!sweep.report.all_passed()) worst = 2;
    reports.push_back(std::move(sweep.report));

    io::write_reports(fs::path(cfg.out_dir) / "suite" / "report.json", reports);
    return worst;
}

int cmd_convergence(const CommonArgs& args) {
    const io::RunConfig cfg = load_config(args, {});
    scenario::ConvergenceResult res = scenario::run_convergence_study(cfg.params);
    io::write_report(fs::path(cfg.out_dir) / "convergence" / "report.json", res.report);
    return finish(res.report);
}

int cmd_drift(const CommonArgs& args) {
    const io::RunConfig cfg = load_config(args, {});
    scenario::DriftResult res = scenario::run_drift_sweep(cfg.params);
    io::write_report(fs::path(cfg.out_dir) / "drift" / "report.json", res.report);
    return finish(res.report);
}

int cmd_phasefield(const CommonArgs& args) {
    const std::vector<std::string> keys{"H", "n_cells", "domain_length", "steps",
                                        "save_every_steps"};
    const io::RunConfig cfg = load_config(args, keys);
    const fs::path dir = fs::path(cfg.out_dir) / "phasefield-1d";

    // sample trajectory with the configured cadence
    ModelParams p = cfg.params;
    p.H = option_or(cfg, "H", 50.0);
    const int n = static_cast<int>(option_or(cfg, "n_cells", 600));
    const double L = option_or(cfg, "domain_length", 1.0);
    const int steps = static_cast<int>(option_or(cfg, "steps", 2000));
    const int cadence = static_cast<int>(option_or(cfg, "save_every_steps", 200));

    pf1d::Field1D s;
    s.grid = pf1d::Grid1D::make(n, L);
    s.phi.resize(n);
    s.theta.resize(n);
    s.rho.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = s.grid.x(i);
        s.phi[i] = front_profile(p.H * (x - 0.5));
        s.theta[i] = p.theta_star + 0.05 * std::cos(M_PI * x);
        s.rho[i] = 0.7 * s.phi[i];
    }
    const double dt = pf1d::max_stable_dt(s.grid, p);
    std::vector<pf1d::Field1D> frames{s};
    std::vector<double> times{s.time};
    std::vector<pf1d::Diagnostics1D> diags{pf1d::diagnostics(s, p)};
    for (int k = 1; k <= steps; ++k) {
        s = pf1d::step(s, dt, p);
        if (k % cadence == 0 || k == steps) {
            frames.push_back(s);
            times.push_back(s.time);
            diags.push_back(pf1d::diagnostics(s, p));
        }
    }
    io::write_field_frames(dir / "trajectory.csv", frames);
    io::write_diagnostics(dir / "diagnostics.json", times, diags);

    scenario::PhasefieldResult res = scenario::run_phasefield_suite(cfg.params);
    io::write_report(dir / "report.json", res.report);
    return finish(res.report);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"brine-sim: phase-field and quasi-steady interface models of "
                 "brine inclusions in sea ice"};
    app.require_subcommand(1);

    bool with_table = false;
    CLI::App* dump = app.add_subcommand("dump-defaults", "print the calibrated parameter table");
    dump->add_flag("--table", with_table, "include the physical constants behind the scaling");

    CommonArgs pore_args, evolve_args, suite_args, conv_args, drift_args, pf_args;
    bool pore_sweep = false;
    CLI::App* pore = app.add_subcommand("equilibrium-pore",
                                        "pore profile IVP (single run or --sweep)");
    add_common(pore, pore_args);
    pore->add_flag("--sweep", pore_sweep,
                   "run the tapered/oscillatory/pinch-off gradient set with assertions");

    std::string scenario_flag, scenario_file, dump_name;
    CLI::App* evolve = app.add_subcommand("evolve", "run one named scenario");
    add_common(evolve, evolve_args);
    evolve->add_option("--scenario", scenario_flag, "built-in scenario name");
    evolve->add_option("--scenario-file", scenario_file, "scenario definition JSON");
    evolve->add_option("--dump-scenario", dump_name, "print a built-in definition as JSON");
    CLI::App* suite = app.add_subcommand("suite", "run every built-in scenario plus the "
                                                  "gradient sweep");
    add_common(suite, suite_args);
    CLI::App* conv = app.add_subcommand("convergence", "grid/step refinement study");
    add_common(conv, conv_args);
    CLI::App* drift = app.add_subcommand("drift", "sphere drift-speed sweep");
    add_common(drift, drift_args);
    CLI::App* pf = app.add_subcommand("phasefield-1d", "1-D thermodynamic suite + trajectory");
    add_common(pf, pf_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (dump->parsed()) return cmd_dump_defaults(with_table);
        if (pore->parsed()) return cmd_equilibrium_pore(pore_args, pore_sweep);
        if (evolve->parsed())
            return cmd_evolve(evolve_args, scenario_flag, scenario_file, dump_name);
        if (suite->parsed()) return cmd_suite(suite_args);
        if (conv->parsed()) return cmd_convergence(conv_args);
        if (drift->parsed()) return cmd_drift(drift_args);
        if (pf->parsed()) return cmd_phasefield(pf_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
