#include "brine/io.hpp"

#include <cstdio>
#include <fstream>

namespace brine::io {

namespace {

// every serializable ModelParams field, with accessors
struct ParamField {
    const char* name;
    double ModelParams::* member;
};

const ParamField kParamFields[] = {
    {"beta", &ModelParams::beta},
    {"theta_star", &ModelParams::theta_star},
    {"delta_g", &ModelParams::delta_g},
    {"H", &ModelParams::H},
    {"sigma_theta", &ModelParams::sigma_theta},
    {"sigma_N", &ModelParams::sigma_N},
    {"length_scale_Lb", &ModelParams::length_scale_Lb},
    {"mobility_floor", &ModelParams::mobility_floor},
    {"stability_safety", &ModelParams::stability_safety},
    {"theta_newton_tol", &ModelParams::theta_newton_tol},
    {"theta_min", &ModelParams::theta_min},
    {"theta_max", &ModelParams::theta_max},
    {"newton_tol", &ModelParams::newton_tol},
    {"pinch_radius", &ModelParams::pinch_radius},
    {"pore_rel_tol", &ModelParams::pore_rel_tol},
    {"rprime_blowup", &ModelParams::rprime_blowup},
};

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot open for writing: " + path.string());
    return f;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json params_to_json(const ModelParams& p) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& f : kParamFields)
        j[f.name] = p.*(f.member);
    j["theta_newton_max_iter"] = p.theta_newton_max_iter;
    j["newton_max_iter"] = p.newton_max_iter;
    return j;
}

ModelParams params_from_json(const nlohmann::json& j) {
    ModelParams p = ModelParams::defaults();
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const auto& f : kParamFields) {
            if (key == f.name) {
                if (!value.is_number())
                    throw config_error("parameter '" + key + "' must be a number");
                p.*(f.member) = value.get<double>();
                known = true;
                break;
            }
        }
        if (!known && key == "theta_newton_max_iter") {
            p.theta_newton_max_iter = value.get<int>();
            known = true;
        }
        if (!known && key == "newton_max_iter") {
            p.newton_max_iter = value.get<int>();
            known = true;
        }
        if (!known)
            throw config_error("unknown parameter key '" + key + "'");
    }
    try {
        p.validate();
    } catch (const domain_error& e) {
        throw config_error(e.what());
    }
    return p;
}

nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j = nlohmann::json::object();
    j["params"] = params_to_json(c.params);
    for (const auto& [k, v] : c.options)
        j[k] = v;
    if (!c.scenario.empty())
        j["scenario"] = c.scenario;
    j["out_dir"] = c.out_dir;
    return j;
}

RunConfig config_from_json(const nlohmann::json& j,
                           const std::vector<std::string>& allowed_options) {
    RunConfig c;
    for (const auto& [key, value] : j.items()) {
        if (key == "params") {
            c.params = params_from_json(value);
        } else if (key == "scenario") {
            c.scenario = value.get<std::string>();
        } else if (key == "out_dir") {
            c.out_dir = value.get<std::string>();
        } else {
            const bool allowed =
                std::find(allowed_options.begin(), allowed_options.end(), key)
                != allowed_options.end();
            if (!allowed)
                throw config_error("unknown config key '" + key + "'");
            if (!value.is_number())
                throw config_error("config key '" + key + "' must be a number");
            c.options[key] = value.get<double>();
        }
    }
    return c;
}

void apply_override(RunConfig& c, const std::string& key, const std::string& value,
                    const std::vector<std::string>& allowed_options) {
    if (key == "scenario") {
        c.scenario = value;
        return;
    }
    if (key == "out_dir") {
        c.out_dir = value;
        return;
    }
    for (const auto& f : kParamFields) {
        if (key == f.name) {
            nlohmann::json j = params_to_json(c.params);
            try {
                j[key] = std::stod(value);
            } catch (const std::exception&) {
                throw config_error("value for '" + key + "' is not a number: " + value);
            }
            c.params = params_from_json(j);
            return;
        }
    }
    const bool allowed =
        std::find(allowed_options.begin(), allowed_options.end(), key) != allowed_options.end();
    if (!allowed)
        throw config_error("unknown config key '" + key + "'");
    try {
        c.options[key] = std::stod(value);
    } catch (const std::exception&) {
        throw config_error("value for '" + key + "' is not a number: " + value);
    }
}

nlohmann::json scenario_to_json(const scenario::Scenario& sc) {
    nlohmann::json schedule = nlohmann::json::array();
    for (const auto& ph : sc.schedule)
        schedule.push_back({{"tau_start", ph.tau_start}, {"a0", ph.a0}, {"b0", ph.b0}});
    const char* stop_kind = sc.stop.kind == scenario::StopRule::Kind::TauEnd ? "tau_end"
                            : sc.stop.kind == scenario::StopRule::Kind::Pinch ? "pinch"
                                                                              : "steady";
    return {{"name", sc.name},
            {"shape",
             {{"kind", sc.shape.kind == scenario::ShapeSpec::Kind::Sphere ? "sphere" : "capsule"},
              {"radius", sc.shape.radius},
              {"length", sc.shape.length},
              {"x3_center", sc.shape.x3_center}}},
            {"schedule", schedule},
            {"stop", {{"kind", stop_kind}, {"value", sc.stop.value}, {"tau_limit", sc.stop.tau_limit}}},
            {"frames_at", sc.frames_at},
            {"nodes", sc.nodes},
            {"dtau", sc.dtau},
            {"evolution_law",
             sc.law == stefan::CurvatureLaw::SumEvolution ? "sum" : "mean"}};
}

scenario::Scenario scenario_from_json(const nlohmann::json& j) {
    scenario::Scenario sc;
    for (const auto& [key, value] : j.items()) {
        if (key == "name") {
            sc.name = value.get<std::string>();
        } else if (key == "shape") {
            for (const auto& [sk, sv] : value.items()) {
                if (sk == "kind") {
                    const std::string kind = sv.get<std::string>();
                    if (kind == "sphere") sc.shape.kind = scenario::ShapeSpec::Kind::Sphere;
                    else if (kind == "capsule") sc.shape.kind = scenario::ShapeSpec::Kind::Capsule;
                    else throw config_error("unknown shape kind '" + kind + "'");
                } else if (sk == "radius") sc.shape.radius = sv.get<double>();
                else if (sk == "length") sc.shape.length = sv.get<double>();
                else if (sk == "x3_center") sc.shape.x3_center = sv.get<double>();
                else throw config_error("unknown shape key '" + sk + "'");
            }
        } else if (key == "schedule") {
            sc.schedule.clear();
            for (const auto& ph : value) {
                scenario::ThermalPhase tp;
                for (const auto& [pk, pv] : ph.items()) {
                    if (pk == "tau_start") tp.tau_start = pv.get<double>();
                    else if (pk == "a0") tp.a0 = pv.get<double>();
                    else if (pk == "b0") tp.b0 = pv.get<double>();
                    else throw config_error("unknown schedule key '" + pk + "'");
                }
                sc.schedule.push_back(tp);
            }
        } else if (key == "stop") {
            for (const auto& [sk, sv] : value.items()) {
                if (sk == "kind") {
                    const std::string kind = sv.get<std::string>();
                    if (kind == "tau_end") sc.stop.kind = scenario::StopRule::Kind::TauEnd;
                    else if (kind == "pinch") sc.stop.kind = scenario::StopRule::Kind::Pinch;
                    else if (kind == "steady") sc.stop.kind = scenario::StopRule::Kind::Steady;
                    else throw config_error("unknown stop kind '" + kind + "'");
                } else if (sk == "value") sc.stop.value = sv.get<double>();
                else if (sk == "tau_limit") sc.stop.tau_limit = sv.get<double>();
                else throw config_error("unknown stop key '" + sk + "'");
            }
        } else if (key == "frames_at") {
            sc.frames_at = value.get<std::vector<double>>();
        } else if (key == "nodes") {
            sc.nodes = value.get<int>();
        } else if (key == "dtau") {
            sc.dtau = value.get<double>();
        } else if (key == "evolution_law") {
            const std::string law = value.get<std::string>();
            if (law == "sum") sc.law = stefan::CurvatureLaw::SumEvolution;
            else if (law == "mean") sc.law = stefan::CurvatureLaw::MeanBalance;
            else throw config_error("unknown evolution_law '" + law + "'");
        } else {
            throw config_error("unknown scenario key '" + key + "'");
        }
    }
    sc.validate();
    return sc;
}

void write_curve_frames(const std::filesystem::path& path,
                        const std::vector<scenario::CurveFrame>& frames) {
    std::ofstream f = open_out(path);
    f << "tau,s,r_mm,x3_mm\n";
    for (const auto& frame : frames) {
        const auto& c = frame.curve;
        for (int i = 0; i < c.n(); ++i)
            f << format_double(frame.tau) << ',' << format_double(c.s(i)) << ','
              << format_double(c.r[i]) << ',' << format_double(c.x3[i]) << '\n';
    }
}

void write_field_frames(const std::filesystem::path& path,
                        const std::vector<pf1d::Field1D>& frames) {
    std::ofstream f = open_out(path);
    f << "time,x,phi,theta,rho\n";
    for (const auto& s : frames)
        for (int i = 0; i < s.grid.n_cells; ++i)
            f << format_double(s.time) << ',' << format_double(s.grid.x(i)) << ','
              << format_double(s.phi[i]) << ',' << format_double(s.theta[i]) << ','
              << format_double(s.rho[i]) << '\n';
}

void write_diagnostics(const std::filesystem::path& path,
                       const std::vector<double>& times,
                       const std::vector<pf1d::Diagnostics1D>& diags) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < diags.size(); ++i) {
        arr.push_back({{"time", times[i]},
                       {"total_internal_energy", diags[i].total_internal_energy},
                       {"total_salt", diags[i].total_salt},
                       {"total_entropy", diags[i].total_entropy},
                       {"entropy_production_rate", diags[i].entropy_production_rate}});
    }
    open_out(path) << arr.dump(2) << '\n';
}

void write_pore_profile(const std::filesystem::path& path, const stefan::PoreProfile& prof) {
    std::ofstream f = open_out(path);
    f << "x3_mm,r_mm,drdx3\n";
    for (std::size_t i = 0; i < prof.r.size(); ++i)
        f << format_double(prof.x3[i]) << ',' << format_double(prof.r[i]) << ','
          << format_double(prof.dr_dx3[i]) << '\n';
}

void write_events(const std::filesystem::path& path,
                  const std::vector<stefan::PinchEvent>& events) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : events)
        arr.push_back({{"type", "pinch"}, {"tau", e.tau}, {"s", e.s_location}, {"x3", e.x3_location}});
    open_out(path) << arr.dump(2) << '\n';
}

nlohmann::json report_to_json(const scenario::RunReport& report) {
    nlohmann::json assertions = nlohmann::json::array();
    for (const auto& a : report.assertions)
        assertions.push_back({{"name", a.name},
                              {"pass", a.pass},
                              {"measured", a.measured},
                              {"detail", a.detail}});
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : report.events)
        events.push_back({{"type", "pinch"}, {"tau", e.tau}, {"s", e.s_location}, {"x3", e.x3_location}});
    return {{"name", report.name},
            {"frames_written", report.frames_written},
            {"events", events},
            {"assertions", assertions},
            {"wall_time_s", report.wall_time_s},
            {"total_salt", report.total_salt},
            {"all_passed", report.all_passed()}};
}

void write_report(const std::filesystem::path& path, const scenario::RunReport& report) {
    open_out(path) << report_to_json(report).dump(2) << '\n';
}

void write_reports(const std::filesystem::path& path,
                   const std::vector<scenario::RunReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    bool all = true;
    for (const auto& r : reports) {
        arr.push_back(report_to_json(r));
        all = all && r.all_passed();
    }
    open_out(path) << nlohmann::json{{"runs", arr}, {"all_passed", all}}.dump(2) << '\n';
}

std::string report_text(const scenario::RunReport& report) {
    std::string out = "== " + report.name + " ==\n";
    for (const auto& a : report.assertions) {
        out += a.pass ? "  [pass] " : "  [FAIL] ";
        out += a.name + "  measured=" + format_double(a.measured);
        if (!a.detail.empty())
            out += "  (" + a.detail + ")";
        out += '\n';
    }
    for (const auto& e : report.events)
        out += "  event: pinch at tau=" + format_double(e.tau)
               + " s=" + format_double(e.s_location)
               + " x3=" + format_double(e.x3_location) + "\n";
    return out;
}

} // namespace brine::io
