// Configuration loading and output serialization; the only module that
// touches the filesystem. Numbers are written with 17 significant digits so
// every double round-trips exactly.

#ifndef BRINE_IO_HPP
#define BRINE_IO_HPP

#include "brine/model.hpp"
#include "brine/phasefield1d.hpp"
#include "brine/pore.hpp"
#include "brine/scenario.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace brine::io {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat JSON for the parameter table; keys match the field names.
nlohmann::json params_to_json(const ModelParams& p);

/// Strict parse: any unknown key is an error naming the key; the result is
/// validated against the physical invariants.
ModelParams params_from_json(const nlohmann::json& j);

/// Command-specific option bundle: model parameters plus named numeric
/// options, with strict key checking against the command's allowed set.
struct RunConfig {
    ModelParams params;
    std::map<std::string, double> options;
    std::string scenario;      // evolve: scenario name
    std::string out_dir = "out";

    bool operator==(const RunConfig&) const = default;
};

nlohmann::json config_to_json(const RunConfig& c);

/// Parse a config object; option keys must come from allowed_options, and
/// parameter keys from the ModelParams field set.
RunConfig config_from_json(const nlohmann::json& j,
                           const std::vector<std::string>& allowed_options);

/// Apply one `--set key=value` override (parameter, option, or scenario/
/// out_dir string key) with the same strictness.
void apply_override(RunConfig& c, const std::string& key, const std::string& value,
                    const std::vector<std::string>& allowed_options);

/// Scenario definitions as JSON: shape, thermal schedule, stop rule, frame
/// times, resolution. Strict on unknown keys.
nlohmann::json scenario_to_json(const scenario::Scenario& sc);
scenario::Scenario scenario_from_json(const nlohmann::json& j);

std::string format_double(double v); // %.17g

// --- bulk outputs ----------------------------------------------------------

/// Interface frames, long format: tau,s,r_mm,x3_mm. Empty list gives a
/// header-only file.
void write_curve_frames(const std::filesystem::path& path,
                        const std::vector<scenario::CurveFrame>& frames);

/// 1-D field frames, long format: time,x,phi,theta,rho.
void write_field_frames(const std::filesystem::path& path,
                        const std::vector<pf1d::Field1D>& frames);

/// Diagnostics sidecar: one JSON object per saved frame.
void write_diagnostics(const std::filesystem::path& path,
                       const std::vector<double>& times,
                       const std::vector<pf1d::Diagnostics1D>& diags);

/// Pore profile: x3_mm,r_mm,drdx3.
void write_pore_profile(const std::filesystem::path& path, const stefan::PoreProfile& prof);

/// Events: array of {"type":"pinch","tau":...,"s":...,"x3":...}.
void write_events(const std::filesystem::path& path,
                  const std::vector<stefan::PinchEvent>& events);

nlohmann::json report_to_json(const scenario::RunReport& report);
void write_report(const std::filesystem::path& path, const scenario::RunReport& report);

/// Aggregate report: array of per-run reports plus an overall verdict.
void write_reports(const std::filesystem::path& path,
                   const std::vector<scenario::RunReport>& reports);

/// Human-readable one-line-per-assertion summary.
std::string report_text(const scenario::RunReport& report);

} // namespace brine::io

#endif
