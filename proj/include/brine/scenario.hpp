// Named, reproducible experiments: the equilibrium-pore gradient sweep, the
// four inclusion-evolution scenarios (sphere and tubes A/B/C), the
// convergence study, the drift-speed sweep, and the 1-D thermodynamic suite. Each run
// evaluates its declared assertions and reports pass/fail with measured
// values; none of this module touches the filesystem.

#ifndef BRINE_SCENARIO_HPP
#define BRINE_SCENARIO_HPP

#include "brine/model.hpp"
#include "brine/phasefield1d.hpp"
#include "brine/pore.hpp"
#include "brine/stefan.hpp"

#include <optional>
#include <string>
#include <vector>

namespace brine::scenario {

struct ThermalPhase {
    double tau_start = 0.0;
    double a0 = 0.0; // C at x3 = 0
    double b0 = 0.0; // C per mm, negative = colder with height
};

struct ShapeSpec {
    enum class Kind { Sphere, Capsule };
    Kind kind = Kind::Sphere;
    double radius = 0.5;   // sphere radius or capsule wall radius [mm]
    double length = 4.0;   // capsule wall length [mm]
    double x3_center = 0.0;
};

struct StopRule {
    enum class Kind { TauEnd, Pinch, Steady };
    Kind kind = Kind::TauEnd;
    double value = 5.0; // tau_end, or the max |Vn| tolerance for Steady
    double tau_limit = 10.0; // hard cap for Pinch/Steady rules
};

struct Scenario {
    std::string name;
    ShapeSpec shape;
    std::vector<ThermalPhase> schedule; // strictly increasing tau_start, first at 0
    StopRule stop;
    std::vector<double> frames_at; // slow times at which to record frames
    int nodes = 128;
    double dtau = 2.5e-3;
    stefan::CurvatureLaw law = stefan::CurvatureLaw::SumEvolution;

    void validate() const;
};

struct AssertionResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    std::string detail;
};

struct CurveFrame {
    double tau = 0.0;
    stefan::InterfaceCurve curve;
};

struct RunReport {
    std::string name;
    int frames_written = 0;
    std::vector<stefan::PinchEvent> events;
    std::vector<AssertionResult> assertions;
    double wall_time_s = 0.0;
    double total_salt = 0.0; // the equilibration-derived N_T, logged per run

    bool all_passed() const;
};

struct ScenarioResult {
    RunReport report;
    std::vector<CurveFrame> frames;
    std::optional<stefan::PinchEvent> pinch;
};

/// The four built-in evolution scenarios: "sphere", "tube-A", "tube-B",
/// "tube-C".
std::vector<Scenario> built_in_scenarios();
Scenario find_scenario(const std::string& name);

/// Drive the interface solver over the scenario's thermal schedule. N_T is
/// set by cryoscopic balance of the initial shape at the first phase, the
/// step size adapts near pinch and backs off on solver failures, and the
/// scenario's declared assertions are evaluated into the report.
ScenarioResult run_scenario(const Scenario& sc, const ModelParams& p);

/// Equilibrium-pore profiles at 1.5, 3.2 and 15 C/m: asserts the
/// tapered / oscillatory / pinch-off progression and the pinch location.
struct GradientSweepResult {
    RunReport report;
    std::vector<stefan::PoreProfile> profiles; // one per gradient
    std::vector<double> gradients;             // C/mm
};
GradientSweepResult run_gradient_sweep(const ModelParams& p);

/// Shrinking-sphere refinement study against the scalar reduction of the
/// evolution law: temporal order from dtau in {4,2,1}e-3, spatial order
/// from the curvature error over nodes in {32,64,128,256}.
struct ConvergenceResult {
    RunReport report;
    double temporal_order = 0.0;
    double spatial_order = 0.0;
    std::vector<double> temporal_errors;
    std::vector<double> spatial_errors;
};
ConvergenceResult run_convergence_study(const ModelParams& p);

/// Near-equilibrium spheres under gradients of 4, 8 and 14 C/m plus a
/// zero-gradient control: descent speeds, through-origin linearity.
struct DriftResult {
    RunReport report;
    std::vector<double> gradients;  // C/mm magnitudes
    std::vector<double> velocities; // centroid slopes, mm per tau
    double r_squared = 0.0;
};
DriftResult run_drift_sweep(const ModelParams& p);

/// 1-D conservation/entropy/front-speed checks over H in {25,50,100,200}.
struct PhasefieldResult {
    RunReport report;
    std::vector<double> H_values;
    std::vector<double> speed_errors; // |v H / xi - 1| per H
    double speed_order = 0.0;         // fitted decay rate in 1/H
};
PhasefieldResult run_phasefield_suite(const ModelParams& p);

} // namespace brine::scenario

#endif
