// One-dimensional integrator for the reformulated phase/heat/salt system in
// the slow variables (phi, theta, rho), with zero-flux boundaries on a
// cell-centered grid. Serves as the thermodynamic-consistency test bed:
// exact discrete salt conservation, energy conservation, entropy production,
// and the sharp-interface front-speed law.
//
// Temperatures are in Kelvin throughout this module.

#ifndef BRINE_PHASEFIELD1D_HPP
#define BRINE_PHASEFIELD1D_HPP

#include "brine/model.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace brine::pf1d {

/// Raised when a state goes non-finite or leaves the phase validity window;
/// carries the first offending cell.
class integration_error : public std::runtime_error {
public:
    integration_error(const std::string& what, int cell_index)
        : std::runtime_error(what), cell(cell_index) {}
    int cell;
};

/// Raised when the pointwise u -> theta inversion fails to converge.
class inversion_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Grid1D {
    int n_cells = 0;
    double domain_length = 0.0;
    double dx = 0.0;

    static Grid1D make(int n_cells, double domain_length);
    double x(int i) const { return (i + 0.5) * dx; }
};

struct Field1D {
    Grid1D grid;
    std::vector<double> phi;
    std::vector<double> theta; // K
    std::vector<double> rho;   // salt density relative to liquid water weight, >= 0
    double time = 0.0;

    void validate() const;
};

struct Diagnostics1D {
    double total_internal_energy = 0.0;
    double total_salt = 0.0;
    double total_entropy = 0.0;
    double entropy_production_rate = 0.0;
};

/// Semi-discrete time derivatives of the three evolved quantities:
/// phi itself, the internal energy u, and the conserved salt density
/// q = phi exp(-w1(phi)) rho.
struct Rhs1D {
    std::vector<double> dphi_dt;
    std::vector<double> du_dt;
    std::vector<double> dq_dt;
};

/// Liquid-water weight phi exp(-w1(phi)) carried by the salt flux.
double liquid_weight(double phi);

/// Right-hand side with mirrored ghost cells (homogeneous Neumann). The salt
/// flux is in conservative face form with floored face mobilities, so the
/// discrete total of dq_dt telescopes to zero exactly.
Rhs1D rhs(const Field1D& state, const ModelParams& p);

/// Largest admissible explicit step for this grid, including the safety
/// factor: stability_safety * min(H dx^2, dx^2/sigma_theta, dx^2/sigma_N,
/// 1/(36 H)).
double max_stable_dt(const Grid1D& grid, const ModelParams& p);

/// Invert u = theta - b(theta) w1(phi) for theta. Safeguarded Newton with a
/// bisection fallback on [theta_min, theta_max].
double theta_from_u(double u, double phi, const ModelParams& p, double guess);

/// One explicit step. The theta update inverts the energy relation against
/// the updated phi; the rho update divides the conserved density by the
/// floored weight liquid_weight(phi_new). Throws if dt exceeds the stability
/// bound or the state degenerates.
Field1D step(const Field1D& state, double dt, const ModelParams& p);

/// Quadrature of energy/salt/entropy densities plus, unless skipped, the
/// discrete entropy production rate (quadratic form in the variational
/// derivatives; it re-evaluates the right-hand side, so per-step monitoring
/// loops may want with_production = false).
Diagnostics1D diagnostics(const Field1D& state, const ModelParams& p,
                          bool with_production = true);

/// Location of the single phi = 1/2 crossing, linearly interpolated.
/// Throws integration_error if there is no crossing or more than one.
double front_position(const Field1D& state);

/// Least-squares slope of the front position over a saved trajectory.
double measure_front_velocity(std::span<const Field1D> trajectory);

} // namespace brine::pf1d

#endif
