// Core model functions for the brine-inclusion simulator: double-well
// potentials, cryoscopic relation, latent-heat factors, entropy and internal
// energy densities, and the analytic ice-water front profile.
//
// Temperature conventions: the phase-field functions (w0..entropy_density,
// front_profile) work in degrees Kelvin; the quasi-steady interface solver
// (stefan.hpp) works in degrees Celsius as offsets from the salt-free
// freezing point. ModelParams stores the Kelvin reference once.

#ifndef BRINE_MODEL_HPP
#define BRINE_MODEL_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace brine {

/// Thrown when a model function is evaluated outside its physical domain.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Physical and numerical parameters. Immutable in practice: construct,
/// validate, share freely across threads.
///
/// Salt is measured in percent weight so that beta = 1.85 reproduces the
/// 0.54 C depression of the freezing point per 1% salt.
struct ModelParams {
    // physical, scaled
    double beta = 1.85;          ///< cryoscopic coefficient [1/C, salt in %wt]
    double theta_star = 273.0;   ///< freezing point of pure water [K]; 0 C in the interface solver
    double delta_g = 1.23e-8;    ///< salt density stratification ratio [-]
    double H = 1e6;              ///< interface-to-inclusion length ratio [-]
    double sigma_theta = 1.0;    ///< thermal mobility, scaled [-]
    double sigma_N = 1.0;        ///< salt mobility, scaled [-]
    double length_scale_Lb = 1e-3; ///< meters per scaled length unit

    // numerical knobs
    double mobility_floor = 1e-8;      ///< face-mobility floor for the degenerate salt flux
    double stability_safety = 0.4;     ///< explicit step-size safety factor
    double theta_newton_tol = 1e-12;   ///< residual tolerance for the u -> theta inversion
    int theta_newton_max_iter = 50;
    double theta_min = 150.0;          ///< bisection bracket for the inversion [K]
    double theta_max = 400.0;
    double newton_tol = 1e-10;         ///< interface solver residual tolerance (inf-norm)
    int newton_max_iter = 30;
    double pinch_radius = 1e-3;        ///< interior radius that terminates evolution [mm]
    double pore_rel_tol = 1e-9;        ///< adaptive RK tolerance for the pore profile IVP
    double rprime_blowup = 1e6;        ///< |dr/dx3| treated as a turning point

    /// Calibrated defaults (the values above).
    static ModelParams defaults() { return ModelParams{}; }

    bool operator==(const ModelParams&) const = default;

    /// Enforce invariants; throws domain_error naming the offending field.
    void validate() const;
};

/// Physical constants behind the scaled parameters, kept as metadata only;
/// the scaled model uses a common entropy scale for heat, salt, and latent
/// coefficients.
namespace physical_table {
inline constexpr double water_density = 1000.0;        // kg/m^3
inline constexpr double specific_heat_ice = 2050.0;    // J/(K kg)
inline constexpr double salt_molar_entropy = 43.4;     // J/(K mol)
inline constexpr double water_molar_density = 5.55e4;  // mol/m^3
inline constexpr double gravity = 9.8;                 // m/s^2
inline constexpr double e_s = 2.5e6;                   // J/(K m^3) thermal entropy coefficient
inline constexpr double e_N = 2.41e6;                  // J/(K m^3) salt entropy coefficient
inline constexpr double e_g = 2.98e-2;                 // J/(K m^3) gravitational entropy coefficient
inline constexpr double e_1 = 1.2e7;                   // J/(K m^3) latent heat coefficient
inline constexpr double L_b = 1e-3;                    // m, inclusion length scale
inline constexpr double L_li = 1e-9;                   // m, ice-liquid interface width
}

// --- double wells ---------------------------------------------------------

/// Symmetric double well 18 phi^2 (1-phi)^2 with equal-depth minima at 0, 1.
double w0(double phi);
double w0_prime(double phi);
double w0_second(double phi);

/// Tilt well 2 phi^2 (phi - 3/2); nonpositive on [0,1], w1(1) = -1,
/// critical points at phi = 0, 1.
double w1(double phi);
double w1_prime(double phi);

// --- thermodynamic scalars (theta in Kelvin) ------------------------------

/// Cryoscopic driving term xi = N + beta (theta - theta_star).
/// Positive values favor the liquid phase. N in % weight, N >= 0.
double cryoscopic_xi(double theta, double N, const ModelParams& p);

/// Latent heat factor b(theta) = beta (theta^2 - theta_star^2) / 2.
double latent_b(double theta, const ModelParams& p);

/// Front-law latent factor B(theta) = beta (theta^2 - theta_star^2) / (2 theta),
/// increasing on theta > 0. Throws domain_error for theta <= 0.
double latent_B(double theta, const ModelParams& p);

/// Tilt of the effective potential in the (phi, theta, rho) variables:
/// V1 = B(theta) w1(phi) - rho phi exp(-w1(phi)), with V1(0) = 0.
double v1(double phi, double theta, double rho, const ModelParams& p);

/// d V1 / d phi = B w1'(phi) - rho exp(-w1(phi)) (1 - phi w1'(phi)).
double v1_dphi(double phi, double theta, double rho, const ModelParams& p);

/// Internal energy density u = theta - b(theta) w1(phi).
double internal_energy_density(double theta, double phi, const ModelParams& p);

/// Entropy density
///   s = ln(theta) + N (1 - ln(N/phi)) - delta_g N x3
///       - |grad phi|^2 / (2H) - H W(phi; xi),
/// with W = w0 + w1 xi / H and N the salt weight fraction. The N -> 0 limit
/// of the relative-entropy term is taken to be 0 exactly.
/// Throws domain_error for theta <= 0, or N > 0 with phi <= 0.
double entropy_density(double grad_phi_sq, double phi, double theta, double N,
                       double x3, const ModelParams& p);

// --- phase variable -------------------------------------------------------

// The liquid fraction lives on all of R (the liquid-side equilibrium value
// exceeds 1 by O(1/H)); the window below is only a solver-divergence guard.
inline constexpr double phase_valid_min = -0.5;
inline constexpr double phase_valid_max = 1.5;

inline bool phase_in_validity_window(double phi) {
    return phi >= phase_valid_min && phi <= phase_valid_max;
}

// --- standing front -------------------------------------------------------

/// Heteroclinic profile of the symmetric well, (1 - tanh(3 z)) / 2;
/// connects 1 at z -> -inf to 0 at z -> +inf and satisfies
/// profile'' = w0'(profile) with unit L2 norm of the derivative.
double front_profile(double z);
double front_profile_prime(double z);

} // namespace brine

#endif
