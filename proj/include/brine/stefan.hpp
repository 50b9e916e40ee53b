// Quasi-steady axisymmetric interface solver: an inclusion boundary is a
// generating curve (r(s), x3(s)) on a cell-centered grid in scaled arc
// length s in [0,1], evolved by the normal-velocity law
//
//   Vn = -kappa + N0(x3) + beta * Theta(x3),
//
// where kappa is the curvature scalar of the surface of revolution (negative
// for spheres under this convention), N0 the volume-normalized salt density,
// and Theta the linear temperature profile in Celsius. Time stepping is
// fully implicit backward Euler with an analytic block-tridiagonal-plus-
// rank-one Newton solve; node spacing is kept uniform in arc length by
// conservative resampling.
//
// Units: lengths in mm, temperatures in C, salt in % weight, time in the
// slow time tau.

#ifndef BRINE_STEFAN_HPP
#define BRINE_STEFAN_HPP

#include "brine/model.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace brine::stefan {

class geometry_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Newton failure; carries the smallest residual reached.
class solver_error : public std::runtime_error {
public:
    solver_error(const std::string& what, double residual)
        : std::runtime_error(what), last_residual(residual) {}
    double last_residual;
};

enum class Topology { ClosedInclusion, OpenPore };

/// Discretized generating curve. ClosedInclusion curves touch the axis at
/// both ends of the parameter interval (encoded by ghost symmetry, not by
/// nodes); x3 increases along s.
struct InterfaceCurve {
    std::vector<double> r;  // mm, > 0 at all nodes
    std::vector<double> x3; // mm
    Topology topology = Topology::ClosedInclusion;

    int n() const { return static_cast<int>(r.size()); }
    double ds() const { return 1.0 / n(); }
    double s(int i) const { return (i + 0.5) * ds(); }
    void validate() const;
};

/// Linear quasi-steady temperature Theta(x3) = a0 + b0 * x3 [C].
/// Negative b0 means colder with height (the winter sea-ice orientation).
struct ThermalProfile {
    double a0 = 0.0; // C at x3 = 0
    double b0 = 0.0; // C per mm

    double at(double x3) const { return a0 + b0 * x3; }
};

/// Evolving inclusion: geometry plus conserved total salt and slow time.
struct BrineState {
    InterfaceCurve curve;
    double total_salt = 0.0; // % weight * mm^3
    double tau = 0.0;
};

struct PinchEvent {
    double tau = 0.0;
    double s_location = 0.0;  // interior: 0 < s < 1
    double x3_location = 0.0; // mm
};

/// Centered-difference derivatives in s with topology ghosts (odd r / even
/// x3 at poles for closed curves; even r / linear x3 at open ends).
struct CurveDerivs {
    std::vector<double> rp, xp, rpp, xpp, jac; // jac = sqrt(rp^2 + xp^2)
};
CurveDerivs derivatives(const InterfaceCurve& c);

/// Curvature scalar per node; -1/R on spheres of radius R, -1/(2 r0) on
/// cylinders. Throws geometry_error on a degenerate tangent.
std::vector<double> curvature(const InterfaceCurve& c);

/// Enclosed volume of a closed curve, midpoint quadrature of pi r^2 x3' ds.
double enclosed_volume(const InterfaceCurve& c);

/// Volume-weighted mean height of a closed curve.
double centroid_x3(const InterfaceCurve& c);

/// Quasi-steady salt density N0(x3) = N_T exp(-delta_g x3) / integral,
/// per node. Requires ClosedInclusion and positive enclosed volume.
std::vector<double> salt_density(const BrineState& state, const ModelParams& p);

/// Curvature convention entering the normal-velocity law Vn = -kappa + xi.
/// The equilibrium relations (pore profiles, balance examples) use the mean
/// of the principal curvatures, kappa_mean = curvature(); the time evolution
/// uses the sum convention kappa_sum = -2 * curvature(), which is what the
/// sharp-interface reduction produces and the only orientation for which the
/// flow is parabolic (shape perturbations decay; necks can pinch by the
/// long-wave mechanism). The two share the same structure, differing by the
/// factor -2 on the curvature term.
enum class CurvatureLaw { MeanBalance, SumEvolution };

/// Vn per node: -kappa_mean + N0 + beta * Theta(x3) under MeanBalance
/// (the equilibrium balance), or -kappa_sum + ... = 2 kappa_mean + ... under
/// SumEvolution (the law step_backward_euler integrates).
std::vector<double> normal_velocity(const BrineState& state, const ThermalProfile& thermal,
                                    const ModelParams& p,
                                    CurvatureLaw law = CurvatureLaw::MeanBalance);

/// Uniform-arclength resampling onto cell centers (monotone cubic in
/// cumulative chord length, poles included); the surface is unchanged up to
/// interpolation error. Closed curves only.
InterfaceCurve redistribute_arclength(const InterfaceCurve& c);

/// max_i |J_i - mean(J)| / mean(J), the equidistribution defect.
double arclength_deviation(const InterfaceCurve& c);

/// N_T that makes the node-mean normal velocity vanish for this geometry
/// and thermal profile (cryoscopic balance of the initial state), under the
/// requested law.
double balance_total_salt(const InterfaceCurve& c, const ThermalProfile& thermal,
                          const ModelParams& p,
                          CurvatureLaw law = CurvatureLaw::MeanBalance);

struct StepResult {
    BrineState state;
    std::optional<PinchEvent> pinch; // set when the stepped state has pinched
    int newton_iterations = 0;
};

/// One backward-Euler step: each node moves a scalar distance eta_i along
/// its start-of-step normal, with eta_i = dtau * Vn_i evaluated at the new
/// geometry. Vn (curvature and the global volume coupling of N0) is fully
/// implicit; the direction is frozen over the step, which keeps the Newton
/// system tridiagonal-plus-rank-one and well conditioned at the poles while
/// preserving first-order accuracy in dtau. Newton to inf-norm tolerance
/// p.newton_tol, at most p.newton_max_iter iterations, with a backtracking
/// line search; throws solver_error on divergence. Node spacing is
/// re-equidistributed after the step when it has drifted.
///
/// The law parameter selects the curvature convention of Vn. SumEvolution
/// is parabolic and unconditionally integrable; MeanBalance sharpens features
/// (tubes neck and pinch under it) but is
/// anti-diffusive at fine scales and only usable at moderate resolution,
/// where backward Euler damps the grid modes.
StepResult step_backward_euler(const BrineState& state, const ThermalProfile& thermal,
                               double dtau, const ModelParams& p,
                               CurvatureLaw law = CurvatureLaw::SumEvolution);

/// Interior neck test: a node that is a local minimum of r below
/// p.pinch_radius, located by a quadratic fit through its neighbors.
std::optional<PinchEvent> detect_pinch(const BrineState& state, const ModelParams& p);

/// Least-squares slope of the volume centroid versus tau over a trajectory
/// of at least three frames.
double drift_velocity(std::span<const BrineState> trajectory);

// --- shape constructors (uniform arc length, cell-centered) ---------------

/// Sphere of the given radius centered at x3_center.
InterfaceCurve make_sphere(double radius, double x3_center, int n);

/// Capsule: cylinder of the given length and radius with hemispherical
/// caps, C2-smoothed over blend_cells cells at the joins.
InterfaceCurve make_capsule(double length, double radius, double x3_center, int n,
                            int blend_cells = 3);

/// Open vertical cylinder r = radius, x3 in [0, length].
InterfaceCurve make_cylinder(double radius, double length, int n);

// --- exposed for Jacobian verification tests ------------------------------

namespace detail {

/// Backward-Euler residual F_i = eta_i - dtau * Vn_i(curve moved by eta
/// along the frozen normals of prev).
std::vector<double> implicit_residual(const BrineState& prev, const std::vector<double>& eta,
                                      const ThermalProfile& thermal, double dtau,
                                      const ModelParams& p);

/// Dense assembly of the analytic Jacobian of implicit_residual (row-major
/// n x n); the solver itself uses the tridiagonal + rank-one form.
std::vector<double> implicit_jacobian_dense(const BrineState& prev, const std::vector<double>& eta,
                                            const ThermalProfile& thermal, double dtau,
                                            const ModelParams& p);

} // namespace detail

} // namespace brine::stefan

#endif
