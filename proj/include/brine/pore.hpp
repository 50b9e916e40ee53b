// Equilibrium pore profiles: the radius r(x3) of an open axisymmetric pore
// whose wall is in cryoscopic balance,
//
//   -(1 + r'^2 - r r'') / (2 r (1 + r'^2)^{3/2}) = N0 + beta * Theta(x3),
//
// integrated upward as an initial-value problem with an adaptive embedded
// Runge-Kutta pair. The constant salt density N0 is fixed by r''(0) = 0, and
// the thermal gradient is the upward-cooling magnitude: Theta(x3) =
// a0 - b0 * x3 for b0 >= 0 (deeper ice is warmer).

#ifndef BRINE_PORE_HPP
#define BRINE_PORE_HPP

#include "brine/model.hpp"

#include <vector>

namespace brine::stefan {

enum class PoreTermination {
    ReachedEnd,   // integrated to x3_max
    PinchOff,     // r reached the pinch radius
    TurningPoint, // |dr/dx3| blew up with the radius still open
};

enum class PoreRegime { Tapered, Oscillatory, PinchOff };

struct PoreProfile {
    std::vector<double> x3;      // mm, accepted step locations
    std::vector<double> r;       // mm
    std::vector<double> dr_dx3;
    PoreTermination termination = PoreTermination::ReachedEnd;
    double end_x3 = 0.0;         // termination location (pinch x3 when pinched)
    double salt_density_N0 = 0.0; // the r''(0)=0 constant, % weight
};

/// Integrate the pore profile from r(0) = r0, r'(0) = 0 up to x3_max.
/// b0 is the upward-cooling gradient magnitude in C/mm.
PoreProfile equilibrium_pore(double r0, double a0, double b0, double x3_max,
                             const ModelParams& p);

/// PinchOff if the integration pinched; Oscillatory if the slope swung
/// through zero at least twice with amplitude above a visual-significance
/// threshold; Tapered otherwise.
PoreRegime classify_pore_regime(const PoreProfile& profile);

const char* to_string(PoreRegime r);
const char* to_string(PoreTermination t);

} // namespace brine::stefan

#endif
