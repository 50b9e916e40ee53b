#include "brine/pore.hpp"

#include "brine/stefan.hpp"

#include <algorithm>
#include <cmath>

namespace brine::stefan {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

struct State2 {
    double r, p;
};

} // namespace

PoreProfile equilibrium_pore(double r0, double a0, double b0, double x3_max,
                             const ModelParams& params) {
    if (!(r0 > 0.0))
        throw geometry_error("equilibrium_pore: r0 must be positive");
    if (!(x3_max > 0.0))
        throw geometry_error("equilibrium_pore: x3_max must be positive");

    // r''(0) = 0 fixes the salt density against the local curvature
    const double N0 = -1.0 / (2.0 * r0) - params.beta * a0;
    auto xi = [&](double x) { return N0 + params.beta * (a0 - b0 * x); };

    auto rhs = [&](double x, const State2& y) -> State2 {
        const double G = 1.0 + y.p * y.p;
        return {y.p, G / y.r + 2.0 * G * std::sqrt(G) * xi(x)};
    };

    PoreProfile out;
    out.salt_density_N0 = N0;
    out.x3.push_back(0.0);
    out.r.push_back(r0);
    out.dr_dx3.push_back(0.0);

    const double rtol = params.pore_rel_tol;
    const double atol = 1e-12;
    double x = 0.0;
    State2 y{r0, 0.0};
    double h = 1e-3;
    State2 k1 = rhs(x, y);

    const int max_steps = 2000000;
    for (int step = 0; step < max_steps; ++step) {
        if (x >= x3_max) {
            out.termination = PoreTermination::ReachedEnd;
            out.end_x3 = x;
            return out;
        }
        h = std::min(h, x3_max - x);

        const State2 y2{y.r + h * A21 * k1.r, y.p + h * A21 * k1.p};
        const State2 k2 = rhs(x + h / 5, y2);
        const State2 y3{y.r + h * (A31 * k1.r + A32 * k2.r), y.p + h * (A31 * k1.p + A32 * k2.p)};
        const State2 k3 = rhs(x + 3 * h / 10, y3);
        const State2 y4{y.r + h * (A41 * k1.r + A42 * k2.r + A43 * k3.r),
                        y.p + h * (A41 * k1.p + A42 * k2.p + A43 * k3.p)};
        const State2 k4 = rhs(x + 4 * h / 5, y4);
        const State2 y5{y.r + h * (A51 * k1.r + A52 * k2.r + A53 * k3.r + A54 * k4.r),
                        y.p + h * (A51 * k1.p + A52 * k2.p + A53 * k3.p + A54 * k4.p)};
        const State2 k5 = rhs(x + 8 * h / 9, y5);
        const State2 y6{y.r + h * (A61 * k1.r + A62 * k2.r + A63 * k3.r + A64 * k4.r + A65 * k5.r),
                        y.p + h * (A61 * k1.p + A62 * k2.p + A63 * k3.p + A64 * k4.p + A65 * k5.p)};
        const State2 k6 = rhs(x + h, y6);
        const State2 ynew{y.r + h * (B1 * k1.r + B3 * k3.r + B4 * k4.r + B5 * k5.r + B6 * k6.r),
                          y.p + h * (B1 * k1.p + B3 * k3.p + B4 * k4.p + B5 * k5.p + B6 * k6.p)};
        const State2 k7 = rhs(x + h, ynew); // FSAL

        const double err_r = h * (E1 * k1.r + E3 * k3.r + E4 * k4.r + E5 * k5.r + E6 * k6.r + E7 * k7.r);
        const double err_p = h * (E1 * k1.p + E3 * k3.p + E4 * k4.p + E5 * k5.p + E6 * k6.p + E7 * k7.p);
        const double sc_r = atol + rtol * std::max(std::abs(y.r), std::abs(ynew.r));
        const double sc_p = atol + rtol * std::max(std::abs(y.p), std::abs(ynew.p));
        double err = std::sqrt(0.5 * ((err_r / sc_r) * (err_r / sc_r) + (err_p / sc_p) * (err_p / sc_p)));
        if (!std::isfinite(ynew.r) || !std::isfinite(ynew.p) || ynew.r <= 0.0)
            err = std::max(err, 10.0); // reject; shrink into the valid region

        if (err <= 1.0) {
            // accepted
            x += h;
            y = ynew;
            k1 = k7;
            out.x3.push_back(x);
            out.r.push_back(y.r);
            out.dr_dx3.push_back(y.p);

            if (y.r <= params.pinch_radius) {
                // locate r = pinch_radius by interpolating the last step
                const std::size_t m = out.r.size();
                const double r_prev = out.r[m - 2], x_prev = out.x3[m - 2];
                double frac = 1.0;
                if (r_prev > params.pinch_radius && r_prev != y.r)
                    frac = (r_prev - params.pinch_radius) / (r_prev - y.r);
                out.termination = PoreTermination::PinchOff;
                out.end_x3 = x_prev + frac * (x - x_prev);
                return out;
            }
            if (std::abs(y.p) >= params.rprime_blowup) {
                // the graph description ends in a vertical tangent; an inward
                // fold is the wall collapsing shut (the pinch), an outward
                // fold is the pore widening past an overhang
                out.termination = y.p < 0.0 ? PoreTermination::PinchOff
                                            : PoreTermination::TurningPoint;
                out.end_x3 = x;
                return out;
            }
        }
        const double safety = 0.9;
        double factor = err > 0.0 ? safety * std::pow(err, -0.2) : 5.0;
        factor = std::clamp(factor, 0.2, 5.0);
        h *= factor;
        if (h < 1e-14) {
            // step underflow at the singularity
            out.termination = y.p < 0.0 ? PoreTermination::PinchOff
                                        : PoreTermination::TurningPoint;
            out.end_x3 = x;
            return out;
        }
    }
    throw solver_error("equilibrium_pore: step budget exhausted", 0.0);
}

PoreRegime classify_pore_regime(const PoreProfile& profile) {
    if (profile.termination == PoreTermination::PinchOff)
        return PoreRegime::PinchOff;

    // count slope sign swings that exceed the visual-significance threshold;
    // the slowly tapered profiles also oscillate, but below it
    const double slope_tol = 0.05;
    int swings = 0;
    int state = 0; // -1, 0, +1: last significant slope sign
    for (double p : profile.dr_dx3) {
        if (p >= slope_tol) {
            if (state == -1) ++swings;
            state = 1;
        } else if (p <= -slope_tol) {
            if (state == 1) ++swings;
            state = -1;
        }
    }
    return swings >= 2 ? PoreRegime::Oscillatory : PoreRegime::Tapered;
}

const char* to_string(PoreRegime r) {
    switch (r) {
        case PoreRegime::Tapered: return "tapered";
        case PoreRegime::Oscillatory: return "oscillatory";
        case PoreRegime::PinchOff: return "pinch-off";
    }
    return "?";
}

const char* to_string(PoreTermination t) {
    switch (t) {
        case PoreTermination::ReachedEnd: return "reached-end";
        case PoreTermination::PinchOff: return "pinch-off";
        case PoreTermination::TurningPoint: return "turning-point";
    }
    return "?";
}

} // namespace brine::stefan
