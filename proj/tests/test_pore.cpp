#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "brine/pore.hpp"
#include "brine/stefan.hpp"

#include <cmath>

using namespace brine;
using namespace brine::stefan;

namespace {
const ModelParams P = ModelParams::defaults();
}

TEST_CASE("zero gradient keeps the pore cylindrical") {
    const PoreProfile prof = equilibrium_pore(2.0, -4.0, 0.0, 40.0, P);
    CHECK(prof.termination == PoreTermination::ReachedEnd);
    for (std::size_t i = 0; i < prof.r.size(); ++i) {
        CHECK(prof.r[i] == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(std::abs(prof.dr_dx3[i]) < 1e-10);
    }
    CHECK(classify_pore_regime(prof) == PoreRegime::Tapered);
}

TEST_CASE("salt density constant fixed by the flat start") {
    // r''(0) = 0 forces N0 = -1/(2 r0) - beta a0
    const PoreProfile prof = equilibrium_pore(2.0, -4.0, 0.015, 40.0, P);
    CHECK(prof.salt_density_N0 == doctest::Approx(7.15).epsilon(1e-12));
}

TEST_CASE("strong gradient pinches near 38.7 mm") {
    const PoreProfile prof = equilibrium_pore(2.0, -4.0, 0.015, 40.0, P);
    CHECK(prof.termination == PoreTermination::PinchOff);
    CHECK(prof.end_x3 == doctest::Approx(38.7).epsilon(0.05));
    CHECK(classify_pore_regime(prof) == PoreRegime::PinchOff);
}

TEST_CASE("regime classification across the gradient sweep") {
    CHECK(classify_pore_regime(equilibrium_pore(2.0, -4.0, 0.0015, 40.0, P))
          == PoreRegime::Tapered);
    CHECK(classify_pore_regime(equilibrium_pore(2.0, -4.0, 0.0032, 40.0, P))
          == PoreRegime::Oscillatory);
    CHECK(classify_pore_regime(equilibrium_pore(2.0, -4.0, 0.015, 40.0, P))
          == PoreRegime::PinchOff);
}

TEST_CASE("classification is insensitive to a0 (the constant shifts with it)") {
    for (double a0 : {-2.0, -4.0, -8.0}) {
        CHECK(classify_pore_regime(equilibrium_pore(2.0, a0, 0.0015, 40.0, P))
              == PoreRegime::Tapered);
        CHECK(classify_pore_regime(equilibrium_pore(2.0, a0, 0.015, 40.0, P))
              == PoreRegime::PinchOff);
    }
}

TEST_CASE("profiles fed back through the curvature balance vanish") {
    // An equilibrium profile satisfies -kappa + N0 + beta Theta = 0; rebuild
    // it as a discrete open curve and evaluate the balance per node.
    const double b0 = 0.004;
    const PoreProfile prof = equilibrium_pore(2.0, -4.0, b0, 30.0, P);
    REQUIRE(prof.termination == PoreTermination::ReachedEnd);

    for (int n : {64, 128, 256}) {
        InterfaceCurve c;
        c.topology = Topology::OpenPore;
        c.r.resize(n);
        c.x3.resize(n);
        // uniform graph sampling with linear interpolation of the profile
        std::size_t k = 0;
        for (int i = 0; i < n; ++i) {
            const double x = (i + 0.5) * 30.0 / n;
            while (k + 2 < prof.x3.size() && prof.x3[k + 1] < x) ++k;
            const double f = (x - prof.x3[k]) / (prof.x3[k + 1] - prof.x3[k]);
            c.r[i] = prof.r[k] * (1.0 - f) + prof.r[k + 1] * f;
            c.x3[i] = x;
        }
        const std::vector<double> kap = curvature(c);
        double worst = 0.0;
        for (int i = 2; i < n - 2; ++i) { // ends use extrapolated ghosts
            const double xi = prof.salt_density_N0 + P.beta * (-4.0 - b0 * c.x3[i]);
            worst = std::max(worst, std::abs(-kap[i] + xi));
        }
        // linear interpolation of the profile itself limits this to O(ds^2)
        const double ds = 30.0 / n;
        CHECK(worst < 2.0 * ds * ds + 1e-6);
    }
}

TEST_CASE("turning point reported distinctly") {
    // warming upward makes the radius blow outward through a vertical tangent
    ModelParams p = P;
    const double r0 = 2.0, a0 = -4.0;
    // negative upward-cooling magnitude = warming upward
    const PoreProfile prof = equilibrium_pore(r0, a0, -0.015, 60.0, p);
    CHECK(prof.termination == PoreTermination::TurningPoint);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(equilibrium_pore(-1.0, -4.0, 0.01, 40.0, P), geometry_error);
    CHECK_THROWS_AS(equilibrium_pore(2.0, -4.0, 0.01, -5.0, P), geometry_error);
}

TEST_CASE("oracle self-consistency: tighter tolerance does not move the answer") {
    ModelParams tight = P;
    tight.pore_rel_tol = 1e-10;
    ModelParams tighter = P;
    tighter.pore_rel_tol = 5e-11;
    const double x1 = equilibrium_pore(2.0, -4.0, 0.015, 40.0, tight).end_x3;
    const double x2 = equilibrium_pore(2.0, -4.0, 0.015, 40.0, tighter).end_x3;
    CHECK(std::abs(x1 - x2) < 1e-6);
}
