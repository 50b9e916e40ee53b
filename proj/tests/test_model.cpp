#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "brine/model.hpp"

#include <cmath>

using namespace brine;

namespace {

const ModelParams P = ModelParams::defaults();

// Test-local analytic derivatives, derived independently of src/model.cpp.
double du_dtheta(double theta, double phi) { return 1.0 - P.beta * theta * w1(phi); }
double ds_dtheta(double theta, double phi) { return 1.0 / theta - P.beta * w1(phi); }

// Second derivative of the front profile, derived by hand from tanh identities.
double front_profile_second(double z) {
    const double t = std::tanh(3.0 * z);
    return 9.0 * (1.0 - t * t) * t;
}

} // namespace

TEST_CASE("double well w0") {
    CHECK(w0(0.0) == 0.0);
    CHECK(w0(1.0) == 0.0);
    CHECK(w0(0.5) == doctest::Approx(1.125).epsilon(1e-15));
    CHECK(w0_second(0.0) == doctest::Approx(36.0));
    CHECK(w0_second(1.0) == doctest::Approx(36.0));
    // nonnegative on [0,1], zero only at the endpoints
    for (int i = 0; i <= 200; ++i) {
        const double phi = i / 200.0;
        if (phi == 0.0 || phi == 1.0)
            CHECK(w0(phi) == 0.0);
        else
            CHECK(w0(phi) > 0.0);
    }
    // derivative consistency against centered differences
    for (double phi : {-0.3, 0.1, 0.5, 0.9, 1.2}) {
        const double h = 1e-6;
        const double fd = (w0(phi + h) - w0(phi - h)) / (2 * h);
        CHECK(w0_prime(phi) == doctest::Approx(fd).epsilon(1e-7));
        const double fd2 = (w0_prime(phi + h) - w0_prime(phi - h)) / (2 * h);
        CHECK(w0_second(phi) == doctest::Approx(fd2).epsilon(1e-7));
    }
}

TEST_CASE("tilt well w1") {
    CHECK(w1(1.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(w1(0.0) == 0.0);
    CHECK(w1_prime(0.0) == 0.0);
    CHECK(w1_prime(1.0) == 0.0);
    CHECK(w1(0.5) == doctest::Approx(-0.5).epsilon(1e-15));
    for (int i = 0; i <= 100; ++i)
        CHECK(w1(i / 100.0) <= 0.0);
}

TEST_CASE("cryoscopic relation") {
    CHECK(cryoscopic_xi(P.theta_star, 0.0, P) == 0.0);
    // 0.54 C depression per 1% salt: 1 - 1.85*0.54 = 0.001
    CHECK(cryoscopic_xi(P.theta_star - 0.54, 1.0, P) == doctest::Approx(0.001).epsilon(1e-9));
    // pore-salinity balance: 4 C below freezing carries 7.4% salt
    CHECK(cryoscopic_xi(P.theta_star - 4.0, 7.4, P) == doctest::Approx(0.0));
}

TEST_CASE("latent heat factors") {
    CHECK(latent_b(P.theta_star, P) == 0.0);
    CHECK(latent_B(P.theta_star, P) == 0.0);
    // frozen from the defining formula: 0.5*1.85*(272^2-273^2)/272
    CHECK(latent_B(272.0, P) == doctest::Approx(-504.125 / 272.0).epsilon(1e-14));
    // monotone increasing on theta > 0
    double prev = latent_B(200.0, P);
    for (double th = 210.0; th <= 350.0; th += 10.0) {
        const double cur = latent_B(th, P);
        CHECK(cur > prev);
        prev = cur;
    }
    // linearization about theta_star: B(theta) ~ beta (theta - theta_star)
    for (double h : {-0.5, -0.1, 0.1, 0.5}) {
        const double lin = P.beta * h;
        CHECK(std::abs(latent_B(P.theta_star + h, P) - lin)
              <= P.beta * h * h / P.theta_star * 1.01);
    }
    CHECK_THROWS_AS(latent_B(0.0, P), domain_error);
    CHECK_THROWS_AS(latent_B(-3.0, P), domain_error);
}

TEST_CASE("modified tilt V1") {
    const double e1 = std::exp(1.0);
    for (double theta : {265.0, 273.0, 281.0}) {
        for (double rho : {0.0, 0.5, 3.0}) {
            CHECK(v1(0.0, theta, rho, P) == 0.0);
            CHECK(v1(1.0, theta, rho, P)
                  == doctest::Approx(-latent_B(theta, P) - rho * e1).epsilon(1e-14));
            CHECK(v1_dphi(1.0, theta, rho, P) == doctest::Approx(-rho * e1).epsilon(1e-14));
        }
    }
    // the liquid-side well value is strictly below the ice side for theta >= theta_star
    CHECK(v1(1.0, P.theta_star, 1.0, P) < 0.0);
    CHECK(v1(1.0, 275.0, 0.1, P) < 0.0);
}

TEST_CASE("v1_dphi matches centered differences") {
    const double h = 1e-5;
    for (double phi : {-0.2, 0.0, 0.3, 0.7, 1.0, 1.2}) {
        for (double theta : {265.0, 273.0, 280.0}) {
            for (double rho : {0.0, 0.5, 2.0, 7.0}) {
                const double fd = (v1(phi + h, theta, rho, P) - v1(phi - h, theta, rho, P)) / (2 * h);
                const double an = v1_dphi(phi, theta, rho, P);
                CHECK(std::abs(fd - an) < 1e-6 * std::max(1.0, std::abs(an)));
            }
        }
    }
}

TEST_CASE("internal energy density") {
    for (double phi : {0.0, 0.3, 1.0})
        CHECK(internal_energy_density(P.theta_star, phi, P) == doctest::Approx(P.theta_star));
    for (double theta : {260.0, 273.0, 290.0}) {
        CHECK(internal_energy_density(theta, 0.0, P) == doctest::Approx(theta));
        CHECK(internal_energy_density(theta, 1.0, P)
              == doctest::Approx(theta + latent_b(theta, P)).epsilon(1e-14));
    }
}

TEST_CASE("thermodynamic relation du/ds = theta") {
    // The relation is H-independent; the finite-difference cross-check runs
    // at desk-scale H where the well term does not swamp the entropy scale.
    ModelParams Pd = ModelParams::defaults();
    Pd.H = 100.0;
    for (double theta : {255.0, 270.0, 273.0, 285.0}) {
        for (double phi : {0.0, 0.2, 0.6, 1.0}) {
            // analytic ratio
            CHECK(du_dtheta(theta, phi) / ds_dtheta(theta, phi)
                  == doctest::Approx(theta).epsilon(1e-12));
            // and the model functions reproduce those analytic derivatives
            const double h = theta * 1e-5;
            const double fdu = (internal_energy_density(theta + h, phi, P)
                                - internal_energy_density(theta - h, phi, P)) / (2 * h);
            CHECK(fdu == doctest::Approx(du_dtheta(theta, phi)).epsilon(1e-8));
            const double n = 0.5; // fixed salt fraction; needs phi > 0
            if (phi > 0.0) {
                const double fds = (entropy_density(0.0, phi, theta + h, n, 0.0, Pd)
                                    - entropy_density(0.0, phi, theta - h, n, 0.0, Pd)) / (2 * h);
                CHECK(fds == doctest::Approx(ds_dtheta(theta, phi)).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("entropy density") {
    // pure ice rest state
    CHECK(entropy_density(0.0, 0.0, P.theta_star, 0.0, 2.0, P)
          == doctest::Approx(std::log(P.theta_star)).epsilon(1e-15));
    // uniform liquid with salt fraction n at the reference temperature:
    // s = ln(theta*) + n (1 - ln n) - delta_g n x3 + n
    for (double n : {0.5, 2.0, 7.0}) {
        const double x3 = 1.7;
        const double expect = std::log(P.theta_star) + n * (1.0 - std::log(n))
                              - P.delta_g * n * x3 + n;
        CHECK(entropy_density(0.0, 1.0, P.theta_star, n, x3, P)
              == doctest::Approx(expect).epsilon(1e-14));
    }
    // relative-entropy term vanishes as N -> 0 (explicit branch, no NaN)
    const double s0 = entropy_density(0.0, 0.3, 270.0, 0.0, 0.0, P);
    CHECK(std::isfinite(s0));
    const double s_small = entropy_density(0.0, 0.3, 270.0, 1e-300, 0.0, P);
    CHECK(s_small == doctest::Approx(s0).epsilon(1e-12));

    CHECK_THROWS_AS(entropy_density(0.0, 0.5, -1.0, 0.0, 0.0, P), domain_error);
    CHECK_THROWS_AS(entropy_density(0.0, 0.0, 270.0, 1.0, 0.0, P), domain_error);
}

TEST_CASE("front profile") {
    CHECK(front_profile(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(front_profile_prime(0.0) == doctest::Approx(-1.5).epsilon(1e-15));
    // boundary limits
    CHECK(std::abs(front_profile(-10.0) - 1.0) < 1e-8);
    CHECK(std::abs(front_profile(10.0)) < 1e-8);
    // substitution residual: profile'' - w0'(profile) = 0 pointwise
    for (double z = -6.0; z <= 6.0; z += 0.05) {
        const double resid = front_profile_second(z) - w0_prime(front_profile(z));
        CHECK(std::abs(resid) < 1e-12);
    }
    // derivative consistency
    for (double z : {-2.0, -0.4, 0.0, 0.7, 3.0}) {
        const double h = 1e-6;
        const double fd = (front_profile(z + h) - front_profile(z - h)) / (2 * h);
        CHECK(front_profile_prime(z) == doctest::Approx(fd).epsilon(1e-8));
    }
    // unit L2 norm of the derivative (Simpson on [-12, 12])
    const int m = 24000;
    const double h = 24.0 / m;
    double sum = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double z = -12.0 + i * h;
        const double f = front_profile_prime(z) * front_profile_prime(z);
        const double wgt = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += wgt * f;
    }
    sum *= h / 3.0;
    CHECK(std::abs(sum - 1.0) < 1e-9);
}

TEST_CASE("parameter defaults and validation") {
    const ModelParams d = ModelParams::defaults();
    CHECK(d.beta == 1.85);
    CHECK(d.theta_star == 273.0);
    CHECK(d.delta_g == 1.23e-8);
    CHECK(d.H == 1e6);
    CHECK(d.length_scale_Lb == 1e-3);
    CHECK_NOTHROW(d.validate());

    ModelParams bad = d;
    bad.beta = -1.0;
    CHECK_THROWS_AS(bad.validate(), domain_error);
    bad = d;
    bad.H = 0.5;
    CHECK_THROWS_AS(bad.validate(), domain_error);
    bad = d;
    bad.delta_g = -1e-9;
    CHECK_THROWS_AS(bad.validate(), domain_error);
    bad = d;
    bad.sigma_N = 0.0;
    CHECK_THROWS_AS(bad.validate(), domain_error);
}

TEST_CASE("phase validity window") {
    CHECK(phase_in_validity_window(0.0));
    CHECK(phase_in_validity_window(1.0));
    CHECK(phase_in_validity_window(1.4));
    CHECK_FALSE(phase_in_validity_window(1.6));
    CHECK_FALSE(phase_in_validity_window(-0.6));
}
