#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "brine/phasefield1d.hpp"

#include <cmath>
#include <vector>

using namespace brine;
using namespace brine::pf1d;

namespace {

ModelParams desk_params(double H) {
    ModelParams p = ModelParams::defaults();
    p.H = H;
    return p;
}

Field1D uniform_state(int n, double L, double phi, double theta, double rho) {
    Field1D s;
    s.grid = Grid1D::make(n, L);
    s.phi.assign(n, phi);
    s.theta.assign(n, theta);
    s.rho.assign(n, rho);
    return s;
}

// standing front centered at x0, liquid on the left
Field1D front_state(int n, double L, double x0, double H, double theta, double rho) {
    Field1D s = uniform_state(n, L, 0.0, theta, rho);
    for (int i = 0; i < n; ++i)
        s.phi[i] = front_profile(H * (s.grid.x(i) - x0));
    return s;
}

} // namespace

TEST_CASE("rhs vanishes at the pure-ice rest state") {
    const ModelParams p = desk_params(50.0);
    const Field1D s = uniform_state(64, 1.0, 0.0, p.theta_star, 0.0);
    const Rhs1D f = rhs(s, p);
    for (int i = 0; i < 64; ++i) {
        CHECK(f.dphi_dt[i] == 0.0);
        CHECK(f.du_dt[i] == 0.0);
        CHECK(f.dq_dt[i] == 0.0);
    }
}

TEST_CASE("rhs on uniform liquid drives phi at rho*e") {
    const ModelParams p = desk_params(50.0);
    const double rho0 = 0.7;
    const Field1D s = uniform_state(64, 1.0, 1.0, p.theta_star, rho0);
    const Rhs1D f = rhs(s, p);
    for (int i = 0; i < 64; ++i) {
        CHECK(f.dphi_dt[i] == doctest::Approx(rho0 * std::exp(1.0)).epsilon(1e-13));
        CHECK(f.du_dt[i] == 0.0);
        CHECK(f.dq_dt[i] == doctest::Approx(0.0));
    }
}

TEST_CASE("discrete salt flux telescopes to zero for arbitrary states") {
    const ModelParams p = desk_params(100.0);
    const int n = 97;
    Field1D s = uniform_state(n, 1.0, 0.0, p.theta_star, 0.0);
    // deterministic wiggly state exercising all terms
    for (int i = 0; i < n; ++i) {
        const double x = s.grid.x(i);
        s.phi[i] = 0.55 + 0.5 * std::sin(7.0 * x) * std::cos(3.0 * x + 0.4);
        s.theta[i] = p.theta_star + 0.2 * std::cos(5.0 * x);
        s.rho[i] = 1.0 + 0.8 * std::sin(11.0 * x) * std::sin(2.0 * x);
        s.rho[i] = std::abs(s.rho[i]);
    }
    const Rhs1D f = rhs(s, p);
    double total = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i) {
        total += f.dq_dt[i] * s.grid.dx;
        scale += std::abs(f.dq_dt[i]) * s.grid.dx;
    }
    CHECK(std::abs(total) <= 1e-14 * std::max(1.0, scale));
}

TEST_CASE("rest state is a fixed point of step") {
    const ModelParams p = desk_params(50.0);
    const Field1D s = uniform_state(64, 1.0, 0.0, p.theta_star, 0.0);
    const Field1D s2 = step(s, 0.5 * max_stable_dt(s.grid, p), p);
    for (int i = 0; i < 64; ++i) {
        CHECK(s2.phi[i] == 0.0);
        CHECK(s2.theta[i] == doctest::Approx(p.theta_star).epsilon(1e-14));
        CHECK(s2.rho[i] == 0.0);
    }
}

TEST_CASE("theta inversion round-trips") {
    const ModelParams p = ModelParams::defaults();
    for (double theta : {255.0, 268.0, 273.0, 290.0, 310.0}) {
        for (double phi : {0.0, 0.25, 0.5, 1.0, 1.05}) {
            const double u = internal_energy_density(theta, phi, p);
            const double back = theta_from_u(u, phi, p, 273.0);
            CHECK(back == doctest::Approx(theta).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(theta_from_u(-1e9, 0.5, ModelParams::defaults(), 273.0), inversion_error);
}

TEST_CASE("step rejects unstable dt") {
    const ModelParams p = desk_params(50.0);
    const Field1D s = uniform_state(64, 1.0, 0.0, p.theta_star, 0.0);
    CHECK_THROWS_AS(step(s, 10.0 * max_stable_dt(s.grid, p), p), domain_error);
    CHECK_THROWS_AS(step(s, -1.0, p), domain_error);
}

TEST_CASE("conservation over 1e3 steps") {
    const ModelParams p = desk_params(25.0);
    const int n = 256;
    Field1D s = front_state(n, 1.0, 0.5, 25.0, p.theta_star, 0.0);
    // perturb: thermal bump and salt confined to the liquid side
    for (int i = 0; i < n; ++i) {
        const double x = s.grid.x(i);
        s.theta[i] = p.theta_star + 0.05 * std::cos(M_PI * x);
        s.rho[i] = 0.8 * s.phi[i]; // smooth, vanishes in deep ice
    }
    const double dt = max_stable_dt(s.grid, p);
    const Diagnostics1D d0 = diagnostics(s, p);
    for (int k = 0; k < 1000; ++k)
        s = step(s, dt, p);
    const Diagnostics1D d1 = diagnostics(s, p);
    CHECK(std::abs(d1.total_internal_energy - d0.total_internal_energy)
          < 1e-10 * std::abs(d0.total_internal_energy));
    CHECK(std::abs(d1.total_salt - d0.total_salt) < 1e-10 * std::abs(d0.total_salt));
    // positivity along the trajectory endpoint
    for (int i = 0; i < n; ++i) {
        CHECK(s.theta[i] > 0.0);
        CHECK(s.rho[i] >= 0.0);
    }
}

TEST_CASE("entropy production is zero at rest and positive off equilibrium") {
    const ModelParams p = desk_params(25.0);
    const Field1D rest = uniform_state(64, 1.0, 0.0, p.theta_star, 0.0);
    CHECK(diagnostics(rest, p).entropy_production_rate == 0.0);

    Field1D s = front_state(256, 1.0, 0.5, 25.0, p.theta_star, 0.0);
    for (int i = 0; i < 256; ++i)
        s.theta[i] = p.theta_star + 0.05 * std::cos(M_PI * s.grid.x(i));
    CHECK(diagnostics(s, p).entropy_production_rate > 0.0);
}

TEST_CASE("discrete entropy is nondecreasing along a perturbed-front run") {
    const ModelParams p = desk_params(25.0);
    const int n = 256;
    Field1D s = front_state(n, 1.0, 0.5, 25.0, p.theta_star, 0.0);
    for (int i = 0; i < n; ++i) {
        const double x = s.grid.x(i);
        s.theta[i] = p.theta_star + 0.05 * std::cos(M_PI * x);
        s.rho[i] = 0.6 * s.phi[i] * (1.0 + 0.3 * std::sin(2.0 * M_PI * x));
    }
    const double dt = max_stable_dt(s.grid, p);
    const double slack = 10.0 * dt * dt;
    double S_prev = diagnostics(s, p).total_entropy;
    for (int k = 0; k < 500; ++k) {
        s = step(s, dt, p);
        const double S = diagnostics(s, p).total_entropy;
        CHECK(S >= S_prev - slack);
        S_prev = S;
    }
}

TEST_CASE("total salt diagnostic matches its definition") {
    const ModelParams p = desk_params(50.0);
    const int n = 64;
    Field1D s = uniform_state(n, 2.0, 0.0, p.theta_star, 0.0);
    for (int i = 0; i < n; ++i) {
        s.phi[i] = 0.5 + 0.4 * std::sin(3.0 * s.grid.x(i));
        s.rho[i] = 1.0 + 0.5 * std::cos(2.0 * s.grid.x(i));
    }
    double ref = 0.0;
    for (int i = 0; i < n; ++i)
        ref += liquid_weight(s.phi[i]) * s.rho[i] * s.grid.dx;
    CHECK(diagnostics(s, p).total_salt == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("front position and crossing-count errors") {
    const ModelParams p = desk_params(50.0);
    Field1D s = front_state(480, 1.0, 0.4, 50.0, p.theta_star, 0.0);
    CHECK(front_position(s) == doctest::Approx(0.4).epsilon(1e-3));

    const Field1D ice = uniform_state(64, 1.0, 0.0, p.theta_star, 0.0);
    CHECK_THROWS_AS(front_position(ice), integration_error);

    // two crossings: a liquid slab
    Field1D slab = uniform_state(480, 1.0, 0.0, p.theta_star, 0.0);
    for (int i = 0; i < 480; ++i) {
        const double x = slab.grid.x(i);
        slab.phi[i] = front_profile(50.0 * (x - 0.7)) - front_profile(50.0 * (x - 0.3));
    }
    CHECK_THROWS_AS(front_position(slab), integration_error);
}

TEST_CASE("standing front stays put when the wells are level") {
    const double H = 25.0;
    ModelParams p = desk_params(H);
    p.sigma_theta = p.sigma_N = 0.1; // inert fields here; relaxes the dt bound
    const int n = 300;
    const double L = 0.5;
    Field1D s = front_state(n, L, 0.25, H, p.theta_star, 0.0);
    const double x_start = front_position(s);
    const double dt = max_stable_dt(s.grid, p);
    const int steps = static_cast<int>(std::ceil(1.0 / dt));
    for (int k = 0; k < steps; ++k)
        s = step(s, dt, p);
    const double drift = std::abs(front_position(s) - x_start);
    CHECK(drift < 1.0 / (H * H));
}

TEST_CASE("salt-driven melting front obeys the kinetic law") {
    const double H = 50.0;
    ModelParams p = desk_params(H);
    p.sigma_theta = p.sigma_N = 0.25;
    const double L = 0.5;
    const int n = static_cast<int>(24 * H * L); // fixed resolution per interface width
    const double rho0 = 1.0;
    Field1D s = front_state(n, L, 0.2, H, p.theta_star, rho0);
    const double dt = max_stable_dt(s.grid, p);

    // let the profile relax, then measure over a short window
    const double xi0 = rho0 * std::exp(1.0);
    const double t_relax = 0.3 / xi0;
    for (double t = 0.0; t < t_relax; t += dt)
        s = step(s, dt, p);

    std::vector<Field1D> frames;
    std::vector<double> xi_front;
    const double window = 3.0 * s.grid.dx * H / xi0;
    const int save_every = std::max(1, static_cast<int>(window / dt / 120));
    int k = 0;
    for (double t = 0.0; t < window; t += dt, ++k) {
        if (k % save_every == 0) {
            frames.push_back(s);
            // salt fraction at the front, liquid side: N = rho * e
            const double xc = front_position(s);
            const int i = std::min(n - 1, static_cast<int>(xc / s.grid.dx));
            xi_front.push_back(s.rho[i] * std::exp(1.0));
        }
        s = step(s, dt, p);
    }
    const double v = measure_front_velocity(frames);
    double xi_bar = 0.0;
    for (double x : xi_front) xi_bar += x;
    xi_bar /= static_cast<double>(xi_front.size());

    // law: v = xi / H toward the ice, with O(1/H) corrections
    CHECK(v > 0.0);
    CHECK(std::abs(v * H / xi_bar - 1.0) < 0.15);
}

TEST_CASE("doubling the front forcing doubles the speed") {
    const double H = 100.0;
    const double L = 0.5;
    const int n = static_cast<int>(24 * H * L);

    auto speed = [&](double rho0) {
        ModelParams p = desk_params(H);
        p.sigma_theta = p.sigma_N = 0.25;
        Field1D s = front_state(n, L, 0.2, H, p.theta_star, rho0);
        const double dt = max_stable_dt(s.grid, p);
        const double xi0 = rho0 * std::exp(1.0);
        for (double t = 0.0; t < 0.05 / xi0; t += dt)
            s = step(s, dt, p);
        std::vector<Field1D> frames;
        const double window = 3.0 * s.grid.dx * H / xi0;
        const int every = std::max(1, static_cast<int>(window / dt / 100));
        int k = 0;
        for (double t = 0.0; t < window; t += dt, ++k) {
            if (k % every == 0) frames.push_back(s);
            s = step(s, dt, p);
        }
        return measure_front_velocity(frames);
    };

    const double ratio = speed(1.0) / speed(0.5);
    CHECK(std::abs(ratio - 2.0) < 0.1); // within 5% of doubling
}
