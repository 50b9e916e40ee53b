#include "brine/phasefield1d.hpp"

#include <algorithm>
#include <limits>
#include <cmath>

namespace brine::pf1d {

Grid1D Grid1D::make(int n_cells, double domain_length) {
    if (n_cells < 8)
        throw domain_error("Grid1D: need at least 8 cells");
    if (!(domain_length > 0.0))
        throw domain_error("Grid1D: domain length must be positive");
    Grid1D g;
    g.n_cells = n_cells;
    g.domain_length = domain_length;
    g.dx = domain_length / n_cells;
    return g;
}

void Field1D::validate() const {
    const std::size_t n = static_cast<std::size_t>(grid.n_cells);
    if (phi.size() != n || theta.size() != n || rho.size() != n)
        throw domain_error("Field1D: array lengths must equal n_cells");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(theta[i] > 0.0))
            throw integration_error("Field1D: nonpositive temperature", static_cast<int>(i));
        if (!(rho[i] >= 0.0))
            throw integration_error("Field1D: negative relative salt density", static_cast<int>(i));
    }
}

double liquid_weight(double phi) {
    return phi * std::exp(-w1(phi));
}

namespace {

// mirrored ghost value for zero-flux boundaries on a cell-centered grid
inline int mirror(int i, int n) {
    if (i < 0) return -i - 1;
    if (i >= n) return 2 * n - i - 1;
    return i;
}

} // namespace

Rhs1D rhs(const Field1D& state, const ModelParams& p) {
    const int n = state.grid.n_cells;
    const double dx = state.grid.dx;
    const double inv_dx2 = 1.0 / (dx * dx);

    Rhs1D out;
    out.dphi_dt.resize(n);
    out.du_dt.resize(n);
    out.dq_dt.resize(n);

    const auto& phi = state.phi;
    const auto& theta = state.theta;
    const auto& rho = state.rho;

    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(phi[i]) || !std::isfinite(theta[i]) || !std::isfinite(rho[i]))
            throw integration_error("rhs: non-finite state value", i);
        if (!phase_in_validity_window(phi[i]))
            throw integration_error("rhs: phase left the validity window", i);
    }

    // phase: Laplacian/H minus the full potential derivative H w0' + dV1/dphi
    for (int i = 0; i < n; ++i) {
        const double lap = (phi[mirror(i - 1, n)] - 2.0 * phi[i] + phi[mirror(i + 1, n)]) * inv_dx2;
        out.dphi_dt[i] = lap / p.H - p.H * w0_prime(phi[i]) - v1_dphi(phi[i], theta[i], rho[i], p);
    }

    // heat: d/dt u = sigma_theta * Lap(theta)
    for (int i = 0; i < n; ++i) {
        const double lap = (theta[mirror(i - 1, n)] - 2.0 * theta[i] + theta[mirror(i + 1, n)]) * inv_dx2;
        out.du_dt[i] = p.sigma_theta * lap;
    }

    // salt: conservative face fluxes with face-averaged mobilities; the 1-D
    // coordinate is treated as the vertical for the stratification term.
    // The degeneracy floor applies only to the rho reconstruction in step();
    // flooring the flux itself would transport phantom salt through ice.
    std::vector<double> flux(n + 1, 0.0); // flux[i] = face between cells i-1 and i
    for (int f = 1; f < n; ++f) {
        const int l = f - 1, r = f;
        const double m_face = 0.5 * (liquid_weight(phi[l]) + liquid_weight(phi[r]));
        const double grad = (rho[r] - rho[l]) / dx;
        const double rho_face = 0.5 * (rho[l] + rho[r]);
        flux[f] = p.sigma_N * m_face * (grad + p.delta_g * rho_face);
    }
    for (int i = 0; i < n; ++i)
        out.dq_dt[i] = (flux[i + 1] - flux[i]) / dx;

    return out;
}

double max_stable_dt(const Grid1D& grid, const ModelParams& p) {
    const double dx2 = grid.dx * grid.dx;
    const double bound = std::min(std::min(p.H * dx2, dx2 / p.sigma_theta),
                                  std::min(dx2 / p.sigma_N, 1.0 / (36.0 * p.H)));
    return p.stability_safety * bound;
}

double theta_from_u(double u, double phi, const ModelParams& p, double guess) {
    const double w1phi = w1(phi);
    auto g = [&](double th) { return th - latent_b(th, p) * w1phi - u; };
    // g' = 1 - beta theta w1(phi) >= 1 for w1 <= 0, so the bracket is safe
    double lo = p.theta_min, hi = p.theta_max;
    double glo = g(lo), ghi = g(hi);
    if (glo > 0.0 || ghi < 0.0)
        throw inversion_error("theta_from_u: target outside the bracket");
    double th = std::clamp(guess, lo, hi);
    for (int it = 0; it < p.theta_newton_max_iter; ++it) {
        const double val = g(th);
        if (std::abs(val) <= p.theta_newton_tol)
            return th;
        if (val > 0.0) hi = th; else lo = th;
        if (hi - lo <= 8.0 * std::numeric_limits<double>::epsilon() * th)
            return th; // bracket collapsed to rounding width
        const double slope = 1.0 - p.beta * th * w1phi;
        double next = th - val / slope;
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi); // bisection fallback
        th = next;
    }
    // accept if the last iterate sits at the evaluation noise floor
    if (std::abs(g(th)) <= 64.0 * p.theta_newton_tol)
        return th;
    throw inversion_error("theta_from_u: Newton did not converge");
}

Field1D step(const Field1D& state, double dt, const ModelParams& p) {
    if (!(dt > 0.0))
        throw domain_error("step: dt must be positive");
    if (dt > max_stable_dt(state.grid, p) * (1.0 + 1e-12))
        throw domain_error("step: dt exceeds the explicit stability bound");

    const int n = state.grid.n_cells;
    const Rhs1D f = rhs(state, p);

    Field1D next;
    next.grid = state.grid;
    next.time = state.time + dt;
    next.phi.resize(n);
    next.theta.resize(n);
    next.rho.resize(n);

    for (int i = 0; i < n; ++i) {
        next.phi[i] = state.phi[i] + dt * f.dphi_dt[i];
        if (!std::isfinite(next.phi[i]))
            throw integration_error("step: non-finite phase produced", i);
        if (!phase_in_validity_window(next.phi[i]))
            throw integration_error("step: phase left the validity window", i);
    }

    for (int i = 0; i < n; ++i) {
        const double u_new = internal_energy_density(state.theta[i], state.phi[i], p)
                             + dt * f.du_dt[i];
        next.theta[i] = theta_from_u(u_new, next.phi[i], p, state.theta[i]);
    }

    for (int i = 0; i < n; ++i) {
        const double q_new = liquid_weight(state.phi[i]) * state.rho[i] + dt * f.dq_dt[i];
        next.rho[i] = q_new / std::max(liquid_weight(next.phi[i]), p.mobility_floor);
        if (!std::isfinite(next.theta[i]) || !std::isfinite(next.rho[i]))
            throw integration_error("step: non-finite value produced", i);
    }
    return next;
}

Diagnostics1D diagnostics(const Field1D& state, const ModelParams& p,
                          bool with_production) {
    const int n = state.grid.n_cells;
    const double dx = state.grid.dx;
    const auto& phi = state.phi;
    const auto& theta = state.theta;
    const auto& rho = state.rho;

    Diagnostics1D d;
    for (int i = 0; i < n; ++i) {
        const double u = internal_energy_density(theta[i], phi[i], p);
        const double N = liquid_weight(phi[i]) * rho[i];
        const double gphi = (phi[mirror(i + 1, n)] - phi[mirror(i - 1, n)]) / (2.0 * dx);
        d.total_internal_energy += u * dx;
        d.total_salt += N * dx;
        d.total_entropy += entropy_density(gphi * gphi, phi[i], theta[i], N, state.grid.x(i), p) * dx;
    }

    if (!with_production)
        return d;

    // production rate: |dS/dphi|^2 + M_u |grad dS/du|^2 + M_N |grad dS/dN|^2
    // with dS/du = 1/theta, M_u = sigma_theta theta^2, and
    // dS/dN = -(ln rho + delta_g x3), M_N = sigma_N N.
    const Rhs1D f = rhs(state, p);
    auto deriv = [&](auto&& value, int i) {
        // centered in the interior, one-sided at the boundary cells
        if (i == 0) return (value(1) - value(0)) / dx;
        if (i == n - 1) return (value(n - 1) - value(n - 2)) / dx;
        return (value(i + 1) - value(i - 1)) / (2.0 * dx);
    };
    for (int i = 0; i < n; ++i) {
        double cell = f.dphi_dt[i] * f.dphi_dt[i];
        const double g_invtheta = deriv([&](int j) { return 1.0 / theta[j]; }, i);
        cell += p.sigma_theta * theta[i] * theta[i] * g_invtheta * g_invtheta;
        const double N = liquid_weight(phi[i]) * rho[i];
        if (N > 0.0 && rho[i] > 0.0) {
            const double g_mu = deriv([&](int j) {
                return -(std::log(std::max(rho[j], 1e-300)) + p.delta_g * state.grid.x(j));
            }, i);
            cell += p.sigma_N * N * g_mu * g_mu;
        }
        d.entropy_production_rate += cell * dx;
    }
    return d;
}

double front_position(const Field1D& state) {
    const int n = state.grid.n_cells;
    const auto& phi = state.phi;
    int count = 0;
    double pos = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const double a = phi[i] - 0.5, b = phi[i + 1] - 0.5;
        if (a == 0.0) { // crossing exactly on a node
            ++count;
            pos = state.grid.x(i);
        } else if (a * b < 0.0) {
            ++count;
            pos = state.grid.x(i) + state.grid.dx * a / (a - b);
        }
    }
    if (count != 1)
        throw integration_error("front_position: expected exactly one phi=1/2 crossing, found "
                                + std::to_string(count), count);
    return pos;
}

double measure_front_velocity(std::span<const Field1D> trajectory) {
    if (trajectory.size() < 2)
        throw domain_error("measure_front_velocity: need at least two states");
    double st = 0, sx = 0, stt = 0, stx = 0;
    const double m = static_cast<double>(trajectory.size());
    for (const Field1D& s : trajectory) {
        const double t = s.time, x = front_position(s);
        st += t; sx += x; stt += t * t; stx += t * x;
    }
    const double denom = m * stt - st * st;
    if (denom == 0.0)
        throw domain_error("measure_front_velocity: degenerate time samples");
    return (m * stx - st * sx) / denom;
}

} // namespace brine::pf1d
