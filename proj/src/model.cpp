#include "brine/model.hpp"

#include <cmath>

namespace brine {

void ModelParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0))
            throw domain_error(std::string("ModelParams: ") + name + " must be > 0");
    };
    positive(beta, "beta");
    positive(theta_star, "theta_star");
    positive(sigma_theta, "sigma_theta");
    positive(sigma_N, "sigma_N");
    positive(length_scale_Lb, "length_scale_Lb");
    if (!(H >= 1.0)) throw domain_error("ModelParams: H must be >= 1");
    if (!(delta_g >= 0.0)) throw domain_error("ModelParams: delta_g must be >= 0");
    positive(mobility_floor, "mobility_floor");
    positive(stability_safety, "stability_safety");
    positive(newton_tol, "newton_tol");
    positive(pinch_radius, "pinch_radius");
    if (newton_max_iter < 1) throw domain_error("ModelParams: newton_max_iter must be >= 1");
    if (theta_newton_max_iter < 1) throw domain_error("ModelParams: theta_newton_max_iter must be >= 1");
    if (!(theta_min > 0.0 && theta_max > theta_min))
        throw domain_error("ModelParams: need 0 < theta_min < theta_max");
}

double w0(double phi) {
    const double q = 1.0 - phi;
    return 18.0 * phi * phi * q * q;
}

double w0_prime(double phi) {
    // 36 phi (1 - phi)(1 - 2 phi)
    return 36.0 * phi * (1.0 - phi) * (1.0 - 2.0 * phi);
}

double w0_second(double phi) {
    return 36.0 * (1.0 - 6.0 * phi + 6.0 * phi * phi);
}

double w1(double phi) {
    return 2.0 * phi * phi * (phi - 1.5);
}

double w1_prime(double phi) {
    return 6.0 * phi * (phi - 1.0);
}

double cryoscopic_xi(double theta, double N, const ModelParams& p) {
    return N + p.beta * (theta - p.theta_star);
}

double latent_b(double theta, const ModelParams& p) {
    // factored form of beta (theta^2 - theta_star^2) / 2; avoids cancellation
    // near the reference temperature
    return 0.5 * p.beta * (theta - p.theta_star) * (theta + p.theta_star);
}

double latent_B(double theta, const ModelParams& p) {
    if (!(theta > 0.0))
        throw domain_error("latent_B: absolute temperature must be positive");
    return 0.5 * p.beta * (theta - p.theta_star) * (theta + p.theta_star) / theta;
}

double v1(double phi, double theta, double rho, const ModelParams& p) {
    return latent_B(theta, p) * w1(phi) - rho * phi * std::exp(-w1(phi));
}

double v1_dphi(double phi, double theta, double rho, const ModelParams& p) {
    const double w1p = w1_prime(phi);
    return latent_B(theta, p) * w1p - rho * std::exp(-w1(phi)) * (1.0 - phi * w1p);
}

double internal_energy_density(double theta, double phi, const ModelParams& p) {
    return theta - latent_b(theta, p) * w1(phi);
}

double entropy_density(double grad_phi_sq, double phi, double theta, double N,
                       double x3, const ModelParams& p) {
    if (!(theta > 0.0))
        throw domain_error("entropy_density: absolute temperature must be positive");
    double relative = 0.0; // N (1 - ln(N/phi)), with limit 0 at N = 0
    if (N > 0.0) {
        if (!(phi > 0.0))
            throw domain_error("entropy_density: salt present with no liquid fraction");
        relative = N * (1.0 - std::log(N / phi));
    } else if (N < 0.0) {
        throw domain_error("entropy_density: negative salt fraction");
    }
    const double xi = cryoscopic_xi(theta, N, p);
    const double W = w0(phi) + w1(phi) * xi / p.H;
    return std::log(theta) + relative - p.delta_g * N * x3
           - grad_phi_sq / (2.0 * p.H) - p.H * W;
}

double front_profile(double z) {
    return 0.5 * (1.0 - std::tanh(3.0 * z));
}

double front_profile_prime(double z) {
    const double c = std::cosh(3.0 * z);
    // -(3/2) sech^2(3z); guard cosh overflow in the far field
    if (c > 1e150) return 0.0;
    return -1.5 / (c * c);
}

} // namespace brine
