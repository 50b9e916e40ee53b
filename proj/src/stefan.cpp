#include "brine/stefan.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace brine::stefan {

namespace {

constexpr double kPi = 3.14159265358979323846;

inline double curvature_coeff(CurvatureLaw law) {
    return law == CurvatureLaw::MeanBalance ? -1.0 : 2.0;
}

// ghost values encoding the boundary/symmetry conditions
struct Ghosts {
    double r_lo, x_lo, r_hi, x_hi;
};

Ghosts ghosts(const InterfaceCurve& c) {
    const int n = c.n();
    if (c.topology == Topology::ClosedInclusion) {
        // r odd, x3 even across each pole
        return {-c.r[0], c.x3[0], -c.r[n - 1], c.x3[n - 1]};
    }
    // open pore: linear extension of both coordinates past the ends
    return {2.0 * c.r[0] - c.r[1], 2.0 * c.x3[0] - c.x3[1],
            2.0 * c.r[n - 1] - c.r[n - 2], 2.0 * c.x3[n - 1] - c.x3[n - 2]};
}

struct Stencil {
    double rm, xm, r0, x0, rp, xp;
};

Stencil stencil_at(const InterfaceCurve& c, const Ghosts& g, int i) {
    const int n = c.n();
    Stencil s;
    s.r0 = c.r[i];
    s.x0 = c.x3[i];
    s.rm = (i == 0) ? g.r_lo : c.r[i - 1];
    s.xm = (i == 0) ? g.x_lo : c.x3[i - 1];
    s.rp = (i == n - 1) ? g.r_hi : c.r[i + 1];
    s.xp = (i == n - 1) ? g.x_hi : c.x3[i + 1];
    return s;
}

// curvature at one node, with partial derivatives with respect to
// (r0, r', r'', x', x'') for the Jacobian assembly
struct NodeGeom {
    double rp, xp, rpp, xpp; // derivatives in s
    double J, G;
    double kappa;
    double dk_dr0, dk_drp, dk_drpp, dk_dxp, dk_dxpp;
};

NodeGeom node_geometry(const Stencil& st, double ds) {
    NodeGeom g;
    const double c2 = 1.0 / (2.0 * ds);
    const double cd = 1.0 / (ds * ds);
    g.rp = (st.rp - st.rm) * c2;
    g.xp = (st.xp - st.xm) * c2;
    g.rpp = (st.rp - 2.0 * st.r0 + st.rm) * cd;
    g.xpp = (st.xp - 2.0 * st.x0 + st.xm) * cd;
    g.G = g.rp * g.rp + g.xp * g.xp;
    if (!(g.G > 1e-14))
        throw geometry_error("degenerate tangent on the generating curve");
    if (!(st.r0 > 0.0))
        throw geometry_error("curvature evaluated at nonpositive radius");
    g.J = std::sqrt(g.G);

    const double num = g.xp * g.xp * g.xp + g.rp * g.rp * g.xp
                       - st.r0 * g.rpp * g.xp + st.r0 * g.rp * g.xpp;
    const double den = 2.0 * st.r0 * g.G * g.J;
    g.kappa = -num / den;

    const double dn_dr0 = -g.rpp * g.xp + g.rp * g.xpp;
    const double dn_drp = 2.0 * g.rp * g.xp + st.r0 * g.xpp;
    const double dn_drpp = -st.r0 * g.xp;
    const double dn_dxp = 3.0 * g.xp * g.xp + g.rp * g.rp - st.r0 * g.rpp;
    const double dn_dxpp = st.r0 * g.rp;
    const double dd_dr0 = 2.0 * g.G * g.J;
    const double dd_drp = 6.0 * st.r0 * g.rp * g.J;
    const double dd_dxp = 6.0 * st.r0 * g.xp * g.J;

    // kappa = -num/den  =>  dkappa = -(dnum + kappa * dden) / den
    g.dk_dr0 = -(dn_dr0 + g.kappa * dd_dr0) / den;
    g.dk_drp = -(dn_drp + g.kappa * dd_drp) / den;
    g.dk_drpp = -(dn_drpp) / den;
    g.dk_dxp = -(dn_dxp + g.kappa * dd_dxp) / den;
    g.dk_dxpp = -(dn_dxpp) / den;
    return g;
}

// volume quadrature plus its gradient with respect to the interleaved
// unknowns (ghost contributions folded)
double volume_and_gradient(const InterfaceCurve& c, double delta_g,
                           std::vector<double>* grad) {
    const int n = c.n();
    const double ds = c.ds();
    const Ghosts g = ghosts(c);
    if (grad) grad->assign(2 * n, 0.0);
    double Q = 0.0;
    for (int j = 0; j < n; ++j) {
        const Stencil st = stencil_at(c, g, j);
        const double xp = (st.xp - st.xm) / (2.0 * ds);
        const double E = std::exp(-delta_g * st.x0);
        const double cell = kPi * st.r0 * st.r0 * E * xp * ds;
        Q += cell;
        if (!grad) continue;
        auto& w = *grad;
        w[2 * j] += 2.0 * kPi * st.r0 * E * xp * ds;
        w[2 * j + 1] += -delta_g * cell;
        const double spread = kPi * st.r0 * st.r0 * E * 0.5; // d(xp)/dx_{j+-1} * ds
        if (j > 0) w[2 * (j - 1) + 1] -= spread;
        if (j + 1 < n) w[2 * (j + 1) + 1] += spread;
        if (c.topology == Topology::ClosedInclusion) {
            if (j == 0) w[2 * j + 1] -= spread;          // ghost x_{-1} = x_0
            if (j == n - 1) w[2 * j + 1] += spread;      // ghost x_n = x_{n-1}
        } else {
            if (j == 0) {                                // ghost x_{-1} = 2 x_0 - x_1
                w[2 * j + 1] -= 2.0 * spread;
                w[3] += spread;
            }
            if (j == n - 1) {                            // ghost x_n = 2 x_{n-1} - x_{n-2}
                w[2 * j + 1] += 2.0 * spread;
                w[2 * (n - 2) + 1] -= spread;
            }
        }
    }
    return Q;
}

// scalar tridiagonal solve (Thomas) for multiple right-hand sides
void tridiag_solve(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                   std::vector<std::vector<double>*> rhs) {
    const int n = static_cast<int>(b.size());
    for (int i = 1; i < n; ++i) {
        if (b[i - 1] == 0.0 || !std::isfinite(b[i - 1]))
            throw solver_error("singular tridiagonal pivot", std::numeric_limits<double>::infinity());
        const double f = a[i] / b[i - 1];
        b[i] -= f * c[i - 1];
        for (auto* v : rhs) (*v)[i] -= f * (*v)[i - 1];
    }
    for (auto* v : rhs) {
        (*v)[n - 1] /= b[n - 1];
        for (int i = n - 2; i >= 0; --i)
            (*v)[i] = ((*v)[i] - c[i] * (*v)[i + 1]) / b[i];
    }
}

// normal directions of the start-of-step curve; node i moves by
// (dr, dx) = eta_i * (P_i, -S_i)
struct FrozenNormals {
    std::vector<double> P, S;
};

FrozenNormals frozen_normals(const InterfaceCurve& c) {
    const CurveDerivs d = derivatives(c);
    FrozenNormals f;
    f.P.resize(c.n());
    f.S.resize(c.n());
    for (int i = 0; i < c.n(); ++i) {
        f.P[i] = d.xp[i] / d.jac[i];
        f.S[i] = d.rp[i] / d.jac[i];
    }
    return f;
}

InterfaceCurve displaced_curve(const InterfaceCurve& base, const FrozenNormals& nrm,
                               const std::vector<double>& eta) {
    InterfaceCurve c = base;
    for (int i = 0; i < c.n(); ++i) {
        c.r[i] = base.r[i] + eta[i] * nrm.P[i];
        c.x3[i] = base.x3[i] - eta[i] * nrm.S[i];
    }
    return c;
}

// assembled implicit system in the normal displacements: tridiagonal plus
// the rank-one volume coupling, J = T + g w~^T
struct Assembled {
    std::vector<double> F;
    std::vector<double> lo, di, up; // tridiagonal bands
    std::vector<double> gvec, wvec;
};

Assembled assemble(const BrineState& prev, const FrozenNormals& nrm,
                   const InterfaceCurve& trial, const std::vector<double>& eta,
                   const ThermalProfile& thermal, double dtau, const ModelParams& p,
                   CurvatureLaw law) {
    const int n = trial.n();
    const double ds = trial.ds();
    const Ghosts gh = ghosts(trial);

    Assembled out;
    out.F.assign(n, 0.0);
    out.lo.assign(n, 0.0);
    out.di.assign(n, 0.0);
    out.up.assign(n, 0.0);
    out.gvec.assign(n, 0.0);

    std::vector<double> wxy;
    const double Q = volume_and_gradient(trial, p.delta_g, &wxy);
    if (!(Q > 0.0))
        throw geometry_error("nonpositive enclosed volume");
    const double NT = prev.total_salt;

    // chain the volume gradient through the frozen normal directions
    out.wvec.resize(n);
    for (int j = 0; j < n; ++j)
        out.wvec[j] = wxy[2 * j] * nrm.P[j] - wxy[2 * j + 1] * nrm.S[j];

    const double c2 = 1.0 / (2.0 * ds);
    const double cd = 1.0 / (ds * ds);

    for (int i = 0; i < n; ++i) {
        const Stencil st = stencil_at(trial, gh, i);
        const NodeGeom ng = node_geometry(st, ds);
        const double E = std::exp(-p.delta_g * st.x0);
        const double N0 = NT * E / Q;
        const double ck = curvature_coeff(law);
        const double vn = ck * ng.kappa + N0 + p.beta * thermal.at(st.x0);

        out.F[i] = eta[i] - dtau * vn;

        // dVn with respect to the stencil columns (rm, xm, r0, x0, rp, xp)
        std::array<double, 6> dvn{};
        for (int q = 0; q < 6; ++q) {
            const double drp = (q == 0) ? -c2 : (q == 4) ? c2 : 0.0;
            const double dxp = (q == 1) ? -c2 : (q == 5) ? c2 : 0.0;
            const double drpp = (q == 0 || q == 4) ? cd : (q == 2) ? -2.0 * cd : 0.0;
            const double dxpp = (q == 1 || q == 5) ? cd : (q == 3) ? -2.0 * cd : 0.0;
            const double dr0 = (q == 2) ? 1.0 : 0.0;
            const double dx0 = (q == 3) ? 1.0 : 0.0;

            const double dk = ng.dk_dr0 * dr0 + ng.dk_drp * drp + ng.dk_drpp * drpp
                              + ng.dk_dxp * dxp + ng.dk_dxpp * dxpp;
            dvn[q] = ck * dk + (p.beta * thermal.b0 - p.delta_g * N0) * dx0;
        }

        // fold ghost columns onto real unknowns
        auto fold = [&](int from, int to, double factor) { dvn[to] += factor * dvn[from]; };
        if (i == 0) {
            if (trial.topology == Topology::ClosedInclusion) {
                fold(0, 2, -1.0); // r_{-1} = -r_0
                fold(1, 3, 1.0);  // x_{-1} = x_0
            } else {
                fold(0, 2, 2.0);  // r_{-1} = 2 r_0 - r_1
                fold(0, 4, -1.0);
                fold(1, 3, 2.0);  // x_{-1} = 2 x_0 - x_1
                fold(1, 5, -1.0);
            }
            dvn[0] = dvn[1] = 0.0;
        }
        if (i == n - 1) {
            if (trial.topology == Topology::ClosedInclusion) {
                fold(4, 2, -1.0);
                fold(5, 3, 1.0);
            } else {
                fold(4, 2, 2.0);  // r_n = 2 r_{n-1} - r_{n-2}
                fold(4, 0, -1.0);
                fold(5, 3, 2.0);  // x_n = 2 x_{n-1} - x_{n-2}
                fold(5, 1, -1.0);
            }
            dvn[4] = dvn[5] = 0.0;
        }

        // chain stencil columns through the frozen directions of each node
        if (i > 0) out.lo[i] = -dtau * (dvn[0] * nrm.P[i - 1] - dvn[1] * nrm.S[i - 1]);
        out.di[i] = 1.0 - dtau * (dvn[2] * nrm.P[i] - dvn[3] * nrm.S[i]);
        if (i + 1 < n) out.up[i] = -dtau * (dvn[4] * nrm.P[i + 1] - dvn[5] * nrm.S[i + 1]);

        out.gvec[i] = dtau * N0 / Q;
    }
    return out;
}

// monotone cubic interpolation (Fritsch-Carlson slopes)
struct Pchip {
    std::vector<double> t, v, m;

    Pchip(std::vector<double> tt, std::vector<double> vv) : t(std::move(tt)), v(std::move(vv)) {
        const int n = static_cast<int>(t.size());
        m.assign(n, 0.0);
        std::vector<double> d(n - 1), h(n - 1);
        for (int k = 0; k + 1 < n; ++k) {
            h[k] = t[k + 1] - t[k];
            d[k] = (v[k + 1] - v[k]) / h[k];
        }
        for (int k = 1; k + 1 < n; ++k) {
            if (d[k - 1] * d[k] <= 0.0) {
                m[k] = 0.0;
            } else {
                const double w1 = 2.0 * h[k] + h[k - 1];
                const double w2 = h[k] + 2.0 * h[k - 1];
                m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
            }
        }
        auto end_slope = [](double h0, double h1, double d0, double d1) {
            double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (s * d0 <= 0.0) return 0.0;
            if (std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
            return s;
        };
        m[0] = end_slope(h[0], h[1], d[0], d[1]);
        m[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    }

    double operator()(double x) const {
        const int n = static_cast<int>(t.size());
        int k = static_cast<int>(std::upper_bound(t.begin(), t.end(), x) - t.begin()) - 1;
        k = std::clamp(k, 0, n - 2);
        const double h = t[k + 1] - t[k];
        const double s = (x - t[k]) / h;
        const double s2 = s * s, s3 = s2 * s;
        return v[k] * (2 * s3 - 3 * s2 + 1) + h * m[k] * (s3 - 2 * s2 + s)
               + v[k + 1] * (-2 * s3 + 3 * s2) + h * m[k + 1] * (s3 - s2);
    }
};

// pole height extrapolated from the two nearest nodes (even x3 in r^2),
// clamped to stay near the end node
double pole_height(double r0, double x0, double r1, double x1) {
    const double denom = r1 * r1 - r0 * r0;
    double xp = x0;
    if (std::abs(denom) > 1e-14 * std::max(1.0, r1 * r1))
        xp = x0 + (x0 - x1) * r0 * r0 / denom;
    const double bound = 2.0 * (std::abs(x1 - x0) + r0);
    return std::clamp(xp, x0 - bound, x0 + bound);
}

} // namespace

void InterfaceCurve::validate() const {
    if (n() < 16)
        throw geometry_error("InterfaceCurve: need at least 16 nodes");
    if (r.size() != x3.size())
        throw geometry_error("InterfaceCurve: r and x3 lengths differ");
    for (int i = 0; i < n(); ++i)
        if (!(r[i] > 0.0))
            throw geometry_error("InterfaceCurve: nonpositive radius at node " + std::to_string(i));
    if (topology == Topology::ClosedInclusion) {
        for (int i = 0; i + 1 < n(); ++i)
            if (!(x3[i + 1] > x3[i]))
                throw geometry_error("InterfaceCurve: x3 must increase along s");
    }
}

CurveDerivs derivatives(const InterfaceCurve& c) {
    const int n = c.n();
    const double ds = c.ds();
    const Ghosts g = ghosts(c);
    CurveDerivs d;
    d.rp.resize(n); d.xp.resize(n); d.rpp.resize(n); d.xpp.resize(n); d.jac.resize(n);
    for (int i = 0; i < n; ++i) {
        const Stencil st = stencil_at(c, g, i);
        d.rp[i] = (st.rp - st.rm) / (2.0 * ds);
        d.xp[i] = (st.xp - st.xm) / (2.0 * ds);
        d.rpp[i] = (st.rp - 2.0 * st.r0 + st.rm) / (ds * ds);
        d.xpp[i] = (st.xp - 2.0 * st.x0 + st.xm) / (ds * ds);
        d.jac[i] = std::hypot(d.rp[i], d.xp[i]);
    }
    return d;
}

std::vector<double> curvature(const InterfaceCurve& c) {
    const int n = c.n();
    const double ds = c.ds();
    const Ghosts g = ghosts(c);
    std::vector<double> k(n);
    for (int i = 0; i < n; ++i)
        k[i] = node_geometry(stencil_at(c, g, i), ds).kappa;
    return k;
}

double enclosed_volume(const InterfaceCurve& c) {
    return volume_and_gradient(c, 0.0, nullptr);
}

double centroid_x3(const InterfaceCurve& c) {
    const CurveDerivs d = derivatives(c);
    const double ds = c.ds();
    double V = 0.0, M = 0.0;
    for (int i = 0; i < c.n(); ++i) {
        const double cell = kPi * c.r[i] * c.r[i] * d.xp[i] * ds;
        V += cell;
        M += cell * c.x3[i];
    }
    if (!(V > 0.0))
        throw geometry_error("centroid of a curve with nonpositive volume");
    return M / V;
}

std::vector<double> salt_density(const BrineState& state, const ModelParams& p) {
    if (state.curve.topology != Topology::ClosedInclusion)
        throw geometry_error("salt_density requires a closed inclusion");
    const double Q = volume_and_gradient(state.curve, p.delta_g, nullptr);
    if (!(Q > 0.0))
        throw geometry_error("salt_density: nonpositive enclosed volume");
    std::vector<double> N0(state.curve.n());
    for (int i = 0; i < state.curve.n(); ++i)
        N0[i] = state.total_salt * std::exp(-p.delta_g * state.curve.x3[i]) / Q;
    return N0;
}

std::vector<double> normal_velocity(const BrineState& state, const ThermalProfile& thermal,
                                    const ModelParams& p, CurvatureLaw law) {
    const std::vector<double> k = curvature(state.curve);
    const std::vector<double> N0 = salt_density(state, p);
    const double ck = curvature_coeff(law);
    std::vector<double> vn(state.curve.n());
    for (int i = 0; i < state.curve.n(); ++i)
        vn[i] = ck * k[i] + N0[i] + p.beta * thermal.at(state.curve.x3[i]);
    return vn;
}

double arclength_deviation(const InterfaceCurve& c) {
    const CurveDerivs d = derivatives(c);
    double mean = 0.0;
    for (double j : d.jac) mean += j;
    mean /= static_cast<double>(d.jac.size());
    double dev = 0.0;
    for (double j : d.jac) dev = std::max(dev, std::abs(j - mean));
    return dev / mean;
}

InterfaceCurve redistribute_arclength(const InterfaceCurve& c) {
    if (c.topology != Topology::ClosedInclusion)
        throw geometry_error("redistribute_arclength: closed curves only");
    const int n = c.n();
    const double x_lo = pole_height(c.r[0], c.x3[0], c.r[1], c.x3[1]);
    const double x_hi = pole_height(c.r[n - 1], c.x3[n - 1], c.r[n - 2], c.x3[n - 2]);

    std::vector<double> R(n + 2), X(n + 2), L(n + 2);
    R[0] = 0.0; X[0] = x_lo;
    for (int i = 0; i < n; ++i) { R[i + 1] = c.r[i]; X[i + 1] = c.x3[i]; }
    R[n + 1] = 0.0; X[n + 1] = x_hi;
    L[0] = 0.0;
    for (int i = 1; i < n + 2; ++i)
        L[i] = L[i - 1] + std::hypot(R[i] - R[i - 1], X[i] - X[i - 1]);

    const Pchip pr(L, R), px(L, X);
    InterfaceCurve out;
    out.topology = c.topology;
    out.r.resize(n);
    out.x3.resize(n);
    const double total = L[n + 1];
    for (int i = 0; i < n; ++i) {
        const double l = (i + 0.5) * total / n;
        out.r[i] = pr(l);
        out.x3[i] = px(l);
        if (!(out.r[i] > 0.0))
            throw geometry_error("redistribute_arclength produced a nonpositive radius");
    }
    return out;
}

double balance_total_salt(const InterfaceCurve& c, const ThermalProfile& thermal,
                          const ModelParams& p, CurvatureLaw law) {
    const std::vector<double> k = curvature(c);
    const double Q = volume_and_gradient(c, p.delta_g, nullptr);
    double mean_k = 0.0, mean_T = 0.0, mean_E = 0.0;
    for (int i = 0; i < c.n(); ++i) {
        mean_k += k[i];
        mean_T += thermal.at(c.x3[i]);
        mean_E += std::exp(-p.delta_g * c.x3[i]);
    }
    const double n = static_cast<double>(c.n());
    mean_k /= n; mean_T /= n; mean_E /= n;
    const double NT = -Q * (curvature_coeff(law) * mean_k + p.beta * mean_T) / mean_E;
    if (!(NT > 0.0))
        throw solver_error("balance_total_salt: no positive salt balance for this state", 0.0);
    return NT;
}

StepResult step_backward_euler(const BrineState& state, const ThermalProfile& thermal,
                               double dtau, const ModelParams& p, CurvatureLaw law) {
    if (!(dtau > 0.0))
        throw domain_error("step_backward_euler: dtau must be positive");
    if (state.curve.topology != Topology::ClosedInclusion)
        throw geometry_error("step_backward_euler requires a closed inclusion");

    const int n = state.curve.n();
    const FrozenNormals nrm = frozen_normals(state.curve);
    std::vector<double> eta(n, 0.0);
    InterfaceCurve trial = state.curve;
    double best_res = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;

    auto admissible = [&](const InterfaceCurve& c) {
        for (int i = 0; i < n; ++i)
            if (!(c.r[i] > 0.0) || !std::isfinite(c.r[i]) || !std::isfinite(c.x3[i]))
                return false;
        return true;
    };
    auto residual_norm = [&](const std::vector<double>& cand_eta, bool& ok) {
        const InterfaceCurve cand = displaced_curve(state.curve, nrm, cand_eta);
        if (!admissible(cand)) {
            ok = false;
            return std::numeric_limits<double>::infinity();
        }
        try {
            const Assembled sys = assemble(state, nrm, cand, cand_eta, thermal, dtau, p, law);
            double r = 0.0;
            for (double f : sys.F) r = std::max(r, std::abs(f));
            ok = true;
            return r;
        } catch (const geometry_error&) {
            ok = false;
            return std::numeric_limits<double>::infinity();
        }
    };

    for (int it = 0; it <= p.newton_max_iter; ++it) {
        Assembled sys = assemble(state, nrm, trial, eta, thermal, dtau, p, law);
        double res = 0.0;
        for (double f : sys.F) res = std::max(res, std::abs(f));
        best_res = std::min(best_res, res);
        iterations = it;
        if (res < p.newton_tol) {
            converged = true;
            break;
        }
        if (it == p.newton_max_iter) break;

        // Sherman-Morrison on top of the tridiagonal factorization
        std::vector<double> a(sys.F);
        for (double& v : a) v = -v;
        std::vector<double> h(sys.gvec);
        tridiag_solve(sys.lo, sys.di, sys.up, {&a, &h});
        double wa = 0.0, wh = 0.0;
        for (int j = 0; j < n; ++j) {
            wa += sys.wvec[j] * a[j];
            wh += sys.wvec[j] * h[j];
        }
        const double denom = 1.0 + wh;
        if (denom == 0.0 || !std::isfinite(denom))
            throw solver_error("step_backward_euler: singular volume coupling", best_res);
        std::vector<double> deta(n);
        for (int j = 0; j < n; ++j)
            deta[j] = a[j] - h[j] * wa / denom;

        // backtracking line search: accept the first damped step that
        // decreases the residual on an admissible curve
        double lambda = 1.0;
        bool accepted = false;
        std::vector<double> cand(n);
        while (lambda >= 1.0 / 1024.0) {
            for (int j = 0; j < n; ++j)
                cand[j] = eta[j] + lambda * deta[j];
            bool ok = false;
            const double cres = residual_norm(cand, ok);
            if (ok && cres < res * (1.0 - 0.25 * lambda)) {
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted)
            throw solver_error("step_backward_euler: Newton line search stalled", best_res);
        eta.swap(cand);
        trial = displaced_curve(state.curve, nrm, eta);
    }

    if (!converged)
        throw solver_error("step_backward_euler: Newton did not converge", best_res);

    StepResult out;
    out.state.curve = std::move(trial);
    out.state.total_salt = state.total_salt;
    out.state.tau = state.tau + dtau;
    out.newton_iterations = iterations;

    out.pinch = detect_pinch(out.state, p);
    if (!out.pinch && arclength_deviation(out.state.curve) > 0.005)
        out.state.curve = redistribute_arclength(out.state.curve);
    return out;
}

std::optional<PinchEvent> detect_pinch(const BrineState& state, const ModelParams& p) {
    const InterfaceCurve& c = state.curve;
    const int n = c.n();
    int best = -1;
    for (int i = 2; i <= n - 3; ++i) {
        if (c.r[i] >= p.pinch_radius) continue;
        if (c.r[i] <= c.r[i - 1] && c.r[i] <= c.r[i + 1]) {
            if (best < 0 || c.r[i] < c.r[best]) best = i;
        }
    }
    if (best < 0) return std::nullopt;

    // quadratic vertex through the three nodes around the minimum
    const double ds = c.ds();
    const double rm = c.r[best - 1], r0 = c.r[best], rp = c.r[best + 1];
    const double curv2 = rm - 2.0 * r0 + rp;
    double offset = 0.0;
    if (curv2 > 0.0)
        offset = 0.5 * (rm - rp) / curv2;
    offset = std::clamp(offset, -1.0, 1.0);

    PinchEvent ev;
    ev.tau = state.tau;
    ev.s_location = c.s(best) + offset * ds;
    const double xm = c.x3[best - 1], x0 = c.x3[best], xp = c.x3[best + 1];
    ev.x3_location = x0 + 0.5 * (xp - xm) * offset + 0.5 * (xm - 2.0 * x0 + xp) * offset * offset;
    return ev;
}

double drift_velocity(std::span<const BrineState> trajectory) {
    if (trajectory.size() < 3)
        throw domain_error("drift_velocity: need at least three frames");
    double st = 0, sx = 0, stt = 0, stx = 0;
    const double m = static_cast<double>(trajectory.size());
    for (const BrineState& b : trajectory) {
        const double t = b.tau, x = centroid_x3(b.curve);
        st += t; sx += x; stt += t * t; stx += t * x;
    }
    const double denom = m * stt - st * st;
    if (denom == 0.0)
        throw domain_error("drift_velocity: degenerate tau samples");
    return (m * stx - st * sx) / denom;
}

InterfaceCurve make_sphere(double radius, double x3_center, int n) {
    if (!(radius > 0.0)) throw geometry_error("make_sphere: radius must be positive");
    InterfaceCurve c;
    c.topology = Topology::ClosedInclusion;
    c.r.resize(n);
    c.x3.resize(n);
    for (int i = 0; i < n; ++i) {
        const double s = c.s(i);
        c.r[i] = radius * std::sin(kPi * s);
        c.x3[i] = x3_center - radius * std::cos(kPi * s);
    }
    return c;
}

InterfaceCurve make_cylinder(double radius, double length, int n) {
    InterfaceCurve c;
    c.topology = Topology::OpenPore;
    c.r.assign(n, radius);
    c.x3.resize(n);
    for (int i = 0; i < n; ++i)
        c.x3[i] = (i + 0.5) * length / n;
    return c;
}

InterfaceCurve make_capsule(double length, double radius, double x3_center, int n,
                            int blend_cells) {
    if (!(radius > 0.0 && length > 0.0))
        throw geometry_error("make_capsule: need positive dimensions");
    const double Lgen = kPi * radius + length; // two quarter-circle caps plus wall
    const double l1 = 0.5 * kPi * radius;      // bottom join
    const double l2 = l1 + length;             // top join
    const double w = blend_cells * Lgen / n;   // blend width at each join

    // turning rate of the generating curve: 1/radius on the caps, 0 on the
    // wall, linear ramps of width w centered at the joins (area-preserving,
    // so the curve still closes on the axis)
    auto turn = [&](double l) {
        double k = 0.0;
        if (l < l1 - 0.5 * w) k = 1.0 / radius;
        else if (l <= l1 + 0.5 * w) k = (1.0 - (l - (l1 - 0.5 * w)) / w) / radius;
        else if (l < l2 - 0.5 * w) k = 0.0;
        else if (l <= l2 + 0.5 * w) k = ((l - (l2 - 0.5 * w)) / w) / radius;
        else k = 1.0 / radius;
        return k;
    };

    // integrate angle and position on a fine grid (midpoint rule)
    const int sub = 64;
    const int m = sub * n;
    const double hf = Lgen / m;
    std::vector<double> rf(m + 1, 0.0), xf(m + 1, 0.0);
    double psi = 0.0, r = 0.0, x = 0.0;
    for (int k = 0; k < m; ++k) {
        const double lm = (k + 0.5) * hf;
        const double psi_half = psi + 0.5 * hf * turn(lm);
        r += hf * std::cos(psi_half);
        x += hf * std::sin(psi_half);
        psi += hf * turn(lm);
        rf[k + 1] = r;
        xf[k + 1] = x;
    }

    InterfaceCurve c;
    c.topology = Topology::ClosedInclusion;
    c.r.resize(n);
    c.x3.resize(n);
    const double x_mid = 0.5 * xf[m];
    for (int i = 0; i < n; ++i) {
        const double l = (i + 0.5) * Lgen / n;
        const double idx = l / hf;
        const int k = std::clamp(static_cast<int>(idx), 0, m - 1);
        const double f = idx - k;
        c.r[i] = rf[k] * (1.0 - f) + rf[k + 1] * f;
        c.x3[i] = xf[k] * (1.0 - f) + xf[k + 1] * f;
    }
    // enforce exact up-down symmetry, then center
    for (int i = 0; i < n / 2; ++i) {
        const int j = n - 1 - i;
        const double rs = 0.5 * (c.r[i] + c.r[j]);
        const double xs = 0.5 * (c.x3[i] - c.x3[j]);
        c.r[i] = c.r[j] = rs;
        c.x3[i] = x_mid + xs;
        c.x3[j] = x_mid - xs;
    }
    for (int i = 0; i < n; ++i)
        c.x3[i] += x3_center - x_mid;
    return c;
}

namespace detail {

std::vector<double> implicit_residual(const BrineState& prev, const std::vector<double>& eta,
                                      const ThermalProfile& thermal, double dtau,
                                      const ModelParams& p) {
    const FrozenNormals nrm = frozen_normals(prev.curve);
    const InterfaceCurve trial = displaced_curve(prev.curve, nrm, eta);
    return assemble(prev, nrm, trial, eta, thermal, dtau, p, CurvatureLaw::SumEvolution).F;
}

std::vector<double> implicit_jacobian_dense(const BrineState& prev, const std::vector<double>& eta,
                                            const ThermalProfile& thermal, double dtau,
                                            const ModelParams& p) {
    const FrozenNormals nrm = frozen_normals(prev.curve);
    const InterfaceCurve trial = displaced_curve(prev.curve, nrm, eta);
    const Assembled sys = assemble(prev, nrm, trial, eta, thermal, dtau, p,
                                   CurvatureLaw::SumEvolution);
    const int n = trial.n();
    std::vector<double> J(n * n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (i > 0) J[i * n + i - 1] = sys.lo[i];
        J[i * n + i] = sys.di[i];
        if (i + 1 < n) J[i * n + i + 1] = sys.up[i];
    }
    for (int row = 0; row < n; ++row)
        for (int col = 0; col < n; ++col)
            J[row * n + col] += sys.gvec[row] * sys.wvec[col];
    return J;
}

} // namespace detail

} // namespace brine::stefan
