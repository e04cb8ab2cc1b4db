#pragma once

#include <cmath>
#include <vector>

#include "pdegen/grid.hpp"
#include "pdegen/stepping.hpp"

namespace pdegen::solver {

/// Diffusion-sorption du/dt = D/R(u) d2u/dx2 on (0,1) with Freundlich
/// retardation; u(t,0) = 1 and u(t,1) = D dx u(t,1).
struct SorptionParams {
    double porosity = 0.29;          // phi
    double bulk_density = 2880.0;    // rho_s
    double freundlich_k = 3.5e-4;    // k
    double freundlich_nf = 0.874;    // n_f
    double diffusion = 5e-4;         // D
    double u_min = 1e-8;             // clamp below; R(u) is singular at u = 0
    double cfl_diff = kDefaultCflDiffusive;
};

/// Freundlich retardation factor R(u) = 1 + (1-phi)/phi rho_s k n_f u^(nf-1).
/// u is clamped below at u_min since nf < 1 makes R singular at u = 0.
inline double freundlich_retardation(double u, const SorptionParams& p) {
    if (u < 0.0) throw ConfigError("freundlich_retardation needs u >= 0");
    double uc = std::max(u, p.u_min);
    return 1.0 + (1.0 - p.porosity) / p.porosity * p.bulk_density * p.freundlich_k *
                     p.freundlich_nf * std::pow(uc, p.freundlich_nf - 1.0);
}

namespace detail {

/// Right-boundary value implied by the Cauchy condition u(1) = D dx u(1),
/// with the derivative taken as a one-sided 2nd-order difference over the
/// last three cell centers.
inline double sorption_right_boundary(const std::vector<double>& u, double dx,
                                      const SorptionParams& p) {
    const std::size_t n = u.size();
    double dudx = (2.0 * u[n - 1] - 3.0 * u[n - 2] + u[n - 3]) / dx;
    return p.diffusion * dudx;
}

inline void sorption_rhs(const std::vector<double>& u, double dx, const SorptionParams& p,
                         std::vector<double>& dudt) {
    const std::size_t n = u.size();
    auto deff = [&](double uface) {
        return p.diffusion / freundlich_retardation(std::max(uface, 0.0), p);
    };
    // interior face fluxes q_{i+1/2} = Deff * du/dx
    std::vector<double> q(n + 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        q[i + 1] = deff(0.5 * (u[i] + u[i + 1])) * (u[i + 1] - u[i]) / dx;
    // left face: Dirichlet u_b = 1, one-sided 2nd-order derivative
    const double ub_left = 1.0;
    q[0] = deff(ub_left) * (9.0 * u[0] - u[1] - 8.0 * ub_left) / (3.0 * dx);
    // right face: Cauchy value, derivative extrapolated from interior cells
    double ub_right = sorption_right_boundary(u, dx, p);
    q[n] = deff(ub_right) * (2.0 * u[n - 1] - 3.0 * u[n - 2] + u[n - 3]) / dx;
    for (std::size_t i = 0; i < n; ++i) dudt[i] = (q[i + 1] - q[i]) / dx;
}

}  // namespace detail

inline Trajectory solve_diffsorp(const Field& u0, const SorptionParams& params,
                                 const TimeAxis& time) {
    if (u0.grid.dim != 1) throw ConfigError("solve_diffsorp needs a 1D field");
    const double dx = u0.grid.dx(0);
    const std::size_t n = u0.grid.n[0];
    if (n < 4) throw ConfigError("solve_diffsorp needs >= 4 cells");

    Trajectory traj;
    traj.time_axis = time;
    traj.frames.reserve(time.n_snapshots);

    std::vector<double> u(u0.values);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    auto dt_of = [&](const std::vector<double>& s) {
        // stability limit from the largest current face diffusivity
        double umax = 0.0;
        for (double v : s) umax = std::max(umax, v);
        double dmax = params.diffusion / freundlich_retardation(std::max(umax, 0.0), params);
        return cfl_timestep(dx, 0.0, std::max(dmax, 1e-300), kDefaultCflAdvective, params.cfl_diff);
    };

    march_snapshots(
        time, u, dt_of,
        [&](std::vector<double>& s, double dt) {
            detail::sorption_rhs(s, dx, params, k1);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + 0.5 * dt * k1[i];
            detail::sorption_rhs(tmp, dx, params, k2);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + 0.5 * dt * k2[i];
            detail::sorption_rhs(tmp, dx, params, k3);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + dt * k3[i];
            detail::sorption_rhs(tmp, dx, params, k4);
            for (std::size_t i = 0; i < n; ++i)
                s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        },
        [&](const std::vector<double>& s, std::size_t) {
            Field f(u0.grid, 1);
            f.values = s;
            f.require_finite("diffsorp frame");
            traj.frames.push_back(std::move(f));
        });
    return traj;
}

}  // namespace pdegen::solver
