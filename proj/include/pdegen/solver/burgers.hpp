#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "pdegen/grid.hpp"
#include "pdegen/solver/euler.hpp"
#include "pdegen/stepping.hpp"

namespace pdegen::solver {

/// Burgers equation du/dt + d(u^2/2)/dx = (nu/pi) d2u/dx2, periodic.
struct BurgersParams {
    double nu = 0.01;  // the diffusion coefficient in the PDE is nu/pi
    double cfl_adv = kDefaultCflAdvective;
    double cfl_diff = kDefaultCflDiffusive;

    double diffusivity() const { return nu / std::numbers::pi; }
    /// Reynolds-like diagnostic R = pi u L / nu.
    double reynolds(double u, double L) const { return std::numbers::pi * u * L / nu; }
};

namespace detail {

inline double burgers_godunov_flux(double uL, double uR) {
    // Exact Riemann flux for the convex flux u^2/2.
    auto f = [](double u) { return 0.5 * u * u; };
    if (uL <= uR) {
        if (uL >= 0.0) return f(uL);
        if (uR <= 0.0) return f(uR);
        return 0.0;  // transonic rarefaction
    }
    return std::max(f(uL), f(uR));
}

/// Conservative RHS: minmod-limited MUSCL reconstruction, Godunov flux,
/// plus central-difference diffusion.
inline void burgers_rhs(const std::vector<double>& u, double diff, double dx,
                        std::vector<double>& dudt) {
    const std::size_t n = u.size();
    auto at = [&](std::ptrdiff_t i) {
        return u[std::size_t((i % std::ptrdiff_t(n) + std::ptrdiff_t(n)) % std::ptrdiff_t(n))];
    };
    std::vector<double> flux(n);  // flux[i] = F_{i+1/2}
    for (std::size_t i = 0; i < n; ++i) {
        std::ptrdiff_t s = std::ptrdiff_t(i);
        double um = at(s - 1), u0 = at(s), u1 = at(s + 1), up = at(s + 2);
        double uL = u0 + 0.5 * minmod(u0 - um, u1 - u0);
        double uR = u1 - 0.5 * minmod(u1 - u0, up - u1);
        flux[i] = burgers_godunov_flux(uL, uR);
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::ptrdiff_t s = std::ptrdiff_t(i);
        dudt[i] = -(flux[i] - flux[i == 0 ? n - 1 : i - 1]) / dx +
                  diff * (at(s + 1) - 2.0 * u[i] + at(s - 1)) / (dx * dx);
    }
}

}  // namespace detail

inline Trajectory solve_burgers(const Field& u0, const BurgersParams& params,
                                const TimeAxis& time) {
    if (u0.grid.dim != 1) throw ConfigError("solve_burgers needs a 1D field");
    if (!(params.nu > 0.0)) throw ConfigError("burgers nu must be positive");
    const double dx = u0.grid.dx(0);
    const std::size_t n = u0.grid.n[0];
    const double diff = params.diffusivity();

    Trajectory traj;
    traj.time_axis = time;
    traj.frames.reserve(time.n_snapshots);

    std::vector<double> u(u0.values);
    std::vector<double> rhs(n), u1(n);

    auto dt_of = [&](const std::vector<double>& s) {
        double umax = 0.0;
        for (double v : s) umax = std::max(umax, std::abs(v));
        return cfl_timestep(dx, umax, diff, params.cfl_adv, params.cfl_diff);
    };
    march_snapshots(
        time, u, dt_of,
        [&](std::vector<double>& s, double dt) {
            detail::burgers_rhs(s, diff, dx, rhs);
            for (std::size_t i = 0; i < n; ++i) u1[i] = s[i] + dt * rhs[i];
            detail::burgers_rhs(u1, diff, dx, rhs);
            for (std::size_t i = 0; i < n; ++i) s[i] = 0.5 * (s[i] + u1[i] + dt * rhs[i]);
        },
        [&](const std::vector<double>& s, std::size_t) {
            Field f(u0.grid, 1);
            f.values = s;
            f.require_finite("burgers frame");
            traj.frames.push_back(std::move(f));
        });
    return traj;
}

}  // namespace pdegen::solver
