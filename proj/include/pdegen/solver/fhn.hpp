#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "pdegen/grid.hpp"
#include "pdegen/stepping.hpp"

namespace pdegen::solver {

/// 2D FitzHugh-Nagumo diffusion-reaction: activator u, inhibitor v.
struct FhnParams {
    double du = 1e-3;  // activator diffusivity
    double dv = 5e-3;  // inhibitor diffusivity
    double k = 5e-3;   // reaction constant
    double cfl_diff = kDefaultCflDiffusive;
    bool reactions_enabled = true;
};

/// R_u = u - u^3 - k - v, R_v = u - v.
inline std::pair<double, double> fhn_reaction(double u, double v, const FhnParams& p) {
    return {u - u * u * u - p.k - v, u - v};
}

namespace detail {

/// 5-point FV Laplacian with zero-flux (ghost copy) walls, channel c of a
/// 2-channel (u, v) state stored like Field values.
inline void fhn_rhs(const std::vector<double>& s, std::size_t nx, std::size_t ny, double dx2,
                    const FhnParams& p, std::vector<double>& out) {
    auto at = [&](std::size_t i, std::size_t j, std::size_t c) {
        return s[(i * ny + j) * 2 + c];
    };
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
            double u = at(i, j, 0), v = at(i, j, 1);
            for (std::size_t c = 0; c < 2; ++c) {
                double center = at(i, j, c);
                // zero-flux: mirror across the wall reduces to copying the cell
                double xm = i == 0 ? center : at(i - 1, j, c);
                double xp = i == nx - 1 ? center : at(i + 1, j, c);
                double ym = j == 0 ? center : at(i, j - 1, c);
                double yp = j == ny - 1 ? center : at(i, j + 1, c);
                double lap = (xm + xp + ym + yp - 4.0 * center) / dx2;
                double diff = (c == 0 ? p.du : p.dv) * lap;
                double react = 0.0;
                if (p.reactions_enabled) {
                    auto [ru, rv] = fhn_reaction(u, v, p);
                    react = c == 0 ? ru : rv;
                }
                out[(i * ny + j) * 2 + c] = diff + react;
            }
        }
}

}  // namespace detail

/// RK4 integration of the coupled activator/inhibitor system with no-flow
/// Neumann walls. Returns a 2-channel trajectory (u, v).
inline Trajectory solve_diffreact2d(const Field& uv0, const FhnParams& params,
                                    const TimeAxis& time) {
    if (uv0.grid.dim != 2 || uv0.channels != 2)
        throw ConfigError("solve_diffreact2d needs a 2D, 2-channel field");
    const std::size_t nx = uv0.grid.n[0], ny = uv0.grid.n[1];
    const double dx = uv0.grid.dx(0), dy = uv0.grid.dx(1);
    const double dx2 = dx * dx;
    if (std::abs(dx - dy) > 1e-12 * dx) throw ConfigError("solve_diffreact2d needs square cells");

    Trajectory traj;
    traj.time_axis = time;
    traj.frames.reserve(time.n_snapshots);

    std::vector<double> s(uv0.values);
    const std::size_t m = s.size();
    std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m);

    // factor 2 for the two spatial dimensions in the explicit stability limit
    const double dt_stable =
        cfl_timestep(dx, 0.0, 2.0 * std::max(params.du, params.dv), kDefaultCflAdvective,
                     params.cfl_diff);

    march_snapshots(
        time, s, [&](const std::vector<double>&) { return dt_stable; },
        [&](std::vector<double>& w, double dt) {
            detail::fhn_rhs(w, nx, ny, dx2, params, k1);
            for (std::size_t i = 0; i < m; ++i) tmp[i] = w[i] + 0.5 * dt * k1[i];
            detail::fhn_rhs(tmp, nx, ny, dx2, params, k2);
            for (std::size_t i = 0; i < m; ++i) tmp[i] = w[i] + 0.5 * dt * k2[i];
            detail::fhn_rhs(tmp, nx, ny, dx2, params, k3);
            for (std::size_t i = 0; i < m; ++i) tmp[i] = w[i] + dt * k3[i];
            detail::fhn_rhs(tmp, nx, ny, dx2, params, k4);
            for (std::size_t i = 0; i < m; ++i)
                w[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        },
        [&](const std::vector<double>& w, std::size_t) {
            Field f(uv0.grid, 2);
            f.values = w;
            f.require_finite("diffreact2d frame");
            traj.frames.push_back(std::move(f));
        });
    return traj;
}

}  // namespace pdegen::solver
