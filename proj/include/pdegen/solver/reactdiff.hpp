#pragma once

#include <cmath>
#include <vector>

#include "pdegen/grid.hpp"
#include "pdegen/stepping.hpp"

namespace pdegen::solver {

/// 1D diffusion-reaction du/dt = nu d2u/dx2 + rho u (1 - u), periodic.
struct ReactDiffParams {
    double nu = 0.5;
    double rho = 1.0;
    double cfl_diff = kDefaultCflDiffusive;
};

/// Exact (piecewise-exact solution) update of the logistic source
/// du/dt = rho u (1 - u) over an interval dt. Fixed points 0 and 1 are exact.
inline double pes_logistic_step(double u, double rho, double dt) {
    // u' = u e^{rho dt} / (1 - u + u e^{rho dt}), written with e^{-rho dt}
    // to stay finite for large rho dt.
    double em = std::exp(-rho * dt);
    return u / (u + (1.0 - u) * em);
}

inline Trajectory solve_diffreact1d(const Field& u0, const ReactDiffParams& params,
                                    const TimeAxis& time) {
    if (u0.grid.dim != 1) throw ConfigError("solve_diffreact1d needs a 1D field");
    const double dx = u0.grid.dx(0);
    const std::size_t n = u0.grid.n[0];

    Trajectory traj;
    traj.time_axis = time;
    traj.frames.reserve(time.n_snapshots);

    std::vector<double> u(u0.values);
    std::vector<double> lap(n), u1(n);

    double dt_stable;
    if (params.nu > 0.0)
        dt_stable = cfl_timestep(dx, 0.0, params.nu, kDefaultCflAdvective, params.cfl_diff);
    else if (params.rho > 0.0)
        dt_stable = std::min(time.snapshot_dt(), 0.25 / params.rho);
    else
        dt_stable = time.snapshot_dt();

    auto laplacian = [&](const std::vector<double>& s, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) {
            double sm = s[i == 0 ? n - 1 : i - 1];
            double sp = s[i == n - 1 ? 0 : i + 1];
            out[i] = (sp - 2.0 * s[i] + sm) / (dx * dx);
        }
    };

    march_snapshots(
        time, u, [&](const std::vector<double>&) { return dt_stable; },
        [&](std::vector<double>& s, double dt) {
            // Strang split: half source (exact), full diffusion (Heun), half source.
            for (double& v : s) v = pes_logistic_step(v, params.rho, 0.5 * dt);
            laplacian(s, lap);
            for (std::size_t i = 0; i < n; ++i) u1[i] = s[i] + dt * params.nu * lap[i];
            laplacian(u1, lap);
            for (std::size_t i = 0; i < n; ++i)
                s[i] = 0.5 * (s[i] + u1[i] + dt * params.nu * lap[i]);
            for (double& v : s) v = pes_logistic_step(v, params.rho, 0.5 * dt);
        },
        [&](const std::vector<double>& s, std::size_t) {
            Field f(u0.grid, 1);
            f.values = s;
            f.require_finite("diffreact frame");
            traj.frames.push_back(std::move(f));
        });
    return traj;
}

}  // namespace pdegen::solver
