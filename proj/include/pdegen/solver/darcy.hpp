#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "pdegen/grid.hpp"
#include "pdegen/stepping.hpp"

namespace pdegen::solver {

/// Steady Darcy flow -div(a grad u) = beta on the unit square, u = 0 on the
/// boundary, solved by explicit pseudo-time marching.
struct DarcyParams {
    double beta = 1.0;
    double cfl_diff = kDefaultCflDiffusive;
    double tol = 1e-6;
    std::size_t max_steps = 1'000'000;
};

namespace detail {

/// FV residual div(a grad u) + beta with harmonic face averaging of a and
/// Dirichlet u = 0 walls (ghost value -u).
inline void darcy_residual(const std::vector<double>& u, const Field& a, std::size_t nx,
                           std::size_t ny, double dx2, double beta, std::vector<double>& out) {
    auto harmonic = [](double x, double y) { return 2.0 * x * y / (x + y); };
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
            std::size_t c = i * ny + j;
            double ac = a(c), uc = u[c];
            double acc = 0.0;
            // Dirichlet wall: ghost value -u, ghost coefficient a_c
            double axm = i == 0 ? ac : a((i - 1) * ny + j);
            double uxm = i == 0 ? -uc : u[(i - 1) * ny + j];
            acc += harmonic(ac, axm) * (uxm - uc);
            double axp = i == nx - 1 ? ac : a((i + 1) * ny + j);
            double uxp = i == nx - 1 ? -uc : u[(i + 1) * ny + j];
            acc += harmonic(ac, axp) * (uxp - uc);
            double aym = j == 0 ? ac : a(i * ny + j - 1);
            double uym = j == 0 ? -uc : u[i * ny + j - 1];
            acc += harmonic(ac, aym) * (uym - uc);
            double ayp = j == ny - 1 ? ac : a(i * ny + j + 1);
            double uyp = j == ny - 1 ? -uc : u[i * ny + j + 1];
            acc += harmonic(ac, ayp) * (uyp - uc);
            out[c] = acc / dx2 + beta;
        }
}

}  // namespace detail

/// Marches du/dt = div(a grad u) + beta from u = 0 until the relative update
/// per unit pseudo-time falls below tol. Returns a 2-channel field holding
/// the coefficient a (channel 0) and the steady solution u (channel 1).
inline Field solve_darcy_steady(const Field& a_field, const DarcyParams& params) {
    const Grid& grid = a_field.grid;
    if (grid.dim != 2) throw ConfigError("solve_darcy_steady needs a 2D grid");
    double a_max = 0.0;
    for (double v : a_field.values) {
        if (!(v > 0.0)) throw ConfigError("darcy coefficient must be positive everywhere");
        a_max = std::max(a_max, v);
    }
    const std::size_t nx = grid.n[0], ny = grid.n[1];
    const double dx = grid.dx(0);
    const double dx2 = dx * dx;
    // factor 2 for the two spatial dimensions in the explicit stability limit
    const double dt = cfl_timestep(dx, 0.0, 2.0 * a_max, kDefaultCflAdvective, params.cfl_diff);

    std::vector<double> u(grid.cells(), 0.0), res(grid.cells());
    const double eps = 1e-300;
    bool converged = false;
    for (std::size_t step = 0; step < params.max_steps; ++step) {
        detail::darcy_residual(u, a_field, nx, ny, dx2, params.beta, res);
        double du_max = 0.0, u_max = 0.0;
        for (std::size_t c = 0; c < u.size(); ++c) {
            double du = dt * res[c];
            u[c] += du;
            du_max = std::max(du_max, std::abs(du));
            u_max = std::max(u_max, std::abs(u[c]));
        }
        if (du_max / (dt * u_max + eps) < params.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        detail::darcy_residual(u, a_field, nx, ny, dx2, params.beta, res);
        double rmax = 0.0;
        for (double r : res) rmax = std::max(rmax, std::abs(r));
        throw SampleRejected("darcy pseudo-time did not converge, residual_inf = " +
                             std::to_string(rmax));
    }

    Field out(grid, 2);
    for (std::size_t c = 0; c < grid.cells(); ++c) {
        out(c, 0) = a_field(c);
        out(c, 1) = u[c];
    }
    out.require_finite("darcy solution");
    return out;
}

/// Max-norm of the steady residual div(a grad u) + beta, for certification.
inline double darcy_residual_inf(const Field& a_u, double beta) {
    const Grid& grid = a_u.grid;
    std::vector<double> u(grid.cells());
    Field a(grid, 1);
    for (std::size_t c = 0; c < grid.cells(); ++c) {
        a(c) = a_u(c, 0);
        u[c] = a_u(c, 1);
    }
    std::vector<double> res(grid.cells());
    detail::darcy_residual(u, a, grid.n[0], grid.n[1], grid.dx(0) * grid.dx(0), beta, res);
    double rmax = 0.0;
    for (double r : res) rmax = std::max(rmax, std::abs(r));
    return rmax;
}

}  // namespace pdegen::solver
