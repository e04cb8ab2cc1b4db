#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "pdegen/fft.hpp"
#include "pdegen/grid.hpp"
#include "pdegen/stepping.hpp"

namespace pdegen::solver {

struct AdvectionParams {
    double beta = 1.0;  // constant advection speed
    double cfl = kDefaultCflAdvective;
};

/// Exact periodic advection solution u(t, x) = u0(x - beta t), evaluated by a
/// spectral phase shift so non-integer cell shifts are handled exactly for
/// band-limited data.
inline Field advect_exact(const Field& u0, double beta, double t) {
    if (u0.grid.dim != 1) throw ConfigError("advect_exact needs a 1D field");
    const double shift = beta * t;
    if (shift == 0.0) return u0;

    const std::size_t n = u0.grid.n[0];
    const double L = u0.grid.length(0);
    auto spec = fft::forward(u0, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double k = 2.0 * std::numbers::pi * double(fft::wavenumber(i, n)) / L;
        spec[i] *= std::exp(std::complex<double>(0.0, -k * shift));
    }
    fft::transform(spec, fft::grid_shape(u0.grid), FFTW_BACKWARD);
    Field out(u0.grid, 1);
    for (std::size_t i = 0; i < n; ++i) out(i) = spec[i].real() / double(n);
    return out;
}

namespace detail {

/// Flux-form second-order (Beam-Warming type) upwind RHS for du/dt = -beta du/dx,
/// periodic. For beta > 0 the face flux is beta (3 u_i - u_{i-1}) / 2.
inline void advection_rhs(const std::vector<double>& u, double beta, double dx,
                          std::vector<double>& dudt) {
    const std::size_t n = u.size();
    auto wrap = [n](std::ptrdiff_t i) { return std::size_t((i % std::ptrdiff_t(n) + std::ptrdiff_t(n)) % std::ptrdiff_t(n)); };
    std::vector<double> flux(n);  // flux[i] = F_{i+1/2}
    for (std::size_t i = 0; i < n; ++i) {
        if (beta >= 0.0)
            flux[i] = beta * 0.5 * (3.0 * u[i] - u[wrap(std::ptrdiff_t(i) - 1)]);
        else
            flux[i] = beta * 0.5 * (3.0 * u[wrap(std::ptrdiff_t(i) + 1)] - u[wrap(std::ptrdiff_t(i) + 2)]);
    }
    for (std::size_t i = 0; i < n; ++i)
        dudt[i] = -(flux[i] - flux[i == 0 ? n - 1 : i - 1]) / dx;
}

}  // namespace detail

/// Second-order upwind advection solver (flux form, SSP-RK2), periodic.
inline Trajectory solve_advection(const Field& u0, const AdvectionParams& params,
                                  const TimeAxis& time) {
    if (u0.grid.dim != 1) throw ConfigError("solve_advection needs a 1D field");
    const double dx = u0.grid.dx(0);
    const std::size_t n = u0.grid.n[0];

    Trajectory traj;
    traj.time_axis = time;
    traj.frames.reserve(time.n_snapshots);

    std::vector<double> u(u0.values);
    std::vector<double> rhs(n), u1(n);
    const double dt_stable = params.beta == 0.0 ? time.snapshot_dt()
                                                : cfl_timestep(dx, std::abs(params.beta), 0.0, params.cfl);

    march_snapshots(
        time, u, [&](const std::vector<double>&) { return dt_stable; },
        [&](std::vector<double>& s, double dt) {
            detail::advection_rhs(s, params.beta, dx, rhs);
            for (std::size_t i = 0; i < n; ++i) u1[i] = s[i] + dt * rhs[i];
            detail::advection_rhs(u1, params.beta, dx, rhs);
            for (std::size_t i = 0; i < n; ++i) s[i] = 0.5 * (s[i] + u1[i] + dt * rhs[i]);
        },
        [&](const std::vector<double>& s, std::size_t) {
            Field f(u0.grid, 1);
            f.values = s;
            f.require_finite("advection frame");
            traj.frames.push_back(std::move(f));
        });
    return traj;
}

}  // namespace pdegen::solver
