#pragma once

#include <algorithm>
#include <cmath>

#include "pdegen/grid.hpp"
#include "pdegen/ic/sinusoid.hpp"
#include "pdegen/rng.hpp"
#include "pdegen/solver/euler.hpp"

namespace pdegen::ic {

/// Sampling ranges for a random 1D Riemann problem. Collapse a range to a
/// point (lo == hi) to force specific states, e.g. the Sod problem.
struct ShockTubeSpec {
    std::array<double, 2> rho_range{0.1, 1.0};
    std::array<double, 2> p_range{0.1, 1.0};
    // velocity = vfrac * local sound speed, vfrac sampled from this range
    std::array<double, 2> vfrac_range{-1.0, 1.0};
    std::array<double, 2> x_frac_range{0.2, 0.8};  // jump position / Lx
};

/// Piecewise-constant left/right states with a single jump at a sampled
/// interior position, converted to conserved variables (Gamma = 5/3).
inline solver::ConservedState shock_tube_ic(SeededRng& rng, const Grid& grid,
                                            const ShockTubeSpec& spec = {}) {
    if (grid.dim != 1) throw ConfigError("shock_tube_ic needs a 1D grid");
    auto draw = [&rng](const std::array<double, 2>& r) { return rng.uniform(r[0], r[1]); };
    double rhoL, pL, rhoR, pR;
    do {
        rhoL = draw(spec.rho_range);
        pL = draw(spec.p_range);
        rhoR = draw(spec.rho_range);
        pR = draw(spec.p_range);
    } while (!(rhoL > 0.0 && rhoR > 0.0 && pL > 0.0 && pR > 0.0));
    double vL = draw(spec.vfrac_range) * solver::sound_speed(rhoL, pL, solver::kGamma);
    double vR = draw(spec.vfrac_range) * solver::sound_speed(rhoR, pR, solver::kGamma);
    double xj = grid.lo[0] + draw(spec.x_frac_range) * grid.length(0);

    Field rho(grid, 1), vel(grid, 1), p(grid, 1);
    for (std::size_t i = 0; i < grid.n[0]; ++i) {
        bool left = grid.center(0, i) < xj;
        rho(i) = left ? rhoL : rhoR;
        vel(i) = left ? vL : vR;
        p(i) = left ? pL : pR;
    }
    return solver::conserved_from_primitive(rho, vel, p);
}

/// Radial dam-break water height on [-2.5, 2.5]^2: h = 2 inside a random
/// circle of radius r ~ U(0.3, 0.7), h = 1 outside. Momenta are zero.
inline Field radial_dam_break_ic(SeededRng& rng, const Grid& grid) {
    if (grid.dim != 2) throw ConfigError("radial_dam_break_ic needs a 2D grid");
    double r = rng.uniform(0.3, 0.7);
    Field h(grid, 1);
    for (std::size_t i = 0; i < grid.n[0]; ++i)
        for (std::size_t j = 0; j < grid.n[1]; ++j) {
            double x = grid.center(0, i), y = grid.center(1, j);
            h(h.cell_index(i, j)) = std::sqrt(x * x + y * y) < r ? 2.0 : 1.0;
        }
    return h;
}

/// Random-field compressible IC: uniform background (rho0, p0) plus
/// sinusoidal perturbations rescaled so max |drho|/rho0 = max |dp|/p0 =
/// amplitude (keeping both fields positive), and a velocity perturbation
/// rescaled to RMS speed = mach * c_s(rho0, p0).
inline solver::ConservedState random_field_cns_ic(SeededRng& rng, const Grid& grid, double mach,
                                                  double background_density = 1.0,
                                                  double background_pressure = 0.6,
                                                  double amplitude = 0.3,
                                                  const SinusoidSpec& spec = {}) {
    const int d = grid.dim;
    auto rescale_max = [](Field& f, double target) {
        double mx = 0.0;
        for (double v : f.values) mx = std::max(mx, std::abs(v));
        if (mx > 0.0 && target > 0.0)
            for (double& v : f.values) v *= target / mx;
        else
            for (double& v : f.values) v = 0.0;
    };

    Field drho = sinusoidal_superposition_nd(rng, grid, spec);
    Field dp = sinusoidal_superposition_nd(rng, grid, spec);
    rescale_max(drho, amplitude * background_density);
    rescale_max(dp, amplitude * background_pressure);

    Field vel(grid, std::size_t(d));
    double ms = 0.0;
    for (int a = 0; a < d; ++a) {
        Field dv = sinusoidal_superposition_nd(rng, grid, spec);
        for (std::size_t i = 0; i < grid.cells(); ++i) vel(i, std::size_t(a)) = dv(i);
    }
    for (std::size_t i = 0; i < grid.cells(); ++i)
        for (int a = 0; a < d; ++a) ms += vel(i, std::size_t(a)) * vel(i, std::size_t(a));
    ms /= double(grid.cells());
    double vrms = mach * solver::sound_speed(background_density, background_pressure, solver::kGamma);
    double s = ms > 0.0 && vrms > 0.0 ? vrms / std::sqrt(ms) : 0.0;
    for (double& v : vel.values) v *= s;

    Field rho(grid, 1), p(grid, 1);
    for (std::size_t i = 0; i < grid.cells(); ++i) {
        rho(i) = background_density + drho(i);
        p(i) = background_pressure + dp(i);
    }
    return solver::conserved_from_primitive(rho, vel, p);
}

}  // namespace pdegen::ic
