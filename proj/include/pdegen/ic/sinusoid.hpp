#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "pdegen/errors.hpp"
#include "pdegen/grid.hpp"
#include "pdegen/rng.hpp"

namespace pdegen::ic {

/// Random superposition of sinusoidal waves, u0 = sum_i A_i sin(k_i x + phi_i)
/// with integer mode numbers n_i in [1, n_max]. With probability abs_prob the
/// field is replaced by a random-signed absolute value, and with probability
/// window_prob it is multiplied by a centered box window; the two draws are
/// independent Bernoulli trials.
struct SinusoidSpec {
    int n_modes = 2;
    int n_max = 8;
    double abs_prob = 0.1;
    double window_prob = 0.1;
};

struct SinusoidMode {
    std::array<int, 3> n{1, 0, 0};  // integer wavenumbers per axis
    double amplitude = 1.0;
    double phase = 0.0;
};

/// Deterministic evaluator: sum of the given modes at the cell centers.
/// Works in any dimension; k_a = 2 pi n_a / L_a.
inline Field sinusoid_field(const Grid& grid, const std::vector<SinusoidMode>& modes) {
    Field f(grid, 1);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::array<std::size_t, 3> idx{0, 0, 0};
    for (std::size_t cell = 0; cell < grid.cells(); ++cell) {
        std::size_t rem = cell;
        for (int a = grid.dim - 1; a >= 0; --a) {
            idx[a] = rem % grid.n[a];
            rem /= grid.n[a];
        }
        double u = 0.0;
        for (const auto& m : modes) {
            double arg = m.phase;
            for (int a = 0; a < grid.dim; ++a)
                arg += two_pi * double(m.n[a]) / grid.length(a) * grid.center(a, idx[a]);
            u += m.amplitude * std::sin(arg);
        }
        f(cell) = u;
    }
    return f;
}

inline std::vector<SinusoidMode> draw_modes(SeededRng& rng, int dim, const SinusoidSpec& spec) {
    std::vector<SinusoidMode> modes(std::size_t(spec.n_modes));
    for (auto& m : modes) {
        for (int a = 0; a < dim; ++a) m.n[a] = int(rng.uniform_int(1, spec.n_max));
        m.amplitude = rng.uniform();
        m.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    return modes;
}

/// 1D random superposition with the optional abs / window post-operations.
inline Field sinusoidal_superposition(SeededRng& rng, const Grid& grid,
                                      const SinusoidSpec& spec = {}) {
    if (grid.dim != 1) throw ConfigError("sinusoidal_superposition needs a 1D grid");
    Field f = sinusoid_field(grid, draw_modes(rng, 1, spec));
    if (rng.bernoulli(spec.abs_prob)) {
        double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
        for (double& v : f.values) v = sign * std::abs(v);
    }
    if (rng.bernoulli(spec.window_prob)) {
        // Centered box covering a random fraction in [1/3, 2/3] of the domain.
        double frac = rng.uniform(1.0 / 3.0, 2.0 / 3.0);
        double xc = 0.5 * (grid.lo[0] + grid.hi[0]);
        double half = 0.5 * frac * grid.length(0);
        for (std::size_t i = 0; i < grid.n[0]; ++i)
            if (std::abs(grid.center(0, i) - xc) > half) f(i) = 0.0;
    }
    return f;
}

/// Superposition followed by abs and division by the maximum, giving a field
/// in [0, 1] with max exactly 1. Resamples on an all-zero draw.
inline Field normalized_positive_ic(SeededRng& rng, const Grid& grid,
                                    const SinusoidSpec& spec = {}) {
    for (;;) {
        Field f = sinusoidal_superposition(rng, grid, spec);
        double mx = 0.0;
        for (double& v : f.values) {
            v = std::abs(v);
            mx = std::max(mx, v);
        }
        if (mx == 0.0) continue;
        for (double& v : f.values) v /= mx;
        return f;
    }
}

/// Dimension-extended superposition (no post-operations), used by the
/// multi-dimensional compressible random-field initial conditions.
inline Field sinusoidal_superposition_nd(SeededRng& rng, const Grid& grid,
                                         const SinusoidSpec& spec = {}) {
    return sinusoid_field(grid, draw_modes(rng, grid.dim, spec));
}

/// I.i.d. uniform values in [lo, hi) per cell.
inline Field uniform_random_ic(SeededRng& rng, const Grid& grid, double lo, double hi) {
    if (!(hi > lo)) throw ConfigError("uniform_random_ic needs hi > lo");
    Field f(grid, 1);
    for (double& v : f.values) v = rng.uniform(lo, hi);
    return f;
}

/// I.i.d. standard normal values per cell and channel.
inline Field normal_noise_ic(SeededRng& rng, const Grid& grid, std::size_t channels = 1) {
    Field f(grid, channels);
    for (double& v : f.values) v = rng.normal();
    return f;
}

}  // namespace pdegen::ic
