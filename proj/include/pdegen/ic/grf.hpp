#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "pdegen/fft.hpp"
#include "pdegen/grid.hpp"
#include "pdegen/ic/sinusoid.hpp"
#include "pdegen/rng.hpp"

namespace pdegen::ic {

/// Isotropic Gaussian random field with power spectral density |k|^tau,
/// truncated at the Nyquist shell, zero mean, standard deviation sigma.
struct GrfSpec {
    double spectral_exponent = -3.0;  // tau
    double scale = 1.0;               // sigma
};

namespace detail {

/// Decodes the row-major cell index into per-axis signed wavenumbers and
/// returns |k| in index units.
inline double mode_radius(std::size_t cell, const Grid& g, std::array<int, 3>& kvec) {
    std::size_t rem = cell;
    double k2 = 0.0;
    for (int a = g.dim - 1; a >= 0; --a) {
        std::size_t i = rem % g.n[a];
        rem /= g.n[a];
        kvec[a] = fft::wavenumber(i, g.n[a]);
        k2 += double(kvec[a]) * double(kvec[a]);
    }
    return std::sqrt(k2);
}

}  // namespace detail

inline Field gaussian_random_field(SeededRng& rng, const Grid& grid, const GrfSpec& spec) {
    Field f(grid, 1);
    if (spec.scale == 0.0) return f;

    const std::size_t nc = grid.cells();
    std::size_t k_nyq = grid.n[0];
    for (int a = 1; a < grid.dim; ++a) k_nyq = std::min(k_nyq, grid.n[a]);
    const double k_cut = double(k_nyq / 2);

    // Independent complex Gaussian per mode, amplitude |k|^(tau/2); Hermitian
    // symmetrization below makes the inverse transform real.
    std::vector<std::complex<double>> spec_arr(nc);
    std::array<int, 3> kvec{0, 0, 0};
    for (std::size_t i = 0; i < nc; ++i) {
        double kr = detail::mode_radius(i, grid, kvec);
        if (kr == 0.0 || kr > k_cut) {
            spec_arr[i] = 0.0;
            rng.normal();
            rng.normal();
            continue;
        }
        double amp = std::pow(kr, 0.5 * spec.spectral_exponent);
        spec_arr[i] = {amp * rng.normal(), amp * rng.normal()};
    }

    // F[k] <- (F[k] + conj(F[-k])) / 2
    std::vector<std::complex<double>> sym(nc);
    for (std::size_t i = 0; i < nc; ++i) {
        std::size_t rem = i, conj_idx = 0;
        std::array<std::size_t, 3> idx{0, 0, 0};
        for (int a = grid.dim - 1; a >= 0; --a) {
            idx[a] = rem % grid.n[a];
            rem /= grid.n[a];
        }
        for (int a = 0; a < grid.dim; ++a) {
            std::size_t neg = idx[a] == 0 ? 0 : grid.n[a] - idx[a];
            conj_idx = conj_idx * grid.n[a] + neg;
        }
        sym[i] = 0.5 * (spec_arr[i] + std::conj(spec_arr[conj_idx]));
    }
    fft::transform(sym, fft::grid_shape(grid), FFTW_BACKWARD);

    double mean = 0.0;
    for (std::size_t i = 0; i < nc; ++i) mean += sym[i].real();
    mean /= double(nc);
    double var = 0.0;
    for (std::size_t i = 0; i < nc; ++i) {
        f(i) = sym[i].real() - mean;
        var += f(i) * f(i);
    }
    var /= double(nc);
    if (var > 0.0) {
        double s = spec.scale / std::sqrt(var);
        for (double& v : f.values) v *= s;
    }
    return f;
}

/// Two-level Darcy diffusion coefficient: a Gaussian random field draw
/// thresholded at its median, mapped to {a_low, a_high}.
inline Field darcy_coefficient_field(SeededRng& rng, const Grid& grid, double a_low = 0.1,
                                     double a_high = 1.0, double tau = -3.0) {
    Field g = gaussian_random_field(rng, grid, GrfSpec{tau, 1.0});
    std::vector<double> sorted(g.values);
    std::nth_element(sorted.begin(), sorted.begin() + std::ptrdiff_t(sorted.size() / 2),
                     sorted.end());
    double median = sorted[sorted.size() / 2];
    Field a(grid, 1);
    for (std::size_t i = 0; i < grid.cells(); ++i) a(i) = g(i) > median ? a_high : a_low;
    return a;
}

/// Divergence-free turbulent velocity field: four random sinusoidal modes
/// with amplitude ~ vbar/|k|^p (p = 1 in 2D, 2 in 3D), made solenoidal by
/// removing the compressive part in Fourier space, then rescaled so the RMS
/// speed equals vbar = sound_speed * mach.
inline Field turbulence_velocity(SeededRng& rng, const Grid& grid, double mach,
                                 double sound_speed, int n_max = 4) {
    if (grid.dim < 2) throw ConfigError("turbulence_velocity needs a 2D or 3D grid");
    const int d = grid.dim;
    const double vbar = sound_speed * mach;
    Field v(grid, std::size_t(d));
    if (vbar == 0.0) return v;

    const double kpow = d == 2 ? 1.0 : 2.0;
    constexpr int n_waves = 4;
    for (int w = 0; w < n_waves; ++w) {
        SinusoidMode m;
        double k2 = 0.0;
        for (int a = 0; a < d; ++a) {
            m.n[a] = int(rng.uniform_int(1, n_max));
            k2 += double(m.n[a]) * double(m.n[a]);
        }
        m.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        m.amplitude = 1.0;
        // random direction, scaled to vbar / |k|^p
        std::array<double, 3> dir{0, 0, 0};
        double norm = 0.0;
        do {
            norm = 0.0;
            for (int a = 0; a < d; ++a) {
                dir[a] = rng.normal();
                norm += dir[a] * dir[a];
            }
        } while (norm == 0.0);
        norm = std::sqrt(norm);
        double amp = vbar / std::pow(std::sqrt(k2), kpow);
        Field wave = sinusoid_field(grid, {m});
        for (std::size_t i = 0; i < grid.cells(); ++i)
            for (int a = 0; a < d; ++a) v(i, std::size_t(a)) += amp * dir[a] / norm * wave(i);
    }

    // Helmholtz projection: v_hat -= k (k . v_hat) / |k|^2
    const std::size_t nc = grid.cells();
    std::vector<std::vector<std::complex<double>>> vh;
    vh.resize(std::size_t(d));
    for (int a = 0; a < d; ++a) vh[std::size_t(a)] = fft::forward(v, std::size_t(a));
    std::array<int, 3> kvec{0, 0, 0};
    for (std::size_t i = 0; i < nc; ++i) {
        double kr = detail::mode_radius(i, grid, kvec);
        if (kr == 0.0) continue;
        std::complex<double> kdotv = 0.0;
        for (int a = 0; a < d; ++a) kdotv += double(kvec[a]) * vh[std::size_t(a)][i];
        for (int a = 0; a < d; ++a)
            vh[std::size_t(a)][i] -= double(kvec[a]) * kdotv / (kr * kr);
    }
    for (int a = 0; a < d; ++a) {
        fft::transform(vh[std::size_t(a)], fft::grid_shape(grid), FFTW_BACKWARD);
        for (std::size_t i = 0; i < nc; ++i) v(i, std::size_t(a)) = vh[std::size_t(a)][i].real() / double(nc);
    }

    double ms = 0.0;
    for (std::size_t i = 0; i < nc; ++i)
        for (int a = 0; a < d; ++a) ms += v(i, std::size_t(a)) * v(i, std::size_t(a));
    ms /= double(nc);
    if (ms > 0.0) {
        double s = vbar / std::sqrt(ms);
        for (double& x : v.values) x *= s;
    }
    return v;
}

}  // namespace pdegen::ic
