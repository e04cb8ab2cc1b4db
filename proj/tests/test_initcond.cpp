#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "pdegen/fft.hpp"
#include "pdegen/ic/compressible.hpp"
#include "pdegen/ic/grf.hpp"
#include "pdegen/ic/sinusoid.hpp"
#include "pdegen/solver/euler.hpp"

using namespace pdegen;

TEST(Sinusoid, MatchesPointwiseEvaluation) {
    Grid g = Grid::make_1d(64, 0.0, 2.0);
    ic::SinusoidMode m;
    m.n = {3, 0, 0};
    m.amplitude = 0.7;
    m.phase = 0.4;
    Field f = ic::sinusoid_field(g, {m});
    for (std::size_t i = 0; i < g.n[0]; i += 7) {
        double x = g.center(0, i);
        double expect = 0.7 * std::sin(2.0 * std::numbers::pi * 3.0 / 2.0 * x + 0.4);
        EXPECT_NEAR(f(i), expect, 1e-14);
    }
}

TEST(Sinusoid, TwoDimensionalModes) {
    Grid g = Grid::make_2d(16, 16);
    ic::SinusoidMode m;
    m.n = {2, 5, 0};
    Field f = ic::sinusoid_field(g, {m});
    std::size_t i = 3, j = 11;
    double arg = 2.0 * std::numbers::pi * (2.0 * g.center(0, i) + 5.0 * g.center(1, j));
    EXPECT_NEAR(f(f.cell_index(i, j)), std::sin(arg), 1e-14);
}

TEST(Sinusoid, SuperpositionIsBandLimited) {
    Grid g = Grid::make_1d(256);
    SeededRng rng(11, 0);
    ic::SinusoidSpec spec;
    spec.abs_prob = spec.window_prob = 0.0;  // keep the spectrum clean
    Field f = ic::sinusoidal_superposition(rng, g, spec);
    auto spec_hat = fft::forward(f);
    for (std::size_t i = 0; i < g.cells(); ++i) {
        int k = std::abs(fft::wavenumber(i, g.cells()));
        if (k > spec.n_max) EXPECT_NEAR(std::abs(spec_hat[i]), 0.0, 1e-9) << "mode " << k;
    }
}

TEST(Sinusoid, DeterministicPerStream) {
    Grid g = Grid::make_1d(64);
    SeededRng a(3, 5), b(3, 5), c(3, 6);
    Field fa = ic::sinusoidal_superposition(a, g);
    Field fb = ic::sinusoidal_superposition(b, g);
    Field fc = ic::sinusoidal_superposition(c, g);
    EXPECT_EQ(fa.values, fb.values);
    EXPECT_NE(fa.values, fc.values);
}

TEST(Sinusoid, AbsAndWindowPostOperationsAppear) {
    Grid g = Grid::make_1d(128);
    int saw_abs = 0, saw_window = 0;
    ic::SinusoidSpec spec;
    spec.abs_prob = 1.0;
    for (int s = 0; s < 8; ++s) {
        SeededRng rng(77, std::uint64_t(s));
        Field f = ic::sinusoidal_superposition(rng, g, spec);
        bool one_signed = true;
        double sign = 0.0;
        for (double v : f.values) {
            if (v == 0.0) continue;
            if (sign == 0.0) sign = v > 0 ? 1.0 : -1.0;
            if (v * sign < 0.0) one_signed = false;
        }
        saw_abs += one_signed;
    }
    spec.abs_prob = 0.0;
    spec.window_prob = 1.0;
    for (int s = 0; s < 8; ++s) {
        SeededRng rng(78, std::uint64_t(s));
        Field f = ic::sinusoidal_superposition(rng, g, spec);
        // window forces zeros at both domain ends
        if (f(0) == 0.0 && f(g.n[0] - 1) == 0.0) ++saw_window;
    }
    EXPECT_EQ(saw_abs, 8);
    EXPECT_EQ(saw_window, 8);
}

TEST(Sinusoid, NormalizedPositiveInUnitInterval) {
    Grid g = Grid::make_1d(128);
    for (int s = 0; s < 20; ++s) {
        SeededRng rng(5, std::uint64_t(s));
        Field f = ic::normalized_positive_ic(rng, g);
        double mx = 0.0;
        for (double v : f.values) {
            ASSERT_GE(v, 0.0);
            ASSERT_LE(v, 1.0);
            mx = std::max(mx, v);
        }
        EXPECT_DOUBLE_EQ(mx, 1.0);
    }
}

TEST(RandomIc, UniformAndNormalBasics) {
    Grid g = Grid::make_2d(16, 16);
    SeededRng rng(2, 0);
    Field u = ic::uniform_random_ic(rng, g, 0.0, 0.2);
    for (double v : u.values) {
        ASSERT_GE(v, 0.0);
        ASSERT_LT(v, 0.2);
    }
    Field z = ic::normal_noise_ic(rng, g, 2);
    EXPECT_EQ(z.values.size(), 512u);
    double mean = 0.0;
    for (double v : z.values) mean += v;
    EXPECT_NEAR(mean / double(z.values.size()), 0.0, 0.1);
    EXPECT_THROW(ic::uniform_random_ic(rng, g, 1.0, 1.0), ConfigError);
}

TEST(Grf, StandardDeviationMatchesTarget) {
    Grid g = Grid::make_2d(64, 64);
    double acc = 0.0;
    const int reps = 8;
    for (int s = 0; s < reps; ++s) {
        SeededRng rng(21, std::uint64_t(s));
        Field f = ic::gaussian_random_field(rng, g, ic::GrfSpec{-3.0, 2.0});
        double m = 0.0, v = 0.0;
        for (double x : f.values) m += x;
        m /= double(f.values.size());
        for (double x : f.values) v += (x - m) * (x - m);
        acc += std::sqrt(v / double(f.values.size()));
    }
    EXPECT_NEAR(acc / reps, 2.0, 0.05);
}

TEST(Grf, RealFieldFromHermitianSymmetrization) {
    Grid g = Grid::make_1d(128);
    SeededRng rng(4, 9);
    Field f = ic::gaussian_random_field(rng, g, ic::GrfSpec{-2.0, 1.0});
    EXPECT_TRUE(f.all_finite());
    // a real field has a conjugate-symmetric transform
    auto h = fft::forward(f);
    for (std::size_t i = 1; i < g.cells() / 2; ++i) {
        EXPECT_NEAR(h[i].real(), h[g.cells() - i].real(), 1e-8);
        EXPECT_NEAR(h[i].imag(), -h[g.cells() - i].imag(), 1e-8);
    }
}

TEST(Grf, PowerLawSlopeRegression) {
    // E|F_k|^2 ~ |k|^tau: regression of log mean power on log k over many
    // draws should recover tau.
    const double tau = -3.0;
    Grid g = Grid::make_1d(256);
    std::vector<double> power(32, 0.0);
    const int reps = 64;
    for (int s = 0; s < reps; ++s) {
        SeededRng rng(31, std::uint64_t(s));
        Field f = ic::gaussian_random_field(rng, g, ic::GrfSpec{tau, 1.0});
        auto h = fft::forward(f);
        for (std::size_t k = 2; k < power.size(); ++k) power[k] += std::norm(h[k]) / reps;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t k = 2; k < power.size(); ++k) {
        double x = std::log(double(k)), y = std::log(power[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    EXPECT_NEAR(slope, tau, 0.35);
}

TEST(Grf, DarcyCoefficientIsTwoLevel) {
    Grid g = Grid::make_2d(64, 64);
    SeededRng rng(13, 2);
    Field a = ic::darcy_coefficient_field(rng, g);
    std::size_t low = 0, high = 0;
    for (double v : a.values) {
        ASSERT_TRUE(v == 0.1 || v == 1.0);
        (v == 0.1 ? low : high)++;
    }
    // thresholded at the sample median: both levels well represented
    EXPECT_GT(low, g.cells() / 4);
    EXPECT_GT(high, g.cells() / 4);
}

TEST(Turbulence, DivergenceFreeAndRmsSpeed) {
    Grid g = Grid::make_2d(64, 64);
    SeededRng rng(8, 1);
    const double mach = 0.1, cs = 2.0;
    Field v = ic::turbulence_velocity(rng, g, mach, cs);
    // RMS speed
    double ms = 0.0;
    for (std::size_t i = 0; i < g.cells(); ++i)
        ms += v(i, 0) * v(i, 0) + v(i, 1) * v(i, 1);
    EXPECT_NEAR(std::sqrt(ms / double(g.cells())), mach * cs, 1e-12);
    // spectral divergence k . v_hat vanishes
    auto vx = fft::forward(v, 0);
    auto vy = fft::forward(v, 1);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.cells(); ++i) {
        int kx = fft::wavenumber(i / g.n[1], g.n[0]);
        int ky = fft::wavenumber(i % g.n[1], g.n[1]);
        worst = std::max(worst, std::abs(double(kx) * vx[i] + double(ky) * vy[i]));
        scale = std::max(scale, std::abs(vx[i]) + std::abs(vy[i]));
    }
    EXPECT_LT(worst, 1e-9 * scale);
}

TEST(ShockTube, CollapsedRangesGiveRequestedStates) {
    Grid g = Grid::make_1d(64);
    ic::ShockTubeSpec spec;
    spec.rho_range = {1.0, 1.0};
    spec.p_range = {1.0, 1.0};
    spec.vfrac_range = {0.0, 0.0};
    spec.x_frac_range = {0.5, 0.5};
    SeededRng rng(1, 0);
    auto st = ic::shock_tube_ic(rng, g, spec);
    Field p = solver::eos_pressure_field(st);
    for (std::size_t i = 0; i < g.cells(); ++i) {
        EXPECT_DOUBLE_EQ(st.q(i, 0), 1.0);   // density
        EXPECT_DOUBLE_EQ(st.q(i, 1), 0.0);   // momentum
        EXPECT_NEAR(p(i), 1.0, 1e-13);
    }
}

TEST(DamBreak, TwoLevelsWithElevatedCenter) {
    Grid g = Grid::make_2d(64, 64, -2.5, 2.5, -2.5, 2.5);
    SeededRng rng(6, 4);
    Field h = ic::radial_dam_break_ic(rng, g);
    for (double v : h.values) ASSERT_TRUE(v == 1.0 || v == 2.0);
    EXPECT_DOUBLE_EQ(h(h.cell_index(32, 32)), 2.0);  // center inside any r >= 0.3
    EXPECT_DOUBLE_EQ(h(h.cell_index(0, 0)), 1.0);    // corner outside any r <= 0.7
}

TEST(CnsRandomField, PositiveWithBoundedPerturbation) {
    Grid g = Grid::make_2d(32, 32);
    SeededRng rng(17, 0);
    auto st = ic::random_field_cns_ic(rng, g, 0.1);
    Field p = solver::eos_pressure_field(st);
    double rho_max_dev = 0.0, p_max_dev = 0.0, ms = 0.0;
    for (std::size_t i = 0; i < g.cells(); ++i) {
        ASSERT_GT(st.q(i, 0), 0.0);
        ASSERT_GT(p(i), 0.0);
        rho_max_dev = std::max(rho_max_dev, std::abs(st.q(i, 0) - 1.0));
        p_max_dev = std::max(p_max_dev, std::abs(p(i) - 0.6));
        double vx = st.q(i, 1) / st.q(i, 0), vy = st.q(i, 2) / st.q(i, 0);
        ms += vx * vx + vy * vy;
    }
    EXPECT_NEAR(rho_max_dev, 0.3, 1e-12);
    EXPECT_NEAR(p_max_dev, 0.3 * 0.6, 1e-9);
    double cs = solver::sound_speed(1.0, 0.6, solver::kGamma);
    EXPECT_NEAR(std::sqrt(ms / double(g.cells())), 0.1 * cs, 1e-9);
}
