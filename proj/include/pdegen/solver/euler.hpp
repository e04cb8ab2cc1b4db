#pragma once

#include <array>
#include <cmath>

#include "pdegen/errors.hpp"
#include "pdegen/grid.hpp"

namespace pdegen::solver {

inline constexpr double kGamma = 5.0 / 3.0;

/// Compressible-flow state in conserved variables. Channel layout is
/// [rho, rho*v_1 .. rho*v_d, E] with E = p/(Gamma-1) + rho |v|^2 / 2.
struct ConservedState {
    Field q;  // channels = dim + 2
    double gamma = kGamma;

    int dim() const { return q.grid.dim; }
    std::size_t energy_channel() const { return std::size_t(q.grid.dim) + 1; }
};

inline double eos_internal_energy(double p, double gamma) { return p / (gamma - 1.0); }

inline double eos_total_energy(double rho, const std::array<double, 3>& v, double p,
                               double gamma, int dim) {
    double v2 = 0.0;
    for (int a = 0; a < dim; ++a) v2 += v[a] * v[a];
    return eos_internal_energy(p, gamma) + 0.5 * rho * v2;
}

inline double eos_pressure(double rho, const std::array<double, 3>& mom, double E,
                           double gamma, int dim) {
    double m2 = 0.0;
    for (int a = 0; a < dim; ++a) m2 += mom[a] * mom[a];
    return (gamma - 1.0) * (E - 0.5 * m2 / rho);
}

inline double sound_speed(double rho, double p, double gamma) {
    return std::sqrt(gamma * p / rho);
}

/// Pressure field of a conserved state; throws on inadmissible input.
inline Field eos_pressure_field(const ConservedState& s) {
    const int d = s.dim();
    Field p(s.q.grid, 1);
    for (std::size_t i = 0; i < s.q.cells(); ++i) {
        double rho = s.q(i, 0);
        if (!(rho > 0.0)) throw SampleRejected("non-positive density");
        std::array<double, 3> mom{0, 0, 0};
        for (int a = 0; a < d; ++a) mom[a] = s.q(i, std::size_t(a) + 1);
        p(i) = eos_pressure(rho, mom, s.q(i, s.energy_channel()), s.gamma, d);
        if (!(p(i) > 0.0)) throw SampleRejected("non-positive pressure");
    }
    return p;
}

/// Builds a conserved state from primitive fields rho, v (d channels), p.
inline ConservedState conserved_from_primitive(const Field& rho, const Field& vel,
                                               const Field& p, double gamma = kGamma) {
    const int d = rho.grid.dim;
    ConservedState s{Field(rho.grid, std::size_t(d) + 2), gamma};
    for (std::size_t i = 0; i < rho.cells(); ++i) {
        std::array<double, 3> v{0, 0, 0};
        for (int a = 0; a < d; ++a) v[a] = vel(i, std::size_t(a));
        s.q(i, 0) = rho(i);
        for (int a = 0; a < d; ++a) s.q(i, std::size_t(a) + 1) = rho(i) * v[a];
        s.q(i, s.energy_channel()) = eos_total_energy(rho(i), v, p(i), gamma, d);
    }
    return s;
}

/// Minmod slope limiter: smallest-magnitude argument when signs agree,
/// zero otherwise.
inline double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

/// Primitive state at a cell interface: density, normal velocity, up to two
/// tangential velocities, pressure.
struct FaceState {
    double rho;
    double vn;
    std::array<double, 2> vt{0.0, 0.0};
    double p;
};

/// MUSCL piecewise-linear reconstruction of the two face states at the
/// interface between cells i and i+1, given the four surrounding primitive
/// states (i-1, i, i+1, i+2). Slopes are minmod-limited per variable.
inline void muscl_faces(const FaceState& wm, const FaceState& w0, const FaceState& w1,
                        const FaceState& wp, int n_tangential, FaceState& left,
                        FaceState& right) {
    auto recon = [](double um, double u0, double u1, double up, double& l, double& r) {
        l = u0 + 0.5 * minmod(u0 - um, u1 - u0);
        r = u1 - 0.5 * minmod(u1 - u0, up - u1);
    };
    recon(wm.rho, w0.rho, w1.rho, wp.rho, left.rho, right.rho);
    recon(wm.vn, w0.vn, w1.vn, wp.vn, left.vn, right.vn);
    for (int t = 0; t < n_tangential; ++t)
        recon(wm.vt[t], w0.vt[t], w1.vt[t], wp.vt[t], left.vt[t], right.vt[t]);
    recon(wm.p, w0.p, w1.p, wp.p, left.p, right.p);
}

/// HLLC approximate Riemann flux (Toro) with Davis wave-speed estimates.
/// Returns the flux of [rho, rho vn, rho vt..., E] across the interface.
/// Consistent: equal states give the exact Euler flux.
inline std::array<double, 5> hllc_flux(const FaceState& L, const FaceState& R, double gamma,
                                       int n_tangential) {
    if (!(L.rho > 0.0 && R.rho > 0.0 && L.p > 0.0 && R.p > 0.0))
        throw SampleRejected("vacuum-adjacent state in hllc_flux");
    const double cL = sound_speed(L.rho, L.p, gamma);
    const double cR = sound_speed(R.rho, R.p, gamma);
    const double sL = std::min(L.vn - cL, R.vn - cR);
    const double sR = std::max(L.vn + cL, R.vn + cR);

    auto energy = [&](const FaceState& w) {
        double v2 = w.vn * w.vn;
        for (int t = 0; t < n_tangential; ++t) v2 += w.vt[t] * w.vt[t];
        return w.p / (gamma - 1.0) + 0.5 * w.rho * v2;
    };
    auto raw_flux = [&](const FaceState& w, std::array<double, 5>& f) {
        double E = energy(w);
        f[0] = w.rho * w.vn;
        f[1] = w.rho * w.vn * w.vn + w.p;
        for (int t = 0; t < n_tangential; ++t) f[2 + std::size_t(t)] = w.rho * w.vn * w.vt[t];
        f[2 + std::size_t(n_tangential)] = w.vn * (E + w.p);
    };

    std::array<double, 5> f{};
    if (sL >= 0.0) {
        raw_flux(L, f);
        return f;
    }
    if (sR <= 0.0) {
        raw_flux(R, f);
        return f;
    }
    const double sStar = (R.p - L.p + L.rho * L.vn * (sL - L.vn) - R.rho * R.vn * (sR - R.vn)) /
                         (L.rho * (sL - L.vn) - R.rho * (sR - R.vn));

    const FaceState& K = sStar >= 0.0 ? L : R;
    const double sK = sStar >= 0.0 ? sL : sR;
    raw_flux(K, f);
    const double EK = energy(K);
    const double coef = K.rho * (sK - K.vn) / (sK - sStar);
    std::array<double, 5> u{}, uStar{};
    u[0] = K.rho;
    u[1] = K.rho * K.vn;
    for (int t = 0; t < n_tangential; ++t) u[2 + std::size_t(t)] = K.rho * K.vt[t];
    u[2 + std::size_t(n_tangential)] = EK;
    uStar[0] = coef;
    uStar[1] = coef * sStar;
    for (int t = 0; t < n_tangential; ++t) uStar[2 + std::size_t(t)] = coef * K.vt[t];
    uStar[2 + std::size_t(n_tangential)] =
        coef * (EK / K.rho + (sStar - K.vn) * (sStar + K.p / (K.rho * (sK - K.vn))));
    for (std::size_t c = 0; c < 3 + std::size_t(n_tangential); ++c)
        f[c] += sK * (uStar[c] - u[c]);
    return f;
}

}  // namespace pdegen::solver
