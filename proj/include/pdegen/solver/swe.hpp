#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "pdegen/grid.hpp"
#include "pdegen/solver/euler.hpp"
#include "pdegen/stepping.hpp"

namespace pdegen::solver {

/// 2D shallow-water state [h, hu, hv] with reflective (no-flux) walls.
/// Bathymetry is flat for the dam-break datasets, so no source term.
struct SweParams {
    double gravity = 1.0;
    double cfl = kDefaultCflAdvective;
};

struct SweState {
    Field q;  // channels [h, hu, hv]
    double gravity = 1.0;
};

inline SweState swe_state_from_height(const Field& h, double gravity = 1.0) {
    if (h.grid.dim != 2 || h.channels != 1) throw ConfigError("swe needs a 2D height field");
    SweState s{Field(h.grid, 3), gravity};
    for (std::size_t i = 0; i < h.cells(); ++i) s.q(i, 0) = h(i);
    return s;
}

/// HLL flux for the 1D-normal SWE system [h, h un, h ut] with Davis wave
/// speed estimates un -/+ sqrt(g h).
inline std::array<double, 3> swe_flux_hll(const std::array<double, 3>& qL,
                                          const std::array<double, 3>& qR, double g) {
    auto wave = [g](const std::array<double, 3>& q) { return std::sqrt(g * q[0]); };
    if (!(qL[0] > 0.0 && qR[0] > 0.0)) throw SampleRejected("non-positive depth in swe_flux_hll");
    const double uL = qL[1] / qL[0], uR = qR[1] / qR[0];
    const double cL = wave(qL), cR = wave(qR);
    const double sL = std::min(uL - cL, uR - cR);
    const double sR = std::max(uL + cL, uR + cR);
    auto raw = [g](const std::array<double, 3>& q) {
        double u = q[1] / q[0];
        return std::array<double, 3>{q[1], q[1] * u + 0.5 * g * q[0] * q[0], q[2] * u};
    };
    if (sL >= 0.0) return raw(qL);
    if (sR <= 0.0) return raw(qR);
    auto fL = raw(qL), fR = raw(qR);
    std::array<double, 3> f{};
    for (std::size_t c = 0; c < 3; ++c)
        f[c] = (sR * fL[c] - sL * fR[c] + sL * sR * (qR[c] - qL[c])) / (sR - sL);
    return f;
}

namespace detail {

/// Reflective ghost lookup along one axis: height mirrored, normal momentum
/// negated, tangential momentum mirrored.
struct SweGrid {
    std::size_t nx, ny;
    double dx, dy;

    std::array<double, 3> at(const std::vector<double>& s, std::ptrdiff_t i, std::ptrdiff_t j,
                             int axis) const {
        double sign = 1.0;
        auto reflect = [&](std::ptrdiff_t v, std::ptrdiff_t n) {
            if (v < 0) {
                sign = -1.0;
                return -1 - v;
            }
            if (v >= n) {
                sign = -1.0;
                return 2 * n - 1 - v;
            }
            sign = 1.0;
            return v;
        };
        double sx = 1.0, sy = 1.0;
        if (axis == 0) {
            i = reflect(i, std::ptrdiff_t(nx));
            sx = sign;
        } else {
            j = reflect(j, std::ptrdiff_t(ny));
            sy = sign;
        }
        std::size_t c = std::size_t(i) * ny + std::size_t(j);
        return {s[c * 3], sx * s[c * 3 + 1], sy * s[c * 3 + 2]};
    }
};

/// MUSCL (minmod on primitives h, u, v) + HLL flux divergence.
inline void swe_rhs(const std::vector<double>& s, const SweGrid& g, double grav,
                    std::vector<double>& dudt) {
    std::fill(dudt.begin(), dudt.end(), 0.0);

    auto prim = [](const std::array<double, 3>& q) {
        return std::array<double, 3>{q[0], q[1] / q[0], q[2] / q[0]};
    };
    auto cons = [](const std::array<double, 3>& w) {
        return std::array<double, 3>{w[0], w[0] * w[1], w[0] * w[2]};
    };

    for (int axis = 0; axis < 2; ++axis) {
        const double inv_dx = 1.0 / (axis == 0 ? g.dx : g.dy);
        const std::ptrdiff_t nn = std::ptrdiff_t(axis == 0 ? g.nx : g.ny);
        const std::ptrdiff_t mm = std::ptrdiff_t(axis == 0 ? g.ny : g.nx);
        for (std::ptrdiff_t m = 0; m < mm; ++m) {
            for (std::ptrdiff_t f = -1; f < nn; ++f) {
                // face between line positions f and f+1
                auto cell = [&](std::ptrdiff_t pos) {
                    return axis == 0 ? g.at(s, pos, m, 0) : g.at(s, m, pos, 1);
                };
                auto wm = prim(cell(f - 1)), w0 = prim(cell(f)), w1 = prim(cell(f + 1)),
                     wp = prim(cell(f + 2));
                std::array<double, 3> wl{}, wr{};
                for (std::size_t c = 0; c < 3; ++c) {
                    wl[c] = w0[c] + 0.5 * minmod(w0[c] - wm[c], w1[c] - w0[c]);
                    wr[c] = w1[c] - 0.5 * minmod(w1[c] - w0[c], wp[c] - w1[c]);
                }
                // rotate so channel 1 is the normal momentum
                auto rot = [&](const std::array<double, 3>& q) {
                    return axis == 0 ? q : std::array<double, 3>{q[0], q[2], q[1]};
                };
                auto flux = swe_flux_hll(rot(cons(wl)), rot(cons(wr)), grav);
                std::array<double, 3> fl = axis == 0 ? flux
                                                     : std::array<double, 3>{flux[0], flux[2], flux[1]};
                auto scatter = [&](std::ptrdiff_t pos, double w) {
                    if (pos < 0 || pos >= nn) return;
                    std::size_t c = axis == 0 ? std::size_t(pos) * g.ny + std::size_t(m)
                                              : std::size_t(m) * g.ny + std::size_t(pos);
                    for (std::size_t ch = 0; ch < 3; ++ch) dudt[c * 3 + ch] += w * fl[ch] * inv_dx;
                };
                scatter(f, -1.0);
                scatter(f + 1, 1.0);
            }
        }
    }
}

}  // namespace detail

/// MUSCL+HLL shallow-water solver, SSP-RK2, reflective walls. Snapshots store
/// the water height h only.
inline Trajectory solve_swe(const SweState& state0, const TimeAxis& time,
                            const SweParams& params = {}) {
    const Grid& grid = state0.q.grid;
    if (grid.dim != 2) throw ConfigError("solve_swe needs a 2D grid");
    detail::SweGrid g{grid.n[0], grid.n[1], grid.dx(0), grid.dx(1)};
    const double grav = params.gravity;

    Trajectory traj;
    traj.time_axis = time;
    traj.frames.reserve(time.n_snapshots);

    std::vector<double> s(state0.q.values);
    const std::size_t m = s.size();
    std::vector<double> rhs(m), s1(m);

    auto dt_of = [&](const std::vector<double>& w) {
        double rate = 0.0;
        for (std::size_t c = 0; c < m / 3; ++c) {
            double h = w[c * 3];
            if (!(h > 0.0)) throw SampleRejected("non-positive depth in swe step");
            double cw = std::sqrt(grav * h);
            rate = std::max(rate, (std::abs(w[c * 3 + 1] / h) + cw) / g.dx +
                                      (std::abs(w[c * 3 + 2] / h) + cw) / g.dy);
        }
        return params.cfl / rate;
    };

    march_snapshots(
        time, s, dt_of,
        [&](std::vector<double>& w, double dt) {
            detail::swe_rhs(w, g, grav, rhs);
            for (std::size_t i = 0; i < m; ++i) s1[i] = w[i] + dt * rhs[i];
            detail::swe_rhs(s1, g, grav, rhs);
            for (std::size_t i = 0; i < m; ++i) w[i] = 0.5 * (w[i] + s1[i] + dt * rhs[i]);
        },
        [&](const std::vector<double>& w, std::size_t) {
            Field f(grid, 1);
            for (std::size_t c = 0; c < m / 3; ++c) {
                double h = w[c * 3];
                if (!(h > 0.0)) throw SampleRejected("non-positive depth in swe frame");
                f(c) = h;
            }
            f.require_finite("swe frame");
            traj.frames.push_back(std::move(f));
        });
    return traj;
}

/// Total water volume sum(h) dA with Kahan summation.
inline double swe_total_mass(const Field& h_frame) {
    double tot = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < h_frame.cells(); ++i) {
        double y = h_frame(i, 0) - comp;
        double t = tot + y;
        comp = (t - tot) - y;
        tot = t;
    }
    return tot * h_frame.grid.cell_volume();
}

}  // namespace pdegen::solver
