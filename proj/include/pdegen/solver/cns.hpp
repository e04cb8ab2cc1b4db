#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "pdegen/grid.hpp"
#include "pdegen/solver/euler.hpp"
#include "pdegen/stepping.hpp"

namespace pdegen::solver {

enum class CnsBoundary { periodic, outgoing };

struct CnsParams {
    double eta = 0.0;   // shear viscosity
    double zeta = 0.0;  // bulk viscosity
    CnsBoundary bc = CnsBoundary::periodic;
    double cfl_adv = kDefaultCflAdvective;
    double cfl_diff = kDefaultCflDiffusive;
};

namespace detail {

/// Scratch arrays for one CNS solve; primitives live on a lattice padded by
/// two ghost layers per axis.
struct CnsWorkspace {
    int dim;
    std::array<std::size_t, 3> n{1, 1, 1};   // interior cells
    std::array<std::size_t, 3> en{1, 1, 1};  // padded cells
    std::array<double, 3> dx{1, 1, 1};
    std::size_t ecells = 1;
    std::vector<double> rho, p;
    std::array<std::vector<double>, 3> vel;
    std::vector<double> dudt;  // conserved increments, (dim+2) channels, padded lattice

    explicit CnsWorkspace(const Grid& g) : dim(g.dim) {
        for (int a = 0; a < dim; ++a) {
            n[a] = g.n[a];
            en[a] = g.n[a] + 4;
            dx[a] = g.dx(a);
            ecells *= en[a];
        }
        rho.resize(ecells);
        p.resize(ecells);
        for (int a = 0; a < dim; ++a) vel[a].resize(ecells);
        dudt.resize(ecells * std::size_t(dim + 2));
    }

    std::size_t eindex(std::size_t i, std::size_t j, std::size_t k) const {
        return (i * en[1] + j) * en[2] + k;
    }
    std::size_t estride(int axis) const {
        if (axis == 0) return en[1] * en[2];
        if (axis == 1) return en[2];
        return 1;
    }
};

/// Decomposes conserved interior data into padded primitive arrays and fills
/// the ghost layers. Throws SampleRejected on non-positive density/pressure.
inline void load_primitives(const Field& q, double gamma, CnsBoundary bc, CnsWorkspace& w) {
    const int d = w.dim;
    std::array<std::size_t, 3> lim{w.n[0], d > 1 ? w.n[1] : 1, d > 2 ? w.n[2] : 1};
    for (std::size_t i = 0; i < lim[0]; ++i)
        for (std::size_t j = 0; j < lim[1]; ++j)
            for (std::size_t k = 0; k < lim[2]; ++k) {
                std::size_t src = (i * (d > 1 ? w.n[1] : 1) + j) * (d > 2 ? w.n[2] : 1) + k;
                std::size_t dst = w.eindex(i + 2, d > 1 ? j + 2 : 0, d > 2 ? k + 2 : 0);
                double rho = q(src, 0);
                if (!(rho > 0.0)) throw SampleRejected("non-positive density in cns step");
                std::array<double, 3> mom{0, 0, 0};
                for (int a = 0; a < d; ++a) mom[a] = q(src, std::size_t(a) + 1);
                double pr = eos_pressure(rho, mom, q(src, std::size_t(d) + 1), gamma, d);
                if (!(pr > 0.0)) throw SampleRejected("non-positive pressure in cns step");
                w.rho[dst] = rho;
                w.p[dst] = pr;
                for (int a = 0; a < d; ++a) w.vel[a][dst] = mom[a] / rho;
            }

    // ghost fill, axis by axis, corners inherited from earlier axes
    for (int a = 0; a < d; ++a) {
        std::array<std::size_t, 3> span{w.en[0], w.en[1], w.en[2]};
        for (std::size_t i = 0; i < span[0]; ++i)
            for (std::size_t j = 0; j < span[1]; ++j)
                for (std::size_t k = 0; k < span[2]; ++k) {
                    std::array<std::size_t, 3> idx{i, j, k};
                    std::size_t pos = idx[a];
                    if (pos >= 2 && pos < w.n[a] + 2) continue;
                    std::size_t src_pos;
                    if (bc == CnsBoundary::periodic) {
                        std::ptrdiff_t m = std::ptrdiff_t(pos) - 2;
                        std::ptrdiff_t nn = std::ptrdiff_t(w.n[a]);
                        src_pos = std::size_t((m % nn + nn) % nn) + 2;
                    } else {
                        src_pos = pos < 2 ? 2 : w.n[a] + 1;
                    }
                    auto sidx = idx;
                    sidx[a] = src_pos;
                    std::size_t dst = w.eindex(idx[0], idx[1], idx[2]);
                    std::size_t src = w.eindex(sidx[0], sidx[1], sidx[2]);
                    w.rho[dst] = w.rho[src];
                    w.p[dst] = w.p[src];
                    for (int c = 0; c < d; ++c) w.vel[c][dst] = w.vel[c][src];
                }
    }
}

/// MUSCL+HLLC flux divergence over every axis, accumulated into w.dudt
/// (padded lattice, channel layout [rho, mom..., E]).
inline void accumulate_hyperbolic(CnsWorkspace& w, double gamma) {
    const int d = w.dim;
    const std::size_t nch = std::size_t(d) + 2;
    std::fill(w.dudt.begin(), w.dudt.end(), 0.0);

    for (int axis = 0; axis < d; ++axis) {
        const std::size_t st = w.estride(axis);
        const double inv_dx = 1.0 / w.dx[axis];
        std::array<int, 2> tang{};
        int nt = 0;
        for (int a = 0; a < d; ++a)
            if (a != axis) tang[nt++] = a;

        auto face_state = [&](std::size_t c) {
            FaceState s;
            s.rho = w.rho[c];
            s.p = w.p[c];
            s.vn = w.vel[axis][c];
            for (int t = 0; t < nt; ++t) s.vt[std::size_t(t)] = w.vel[tang[std::size_t(t)]][c];
            return s;
        };

        // iterate every line along `axis`; faces j|j+1 for j in [1, n+1]
        std::array<std::size_t, 3> lim{w.en[0], w.en[1], w.en[2]};
        lim[axis] = 1;
        for (std::size_t i = 0; i < lim[0]; ++i)
            for (std::size_t j = 0; j < lim[1]; ++j)
                for (std::size_t k = 0; k < lim[2]; ++k) {
                    std::size_t base = w.eindex(i, j, k);
                    for (std::size_t f = 1; f <= w.n[axis] + 1; ++f) {
                        std::size_t c0 = base + f * st;
                        FaceState wl, wr;
                        muscl_faces(face_state(c0 - st), face_state(c0), face_state(c0 + st),
                                    face_state(c0 + 2 * st), nt, wl, wr);
                        auto flux = hllc_flux(wl, wr, gamma, nt);
                        // map [rho, vn, vt..., E] back to [rho, mom_x.., E]
                        std::array<double, 5> mapped{};
                        mapped[0] = flux[0];
                        mapped[std::size_t(axis) + 1] = flux[1];
                        for (int t = 0; t < nt; ++t)
                            mapped[std::size_t(tang[std::size_t(t)]) + 1] = flux[2 + std::size_t(t)];
                        mapped[std::size_t(d) + 1] = flux[2 + std::size_t(nt)];
                        for (std::size_t c = 0; c < nch; ++c) {
                            w.dudt[c0 * nch + c] -= mapped[c] * inv_dx;
                            w.dudt[(c0 + st) * nch + c] += mapped[c] * inv_dx;
                        }
                    }
                }
    }
}

/// Central-difference viscous terms: momentum gains eta lap(v) +
/// (zeta + eta/3) grad(div v); energy gains div(v . sigma').
inline void accumulate_viscous(CnsWorkspace& w, double eta, double zeta) {
    if (eta == 0.0 && zeta == 0.0) return;
    const int d = w.dim;
    const std::size_t nch = std::size_t(d) + 2;

    auto d1 = [&](const std::vector<double>& f, std::size_t c, int a) {
        std::size_t st = w.estride(a);
        return (f[c + st] - f[c - st]) / (2.0 * w.dx[a]);
    };
    auto d2 = [&](const std::vector<double>& f, std::size_t c, int a) {
        std::size_t st = w.estride(a);
        return (f[c + st] - 2.0 * f[c] + f[c - st]) / (w.dx[a] * w.dx[a]);
    };
    auto dcross = [&](const std::vector<double>& f, std::size_t c, int a, int b) {
        std::size_t sa = w.estride(a), sb = w.estride(b);
        return (f[c + sa + sb] - f[c + sa - sb] - f[c - sa + sb] + f[c - sa - sb]) /
               (4.0 * w.dx[a] * w.dx[b]);
    };

    // v . sigma' on a one-ghost band, then its divergence on the interior
    std::array<std::vector<double>, 3> g;
    for (int a = 0; a < d; ++a) g[a].assign(w.ecells, 0.0);

    std::array<std::size_t, 3> lim{w.n[0] + 2, d > 1 ? w.n[1] + 2 : 1, d > 2 ? w.n[2] + 2 : 1};
    for (std::size_t i = 1; i < lim[0] + 1; ++i)
        for (std::size_t j = (d > 1 ? 1 : 0); j < (d > 1 ? lim[1] + 1 : 1); ++j)
            for (std::size_t k = (d > 2 ? 1 : 0); k < (d > 2 ? lim[2] + 1 : 1); ++k) {
                std::size_t c = w.eindex(i, j, k);
                double div = 0.0;
                for (int a = 0; a < d; ++a) div += d1(w.vel[a], c, a);
                for (int a = 0; a < d; ++a) {
                    double acc = 0.0;
                    for (int b = 0; b < d; ++b) {
                        double sab = eta * (d1(w.vel[b], c, a) + d1(w.vel[a], c, b));
                        if (a == b) sab += (zeta - 2.0 / 3.0 * eta) * div;
                        acc += w.vel[b][c] * sab;
                    }
                    g[a][c] = acc;
                }
            }

    std::array<std::size_t, 3> ilim{w.n[0], d > 1 ? w.n[1] : 1, d > 2 ? w.n[2] : 1};
    for (std::size_t i = 0; i < ilim[0]; ++i)
        for (std::size_t j = 0; j < ilim[1]; ++j)
            for (std::size_t k = 0; k < ilim[2]; ++k) {
                std::size_t c = w.eindex(i + 2, d > 1 ? j + 2 : 0, d > 2 ? k + 2 : 0);
                for (int a = 0; a < d; ++a) {
                    double lap = 0.0, graddiv = 0.0;
                    for (int b = 0; b < d; ++b) {
                        lap += d2(w.vel[a], c, b);
                        graddiv += b == a ? d2(w.vel[b], c, a) : dcross(w.vel[b], c, a, b);
                    }
                    w.dudt[c * nch + std::size_t(a) + 1] += eta * lap + (zeta + eta / 3.0) * graddiv;
                }
                double ediv = 0.0;
                for (int a = 0; a < d; ++a) ediv += d1(g[a], c, a);
                w.dudt[c * nch + std::size_t(d) + 1] += ediv;
            }
}

inline double cns_max_rate(const CnsWorkspace& w, double gamma, double eta, double zeta,
                           double cfl_adv, double cfl_diff) {
    const int d = w.dim;
    double adv = 0.0, rho_min = std::numeric_limits<double>::infinity();
    std::array<std::size_t, 3> ilim{w.n[0], d > 1 ? w.n[1] : 1, d > 2 ? w.n[2] : 1};
    for (std::size_t i = 0; i < ilim[0]; ++i)
        for (std::size_t j = 0; j < ilim[1]; ++j)
            for (std::size_t k = 0; k < ilim[2]; ++k) {
                std::size_t c = w.eindex(i + 2, d > 1 ? j + 2 : 0, d > 2 ? k + 2 : 0);
                double cs = sound_speed(w.rho[c], w.p[c], gamma);
                double r = 0.0;
                for (int a = 0; a < d; ++a) r += (std::abs(w.vel[a][c]) + cs) / w.dx[a];
                adv = std::max(adv, r);
                rho_min = std::min(rho_min, w.rho[c]);
            }
    double dt = cfl_adv / adv;
    double nu = std::max(eta, zeta + eta / 3.0) / rho_min;
    if (nu > 0.0) {
        double dxm = w.dx[0];
        for (int a = 1; a < d; ++a) dxm = std::min(dxm, w.dx[a]);
        dt = std::min(dt, cfl_diff * dxm * dxm / (double(d) * 2.0 * nu));
    }
    return dt;
}

}  // namespace detail

/// Dimension-by-dimension MUSCL+HLLC update with SSP-RK2 and central viscous
/// terms. Snapshots store primitives [rho, v_1..v_d, p] as channels.
inline Trajectory solve_cns(const ConservedState& state0, const CnsParams& params,
                            const TimeAxis& time) {
    const Grid& grid = state0.q.grid;
    const int d = grid.dim;
    const std::size_t nch = std::size_t(d) + 2;
    const double gamma = state0.gamma;

    detail::CnsWorkspace w(grid);
    Trajectory traj;
    traj.time_axis = time;
    traj.frames.reserve(time.n_snapshots);

    Field q = state0.q;
    Field q1(grid, nch);

    auto rhs_into = [&](const Field& qs, const Field& base, double dt, Field& out) {
        detail::load_primitives(qs, gamma, params.bc, w);
        detail::accumulate_hyperbolic(w, gamma);
        detail::accumulate_viscous(w, params.eta, params.zeta);
        std::array<std::size_t, 3> ilim{w.n[0], d > 1 ? w.n[1] : 1, d > 2 ? w.n[2] : 1};
        for (std::size_t i = 0; i < ilim[0]; ++i)
            for (std::size_t j = 0; j < ilim[1]; ++j)
                for (std::size_t k = 0; k < ilim[2]; ++k) {
                    std::size_t cell = (i * ilim[1] + j) * ilim[2] + k;
                    std::size_t e = w.eindex(i + 2, d > 1 ? j + 2 : 0, d > 2 ? k + 2 : 0);
                    for (std::size_t c = 0; c < nch; ++c)
                        out(cell, c) = base(cell, c) + dt * w.dudt[e * nch + c];
                }
    };

    auto dt_of = [&](const Field& qs) {
        detail::load_primitives(qs, gamma, params.bc, w);
        return detail::cns_max_rate(w, gamma, params.eta, params.zeta, params.cfl_adv,
                                    params.cfl_diff);
    };

    auto store = [&](const Field& qs, std::size_t) {
        detail::load_primitives(qs, gamma, params.bc, w);
        Field f(grid, nch);
        std::array<std::size_t, 3> ilim{w.n[0], d > 1 ? w.n[1] : 1, d > 2 ? w.n[2] : 1};
        for (std::size_t i = 0; i < ilim[0]; ++i)
            for (std::size_t j = 0; j < ilim[1]; ++j)
                for (std::size_t k = 0; k < ilim[2]; ++k) {
                    std::size_t cell = (i * ilim[1] + j) * ilim[2] + k;
                    std::size_t e = w.eindex(i + 2, d > 1 ? j + 2 : 0, d > 2 ? k + 2 : 0);
                    f(cell, 0) = w.rho[e];
                    for (int a = 0; a < d; ++a) f(cell, std::size_t(a) + 1) = w.vel[a][e];
                    f(cell, nch - 1) = w.p[e];
                }
        f.require_finite("cns frame");
        traj.frames.push_back(std::move(f));
    };

    march_snapshots(
        time, q, dt_of,
        [&](Field& qs, double dt) {
            rhs_into(qs, qs, dt, q1);          // stage 1: q1 = q + dt L(q)
            rhs_into(q1, q1, dt, q1);          // stage 2 accumulate: q1 = q1 + dt L(q1)
            for (std::size_t m = 0; m < qs.values.size(); ++m)
                qs.values[m] = 0.5 * (qs.values[m] + q1.values[m]);
        },
        store);
    return traj;
}

/// Discrete conserved integrals (mass, momenta, energy) of a conserved state.
inline std::vector<double> conserved_totals(const ConservedState& s) {
    const std::size_t nch = std::size_t(s.dim()) + 2;
    std::vector<double> tot(nch, 0.0), comp(nch, 0.0);
    for (std::size_t i = 0; i < s.q.cells(); ++i)
        for (std::size_t c = 0; c < nch; ++c) {
            // Kahan sum; the diagnostic must not drown in round-off
            double y = s.q(i, c) - comp[c];
            double t = tot[c] + y;
            comp[c] = (t - tot[c]) - y;
            tot[c] = t;
        }
    double vol = s.q.grid.cell_volume();
    for (double& v : tot) v *= vol;
    return tot;
}

/// Rebuilds a conserved state from a stored primitive frame [rho, v..., p].
inline ConservedState conserved_from_frame(const Field& frame, double gamma = kGamma) {
    const int d = frame.grid.dim;
    Field rho(frame.grid, 1), vel(frame.grid, std::size_t(d)), p(frame.grid, 1);
    for (std::size_t i = 0; i < frame.cells(); ++i) {
        rho(i) = frame(i, 0);
        for (int a = 0; a < d; ++a) vel(i, std::size_t(a)) = frame(i, std::size_t(a) + 1);
        p(i) = frame(i, std::size_t(d) + 1);
    }
    return conserved_from_primitive(rho, vel, p, gamma);
}

}  // namespace pdegen::solver
