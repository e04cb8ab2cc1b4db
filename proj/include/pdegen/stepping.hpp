#pragma once

#include <algorithm>
#include <cmath>

#include "pdegen/errors.hpp"
#include "pdegen/grid.hpp"

namespace pdegen {

inline constexpr double kDefaultCflAdvective = 0.4;
inline constexpr double kDefaultCflDiffusive = 0.25;

/// Stable explicit time step: min of the advective limit cfl_adv*dx/speed and
/// the diffusive limit cfl_diff*dx^2/diffusivity, skipping terms whose rate is
/// zero. Throws if both rates are zero.
inline double cfl_timestep(double dx_min, double max_signal_speed, double diffusivity,
                           double cfl_adv = kDefaultCflAdvective,
                           double cfl_diff = kDefaultCflDiffusive) {
    if (max_signal_speed < 0.0 || diffusivity < 0.0) throw ConfigError("negative rate in cfl_timestep");
    if (max_signal_speed == 0.0 && diffusivity == 0.0)
        throw ConfigError("static system, dt undefined");
    double dt = std::numeric_limits<double>::infinity();
    if (max_signal_speed > 0.0) dt = std::min(dt, cfl_adv * dx_min / max_signal_speed);
    if (diffusivity > 0.0) dt = std::min(dt, cfl_diff * dx_min * dx_min / diffusivity);
    return dt;
}

inline double cfl_timestep(const Grid& grid, double max_signal_speed, double diffusivity,
                           double cfl_adv = kDefaultCflAdvective,
                           double cfl_diff = kDefaultCflDiffusive) {
    return cfl_timestep(grid.dx_min(), max_signal_speed, diffusivity, cfl_adv, cfl_diff);
}

/// Substeps a state across the time axis, clipping the final substep before
/// each snapshot so stored frames land exactly on the snapshot instants.
/// dt_of(state) proposes a stable dt; step(state, dt) advances in place;
/// store(state, k) is called once per snapshot including k = 0.
///
/// Elapsed time is tracked with compensated (Kahan) accumulation so that
/// 1e5+ substeps still hit snapshot times to round-off.
template <class State, class DtFn, class StepFn, class StoreFn>
void march_snapshots(const TimeAxis& time_axis, State& state, DtFn&& dt_of, StepFn&& step,
                     StoreFn&& store) {
    store(state, std::size_t{0});
    double t = time_axis.t_start;
    double comp = 0.0;  // Kahan compensation term
    for (std::size_t k = 1; k < time_axis.n_snapshots; ++k) {
        const double t_target = time_axis.time(k);
        const double t_eps = 1e-14 * std::max(std::abs(t_target), 1.0);
        while (t < t_target - t_eps) {
            double dt = std::min(dt_of(state), t_target - t);
            if (!(dt > 0.0)) throw SampleRejected("non-positive dt in march_snapshots");
            step(state, dt);
            // Kahan step: t += dt
            double y = dt - comp;
            double s = t + y;
            comp = (s - t) - y;
            t = s;
        }
        t = t_target;
        comp = 0.0;
        store(state, k);
    }
}

}  // namespace pdegen
