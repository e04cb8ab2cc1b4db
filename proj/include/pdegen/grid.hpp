#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pdegen/errors.hpp"

namespace pdegen {

/// Rectilinear cell-centered grid over a d-dimensional box, d in {1,2,3}.
/// Cell centers along axis a sit at lo[a] + (i + 0.5) * dx(a).
struct Grid {
    int dim = 1;
    std::array<double, 3> lo{0.0, 0.0, 0.0};
    std::array<double, 3> hi{1.0, 1.0, 1.0};
    std::array<std::size_t, 3> n{1, 1, 1};

    Grid() = default;
    Grid(int dim_, std::array<double, 3> lo_, std::array<double, 3> hi_,
         std::array<std::size_t, 3> n_)
        : dim(dim_), lo(lo_), hi(hi_), n(n_) {
        if (dim < 1 || dim > 3) throw ConfigError("grid dim must be 1, 2 or 3");
        for (int a = 0; a < dim; ++a) {
            if (n[a] < 4) throw ConfigError("grid needs >= 4 cells per axis");
            if (!(hi[a] > lo[a])) throw ConfigError("grid extent must be positive");
        }
        for (int a = dim; a < 3; ++a) n[a] = 1;
    }

    static Grid make_1d(std::size_t nx, double x0 = 0.0, double x1 = 1.0) {
        return Grid(1, {x0, 0, 0}, {x1, 0, 0}, {nx, 1, 1});
    }
    static Grid make_2d(std::size_t nx, std::size_t ny, double x0 = 0.0,
                        double x1 = 1.0, double y0 = 0.0, double y1 = 1.0) {
        return Grid(2, {x0, y0, 0}, {x1, y1, 0}, {nx, ny, 1});
    }
    static Grid make_3d(std::size_t nx, std::size_t ny, std::size_t nz) {
        return Grid(3, {0, 0, 0}, {1, 1, 1}, {nx, ny, nz});
    }

    double dx(int axis) const { return (hi[axis] - lo[axis]) / double(n[axis]); }
    double dx_min() const {
        double m = dx(0);
        for (int a = 1; a < dim; ++a) m = std::min(m, dx(a));
        return m;
    }
    double length(int axis) const { return hi[axis] - lo[axis]; }
    double center(int axis, std::size_t i) const {
        return lo[axis] + (double(i) + 0.5) * dx(axis);
    }
    std::size_t cells() const {
        std::size_t c = 1;
        for (int a = 0; a < dim; ++a) c *= n[a];
        return c;
    }
    double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= dx(a);
        return v;
    }

    bool operator==(const Grid&) const = default;
};

/// Uniformly spaced snapshot instants; frame 0 is t_start.
struct TimeAxis {
    double t_start = 0.0;
    double t_end = 1.0;
    std::size_t n_snapshots = 2;

    TimeAxis() = default;
    TimeAxis(double t0, double t1, std::size_t n) : t_start(t0), t_end(t1), n_snapshots(n) {
        if (!(t_end > t_start)) throw ConfigError("time axis must advance");
        if (n_snapshots < 2) throw ConfigError("need at least 2 snapshots");
    }

    double time(std::size_t k) const {
        return t_start + double(k) * (t_end - t_start) / double(n_snapshots - 1);
    }
    double snapshot_dt() const { return (t_end - t_start) / double(n_snapshots - 1); }

    bool operator==(const TimeAxis&) const = default;
};

/// Values of V channels at every cell of a grid. Storage is row-major over
/// the spatial axes with the channel index fastest: idx = cell * V + c.
struct Field {
    Grid grid;
    std::size_t channels = 1;
    std::vector<double> values;

    Field() = default;
    Field(const Grid& g, std::size_t v, double fill = 0.0)
        : grid(g), channels(v), values(g.cells() * v, fill) {
        if (v < 1) throw ConfigError("field needs >= 1 channel");
    }

    double& operator()(std::size_t cell, std::size_t c = 0) { return values[cell * channels + c]; }
    double operator()(std::size_t cell, std::size_t c = 0) const { return values[cell * channels + c]; }

    std::size_t cells() const { return grid.cells(); }

    /// Flattens (i,j) / (i,j,k) multi-indices; axis 0 slowest.
    std::size_t cell_index(std::size_t i, std::size_t j = 0, std::size_t k = 0) const {
        return (i * grid.n[1] + j) * grid.n[2] + k;
    }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
    void require_finite(const char* what = "field") const {
        if (!all_finite()) throw SampleRejected(std::string(what) + " contains non-finite values");
    }
};

/// One stored Field per snapshot of a TimeAxis.
struct Trajectory {
    TimeAxis time_axis;
    std::vector<Field> frames;

    std::size_t n_frames() const { return frames.size(); }
    const Grid& grid() const { return frames.front().grid; }
    std::size_t channels() const { return frames.front().channels; }
};

}  // namespace pdegen
