#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

#include "pdegen/grid.hpp"

namespace pdegen::fft {

inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

/// Unnormalized n-dimensional complex DFT in place. sign = FFTW_FORWARD or
/// FFTW_BACKWARD. shape is row-major (axis 0 slowest), matching Field storage.
inline void transform(std::vector<std::complex<double>>& a, const std::vector<int>& shape,
                      int sign) {
    fftw_complex* p = reinterpret_cast<fftw_complex*>(a.data());
    fftw_plan plan;
    {
        // FFTW's planner is not thread-safe; execution is.
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft(int(shape.size()), shape.data(), p, p, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
}

inline std::vector<int> grid_shape(const Grid& g) {
    std::vector<int> s(std::size_t(g.dim));
    for (int a = 0; a < g.dim; ++a) s[std::size_t(a)] = int(g.n[std::size_t(a)]);
    return s;
}

/// Signed integer wavenumber of index i on an n-point axis: 0..n/2, then
/// negative frequencies.
inline int wavenumber(std::size_t i, std::size_t n) {
    return i <= n / 2 ? int(i) : int(i) - int(n);
}

/// Forward DFT of one channel of a field.
inline std::vector<std::complex<double>> forward(const Field& f, std::size_t channel = 0) {
    std::vector<std::complex<double>> a(f.cells());
    for (std::size_t i = 0; i < f.cells(); ++i) a[i] = f(i, channel);
    transform(a, grid_shape(f.grid), FFTW_FORWARD);
    return a;
}

}  // namespace pdegen::fft
