#pragma once

// Straight-from-the-definition metric references with plain loops and a
// direct O(N^2) DFT. Deliberately independent of the library implementation;
// only usable for small instances.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "pdegen/metrics.hpp"

namespace naive {

using pdegen::metrics::Tensor;

inline std::size_t frames(const Tensor& t) { return t.n_time == 0 ? 1 : t.n_time; }

inline double rmse(const Tensor& p, const Tensor& t) {
    double acc = 0.0;
    std::size_t m = t.frame_size();
    for (std::size_t b = 0; b < t.n_samples; ++b)
        for (std::size_t k = 0; k < frames(t); ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                double d = p.frame(b, k)[i] - t.frame(b, k)[i];
                s += d * d;
            }
            acc += std::sqrt(s / double(m));
        }
    return acc / double(t.n_samples * frames(t));
}

inline double nrmse(const Tensor& p, const Tensor& t) {
    double acc = 0.0;
    std::size_t m = t.frame_size();
    for (std::size_t b = 0; b < t.n_samples; ++b)
        for (std::size_t k = 0; k < frames(t); ++k) {
            double e = 0.0, n = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                double d = p.frame(b, k)[i] - t.frame(b, k)[i];
                e += d * d;
                n += t.frame(b, k)[i] * t.frame(b, k)[i];
            }
            acc += std::sqrt(e / n);
        }
    return acc / double(t.n_samples * frames(t));
}

inline double max_error(const Tensor& p, const Tensor& t) {
    double acc = 0.0;
    for (std::size_t b = 0; b < t.n_samples; ++b) {
        double mx = 0.0;
        for (std::size_t k = 0; k < frames(t); ++k)
            for (std::size_t i = 0; i < t.frame_size(); ++i)
                mx = std::max(mx, std::abs(p.frame(b, k)[i] - t.frame(b, k)[i]));
        acc += mx;
    }
    return acc / double(t.n_samples);
}

inline double crmse(const Tensor& p, const Tensor& t) {
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t b = 0; b < t.n_samples; ++b)
        for (std::size_t k = 0; k < frames(t); ++k)
            for (std::size_t c = 0; c < t.channels; ++c) {
                double sp = 0.0, st = 0.0;
                for (std::size_t i = 0; i < t.cells(); ++i) {
                    sp += p.frame(b, k)[i * t.channels + c];
                    st += t.frame(b, k)[i * t.channels + c];
                }
                acc += std::abs(sp - st) / double(t.cells());
                ++count;
            }
    return acc / double(count);
}

// multi-index of flat cell i, axis 0 slowest
inline std::vector<std::size_t> unflatten(std::size_t i, const std::vector<std::size_t>& sp) {
    std::vector<std::size_t> idx(sp.size());
    for (std::size_t a = sp.size(); a-- > 0;) {
        idx[a] = i % sp[a];
        i /= sp[a];
    }
    return idx;
}

inline double brmse(const Tensor& p, const Tensor& t) {
    double acc = 0.0;
    std::size_t nframes = 0;
    for (std::size_t b = 0; b < t.n_samples; ++b)
        for (std::size_t k = 0; k < frames(t); ++k) {
            double s = 0.0;
            std::size_t count = 0;
            for (std::size_t i = 0; i < t.cells(); ++i) {
                auto idx = unflatten(i, t.spatial);
                bool boundary = false;
                for (std::size_t a = 0; a < idx.size(); ++a)
                    if (idx[a] == 0 || idx[a] == t.spatial[a] - 1) boundary = true;
                if (!boundary) continue;
                for (std::size_t c = 0; c < t.channels; ++c) {
                    double d = p.frame(b, k)[i * t.channels + c] - t.frame(b, k)[i * t.channels + c];
                    s += d * d;
                    ++count;
                }
            }
            acc += std::sqrt(s / double(count));
            ++nframes;
        }
    return acc / double(nframes);
}

/// Direct DFT shell power of one channel: P_s = sum over modes with
/// round(|k|) = s of |F_k|^2 / N.
inline std::vector<double> shell_power(const double* frame, const std::vector<std::size_t>& sp,
                                       std::size_t channels, std::size_t c) {
    std::size_t n = 1;
    for (std::size_t s : sp) n *= s;
    double r2max = 0.0;
    for (std::size_t s : sp) r2max += double(s / 2) * double(s / 2);
    std::vector<double> shells(std::size_t(std::lround(std::sqrt(r2max))) + 1, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
        auto km = unflatten(m, sp);
        std::complex<double> F = 0.0;
        for (std::size_t x = 0; x < n; ++x) {
            auto xm = unflatten(x, sp);
            double phase = 0.0;
            for (std::size_t a = 0; a < sp.size(); ++a)
                phase += 2.0 * M_PI * double(km[a]) * double(xm[a]) / double(sp[a]);
            F += frame[x * channels + c] * std::exp(std::complex<double>(0.0, -phase));
        }
        double k2 = 0.0;
        for (std::size_t a = 0; a < sp.size(); ++a) {
            long k = long(km[a]) <= long(sp[a]) / 2 ? long(km[a]) : long(km[a]) - long(sp[a]);
            k2 += double(k) * double(k);
        }
        shells[std::size_t(std::lround(std::sqrt(k2)))] += std::norm(F) / double(n);
    }
    return shells;
}

inline double frmse(const Tensor& p, const Tensor& t, std::size_t k_min, std::size_t k_max) {
    double acc = 0.0;
    std::size_t count = 0;
    std::vector<double> err(t.frame_size());
    for (std::size_t b = 0; b < t.n_samples; ++b)
        for (std::size_t k = 0; k < frames(t); ++k) {
            for (std::size_t i = 0; i < err.size(); ++i)
                err[i] = p.frame(b, k)[i] - t.frame(b, k)[i];
            for (std::size_t c = 0; c < t.channels; ++c) {
                auto shells = shell_power(err.data(), t.spatial, t.channels, c);
                double s = 0.0;
                for (std::size_t q = k_min; q <= k_max && q < shells.size(); ++q) s += shells[q];
                acc += std::sqrt(s) / double(k_max - k_min + 1);
                ++count;
            }
        }
    return acc / double(count);
}

}  // namespace naive
