#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "pdegen/errors.hpp"
#include "pdegen/fft.hpp"
#include "pdegen/grid.hpp"

namespace pdegen::metrics {

/// Dense batch tensor packed (b, t, x_1..x_d, v); the time axis may be absent
/// (n_time = 0) for time-independent problems.
struct Tensor {
    std::size_t n_samples = 0;
    std::size_t n_time = 0;  // 0 = no time axis
    std::vector<std::size_t> spatial;
    std::size_t channels = 1;
    std::vector<double> data;

    std::size_t cells() const {
        std::size_t c = 1;
        for (std::size_t s : spatial) c *= s;
        return c;
    }
    std::size_t frame_size() const { return cells() * channels; }
    std::size_t frames_per_sample() const { return n_time == 0 ? 1 : n_time; }
    std::size_t size() const { return n_samples * frames_per_sample() * frame_size(); }

    const double* frame(std::size_t b, std::size_t t) const {
        return data.data() + (b * frames_per_sample() + t) * frame_size();
    }

    bool same_shape(const Tensor& o) const {
        return n_samples == o.n_samples && n_time == o.n_time && spatial == o.spatial &&
               channels == o.channels;
    }
};

inline Tensor tensor_from_trajectories(const std::vector<Trajectory>& batch) {
    Tensor t;
    t.n_samples = batch.size();
    const Trajectory& first = batch.front();
    t.n_time = first.n_frames();
    for (int a = 0; a < first.grid().dim; ++a) t.spatial.push_back(first.grid().n[std::size_t(a)]);
    t.channels = first.channels();
    t.data.reserve(t.size());
    for (const auto& traj : batch)
        for (const auto& f : traj.frames) t.data.insert(t.data.end(), f.values.begin(), f.values.end());
    return t;
}

/// Spectral bands used by the forward fRMSE metric: fixed index edges
/// low [0,4], mid [5,12], high [13, k_nyquist].
struct Band {
    std::size_t k_min;
    std::size_t k_max;
};

inline std::size_t nyquist_index(const std::vector<std::size_t>& spatial) {
    std::size_t n = spatial.front();
    for (std::size_t s : spatial) n = std::min(n, s);
    return n / 2;
}

inline std::vector<Band> forward_bands(std::size_t k_nyquist) {
    return {{0, 4}, {5, 12}, {13, k_nyquist}};
}

/// Inverse-problem bands: quarters of the maximum frequency.
inline std::vector<Band> inverse_bands(std::size_t k_max) {
    return {{0, k_max / 4 - 1}, {k_max / 4, 3 * k_max / 4 - 1}, {3 * k_max / 4, k_max}};
}

namespace detail {

inline void check_shapes(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw ConfigError("metric inputs have mismatched shapes");
}

template <class PerFrame>
double mean_over_frames(const Tensor& pred, const Tensor& truth, PerFrame&& fn) {
    check_shapes(pred, truth);
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t b = 0; b < pred.n_samples; ++b)
        for (std::size_t t = 0; t < pred.frames_per_sample(); ++t) {
            acc += fn(pred.frame(b, t), truth.frame(b, t));
            ++count;
        }
    return acc / double(count);
}

}  // namespace detail

/// Per (sample, timestep): sqrt of the mean squared error over space and
/// channels; then averaged over timesteps and samples.
inline double rmse(const Tensor& pred, const Tensor& truth) {
    const std::size_t m = pred.frame_size();
    return detail::mean_over_frames(pred, truth, [m](const double* p, const double* t) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += (p[i] - t[i]) * (p[i] - t[i]);
        return std::sqrt(s / double(m));
    });
}

/// ||pred - true||_2 / ||true||_2 per (sample, timestep), then averaged.
inline double nrmse(const Tensor& pred, const Tensor& truth) {
    const std::size_t m = pred.frame_size();
    return detail::mean_over_frames(pred, truth, [m](const double* p, const double* t) {
        double e = 0.0, n = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            e += (p[i] - t[i]) * (p[i] - t[i]);
            n += t[i] * t[i];
        }
        if (n == 0.0) throw ConfigError("nRMSE undefined: zero-norm truth frame");
        return std::sqrt(e / n);
    });
}

/// Max over space/channels/timesteps of |pred - true|, averaged over samples.
inline double max_error(const Tensor& pred, const Tensor& truth) {
    detail::check_shapes(pred, truth);
    const std::size_t fs = pred.frame_size() * pred.frames_per_sample();
    double acc = 0.0;
    for (std::size_t b = 0; b < pred.n_samples; ++b) {
        const double* p = pred.frame(b, 0);
        const double* t = truth.frame(b, 0);
        double mx = 0.0;
        for (std::size_t i = 0; i < fs; ++i) mx = std::max(mx, std::abs(p[i] - t[i]));
        acc += mx;
    }
    return acc / double(pred.n_samples);
}

/// ||sum_space pred - sum_space true||_2 / N per channel and timestep (the
/// deviation of the discrete conserved integral), averaged.
inline double crmse(const Tensor& pred, const Tensor& truth) {
    detail::check_shapes(pred, truth);
    const std::size_t nc = pred.cells();
    const std::size_t v = pred.channels;
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t b = 0; b < pred.n_samples; ++b)
        for (std::size_t t = 0; t < pred.frames_per_sample(); ++t) {
            const double* pf = pred.frame(b, t);
            const double* tf = truth.frame(b, t);
            for (std::size_t c = 0; c < v; ++c) {
                double sp = 0.0, st = 0.0;
                for (std::size_t i = 0; i < nc; ++i) {
                    sp += pf[i * v + c];
                    st += tf[i * v + c];
                }
                acc += std::abs(sp - st) / double(nc);
                ++count;
            }
        }
    return acc / double(count);
}

namespace detail {

/// True when flat spatial index `cell` lies on the outermost layer.
inline bool is_boundary_cell(std::size_t cell, const std::vector<std::size_t>& spatial) {
    for (auto it = spatial.rbegin(); it != spatial.rend(); ++it) {
        std::size_t n = *it;
        std::size_t i = cell % n;
        cell /= n;
        if (i == 0 || i == n - 1) return true;
    }
    return false;
}

}  // namespace detail

/// RMSE restricted to the outermost cell layer of the spatial domain.
inline double brmse(const Tensor& pred, const Tensor& truth) {
    const std::size_t nc = pred.cells();
    const std::size_t v = pred.channels;
    std::vector<std::size_t> bcells;
    for (std::size_t i = 0; i < nc; ++i)
        if (detail::is_boundary_cell(i, pred.spatial)) bcells.push_back(i);
    return detail::mean_over_frames(pred, truth, [&](const double* p, const double* t) {
        double s = 0.0;
        for (std::size_t i : bcells)
            for (std::size_t c = 0; c < v; ++c)
                s += (p[i * v + c] - t[i * v + c]) * (p[i * v + c] - t[i * v + c]);
        return std::sqrt(s / double(bcells.size() * v));
    });
}

/// Shell-integrated power spectrum of one channel of a spatial frame: DFT
/// power summed over shells of integer radius k = round(|k_vec|), divided by
/// the cell count once so that sum_k shell_power = sum_x |err_x|^2 (Parseval).
inline std::vector<double> radial_spectrum(const double* frame,
                                           const std::vector<std::size_t>& spatial,
                                           std::size_t channels, std::size_t channel) {
    const std::size_t d = spatial.size();
    std::size_t nc = 1;
    for (std::size_t s : spatial) nc *= s;
    std::vector<std::complex<double>> a(nc);
    for (std::size_t i = 0; i < nc; ++i) a[i] = frame[i * channels + channel];
    std::vector<int> shape(d);
    for (std::size_t i = 0; i < d; ++i) shape[i] = int(spatial[i]);
    fft::transform(a, shape, FFTW_FORWARD);

    // max possible shell radius
    double r2max = 0.0;
    for (std::size_t s : spatial) r2max += double(s / 2) * double(s / 2);
    std::vector<double> shells(std::size_t(std::lround(std::sqrt(r2max))) + 1, 0.0);
    for (std::size_t i = 0; i < nc; ++i) {
        std::size_t rem = i;
        double k2 = 0.0;
        for (auto it = spatial.rbegin(); it != spatial.rend(); ++it) {
            int k = fft::wavenumber(rem % *it, *it);
            rem /= *it;
            k2 += double(k) * double(k);
        }
        std::size_t shell = std::size_t(std::lround(std::sqrt(k2)));
        shells[shell] += std::norm(a[i]) / double(nc);
    }
    return shells;
}

inline std::vector<double> radial_spectrum(const Field& err, std::size_t channel = 0) {
    std::vector<std::size_t> spatial;
    for (int a = 0; a < err.grid.dim; ++a) spatial.push_back(err.grid.n[std::size_t(a)]);
    return radial_spectrum(err.values.data(), spatial, err.channels, channel);
}

/// Band-restricted spectral RMSE: sqrt(sum of error shell power over
/// [k_min, k_max]) / (k_max - k_min + 1), per (sample, timestep, channel),
/// averaged.
inline double frmse(const Tensor& pred, const Tensor& truth, const Band& band) {
    detail::check_shapes(pred, truth);
    const std::size_t nc = pred.cells();
    const std::size_t v = pred.channels;
    double acc = 0.0;
    std::size_t count = 0;
    std::vector<double> err(nc * v);
    for (std::size_t b = 0; b < pred.n_samples; ++b)
        for (std::size_t t = 0; t < pred.frames_per_sample(); ++t) {
            const double* pf = pred.frame(b, t);
            const double* tf = truth.frame(b, t);
            for (std::size_t i = 0; i < nc * v; ++i) err[i] = pf[i] - tf[i];
            for (std::size_t c = 0; c < v; ++c) {
                auto shells = radial_spectrum(err.data(), pred.spatial, v, c);
                double s = 0.0;
                for (std::size_t k = band.k_min; k <= band.k_max && k < shells.size(); ++k)
                    s += shells[k];
                acc += std::sqrt(s) / double(band.k_max - band.k_min + 1);
                ++count;
            }
        }
    return acc / double(count);
}

/// Normalized p-norm error ||pred - true||_p / ||true||_p over the whole
/// field, p in {2, 3}.
inline double inverse_norm_error(const Field& pred, const Field& truth, int p) {
    if (pred.values.size() != truth.values.size()) throw ConfigError("nLp shape mismatch");
    double e = 0.0, n = 0.0;
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
        e += std::pow(std::abs(pred.values[i] - truth.values[i]), double(p));
        n += std::pow(std::abs(truth.values[i]), double(p));
    }
    if (n == 0.0) throw ConfigError("nLp undefined: zero-norm truth");
    return std::pow(e / n, 1.0 / double(p));
}

inline double mse(const Field& pred, const Field& truth) {
    double s = 0.0;
    for (std::size_t i = 0; i < pred.values.size(); ++i)
        s += (pred.values[i] - truth.values[i]) * (pred.values[i] - truth.values[i]);
    return s / double(pred.values.size());
}

/// Band-restricted spectral errors for the inverse problem: fMSE (mean shell
/// power of the error over the band), and normalized spectral L2/L3 using
/// shell magnitudes, over the quarter-partition bands.
inline std::map<std::string, double> inverse_spectral_errors(const Field& pred,
                                                             const Field& truth) {
    auto err_field = pred;
    for (std::size_t i = 0; i < err_field.values.size(); ++i) err_field.values[i] -= truth.values[i];
    auto err_shells = radial_spectrum(err_field);
    auto true_shells = radial_spectrum(truth);

    std::vector<std::size_t> spatial;
    for (int a = 0; a < pred.grid.dim; ++a) spatial.push_back(pred.grid.n[std::size_t(a)]);
    const std::size_t k_max = nyquist_index(spatial);
    auto bands = inverse_bands(k_max);
    const char* names[3] = {"low", "mid", "high"};

    std::map<std::string, double> out;
    for (std::size_t bi = 0; bi < bands.size(); ++bi) {
        const Band& band = bands[bi];
        double emse = 0.0, e2 = 0.0, n2 = 0.0, e3 = 0.0, n3 = 0.0;
        std::size_t count = 0;
        for (std::size_t k = band.k_min; k <= band.k_max && k < err_shells.size(); ++k) {
            double ek = std::sqrt(err_shells[k]);
            double tk = std::sqrt(true_shells[k]);
            emse += err_shells[k];
            e2 += ek * ek;
            n2 += tk * tk;
            e3 += ek * ek * ek;
            n3 += tk * tk * tk;
            ++count;
        }
        std::string suffix = names[bi];
        out["fMSE_" + suffix] = count ? emse / double(count) : 0.0;
        out["fL2_" + suffix] = n2 > 0.0 ? std::sqrt(e2 / n2) : 0.0;
        out["fL3_" + suffix] = n3 > 0.0 ? std::cbrt(e3 / n3) : 0.0;
    }
    // whole-spectrum variants
    double emse = 0.0;
    for (double s : err_shells) emse += s;
    out["fMSE"] = emse / double(err_shells.size());
    return out;
}

/// All eight forward metrics as a flat report.
inline std::map<std::string, double> forward_report(const Tensor& pred, const Tensor& truth) {
    const std::size_t kny = nyquist_index(pred.spatial);
    auto bands = forward_bands(kny);
    return {
        {"RMSE", rmse(pred, truth)},
        {"nRMSE", nrmse(pred, truth)},
        {"max_error", max_error(pred, truth)},
        {"cRMSE", crmse(pred, truth)},
        {"bRMSE", brmse(pred, truth)},
        {"fRMSE_low", frmse(pred, truth, bands[0])},
        {"fRMSE_mid", frmse(pred, truth, bands[1])},
        {"fRMSE_high", frmse(pred, truth, bands[2])},
    };
}

}  // namespace pdegen::metrics
