#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pdegen/errors.hpp"
#include "pdegen/grid.hpp"
#include "pdegen/metrics.hpp"

namespace pdegen::inverse {

/// Coarse control-point parameterization of an initial condition: 64 values
/// on a uniform lattice spanning the domain inclusively, reconstructed on the
/// solver grid by (bi)linear interpolation.
struct IcParameterization {
    int dim = 1;
    std::vector<double> control_values;  // 64 in 1D, 8x8 in 2D (row-major)

    static IcParameterization zeros(int dim) {
        IcParameterization p;
        p.dim = dim;
        p.control_values.assign(64, 0.0);
        return p;
    }
    std::size_t lattice_n(int axis) const {
        (void)axis;
        return dim == 1 ? 64 : 8;
    }
};

struct InverseConfig {
    std::size_t horizon = 15;       // snapshot index of the observation
    double learning_rate = 0.2;
    std::size_t n_iterations = 200;
    double fd_epsilon = 1e-4;       // relative probe size for finite differences
    std::size_t n_test_samples = 100;
};

/// (Bi)linear interpolation of the control lattice onto grid cell centers.
/// Exact for fields already piecewise-(bi)linear on the lattice.
inline Field reconstruct_ic(const IcParameterization& params, const Grid& grid) {
    if (params.dim != grid.dim) throw ConfigError("lattice/grid dimension mismatch");
    Field f(grid, 1);
    auto locate = [&](int axis, double x, std::size_t nlat, std::size_t& i0, double& w) {
        // lattice nodes span [lo, hi] inclusively
        double s = (x - grid.lo[axis]) / grid.length(axis) * double(nlat - 1);
        s = std::clamp(s, 0.0, double(nlat - 1));
        i0 = std::min(std::size_t(s), nlat - 2);
        w = s - double(i0);
    };
    if (grid.dim == 1) {
        const std::size_t nl = params.lattice_n(0);
        for (std::size_t i = 0; i < grid.n[0]; ++i) {
            std::size_t i0;
            double w;
            locate(0, grid.center(0, i), nl, i0, w);
            f(i) = (1.0 - w) * params.control_values[i0] + w * params.control_values[i0 + 1];
        }
    } else if (grid.dim == 2) {
        const std::size_t nl = params.lattice_n(0);
        for (std::size_t i = 0; i < grid.n[0]; ++i)
            for (std::size_t j = 0; j < grid.n[1]; ++j) {
                std::size_t i0, j0;
                double wi, wj;
                locate(0, grid.center(0, i), nl, i0, wi);
                locate(1, grid.center(1, j), nl, j0, wj);
                auto c = [&](std::size_t a, std::size_t b) {
                    return params.control_values[a * nl + b];
                };
                f(f.cell_index(i, j)) = (1.0 - wi) * ((1.0 - wj) * c(i0, j0) + wj * c(i0, j0 + 1)) +
                                        wi * ((1.0 - wj) * c(i0 + 1, j0) + wj * c(i0 + 1, j0 + 1));
            }
    } else {
        throw ConfigError("reconstruct_ic supports 1D and 2D lattices");
    }
    return f;
}

/// Samples a field at the lattice node positions (nearest cell center), the
/// left inverse of reconstruct_ic for lattice-representable fields.
inline IcParameterization sample_at_lattice(const Field& f) {
    IcParameterization p;
    p.dim = f.grid.dim;
    if (f.grid.dim == 1) {
        p.control_values.resize(64);
        for (std::size_t l = 0; l < 64; ++l) {
            double x = f.grid.lo[0] + double(l) / 63.0 * f.grid.length(0);
            auto i = std::size_t(std::clamp((x - f.grid.lo[0]) / f.grid.dx(0) - 0.5, 0.0,
                                            double(f.grid.n[0] - 1)));
            p.control_values[l] = f(i);
        }
    } else {
        p.control_values.resize(64);
        for (std::size_t a = 0; a < 8; ++a)
            for (std::size_t b = 0; b < 8; ++b) {
                double x = f.grid.lo[0] + double(a) / 7.0 * f.grid.length(0);
                double y = f.grid.lo[1] + double(b) / 7.0 * f.grid.length(1);
                auto i = std::size_t(std::clamp((x - f.grid.lo[0]) / f.grid.dx(0) - 0.5, 0.0,
                                                double(f.grid.n[0] - 1)));
                auto j = std::size_t(std::clamp((y - f.grid.lo[1]) / f.grid.dx(1) - 0.5, 0.0,
                                                double(f.grid.n[1] - 1)));
                p.control_values[a * 8 + b] = f(f.cell_index(i, j));
            }
    }
    return p;
}

/// Forward map: initial condition -> field at the observation horizon.
using ForwardMap = std::function<Field(const Field&)>;

/// MSE between the forward-propagated reconstruction and the observation.
inline double inverse_loss(const IcParameterization& params, const Field& observed,
                           const ForwardMap& forward) {
    Field pred = forward(reconstruct_ic(params, observed.grid));
    return metrics::mse(pred, observed);
}

struct EstimateResult {
    IcParameterization best;
    std::vector<double> loss_trace;       // loss per iteration
    std::vector<double> best_loss_trace;  // monotone best-so-far
};

/// Gradient descent on the control values with central finite-difference
/// gradients (2x64 forward solves per iteration). The descent uses the
/// sum-of-squares gradient (cell count times the MSE gradient) so the
/// stated learning rate produces grid-independent steps.
inline EstimateResult estimate_ic(const Field& observed, const ForwardMap& forward,
                                  const InverseConfig& config,
                                  const IcParameterization* init = nullptr) {
    IcParameterization c = init ? *init : IcParameterization::zeros(observed.grid.dim);
    const std::size_t np = c.control_values.size();
    const double n_cells = double(observed.cells());

    EstimateResult res;
    res.best = c;
    double best_loss = inverse_loss(c, observed, forward);
    if (!std::isfinite(best_loss)) throw SampleRejected("non-finite initial inverse loss");

    double lr = config.learning_rate;
    double fd_rel = config.fd_epsilon;
    std::size_t failures = 0;

    for (std::size_t it = 0; it < config.n_iterations; ++it) {
        std::vector<double> grad(np);
        double cmag = 0.0;
        for (double v : c.control_values) cmag = std::max(cmag, std::abs(v));
        double eps = fd_rel * std::max(cmag, 1.0);
        for (std::size_t j = 0; j < np; ++j) {
            IcParameterization probe = c;
            probe.control_values[j] += eps;
            double lp = inverse_loss(probe, observed, forward);
            probe.control_values[j] = c.control_values[j] - eps;
            double lm = inverse_loss(probe, observed, forward);
            grad[j] = n_cells * (lp - lm) / (2.0 * eps);
        }

        IcParameterization next = c;
        for (std::size_t j = 0; j < np; ++j) next.control_values[j] -= lr * grad[j];
        double loss = inverse_loss(next, observed, forward);
        if (!std::isfinite(loss)) {
            fd_rel *= 0.5;
            lr *= 0.5;
            if (++failures > 40) throw SampleRejected("inverse descent kept producing non-finite loss");
            res.loss_trace.push_back(best_loss);
            res.best_loss_trace.push_back(best_loss);
            continue;
        }
        c = std::move(next);
        res.loss_trace.push_back(loss);
        if (loss < best_loss) {
            best_loss = loss;
            res.best = c;
        }
        res.best_loss_trace.push_back(best_loss);
    }
    return res;
}

/// Inverse-problem report: errors of the estimated initial condition and the
/// primed errors of the prediction at the horizon.
inline std::map<std::string, double> inverse_report(const Field& estimated_ic,
                                                    const Field& truth_ic, const Field& pred_T,
                                                    const Field& true_T) {
    std::map<std::string, double> r;
    r["MSE"] = metrics::mse(estimated_ic, truth_ic);
    r["nL2"] = metrics::inverse_norm_error(estimated_ic, truth_ic, 2);
    r["nL3"] = metrics::inverse_norm_error(estimated_ic, truth_ic, 3);
    for (const auto& [k, v] : metrics::inverse_spectral_errors(estimated_ic, truth_ic)) r[k] = v;
    r["MSE'"] = metrics::mse(pred_T, true_T);
    r["nL2'"] = metrics::inverse_norm_error(pred_T, true_T, 2);
    r["nL3'"] = metrics::inverse_norm_error(pred_T, true_T, 3);
    for (const auto& [k, v] : metrics::inverse_spectral_errors(pred_T, true_T)) r[k + "'"] = v;
    return r;
}

}  // namespace pdegen::inverse
