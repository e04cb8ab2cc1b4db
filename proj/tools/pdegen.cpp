// pdegen: generate PDE benchmark datasets, evaluate predictions against a
// reference file, and estimate initial conditions by gradient descent.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pdegen/generate.hpp"
#include "pdegen/inverse.hpp"
#include "pdegen/io/report.hpp"
#include "pdegen/metrics.hpp"

namespace {

using namespace pdegen;

std::string default_outdir() {
    const char* env = std::getenv("PDEGEN_OUTDIR");
    return env && *env ? env : ".";
}

void apply_param_flags(const std::vector<std::string>& kvs, GenerateConfig& cfg) {
    for (const auto& kv : kvs) {
        auto pos = kv.find('=');
        if (pos == std::string::npos || pos == 0)
            throw ConfigError("--param expects k=v, got: " + kv);
        std::string key = kv.substr(0, pos);
        std::string val = kv.substr(pos + 1);
        if (key == "ic") {
            cfg.ic = val;
        } else if (key == "bc") {
            cfg.bc = val;
        } else {
            std::size_t used = 0;
            double x = std::stod(val, &used);
            if (used != val.size()) throw ConfigError("--param " + key + ": bad number " + val);
            cfg.params[key] = x;
        }
    }
}

std::map<std::string, std::string> parse_yaml_scalars(const std::string& yaml) {
    std::map<std::string, std::string> out;
    std::istringstream is(yaml);
    std::string line;
    while (std::getline(is, line)) {
        auto pos = line.find(": ");
        if (pos == std::string::npos || pos == 0) continue;
        out[line.substr(0, pos)] = line.substr(pos + 2);
    }
    return out;
}

/// Interprets a stored array as a batch tensor using the file's layout string
/// (e.g. "btxv", "btxy", "bxy"): b = sample, t = time, v = channel, the rest
/// are spatial axes.
metrics::Tensor tensor_from_array(const io::NamedArray& arr, const std::string& layout) {
    if (layout.size() != arr.shape.size())
        throw ConfigError("layout '" + layout + "' does not match array rank");
    metrics::Tensor t;
    t.n_samples = 1;
    t.channels = 1;
    for (std::size_t i = 0; i < layout.size(); ++i) {
        char c = layout[i];
        if (c == 'b')
            t.n_samples = arr.shape[i];
        else if (c == 't')
            t.n_time = arr.shape[i];
        else if (c == 'v')
            t.channels = arr.shape[i];
        else
            t.spatial.push_back(arr.shape[i]);
    }
    t.data = arr.data;
    if (t.size() != arr.data.size()) throw ConfigError("array size does not match its layout");
    return t;
}

std::string guess_layout(const io::NamedArray& arr, const std::string& from_metadata) {
    if (!from_metadata.empty()) return from_metadata;
    // fall back to the packing convention: (b, t, x..., v)
    switch (arr.shape.size()) {
        case 2: return "bx";
        case 3: return "btx";
        case 4: return "btxv";
        case 5: return "btxyv";
        default: throw ConfigError("cannot infer layout for rank " + std::to_string(arr.shape.size()));
    }
}

int cmd_generate(GenerateConfig cfg) {
    GenerateResult res = run_generate(cfg);
    for (std::uint64_t s : res.rejected_streams)
        std::cerr << "rejected sample stream " << s << " (retried)\n";
    std::cout << res.path << "\n";
    return 0;
}

int cmd_evaluate(const std::string& truth_path, const std::string& pred_path,
                 const std::string& out_stem) {
    io::DatasetContents truth = io::read_dataset(truth_path);
    io::DatasetContents pred = io::read_dataset(pred_path);
    if (truth.arrays.empty()) throw ConfigError("truth file has no arrays: " + truth_path);
    if (pred.arrays.size() != truth.arrays.size())
        throw ConfigError("prediction and truth files have different array counts");
    auto meta = parse_yaml_scalars(truth.yaml_metadata);
    std::string layout_key = meta.count("layout") ? meta["layout"] : "";

    std::map<std::string, double> report;
    for (std::size_t a = 0; a < truth.arrays.size(); ++a) {
        const auto& ta = truth.arrays[a];
        const auto& pa = pred.arrays[a];
        if (pa.name != ta.name || pa.shape != ta.shape)
            throw ConfigError("array mismatch between files: " + ta.name);
        std::string layout = guess_layout(ta, layout_key);
        auto tt = tensor_from_array(ta, layout);
        auto pt = tensor_from_array(pa, layout);
        auto part = metrics::forward_report(pt, tt);
        std::string prefix = truth.arrays.size() > 1 ? ta.name + "." : "";
        for (const auto& [k, v] : part) report[prefix + k] = v;
    }
    std::cout << io::report_table(report);
    io::emit_report(report, out_stem, {{"truth", truth_path}, {"prediction", pred_path}});
    return 0;
}

int cmd_inverse(const std::string& truth_path, GenerateConfig cfg,
                inverse::InverseConfig icfg, const std::string& out_stem) {
    io::DatasetContents truth = io::read_dataset(truth_path);
    if (truth.arrays.size() != 1 || truth.arrays[0].name != "tensor")
        throw ConfigError("inverse needs a single-array scalar dataset");
    auto meta = parse_yaml_scalars(truth.yaml_metadata);
    if (cfg.pde.empty() && meta.count("pde")) cfg.pde = meta["pde"];
    for (const char* key : {"beta", "nu", "rho"})
        if (!cfg.params.count(key) && meta.count(key)) cfg.params[key] = std::stod(meta[key]);

    const auto& arr = truth.arrays[0];
    auto tensor = tensor_from_array(arr, guess_layout(arr, meta.count("layout") ? meta["layout"] : ""));
    if (tensor.channels != 1 || tensor.spatial.size() != 1)
        throw ConfigError("inverse supports 1D single-channel datasets");
    if (tensor.n_time <= icfg.horizon)
        throw ConfigError("dataset has fewer snapshots than the horizon");

    double t0 = meta.count("t_start") ? std::stod(meta["t_start"]) : 0.0;
    double t1 = meta.count("t_end") ? std::stod(meta["t_end"]) : 1.0;
    TimeAxis file_axis(t0, t1, tensor.n_time);
    double t_obs = file_axis.time(icfg.horizon);
    Grid grid = Grid::make_1d(tensor.spatial[0],
                              meta.count("domain_lo") ? std::stod(meta["domain_lo"].substr(1)) : 0.0,
                              meta.count("domain_hi") ? std::stod(meta["domain_hi"].substr(1)) : 1.0);
    TimeAxis solve_axis(t0, t_obs, icfg.horizon + 1);

    inverse::ForwardMap forward = [&](const Field& u0) -> Field {
        if (cfg.pde == "advection") {
            solver::AdvectionParams p{cfg.param("beta", 1.0)};
            return solver::solve_advection(u0, p, solve_axis).frames.back();
        }
        if (cfg.pde == "burgers") {
            solver::BurgersParams p;
            p.nu = cfg.param("nu", 0.01);
            return solver::solve_burgers(u0, p, solve_axis).frames.back();
        }
        if (cfg.pde == "diffreact1d") {
            solver::ReactDiffParams p;
            p.nu = cfg.param("nu", 0.5);
            p.rho = cfg.param("rho", 1.0);
            return solver::solve_diffreact1d(u0, p, solve_axis).frames.back();
        }
        throw ConfigError("inverse supports advection, burgers, diffreact1d; got: " + cfg.pde);
    };

    std::size_t n = std::min<std::size_t>(icfg.n_test_samples, tensor.n_samples);
    std::map<std::string, double> mean;
    for (std::size_t b = 0; b < n; ++b) {
        Field true_ic(grid, 1), true_T(grid, 1);
        const double* f0 = tensor.frame(b, 0);
        const double* fT = tensor.frame(b, icfg.horizon);
        std::copy(f0, f0 + grid.cells(), true_ic.values.begin());
        std::copy(fT, fT + grid.cells(), true_T.values.begin());

        auto est = inverse::estimate_ic(true_T, forward, icfg);
        Field est_ic = inverse::reconstruct_ic(est.best, grid);
        Field pred_T = forward(est_ic);
        for (const auto& [k, v] : inverse::inverse_report(est_ic, true_ic, pred_T, true_T))
            mean[k] += v / double(n);
        std::cerr << "sample " << b << ": final loss "
                  << est.best_loss_trace.back() << "\n";
    }
    std::cout << io::report_table(mean);
    io::emit_report(mean, out_stem, {{"truth", truth_path}, {"pde", cfg.pde}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic PDE benchmark dataset generator and evaluator"};
    app.require_subcommand(1);

    GenerateConfig cfg;
    cfg.outdir = default_outdir();
    std::vector<std::string> param_flags;
    std::string precision = "f32";

    auto add_common = [&](CLI::App* c) {
        c->add_option("--pde", cfg.pde, "PDE id");
        c->add_option("--param", param_flags, "parameter as k=v (repeatable)");
        c->add_option("--ns", cfg.ns, "cells per spatial axis");
        c->add_option("--nt", cfg.nt, "stored snapshots (frame 0 is the IC)");
        c->add_option("--samples", cfg.samples, "number of samples");
        c->add_option("--seed", cfg.seed, "base RNG seed");
        c->add_option("--out", cfg.outdir, "output directory or report stem");
        c->add_option("--workers", cfg.workers, "worker thread count");
        c->add_option("--precision", precision, "storage precision")
            ->check(CLI::IsMember({"f32", "f64"}));
    };

    auto* gen = app.add_subcommand("generate", "generate a dataset file");
    add_common(gen);
    gen->get_option("--pde")->required();

    auto* eva = app.add_subcommand("evaluate", "compare a prediction file against a truth file");
    std::string truth_path, pred_path, report_stem = "report";
    eva->add_option("--truth", truth_path, "reference dataset")->required();
    eva->add_option("--pred", pred_path, "prediction dataset")->required();
    eva->add_option("--out", report_stem, "report file stem");

    auto* inv = app.add_subcommand("inverse", "estimate initial conditions from a truth file");
    inverse::InverseConfig icfg;
    inv->add_option("--truth", truth_path, "reference dataset")->required();
    inv->add_option("--pde", cfg.pde, "PDE id (default: from file metadata)");
    inv->add_option("--param", param_flags, "parameter as k=v (repeatable)");
    inv->add_option("--horizon", icfg.horizon, "observation snapshot index");
    inv->add_option("--lr", icfg.learning_rate, "gradient descent learning rate");
    inv->add_option("--iters", icfg.n_iterations, "descent iterations");
    inv->add_option("--samples", icfg.n_test_samples, "samples to estimate");
    inv->add_option("--out", report_stem, "report file stem");

    try {
        app.parse(argc, argv);
        using namespace pdegen;
        apply_param_flags(param_flags, cfg);
        cfg.precision = precision == "f64" ? io::Precision::f64 : io::Precision::f32;
        if (gen->parsed()) return cmd_generate(cfg);
        if (eva->parsed()) return cmd_evaluate(truth_path, pred_path, report_stem);
        return cmd_inverse(truth_path, cfg, icfg, report_stem);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const pdegen::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const pdegen::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
