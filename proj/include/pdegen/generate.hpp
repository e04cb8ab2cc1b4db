#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pdegen/grid.hpp"
#include "pdegen/ic/compressible.hpp"
#include "pdegen/ic/grf.hpp"
#include "pdegen/ic/sinusoid.hpp"
#include "pdegen/io/dataset.hpp"
#include "pdegen/rng.hpp"
#include "pdegen/solver/advection.hpp"
#include "pdegen/solver/burgers.hpp"
#include "pdegen/solver/cns.hpp"
#include "pdegen/solver/darcy.hpp"
#include "pdegen/solver/fhn.hpp"
#include "pdegen/solver/reactdiff.hpp"
#include "pdegen/solver/sorption.hpp"
#include "pdegen/solver/swe.hpp"

namespace pdegen {

/// Declarative description of one dataset-generation run.
struct GenerateConfig {
    std::string pde;  // advection | burgers | diffreact1d | diffsorp | darcy |
                      // cns1d | cns2d | cns3d | swe2d | diffreact2d
    std::map<std::string, double> params;
    std::string ic = "";  // cns: rand | shock | turb
    std::string bc = "";  // cns: periodic | outgoing
    std::size_t ns = 0;   // 0 = per-PDE default
    std::size_t nt = 0;
    std::size_t samples = 8;
    std::uint64_t seed = 0;
    std::string outdir = ".";
    std::size_t workers = 1;
    io::Precision precision = io::Precision::f32;

    double param(const std::string& key, double fallback) const {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }
};

struct GenerateResult {
    std::string path;
    std::vector<std::uint64_t> rejected_streams;
};

namespace detail {

struct PdeSetup {
    Grid grid;
    TimeAxis time;
    bool time_dependent = true;
    std::size_t channels = 1;
    std::string param_tag;  // middle segment of the file name
};

inline PdeSetup pde_setup(const GenerateConfig& cfg) {
    auto ns = [&](std::size_t dflt) { return cfg.ns ? cfg.ns : dflt; };
    auto nt = [&](std::size_t dflt) { return cfg.nt ? cfg.nt : dflt; };
    std::ostringstream tag;
    tag.precision(10);
    PdeSetup s;
    if (cfg.pde == "advection") {
        s.grid = Grid::make_1d(ns(1024));
        s.time = TimeAxis(0.0, 2.0, nt(201));
        tag << "beta" << cfg.param("beta", 1.0);
    } else if (cfg.pde == "burgers") {
        if (!(cfg.param("nu", 0.01) > 0.0)) throw ConfigError("burgers nu must be positive");
        s.grid = Grid::make_1d(ns(1024));
        s.time = TimeAxis(0.0, 2.0, nt(201));
        tag << "nu" << cfg.param("nu", 0.01);
    } else if (cfg.pde == "diffreact1d") {
        s.grid = Grid::make_1d(ns(256));
        s.time = TimeAxis(0.0, 1.0, nt(101));
        tag << "nu" << cfg.param("nu", 0.5) << "_rho" << cfg.param("rho", 1.0);
    } else if (cfg.pde == "diffsorp") {
        s.grid = Grid::make_1d(ns(256));
        s.time = TimeAxis(0.0, 500.0, nt(101));
        tag << "na";
    } else if (cfg.pde == "darcy") {
        std::size_t n = ns(128);
        s.grid = Grid::make_2d(n, n);
        s.time_dependent = false;
        s.channels = 2;
        tag << "beta" << cfg.param("beta", 1.0);
    } else if (cfg.pde == "cns1d" || cfg.pde == "cns2d" || cfg.pde == "cns3d") {
        int d = cfg.pde[3] - '0';
        std::size_t n = ns(d == 1 ? 256 : d == 2 ? 64 : 32);
        if (d == 1)
            s.grid = Grid::make_1d(n);
        else if (d == 2)
            s.grid = Grid::make_2d(n, n);
        else
            s.grid = Grid::make_3d(n, n, n);
        s.time = TimeAxis(0.0, 1.0, nt(21));
        s.channels = std::size_t(d) + 2;
        tag << "eta" << cfg.param("eta", 1e-8) << "_zeta" << cfg.param("zeta", 1e-8);
        if (d > 1) tag << "_M" << cfg.param("mach", 0.1);
    } else if (cfg.pde == "swe2d") {
        std::size_t n = ns(64);
        s.grid = Grid::make_2d(n, n, -2.5, 2.5, -2.5, 2.5);
        s.time = TimeAxis(0.0, 1.0, nt(101));
        tag << "na";
    } else if (cfg.pde == "diffreact2d") {
        std::size_t n = ns(64);
        s.grid = Grid::make_2d(n, n, -1.0, 1.0, -1.0, 1.0);
        s.time = TimeAxis(0.0, 5.0, nt(101));
        s.channels = 2;
        tag << "na";
    } else {
        throw ConfigError("unknown pde id: " + cfg.pde);
    }
    s.param_tag = tag.str();
    return s;
}

/// One sample's result: a trajectory for time-dependent problems, a single
/// frame otherwise.
inline std::vector<Field> run_sample(const GenerateConfig& cfg, const PdeSetup& s,
                                     std::uint64_t stream) {
    SeededRng rng(cfg.seed, stream);
    if (cfg.pde == "advection") {
        Field u0 = ic::sinusoidal_superposition(rng, s.grid);
        solver::AdvectionParams p{cfg.param("beta", 1.0)};
        return solver::solve_advection(u0, p, s.time).frames;
    }
    if (cfg.pde == "burgers") {
        Field u0 = ic::sinusoidal_superposition(rng, s.grid);
        solver::BurgersParams p;
        p.nu = cfg.param("nu", 0.01);
        return solver::solve_burgers(u0, p, s.time).frames;
    }
    if (cfg.pde == "diffreact1d") {
        ic::SinusoidSpec spec;
        spec.abs_prob = spec.window_prob = 0.0;
        Field u0 = ic::normalized_positive_ic(rng, s.grid, spec);
        solver::ReactDiffParams p;
        p.nu = cfg.param("nu", 0.5);
        p.rho = cfg.param("rho", 1.0);
        return solver::solve_diffreact1d(u0, p, s.time).frames;
    }
    if (cfg.pde == "diffsorp") {
        Field u0 = ic::uniform_random_ic(rng, s.grid, 0.0, 0.2);
        return solver::solve_diffsorp(u0, solver::SorptionParams{}, s.time).frames;
    }
    if (cfg.pde == "darcy") {
        Field a = ic::darcy_coefficient_field(rng, s.grid);
        solver::DarcyParams p;
        p.beta = cfg.param("beta", 1.0);
        return {solver::solve_darcy_steady(a, p)};
    }
    if (cfg.pde == "swe2d") {
        Field h = ic::radial_dam_break_ic(rng, s.grid);
        return solver::solve_swe(solver::swe_state_from_height(h), s.time).frames;
    }
    if (cfg.pde == "diffreact2d") {
        Field uv0 = ic::normal_noise_ic(rng, s.grid, 2);
        return solver::solve_diffreact2d(uv0, solver::FhnParams{}, s.time).frames;
    }
    // compressible Navier-Stokes
    solver::CnsParams p;
    p.eta = cfg.param("eta", 1e-8);
    p.zeta = cfg.param("zeta", 1e-8);
    p.bc = cfg.bc == "outgoing" ? solver::CnsBoundary::outgoing : solver::CnsBoundary::periodic;
    double mach = cfg.param("mach", 0.1);
    solver::ConservedState st;
    if (cfg.ic == "shock") {
        st = ic::shock_tube_ic(rng, s.grid);
    } else if (cfg.ic == "turb") {
        double rho0 = 1.0, p0 = 0.6;
        Field vel = ic::turbulence_velocity(rng, s.grid, mach,
                                            solver::sound_speed(rho0, p0, solver::kGamma));
        Field rho(s.grid, 1, rho0), pr(s.grid, 1, p0);
        st = solver::conserved_from_primitive(rho, vel, pr);
    } else {
        st = ic::random_field_cns_ic(rng, s.grid, mach);
    }
    return solver::solve_cns(st, p, s.time).frames;
}

inline std::string yaml_metadata(const GenerateConfig& cfg, const PdeSetup& s,
                                 const std::string& layout) {
    std::ostringstream y;
    y.precision(17);
    y << "pde: " << cfg.pde << "\n";
    for (const auto& [k, v] : cfg.params) y << k << ": " << v << "\n";
    if (!cfg.ic.empty()) y << "ic: " << cfg.ic << "\n";
    if (!cfg.bc.empty()) y << "bc: " << cfg.bc << "\n";
    y << "layout: " << layout << "\n";
    y << "grid: [";
    for (int a = 0; a < s.grid.dim; ++a) y << (a ? ", " : "") << s.grid.n[std::size_t(a)];
    y << "]\n";
    y << "domain_lo: [";
    for (int a = 0; a < s.grid.dim; ++a) y << (a ? ", " : "") << s.grid.lo[std::size_t(a)];
    y << "]\n";
    y << "domain_hi: [";
    for (int a = 0; a < s.grid.dim; ++a) y << (a ? ", " : "") << s.grid.hi[std::size_t(a)];
    y << "]\n";
    if (s.time_dependent) {
        y << "t_start: " << s.time.t_start << "\n";
        y << "t_end: " << s.time.t_end << "\n";
        // stored snapshots; frame 0 is the initial condition
        y << "n_snapshots: " << s.time.n_snapshots << "\n";
    }
    y << "samples: " << cfg.samples << "\n";
    y << "seed: " << cfg.seed << "\n";
    y << "precision: " << (cfg.precision == io::Precision::f32 ? "f32" : "f64") << "\n";
    y << "abs_window_draws: independent_bernoulli\n";
    return y.str();
}

}  // namespace detail

/// Generates `samples` trajectories (sample-sharded across `workers` threads,
/// one RNG stream per sample index) and writes one dataset file. Output is
/// identical for any worker count. Throws if more than 1% of samples are
/// rejected.
inline GenerateResult run_generate(const GenerateConfig& cfg) {
    const detail::PdeSetup setup = detail::pde_setup(cfg);
    const std::size_t b = cfg.samples;
    if (b == 0) throw ConfigError("samples must be positive");
    const std::size_t nt = setup.time_dependent ? setup.time.n_snapshots : 0;
    const std::size_t frames = setup.time_dependent ? nt : 1;
    const std::size_t cells = setup.grid.cells();
    const bool is_cns = cfg.pde.rfind("cns", 0) == 0;
    const bool is_darcy = cfg.pde == "darcy";

    // assemble output array skeletons
    std::vector<io::NamedArray> arrays;
    std::string layout;
    auto spatial_dims = [&](io::NamedArray& a) {
        for (int ax = 0; ax < setup.grid.dim; ++ax) a.shape.push_back(setup.grid.n[std::size_t(ax)]);
    };
    if (is_cns) {
        const char* vel_names[3] = {"Vx", "Vy", "Vz"};
        std::vector<std::string> names{"density"};
        for (int a = 0; a < setup.grid.dim; ++a) names.push_back(vel_names[a]);
        names.push_back("pressure");
        for (const auto& nm : names) {
            io::NamedArray arr;
            arr.name = nm;
            arr.shape = {b, nt};
            spatial_dims(arr);
            arr.data.assign(b * nt * cells, 0.0);
            arrays.push_back(std::move(arr));
        }
        layout = setup.grid.dim == 1 ? "btx" : setup.grid.dim == 2 ? "btxy" : "btxyz";
    } else if (is_darcy) {
        for (const char* nm : {"nu", "tensor"}) {
            io::NamedArray arr;
            arr.name = nm;
            arr.shape = {b};
            spatial_dims(arr);
            arr.data.assign(b * cells, 0.0);
            arrays.push_back(std::move(arr));
        }
        layout = "bxy";
    } else {
        io::NamedArray arr;
        arr.name = "tensor";
        arr.shape = {b, nt};
        spatial_dims(arr);
        arr.shape.push_back(setup.channels);
        arr.data.assign(b * nt * cells * setup.channels, 0.0);
        arrays.push_back(std::move(arr));
        layout = setup.grid.dim == 1 ? "btxv" : "btxyv";
    }

    std::mutex reject_mutex;
    std::vector<std::uint64_t> rejected;
    std::atomic<std::size_t> next{0};

    auto pack_sample = [&](std::size_t sample, const std::vector<Field>& result) {
        if (is_cns || is_darcy) {
            for (std::size_t c = 0; c < arrays.size(); ++c) {
                double* dst = arrays[c].data.data() + sample * frames * cells;
                for (std::size_t t = 0; t < frames; ++t)
                    for (std::size_t i = 0; i < cells; ++i) dst[t * cells + i] = result[t](i, c);
            }
        } else {
            const std::size_t fs = cells * setup.channels;
            double* dst = arrays[0].data.data() + sample * frames * fs;
            for (std::size_t t = 0; t < frames; ++t)
                std::copy(result[t].values.begin(), result[t].values.end(), dst + t * fs);
        }
    };

    auto worker = [&]() {
        for (;;) {
            std::size_t sample = next.fetch_add(1);
            if (sample >= b) return;
            // deterministic retry streams on rejection
            constexpr std::uint64_t kRetryStride = 1u << 24;
            bool done = false;
            for (std::uint64_t attempt = 0; attempt < 3 && !done; ++attempt) {
                std::uint64_t stream = sample + attempt * kRetryStride;
                try {
                    auto result = detail::run_sample(cfg, setup, stream);
                    pack_sample(sample, result);
                    done = true;
                } catch (const SampleRejected&) {
                    std::lock_guard<std::mutex> lock(reject_mutex);
                    rejected.push_back(stream);
                }
            }
            if (!done) throw SampleRejected("sample " + std::to_string(sample) +
                                            " rejected on all retry streams");
        }
    };

    if (cfg.workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(cfg.workers);
        for (std::size_t w = 0; w < cfg.workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    worker();
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    if (double(rejected.size()) > 0.01 * double(b))
        throw SampleRejected("rejection rate above 1%: " + std::to_string(rejected.size()) +
                             " of " + std::to_string(b));

    std::ostringstream config_tag;
    config_tag << "ns" << setup.grid.n[0] << "_nt" << (setup.time_dependent ? nt : 0) << "_seed"
               << cfg.seed;
    std::string filename = io::make_filename(cfg.pde, setup.param_tag, config_tag.str());
    std::filesystem::create_directories(cfg.outdir);
    std::string path = (std::filesystem::path(cfg.outdir) / filename).string();
    io::write_dataset(path, arrays, detail::yaml_metadata(cfg, setup, layout), cfg.precision);
    std::sort(rejected.begin(), rejected.end());
    return {path, rejected};
}

}  // namespace pdegen
