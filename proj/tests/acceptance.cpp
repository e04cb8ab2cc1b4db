// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails. Each check is oracle- or property-based and runs at desk
// scale.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "pdegen/generate.hpp"
#include "pdegen/inverse.hpp"
#include "pdegen/metrics.hpp"
#include "support/naive_metrics.hpp"
#include "support/poisson_dst.hpp"
#include "support/riemann_exact.hpp"

using namespace pdegen;

namespace {

int g_failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail,
            double seconds) {
    std::printf("%s: %2d %-28s %s  [%.1fs]\n", ok ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str(), seconds);
    if (!ok) ++g_failures;
}

void run(int id, const std::string& what, const std::function<std::pair<bool, std::string>()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        auto [o, d] = fn();
        ok = o;
        detail = d;
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, what, ok, detail, secs);
}

Field smooth_ic(const Grid& g) {
    ic::SinusoidMode m1, m2;
    m1.n = {1, 0, 0};
    m1.amplitude = 1.0;
    m1.phase = 0.3;
    m2.n = {2, 0, 0};
    m2.amplitude = 0.5;
    m2.phase = 1.1;
    return ic::sinusoid_field(g, {m1, m2});
}

double l2(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        s += (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
    return std::sqrt(s / double(a.values.size()));
}

double advection_error(std::size_t n, double t_end) {
    Grid g = Grid::make_1d(n);
    Field u0 = smooth_ic(g);
    Trajectory traj =
        solver::solve_advection(u0, solver::AdvectionParams{1.0}, TimeAxis(0.0, t_end, 2));
    return l2(traj.frames.back(), solver::advect_exact(u0, 1.0, t_end));
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// position where a sampled profile crosses `level`, via linear interpolation
// between the bracketing cells inside [x_lo, x_hi]
double crossing(const Field& f, double level, double x_lo, double x_hi, bool descending) {
    const Grid& g = f.grid;
    for (std::size_t i = 0; i + 1 < g.n[0]; ++i) {
        double x0 = g.center(0, i), x1 = g.center(0, i + 1);
        if (x1 < x_lo || x0 > x_hi) continue;
        double a = f(i), b = f(i + 1);
        bool crosses = descending ? (a >= level && b < level) : (a <= level && b > level);
        if (crosses) return x0 + (level - a) / (b - a) * (x1 - x0);
    }
    return std::nan("");
}

}  // namespace

int main() {
    run(1, "advection convergence", []() -> std::pair<bool, std::string> {
        double e256 = advection_error(256, 1.0);
        double e512 = advection_error(512, 1.0);
        double e1024 = advection_error(1024, 1.0);
        double r1 = e256 / e512, r2 = e512 / e1024;
        bool ok = r1 >= 3.5 && r2 >= 3.5;
        return {ok, "L2 " + fmt(e256) + " -> " + fmt(e512) + " -> " + fmt(e1024) + ", ratios " +
                        fmt(r1) + ", " + fmt(r2)};
    });

    run(2, "advection exact fidelity", []() -> std::pair<bool, std::string> {
        Grid g = Grid::make_1d(1024);
        Field u0 = smooth_ic(g);
        TimeAxis axis(0.0, 2.0, 5);
        Trajectory traj = solver::solve_advection(u0, solver::AdvectionParams{1.0}, axis);
        double worst = 0.0;
        for (std::size_t k = 1; k < axis.n_snapshots; ++k)
            worst = std::max(worst, l2(traj.frames[k], solver::advect_exact(u0, 1.0, axis.time(k))));
        return {worst < 1e-3, "max L2 over (0,2] = " + fmt(worst)};
    });

    run(3, "Sod tube vs exact Riemann", []() -> std::pair<bool, std::string> {
        const std::size_t n = 1024;
        Grid g = Grid::make_1d(n);
        Field rho(g, 1), vel(g, 1), p(g, 1);
        for (std::size_t i = 0; i < n; ++i) {
            bool left = g.center(0, i) < 0.5;
            rho(i) = left ? 1.0 : 0.125;
            p(i) = left ? 1.0 : 0.1;
        }
        solver::CnsParams cp;
        cp.bc = solver::CnsBoundary::outgoing;
        const double t = 0.2;
        Trajectory traj = solver::solve_cns(solver::conserved_from_primitive(rho, vel, p), cp,
                                            TimeAxis(0.0, t, 2));
        const Field& got = traj.frames.back();
        Field rho_num(g, 1);
        for (std::size_t i = 0; i < n; ++i) rho_num(i) = got(i, 0);

        auto sol = riemann::solve({1.0, 0.0, 1.0}, {0.125, 0.0, 0.1}, solver::kGamma);
        auto waves = riemann::wave_positions(sol, 0.5, t);
        double l1 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            l1 += std::abs(rho_num(i) - riemann::sample(sol, (g.center(0, i) - 0.5) / t).rho);
        l1 /= double(n);

        // star-region densities bracketing the contact and the shock
        double rho_starL = riemann::sample(sol, (waves.contact - 0.5) / t - 1e-9).rho;
        double rho_starR = riemann::sample(sol, (waves.contact - 0.5) / t + 1e-9).rho;
        double rho_R = 0.125;
        double dx = g.dx(0);
        // shock and contact: mid-level crossings near the exact positions
        double shock_pos =
            crossing(rho_num, 0.5 * (rho_starR + rho_R), waves.right_wave - 20 * dx,
                     waves.right_wave + 20 * dx, true);
        double contact_pos =
            crossing(rho_num, 0.5 * (rho_starL + rho_starR), waves.contact - 20 * dx,
                     waves.contact + 20 * dx, true);
        // rarefaction: both profiles cross the fan mid-density at a unique point
        double rho_head = 1.0, rho_tail = rho_starL;
        double fan_level = 0.5 * (rho_head + rho_tail);
        double fan_exact = std::nan("");
        for (double x = waves.left_head; x < waves.left_tail; x += 1e-5)
            if (riemann::sample(sol, (x - 0.5) / t).rho <= fan_level) {
                fan_exact = x;
                break;
            }
        double fan_pos = crossing(rho_num, fan_level, waves.left_head - 20 * dx,
                                  waves.left_tail + 20 * dx, true);
        double werr = std::max({std::abs(shock_pos - waves.right_wave),
                                std::abs(contact_pos - waves.contact),
                                std::abs(fan_pos - fan_exact)});
        bool ok = l1 < 0.02 && werr <= 2.0 * dx;
        return {ok, "density L1 " + fmt(l1) + ", worst wave offset " + fmt(werr / dx) + " cells"};
    });

    run(4, "conservation (CNS 2D, SWE)", []() -> std::pair<bool, std::string> {
        Grid g = Grid::make_2d(64, 64);
        SeededRng rng(2024, 0);
        auto st = ic::random_field_cns_ic(rng, g, 0.1);
        // ~1000+ SSP-RK2 substeps at this resolution
        Trajectory traj = solver::solve_cns(st, solver::CnsParams{}, TimeAxis(0.0, 3.5, 2));
        auto t0 = solver::conserved_totals(solver::conserved_from_frame(traj.frames.front()));
        auto t1 = solver::conserved_totals(solver::conserved_from_frame(traj.frames.back()));
        double cns_rel = 0.0;
        for (std::size_t c = 0; c < t0.size(); ++c)
            cns_rel = std::max(cns_rel, std::abs(t1[c] - t0[c]) / std::max(1.0, std::abs(t0[c])));

        Grid gs = Grid::make_2d(64, 64, -2.5, 2.5, -2.5, 2.5);
        SeededRng rng2(2025, 0);
        Field h = ic::radial_dam_break_ic(rng2, gs);
        Trajectory swe = solver::solve_swe(solver::swe_state_from_height(h), TimeAxis(0.0, 1.0, 3));
        double m0 = solver::swe_total_mass(swe.frames.front());
        double swe_rel = 0.0;
        for (const auto& f : swe.frames)
            swe_rel = std::max(swe_rel, std::abs(solver::swe_total_mass(f) - m0) / m0);
        bool ok = cns_rel <= 1e-11 && swe_rel <= 1e-11;
        return {ok, "CNS rel drift " + fmt(cns_rel) + ", SWE rel drift " + fmt(swe_rel)};
    });

    run(5, "PES exactness", []() -> std::pair<bool, std::string> {
        double worst = 0.0;
        for (double u = 0.0; u <= 1.0; u += 0.05)
            for (double rho : {0.1, 1.0, 10.0})
                for (double dt : {1e-3, 1e-2}) {
                    double ref = u;
                    const double h = 1e-6;
                    auto f = [rho](double x) { return rho * x * (1.0 - x); };
                    long steps = long(std::llround(dt / h));
                    for (long i = 0; i < steps; ++i) {
                        double k1 = f(ref), k2 = f(ref + 0.5 * h * k1),
                               k3 = f(ref + 0.5 * h * k2), k4 = f(ref + h * k3);
                        ref += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
                    }
                    worst = std::max(worst, std::abs(solver::pes_logistic_step(u, rho, dt) - ref));
                }
        return {worst < 1e-10, "max |PES - RK4 oracle| = " + fmt(worst)};
    });

    run(6, "Darcy oracle + linearity", []() -> std::pair<bool, std::string> {
        // independent fine-grid reference: direct sine-transform solve at 512^2
        std::vector<double> f(512 * 512, 1.0);
        auto u_fine = poisson::solve_dirichlet(512, f);
        double ref_center = poisson::center_value(512, u_fine);

        const std::size_t n = 64;
        Grid g = Grid::make_2d(n, n);
        Field a(g, 1, 1.0);
        solver::DarcyParams p1;
        Field s1 = solver::solve_darcy_steady(a, p1);
        std::vector<double> u(n * n);
        for (std::size_t c = 0; c < n * n; ++c) u[c] = s1(c, 1);
        double center = poisson::center_value(n, u);
        double cerr = std::abs(center - ref_center);

        solver::DarcyParams p2;
        p2.beta = 2.0;
        Field s2 = solver::solve_darcy_steady(a, p2);
        double lin = 0.0;
        for (std::size_t c = 0; c < n * n; ++c)
            lin = std::max(lin, std::abs(s2(c, 1) - 2.0 * s1(c, 1)) /
                                    std::max(1e-30, std::abs(2.0 * s1(c, 1))));
        double res = solver::darcy_residual_inf(s1, p1.beta);
        bool ok = cerr < 1e-3 && lin <= 1e-8 && res < 5e-3;
        return {ok, "center err " + fmt(cerr) + ", linearity " + fmt(lin) + ", residual " +
                        fmt(res)};
    });

    run(7, "metric oracle equivalence", []() -> std::pair<bool, std::string> {
        SeededRng rng(7, 0);
        auto rand_tensor = [&](std::size_t b, std::size_t t, std::vector<std::size_t> sp,
                               std::size_t v) {
            metrics::Tensor x;
            x.n_samples = b;
            x.n_time = t;
            x.spatial = std::move(sp);
            x.channels = v;
            x.data.resize(x.size());
            for (double& d : x.data) d = rng.uniform(-1.0, 1.0);
            return x;
        };
        double worst = 0.0;
        for (int rep = 0; rep < 3; ++rep) {
            auto truth = rand_tensor(2, 3, {16}, 2);
            auto pred = rand_tensor(2, 3, {16}, 2);
            auto truth2 = rand_tensor(2, 2, {8, 8}, 1);
            auto pred2 = rand_tensor(2, 2, {8, 8}, 1);
            auto check = [&](double got, double want) {
                worst = std::max(worst, std::abs(got - want));
            };
            check(metrics::rmse(pred, truth), naive::rmse(pred, truth));
            check(metrics::nrmse(pred, truth), naive::nrmse(pred, truth));
            check(metrics::max_error(pred, truth), naive::max_error(pred, truth));
            check(metrics::crmse(pred, truth), naive::crmse(pred, truth));
            check(metrics::brmse(pred, truth), naive::brmse(pred, truth));
            check(metrics::rmse(pred2, truth2), naive::rmse(pred2, truth2));
            check(metrics::brmse(pred2, truth2), naive::brmse(pred2, truth2));
            for (const auto& band : metrics::forward_bands(metrics::nyquist_index({16}))) {
                check(metrics::frmse(pred, truth, band),
                      naive::frmse(pred, truth, band.k_min, band.k_max));
            }
            for (const auto& band : metrics::forward_bands(metrics::nyquist_index({8, 8})))
                check(metrics::frmse(pred2, truth2, band),
                      naive::frmse(pred2, truth2, band.k_min, band.k_max));
        }
        // exact scale invariance under a power-of-two rescale
        auto truth = rand_tensor(2, 2, {16}, 1);
        auto pred = rand_tensor(2, 2, {16}, 1);
        auto truth4 = truth;
        auto pred4 = pred;
        for (double& v : truth4.data) v *= 4.0;
        for (double& v : pred4.data) v *= 4.0;
        bool scale_exact = metrics::nrmse(pred4, truth4) == metrics::nrmse(pred, truth);

        // single-mode errors land in their band
        Grid g = Grid::make_1d(64);
        bool bands_ok = true;
        auto bands = metrics::forward_bands(metrics::nyquist_index({64}));
        for (auto [mode, want] : std::vector<std::pair<int, std::size_t>>{
                 {3, 0}, {4, 0}, {5, 1}, {12, 1}, {13, 2}, {25, 2}}) {
            ic::SinusoidMode m;
            m.n = {mode, 0, 0};
            metrics::Tensor e;
            e.n_samples = 1;
            e.n_time = 0;
            e.spatial = {64};
            e.channels = 1;
            e.data = ic::sinusoid_field(g, {m}).values;
            metrics::Tensor z = e;
            z.data.assign(64, 0.0);
            for (std::size_t b = 0; b < 3; ++b) {
                double v = metrics::frmse(e, z, bands[b]);
                if (b == want ? v <= 1e-6 : v > 1e-10) bands_ok = false;
            }
        }
        bool ok = worst < 1e-12 && scale_exact && bands_ok;
        return {ok, "max |lib - naive| = " + fmt(worst) + (scale_exact ? "" : ", scale FAIL") +
                        (bands_ok ? "" : ", band placement FAIL")};
    });

    run(8, "Parseval consistency", []() -> std::pair<bool, std::string> {
        SeededRng rng(8, 0);
        double worst = 0.0;
        for (auto spatial : {std::vector<std::size_t>{64}, std::vector<std::size_t>{24, 16}}) {
            std::size_t n = 1;
            for (std::size_t s : spatial) n *= s;
            std::vector<double> err(n);
            for (double& v : err) v = rng.uniform(-1.0, 1.0);
            auto shells = metrics::radial_spectrum(err.data(), spatial, 1, 0);
            double spectral = 0.0, spatial_sum = 0.0;
            for (double s : shells) spectral += s;
            for (double v : err) spatial_sum += v * v;
            worst = std::max(worst, std::abs(spectral - spatial_sum) / spatial_sum);
        }
        return {worst < 1e-10, "max rel defect " + fmt(worst)};
    });

    run(9, "inverse recovery", []() -> std::pair<bool, std::string> {
        Grid g = Grid::make_1d(256);
        auto p_true = inverse::IcParameterization::zeros(1);
        SeededRng rng(9, 0);
        for (double& v : p_true.control_values) v = rng.uniform(0.2, 1.0);
        Field ic_true = inverse::reconstruct_ic(p_true, g);

        inverse::InverseConfig cfg;  // horizon 15, lr 0.2, 200 iterations
        TimeAxis file_axis(0.0, 2.0, 201);
        TimeAxis solve_axis(0.0, file_axis.time(cfg.horizon), cfg.horizon + 1);
        inverse::ForwardMap forward = [&](const Field& u0) {
            return solver::solve_advection(u0, solver::AdvectionParams{1.0}, solve_axis)
                .frames.back();
        };
        Field observed = forward(ic_true);
        auto res = inverse::estimate_ic(observed, forward, cfg);
        bool monotone = true;
        for (std::size_t i = 1; i < res.best_loss_trace.size(); ++i)
            if (res.best_loss_trace[i] > res.best_loss_trace[i - 1]) monotone = false;
        Field est = inverse::reconstruct_ic(res.best, g);
        double nl2 = metrics::inverse_norm_error(est, ic_true, 2);
        bool ok = nl2 < 0.1 && monotone && res.best_loss_trace.size() == cfg.n_iterations;
        return {ok, "nL2 " + fmt(nl2) + (monotone ? ", trace monotone" : ", trace NOT monotone")};
    });

    run(10, "I/O round trip + shapes", []() -> std::pair<bool, std::string> {
        namespace fs = std::filesystem;
        auto dir = fs::temp_directory_path() / "pdegen_acceptance_io";
        fs::remove_all(dir);
        GenerateConfig cfg;
        cfg.pde = "diffsorp";
        cfg.ns = 256;
        cfg.nt = 101;
        cfg.samples = 8;
        cfg.seed = 11;
        cfg.outdir = dir.string();
        auto resgen = run_generate(cfg);
        bool name_ok = fs::path(resgen.path).filename() == "diffsorp--na--ns256_nt101_seed11.h5";
        auto ds = io::read_dataset(resgen.path);
        bool shape_ok = ds.arrays.size() == 1 && ds.arrays[0].name == "tensor" &&
                        ds.arrays[0].shape == std::vector<std::size_t>{8, 101, 256, 1};

        // bitwise write -> read -> write round trip
        auto p2 = (dir / "copy.h5").string();
        io::write_dataset(p2, ds.arrays, ds.yaml_metadata, io::Precision::f32);
        auto ds2 = io::read_dataset(p2);
        bool data_ok = ds2.arrays[0].data == ds.arrays[0].data;
        bool ok = name_ok && shape_ok && data_ok;
        return {ok, std::string(name_ok ? "name ok" : "name BAD") + ", " +
                        (shape_ok ? "shape (8,101,256,1)" : "shape BAD") + ", " +
                        (data_ok ? "round trip bitwise" : "round trip BAD")};
    });

    run(11, "determinism across workers", []() -> std::pair<bool, std::string> {
        namespace fs = std::filesystem;
        auto dir1 = fs::temp_directory_path() / "pdegen_acc_w1";
        auto dir2 = fs::temp_directory_path() / "pdegen_acc_w4";
        fs::remove_all(dir1);
        fs::remove_all(dir2);
        GenerateConfig cfg;
        cfg.pde = "burgers";
        cfg.ns = 256;
        cfg.nt = 21;
        cfg.samples = 8;
        cfg.seed = 5;
        cfg.workers = 1;
        cfg.outdir = dir1.string();
        auto r1 = run_generate(cfg);
        cfg.workers = 4;
        cfg.outdir = dir2.string();
        auto r2 = run_generate(cfg);
        auto slurp = [](const std::string& p) {
            std::ifstream in(p, std::ios::binary);
            return std::string(std::istreambuf_iterator<char>(in), {});
        };
        std::string b1 = slurp(r1.path), b2 = slurp(r2.path);
        bool ok = !b1.empty() && b1 == b2;
        return {ok, ok ? "files byte-identical" : "files differ"};
    });

    run(12, "boundedness / positivity", []() -> std::pair<bool, std::string> {
        Grid g = Grid::make_1d(64);
        int bad = 0;
        for (std::uint64_t s = 0; s < 50; ++s) {
            SeededRng r1(1000 + s, 0);
            Field u0 = ic::uniform_random_ic(r1, g, 0.0, 0.2);
            Trajectory ts = solver::solve_diffsorp(u0, solver::SorptionParams{},
                                                   TimeAxis(0.0, 500.0, 3));
            for (const auto& f : ts.frames)
                for (double v : f.values)
                    if (v < -1e-12 || v > 1.0 + 1e-12) ++bad;

            SeededRng r2(2000 + s, 0);
            ic::SinusoidSpec spec;
            spec.abs_prob = spec.window_prob = 0.0;
            Field v0 = ic::normalized_positive_ic(r2, g, spec);
            Trajectory tr = solver::solve_diffreact1d(v0, solver::ReactDiffParams{},
                                                      TimeAxis(0.0, 1.0, 3));
            for (const auto& f : tr.frames)
                for (double v : f.values)
                    if (v < -1e-12 || v > 1.0 + 1e-12) ++bad;
        }
        // the positivity guard must fire, not silently continue
        bool rejected = false;
        try {
            Field rho(g, 1, 1.0), vel(g, 1, 0.0), p(g, 1, 1.0);
            auto st = solver::conserved_from_primitive(rho, vel, p);
            st.q(10, 0) = -0.5;
            solver::solve_cns(st, solver::CnsParams{}, TimeAxis(0.0, 0.1, 2));
        } catch (const SampleRejected&) {
            rejected = true;
        }
        bool swe_rejected = false;
        try {
            Grid gs = Grid::make_2d(16, 16, -2.5, 2.5, -2.5, 2.5);
            Field h(gs, 1, 1.0);
            h(5) = -1.0;
            solver::solve_swe(solver::swe_state_from_height(h), TimeAxis(0.0, 0.1, 2));
        } catch (const SampleRejected&) {
            swe_rejected = true;
        }
        bool ok = bad == 0 && rejected && swe_rejected;
        return {ok, "out-of-range samples " + std::to_string(bad) +
                        (rejected ? ", CNS guard fired" : ", CNS guard MISSING") +
                        (swe_rejected ? ", SWE guard fired" : ", SWE guard MISSING")};
    });

    if (g_failures) std::printf("%d criteria FAILED\n", g_failures);
    return g_failures ? 1 : 0;
}
