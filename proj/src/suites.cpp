#include "adhesion/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "adhesion/analysis.hpp"
#include "adhesion/experiment.hpp"
#include "adhesion/master_eq.hpp"
#include "adhesion/nonlocal_ops.hpp"
#include "adhesion/parallel.hpp"
#include "adhesion/particles.hpp"
#include "adhesion/pde_solver.hpp"
#include "adhesion/presets.hpp"

namespace adhesion {

namespace {

constexpr double kPaperGamma = 1000.0;
constexpr double kPaperRadius = 0.5;
constexpr double kPaperDt = 1e-4;
constexpr std::size_t kPaperCells = 1000; // h = 2e-3
constexpr std::size_t kLongSteps = 100000;

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

ModelSpec paper_spec(ModelKind kind, double capacity) {
    return ModelSpec::make(kind, kPaperGamma, kPaperRadius, capacity);
}

SolverConfig paper_solver(ModelKind kind, double capacity, std::size_t steps) {
    SolverConfig cfg;
    cfg.grid = Grid(1.0, kPaperCells);
    cfg.dt = kPaperDt;
    cfg.n_steps = steps;
    cfg.snapshot_stride = 0; // initial and final snapshots only
    cfg.spec = paper_spec(kind, capacity);
    cfg.initial.kind = InitialCondition::Kind::UniformPerturbed;
    cfg.seed = 42;
    return cfg;
}

struct LongRunOutcome {
    ModelKind kind;
    PdeRunTrace trace;
    DensityField final_density;
    double seconds = 0.0;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// The three paper-parameter endurance runs are shared by criteria 1 and 2;
/// run them once.
const std::vector<LongRunOutcome>& long_runs() {
    static const std::vector<LongRunOutcome> runs = [] {
        std::vector<LongRunOutcome> out;
        const std::vector<std::pair<ModelKind, double>> cases = {
            {ModelKind::Aps, 1.0}, {ModelKind::LocalSat, 1.0}, {ModelKind::NonlocalSat, 0.6}};
        for (const auto& [kind, capacity] : cases) {
            const auto start = std::chrono::steady_clock::now();
            const PdeRunResult r = run_pde(paper_solver(kind, capacity, kLongSteps));
            out.push_back(
                LongRunOutcome{kind, r.trace, r.snapshots.back().density, seconds_since(start)});
        }
        return out;
    }();
    return runs;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

DensityField constant_density(const Grid& grid) {
    return DensityField(grid,
                        std::vector<double>(grid.cell_count, 1.0 / (2.0 * grid.half_length)));
}

/// Interior local maxima above the prominence floor, merged within min_sep.
std::vector<double> peak_positions(const DensityField& u, double prominence, double min_sep) {
    const Grid& grid = u.grid;
    std::vector<std::pair<double, double>> peaks; // (position, height)
    for (std::size_t j = 2; j + 2 < grid.cell_count; ++j) {
        if (u.values[j] <= prominence) continue;
        if (u.values[j] > u.values[j - 1] && u.values[j] > u.values[j + 1]) {
            const double x = grid.center(j);
            if (!peaks.empty() && x - peaks.back().first < min_sep) {
                if (u.values[j] > peaks.back().second) peaks.back() = {x, u.values[j]};
            } else {
                peaks.push_back({x, u.values[j]});
            }
        }
    }
    std::vector<double> xs;
    for (const auto& p : peaks) xs.push_back(p.first);
    return xs;
}

std::map<std::string, std::string> read_tree(const std::filesystem::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream content;
        content << in.rdbuf();
        files[std::filesystem::relative(entry.path(), root).string()] = content.str();
    }
    return files;
}

} // namespace

bool SuiteReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

CheckResult criterion_mass_conservation() {
    CheckResult result{"1 mass conservation", true, ""};
    std::ostringstream detail;
    for (const LongRunOutcome& run : long_runs()) {
        // |mass(t) - 1| <= |mass(t) - mass(0)| + |mass(0) - 1|
        const double worst = run.trace.max_mass_error + std::abs(run.trace.initial_mass - 1.0);
        const bool ok = worst <= 1e-10 && run.seconds <= 120.0;
        result.pass = result.pass && ok;
        detail << to_string(run.kind) << " max|mass-1|=" << fmt(worst) << " ("
               << fmt(run.seconds) << " s); ";
    }
    result.detail = detail.str() + "tolerance 1e-10 over 1e5 steps, 120 s per model";
    return result;
}

CheckResult criterion_nonnegativity() {
    CheckResult result{"2 nonnegativity", true, ""};
    std::ostringstream detail;
    for (const LongRunOutcome& run : long_runs()) {
        const bool ok = run.trace.min_density >= -1e-12;
        result.pass = result.pass && ok;
        detail << to_string(run.kind) << " min u=" << fmt(run.trace.min_density) << "; ";
    }
    result.detail = detail.str() + "tolerance -1e-12";
    return result;
}

CheckResult criterion_interior_equilibrium() {
    CheckResult result{"3 interior equilibrium", true, ""};
    const Grid grid(1.0, kPaperCells);
    const DensityField u = constant_density(grid);
    std::ostringstream detail;
    for (const auto& [kind, capacity] :
         std::vector<std::pair<ModelKind, double>>{
             {ModelKind::Aps, 1.0}, {ModelKind::LocalSat, 1.0}, {ModelKind::NonlocalSat, 0.6}}) {
        const DriftField drift = drift_closure(u, paper_spec(kind, capacity));
        double worst = 0.0;
        for (std::size_t j = 0; j < grid.cell_count; ++j) {
            const double x = grid.center(j);
            if (x <= -grid.half_length + kPaperRadius || x >= grid.half_length - kPaperRadius)
                continue;
            worst = std::max(worst, std::abs(drift.values[j]));
        }
        result.pass = result.pass && worst <= 1e-12;
        detail << to_string(kind) << " max|K|=" << fmt(worst) << "; ";
    }
    result.detail = detail.str() + "tolerance 1e-12 on (-L+R, L-R)";
    return result;
}

CheckResult criterion_quadrature_convergence() {
    // Discrete nonlocal gradient of u = (1 + cos(pi x))/2 against the exact
    // integral -sin(pi x) * I_w, measured at cells with untruncated windows.
    const double pi = std::numbers::pi;
    const ModelSpec spec = ModelSpec::make(ModelKind::Aps, 1.0, kPaperRadius, 1.0);
    const double iw = 1.0 / pi - 2.0 / (pi * pi); // integral of sin(pi r) w(r), linear decay
    std::vector<double> widths, errors;
    for (const std::size_t m : {500u, 1000u, 2000u}) {
        const Grid grid(1.0, m);
        std::vector<double> raw(m, 0.0);
        for (std::size_t j = 0; j < m; ++j)
            raw[j] = (1.0 + std::cos(pi * grid.center(j))) / 2.0;
        const DensityField u = DensityField::normalized(grid, std::move(raw));
        const DriftField grad = nonlocal_gradient(u, spec);
        double err = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double x = grid.center(j);
            if (std::abs(x) > grid.half_length - kPaperRadius - grid.cell_width) continue;
            err = std::max(err, std::abs(grad.values[j] - (-std::sin(pi * x) * iw)));
        }
        widths.push_back(grid.cell_width);
        errors.push_back(err);
    }
    const ConvergenceResult conv = convergence_order(widths, errors);
    CheckResult result{"4 quadrature convergence", conv.order >= 1.9, ""};
    std::ostringstream detail;
    detail << "errors " << fmt(errors[0]) << " / " << fmt(errors[1]) << " / " << fmt(errors[2])
           << " at h in {4e-3, 2e-3, 1e-3}; observed order " << fmt(conv.order) << " (need 1.9)";
    result.detail = detail.str();
    return result;
}

CheckResult criterion_oracle_equivalence() {
    CheckResult result{"5 oracle equivalence", true, ""};
    const auto start = std::chrono::steady_clock::now();
    const Grid grid(1.0, kPaperCells);
    const double gamma = 10.0;
    const double horizon = 0.01;
    const double master_dt = 1e-6;
    const double jump_p = 0.5;
    const double tolerance = 5.0 * grid.cell_width;
    std::ostringstream detail;
    for (const auto& [kind, capacity] :
         std::vector<std::pair<ModelKind, double>>{
             {ModelKind::Aps, 1.0}, {ModelKind::LocalSat, 1.0}, {ModelKind::NonlocalSat, 0.6}}) {
        const ModelSpec spec = ModelSpec::make(kind, gamma, kPaperRadius, capacity);

        SolverConfig pde_cfg;
        pde_cfg.grid = grid;
        pde_cfg.dt = kPaperDt;
        pde_cfg.n_steps = static_cast<std::size_t>(std::llround(horizon / kPaperDt));
        pde_cfg.snapshot_stride = 0;
        pde_cfg.spec = spec;
        pde_cfg.initial.kind = InitialCondition::Kind::CosineBump;
        const DensityField pde_final = run_pde(pde_cfg).snapshots.back().density;

        // alpha_diff = 2/p makes the master-equation clock unit-diffusion, so
        // both steppers integrate the same equation on the same horizon.
        const MasterFrequencies freq =
            master_frequencies(gamma, grid.cell_width, jump_p, 2.0 / jump_p);
        ProportionVector s =
            ProportionVector::from_density(make_initial(pde_cfg.initial, grid, 0));
        const auto master_steps = static_cast<std::size_t>(std::llround(horizon / master_dt));
        for (std::size_t n = 0; n < master_steps; ++n)
            s = step_master(s, master_dt, jump_p, freq.q_diff, freq.q_int, spec);
        const DensityField master_final = s.to_density();

        double err = 0.0;
        for (std::size_t j = 0; j < grid.cell_count; ++j)
            err = std::max(err, std::abs(pde_final.values[j] - master_final.values[j]));
        result.pass = result.pass && err <= tolerance;
        detail << to_string(kind) << " max diff=" << fmt(err) << "; ";
    }
    const double elapsed = seconds_since(start);
    result.pass = result.pass && elapsed <= 30.0;
    result.detail = detail.str() + "tolerance " + fmt(tolerance) + "; " + fmt(elapsed) +
                    " s (limit 30)";
    return result;
}

CheckResult criterion_heat_equation_limit() {
    // gamma = 0 reduces the solver to the Neumann heat equation. The cosine
    // bump is the even eigenmode cos(pi x / L), whose analytic amplitude
    // decays by exp(-(pi/L)^2 t).
    const Grid grid(1.0, kPaperCells);
    SolverConfig cfg;
    cfg.grid = grid;
    cfg.dt = kPaperDt;
    cfg.n_steps = 1000; // t = 0.1
    cfg.snapshot_stride = 0;
    cfg.spec = ModelSpec::make(ModelKind::Aps, 1.0, kPaperRadius, 1.0);
    cfg.spec.gamma = 0.0; // drift off
    cfg.initial.kind = InitialCondition::Kind::CosineBump;
    const PdeRunResult run = run_pde(cfg);

    const double pi = std::numbers::pi;
    const auto amplitude = [&](const DensityField& u) {
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < grid.cell_count; ++j) {
            const double c = std::cos(pi * grid.center(j) / grid.half_length);
            num += u.values[j] * c;
            den += c * c;
        }
        return num / den;
    };
    const double ratio =
        amplitude(run.snapshots.back().density) / amplitude(run.snapshots.front().density);
    const double rate = std::pow(pi / grid.half_length, 2);
    const double expected = std::exp(-rate * 0.1);
    const double rel = std::abs(ratio / expected - 1.0);
    CheckResult result{"6 heat equation limit", rel <= 0.02, ""};
    std::ostringstream detail;
    detail << "mode decay ratio " << fmt(ratio) << " vs analytic " << fmt(expected)
           << " (rate (pi/L)^2), relative error " << fmt(rel) << " (need 0.02)";
    result.detail = detail.str();
    return result;
}

CheckResult criterion_aps_aggregation() {
    // Run the aps preset's Eulerian side to its final time and measure the
    // interior peaks of the settled density.
    SolverConfig cfg = preset("fig-aps").solver_config();
    cfg.snapshot_stride = 0;
    const DensityField final_density = run_pde(cfg).snapshots.back().density;
    const std::vector<double> peaks = peak_positions(final_density, 1.0, 0.25);

    bool spacing_ok = peaks.size() >= 2;
    for (std::size_t i = 1; i < peaks.size(); ++i) {
        const double spacing = peaks[i] - peaks[i - 1];
        if (spacing < 0.8 || spacing > 1.2) spacing_ok = false;
    }
    CheckResult result{"7 aps aggregation regime", spacing_ok, ""};
    std::ostringstream detail;
    detail << peaks.size() << " interior peaks at {";
    for (std::size_t i = 0; i < peaks.size(); ++i) detail << (i ? ", " : "") << fmt(peaks[i]);
    detail << "}; spacing target [0.8, 1.2]";
    result.detail = detail.str();
    return result;
}

CheckResult criterion_repulsion_regimes() {
    CheckResult result{"8 repulsion regimes", true, ""};
    std::ostringstream detail;

    { // strong repulsion spreads a uniform start across the whole domain
        SolverConfig cfg = paper_solver(ModelKind::NonlocalSat, 0.2, 20000);
        cfg.seed = 11;
        const DensityField u = run_pde(cfg).snapshots.back().density;
        std::size_t below = 0;
        for (double v : u.values)
            if (v <= 3.0 * 0.5) ++below;
        const double fraction_below = static_cast<double>(below) / u.values.size();
        double min_fifth_mass = 1.0;
        const std::size_t fifth = u.values.size() / 5;
        for (std::size_t k = 0; k < 5; ++k) {
            double mass = 0.0;
            for (std::size_t j = k * fifth; j < (k + 1) * fifth; ++j)
                mass += u.values[j] * u.grid.cell_width;
            min_fifth_mass = std::min(min_fifth_mass, mass);
        }
        const bool ok = fraction_below >= 0.9 && min_fifth_mass >= 0.01;
        result.pass = result.pass && ok;
        detail << "K=0.2 uniform: " << fmt(100.0 * fraction_below)
               << "% cells <= 3x uniform (need 90%), min fifth mass " << fmt(min_fifth_mass)
               << " (need 0.01); ";
    }
    { // weak repulsion pulls the concentrated slab into [-0.2, 0.2]
        SolverConfig cfg = paper_solver(ModelKind::NonlocalSat, 0.6, 20000);
        cfg.initial.kind = InitialCondition::Kind::ConcentratedSlab;
        cfg.initial.delta = 0.3;
        cfg.seed = 11;
        const DensityField u = run_pde(cfg).snapshots.back().density;
        double inside = 0.0, total = 0.0;
        for (std::size_t j = 0; j < u.values.size(); ++j) {
            const double m = u.values[j] * u.grid.cell_width;
            total += m;
            if (std::abs(u.grid.center(j)) <= 0.25) inside += m;
        }
        const double fraction = inside / total;
        const bool ok = fraction >= 0.95;
        result.pass = result.pass && ok;
        detail << "K=0.6 concentrated slab: mass fraction in [-0.25, 0.25] = " << fmt(fraction)
               << " (need 0.95)";
    }
    result.detail = detail.str();
    return result;
}

CheckResult criterion_sde_pde_consistency() {
    CheckResult result{"9 sde-pde consistency", true, ""};
    const auto start = std::chrono::steady_clock::now();
    const double gamma_sde = 40.0;
    const double eps2 = 0.4;
    const double sde_horizon = 1.0;
    const std::vector<std::size_t> particle_counts = {100, 300, 1000};
    const std::size_t n_seeds = 10;
    std::ostringstream detail;

    for (const auto& [kind, capacity] : std::vector<std::pair<ModelKind, double>>{
             {ModelKind::Aps, 1.0}, {ModelKind::NonlocalSat, 0.6}}) {
        SdeConfig sde_cfg;
        sde_cfg.spec = ModelSpec::make(kind, gamma_sde, kPaperRadius, capacity);
        sde_cfg.eps2 = eps2;
        sde_cfg.noise = NoiseMode::EulerMaruyama;
        sde_cfg.dt = 0.01;
        sde_cfg.n_steps = static_cast<std::size_t>(std::llround(sde_horizon / sde_cfg.dt));
        sde_cfg.snapshot_stride = 0;
        sde_cfg.half_length = 1.0;
        sde_cfg.threads = resolve_thread_count(0);

        // Mean-field twin: unit-diffusion equation with gamma_sde / eps2 at
        // time eps2 * t, started from the exact uniform density (the law of
        // the uniform initial positions).
        const MeanFieldEquivalent map = mean_field_equivalent(sde_cfg);
        SolverConfig pde_cfg;
        pde_cfg.grid = Grid(1.0, kPaperCells);
        pde_cfg.dt = kPaperDt;
        pde_cfg.n_steps =
            static_cast<std::size_t>(std::llround(map.time_scale * sde_horizon / pde_cfg.dt));
        pde_cfg.snapshot_stride = 0;
        pde_cfg.spec = sde_cfg.spec;
        pde_cfg.spec.gamma = map.gamma_pde;
        PdeState state;
        state.u = constant_density(pde_cfg.grid);
        state.drift = drift_closure(state.u, pde_cfg.spec);
        for (std::size_t n = 0; n < pde_cfg.n_steps; ++n) state = step_pde(state, pde_cfg);
        const DensityField& pde_final = state.u;

        std::vector<double> medians;
        for (const std::size_t n_particles : particle_counts) {
            std::vector<double> distances;
            for (std::size_t seed = 1; seed <= n_seeds; ++seed) {
                SdeConfig run_cfg = sde_cfg;
                run_cfg.n_particles = n_particles;
                run_cfg.seed = seed;
                const SdeRunResult run = run_sde(run_cfg);
                const Histogram hist =
                    histogram(run.snapshots.back().positions, 0.01, run_cfg.half_length);
                const Grid hist_grid(run_cfg.half_length, hist.density.size());
                distances.push_back(
                    compare_fields(hist.density, hist_grid, pde_final.values, pde_final.grid).l1);
            }
            medians.push_back(median(distances));
        }
        bool decreasing = true;
        for (std::size_t i = 1; i < medians.size(); ++i)
            decreasing = decreasing && medians[i] < medians[i - 1];
        result.pass = result.pass && decreasing;
        detail << to_string(kind) << " median L1 over N in {100, 300, 1000}: " << fmt(medians[0])
               << " > " << fmt(medians[1]) << " > " << fmt(medians[2])
               << (decreasing ? " (decreasing); " : " (NOT decreasing); ");
    }
    const double elapsed = seconds_since(start);
    result.pass = result.pass && elapsed <= 600.0;
    result.detail = detail.str() + fmt(elapsed) + " s (limit 600)";
    return result;
}

CheckResult criterion_empirical_fields() {
    // Particles drawn i.i.d. from a fixed smooth density must reproduce the
    // Eulerian drift and saturation fields on the reconstruction mesh.
    const double binwidth = 0.01;
    const std::size_t n_particles = 100000;
    const ModelSpec spec = ModelSpec::make(ModelKind::NonlocalSat, 1.0, kPaperRadius, 0.6);

    const Grid fine(1.0, kPaperCells);
    std::vector<double> raw(fine.cell_count, 0.0);
    for (std::size_t j = 0; j < fine.cell_count; ++j)
        raw[j] = 1.0 + std::cos(std::numbers::pi * fine.center(j));
    const DensityField density = DensityField::normalized(fine, std::move(raw));
    const std::vector<double> positions = sample_from_density(density, n_particles, 99);

    const FieldPair empirical = empirical_fields(positions, spec, spec.window_halfwidth, binwidth,
                                                 1.0, resolve_thread_count(0));

    const Grid mesh = empirical.drift.grid;
    std::vector<double> mesh_raw(mesh.cell_count, 0.0);
    for (std::size_t j = 0; j < mesh.cell_count; ++j)
        mesh_raw[j] = 1.0 + std::cos(std::numbers::pi * mesh.center(j));
    const DensityField mesh_density = DensityField::normalized(mesh, std::move(mesh_raw));
    const DriftField drift = drift_closure(mesh_density, spec);
    const SaturationField sat = saturation_field(mesh_density, spec);

    const auto check = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double range_lo = b[0], range_hi = b[0], linf = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            range_lo = std::min(range_lo, b[j]);
            range_hi = std::max(range_hi, b[j]);
            linf = std::max(linf, std::abs(a[j] - b[j]));
        }
        return std::pair<double, double>{linf, 0.05 * (range_hi - range_lo)};
    };
    const auto [drift_err, drift_tol] = check(empirical.drift.values, drift.values);
    const auto [sat_err, sat_tol] = check(empirical.saturation.values, sat.values);

    CheckResult result{"10 empirical field consistency",
                       drift_err <= drift_tol && sat_err <= sat_tol, ""};
    std::ostringstream detail;
    detail << "N=1e5, nonlocal-sat K=0.6: drift Linf " << fmt(drift_err) << " (tol "
           << fmt(drift_tol) << "), saturation Linf " << fmt(sat_err) << " (tol " << fmt(sat_tol)
           << ")";
    result.detail = detail.str();
    return result;
}

CheckResult criterion_determinism() {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "adhesion-determinism";
    fs::remove_all(root);

    ExperimentConfig cfg = preset("fig-aps");
    cfg.threads = 1;
    run_experiment(cfg, root / "a");
    run_experiment(cfg, root / "b");
    ExperimentConfig threaded = cfg;
    threaded.threads = 2;
    run_experiment(threaded, root / "c");

    const auto a = read_tree(root / "a");
    const auto b = read_tree(root / "b");
    const auto c = read_tree(root / "c");
    const bool rerun_identical = a == b;
    const bool threads_identical = a == c;
    fs::remove_all(root);

    CheckResult result{"11 determinism", rerun_identical && threads_identical, ""};
    std::ostringstream detail;
    detail << a.size() << " files; rerun byte-identical: " << (rerun_identical ? "yes" : "NO")
           << ", across thread counts: " << (threads_identical ? "yes" : "NO");
    result.detail = detail.str();
    return result;
}

std::vector<std::string> suite_names() { return {"invariants", "convergence", "oracle", "figures"}; }

SuiteReport run_suite(const std::string& name) {
    SuiteReport report;
    report.suite = name;
    if (name == "invariants") {
        report.checks = {criterion_mass_conservation(), criterion_nonnegativity(),
                         criterion_interior_equilibrium(), criterion_determinism()};
    } else if (name == "convergence") {
        report.checks = {criterion_quadrature_convergence()};
    } else if (name == "oracle") {
        report.checks = {criterion_oracle_equivalence(), criterion_heat_equation_limit()};
    } else if (name == "figures") {
        report.checks = {criterion_aps_aggregation(), criterion_repulsion_regimes(),
                         criterion_sde_pde_consistency(), criterion_empirical_fields()};
    } else {
        throw std::invalid_argument("unknown suite: " + name);
    }
    return report;
}

} // namespace adhesion
