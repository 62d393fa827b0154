#include "adhesion/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "adhesion/nonlocal_ops.hpp"
#include "adhesion/parallel.hpp"

namespace adhesion {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

/// Shortest round-trip decimal form, stable across runs.
std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& value, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": expected a number, got '" + value +
                          "'");
    }
}

std::uint64_t parse_unsigned(const std::string& value, int line) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": expected a nonnegative integer, got '" +
                          value + "'");
    }
}

struct RawEntry {
    int line = 0;
    std::string key;
    std::string value;
};

std::vector<RawEntry> read_entries(const std::string& text) {
    std::vector<RawEntry> entries;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
        RawEntry e;
        e.line = line;
        e.key = trim(stripped.substr(0, eq));
        e.value = trim(stripped.substr(eq + 1));
        if (e.key.empty() || e.value.empty())
            throw ConfigError("line " + std::to_string(line) + ": empty key or value");
        entries.push_back(std::move(e));
    }
    return entries;
}

void apply_entry(ExperimentConfig& c, const RawEntry& e) {
    const int line = e.line;
    const std::string& v = e.value;
    const auto bad_value = [&](const std::string& allowed) {
        return ConfigError("line " + std::to_string(line) + ": invalid value '" + v + "' for " +
                           e.key + " (expected " + allowed + ")");
    };

    if (e.key == "name") {
        c.name = v;
    } else if (e.key == "perspective") {
        if (v == "pde") c.perspective = Perspective::Pde;
        else if (v == "sde") c.perspective = Perspective::Sde;
        else if (v == "both") c.perspective = Perspective::Both;
        else throw bad_value("pde | sde | both");
    } else if (e.key == "model") {
        try {
            c.spec.kind = model_kind_from_string(v);
        } catch (const std::exception&) {
            throw bad_value("aps | local-sat | nonlocal-sat");
        }
        c.spec.lambda = c.spec.kind == ModelKind::Aps ? 0 : 1;
    } else if (e.key == "gamma") {
        c.spec.gamma = parse_double(v, line);
    } else if (e.key == "sde_gamma") {
        c.sde_gamma = parse_double(v, line);
    } else if (e.key == "R") {
        c.spec.sensing_radius = parse_double(v, line);
        c.spec.window_halfwidth = c.spec.sensing_radius;
    } else if (e.key == "K") {
        c.spec.capacity = parse_double(v, line);
    } else if (e.key == "a") {
        c.spec.window_halfwidth = parse_double(v, line);
    } else if (e.key == "w") {
        try {
            c.spec.attraction = weight_kind_from_string(v);
        } catch (const std::exception&) {
            throw bad_value("constant-one | linear-decay");
        }
    } else if (e.key == "w_hat") {
        try {
            c.spec.saturation = weight_kind_from_string(v);
        } catch (const std::exception&) {
            throw bad_value("constant-one | linear-decay");
        }
    } else if (e.key == "L") {
        c.half_length = parse_double(v, line);
    } else if (e.key == "cells") {
        c.cells = parse_unsigned(v, line);
    } else if (e.key == "init") {
        if (v == "uniform-perturbed") c.initial.kind = InitialCondition::Kind::UniformPerturbed;
        else if (v == "concentrated") c.initial.kind = InitialCondition::Kind::Concentrated;
        else if (v == "concentrated-slab")
            c.initial.kind = InitialCondition::Kind::ConcentratedSlab;
        else if (v == "cosine-bump") c.initial.kind = InitialCondition::Kind::CosineBump;
        else throw bad_value("uniform-perturbed | concentrated | concentrated-slab | cosine-bump");
    } else if (e.key == "init_delta") {
        c.initial.delta = parse_double(v, line);
    } else if (e.key == "seed") {
        c.seed = parse_unsigned(v, line);
        c.seed_set = true;
    } else if (e.key == "out_dir") {
        c.out_dir = v;
    } else if (e.key == "threads") {
        c.threads = static_cast<int>(parse_unsigned(v, line));
    } else if (e.key == "pde_dt") {
        c.pde_dt = parse_double(v, line);
    } else if (e.key == "pde_steps") {
        c.pde_steps = parse_unsigned(v, line);
    } else if (e.key == "pde_snapshot_stride") {
        c.pde_snapshot_stride = parse_unsigned(v, line);
    } else if (e.key == "pde_advection") {
        if (v == "implicit") c.pde_advection = AdvectionMode::Implicit;
        else if (v == "explicit") c.pde_advection = AdvectionMode::Explicit;
        else throw bad_value("implicit | explicit");
    } else if (e.key == "sde_n") {
        c.sde_n = parse_unsigned(v, line);
    } else if (e.key == "sde_dt") {
        c.sde_dt = parse_double(v, line);
    } else if (e.key == "sde_steps") {
        c.sde_steps = parse_unsigned(v, line);
    } else if (e.key == "sde_snapshot_stride") {
        c.sde_snapshot_stride = parse_unsigned(v, line);
    } else if (e.key == "sde_eps2") {
        c.sde_eps2 = parse_double(v, line);
    } else if (e.key == "sde_noise_std") {
        c.sde_noise_std = parse_double(v, line);
    } else if (e.key == "sde_noise") {
        if (v == "figures") c.sde_noise = NoiseMode::FiguresFaithful;
        else if (v == "euler-maruyama") c.sde_noise = NoiseMode::EulerMaruyama;
        else throw bad_value("figures | euler-maruyama");
    } else if (e.key == "sde_boundary") {
        if (v == "clamp") c.sde_boundary = BoundaryMode::Clamp;
        else if (v == "reflect") c.sde_boundary = BoundaryMode::Reflect;
        else throw bad_value("clamp | reflect");
    } else if (e.key == "a_rule") {
        if (v == "fixed") c.a_rule = ARule::Fixed;
        else if (v == "inv-sqrt-n") c.a_rule = ARule::InvSqrtN;
        else throw bad_value("fixed | inv-sqrt-n");
    } else if (e.key == "hist_binwidth") {
        c.hist_binwidth = parse_double(v, line);
    } else {
        throw ConfigError("line " + std::to_string(line) + ": unknown key '" + e.key + "'");
    }
}

bool needs_seed(const ExperimentConfig& c) {
    if (c.perspective != Perspective::Pde) return true;
    return c.initial.kind != InitialCondition::Kind::CosineBump;
}

std::string model_tag(const ExperimentConfig& c) {
    char k[16];
    std::snprintf(k, sizeof(k), "%.2f", c.spec.capacity);
    return to_string(c.spec.kind) + "_K" + k;
}

void write_text_file(const std::filesystem::path& path, const std::string& content,
                     std::vector<std::string>& written) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    written.push_back(path.string());
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["name"] = c.name;
    j["perspective"] = c.perspective == Perspective::Pde   ? "pde"
                       : c.perspective == Perspective::Sde ? "sde"
                                                           : "both";
    j["model"] = to_string(c.spec.kind);
    j["gamma"] = c.spec.gamma;
    j["sde_gamma"] = c.resolved_sde_gamma();
    j["R"] = c.spec.sensing_radius;
    j["K"] = c.spec.capacity;
    j["a"] = c.spec.window_halfwidth;
    j["lambda"] = c.spec.lambda;
    j["w"] = to_string(c.spec.attraction);
    j["w_hat"] = to_string(c.spec.saturation);
    j["L"] = c.half_length;
    j["cells"] = c.cells;
    switch (c.initial.kind) {
        case InitialCondition::Kind::UniformPerturbed: j["init"] = "uniform-perturbed"; break;
        case InitialCondition::Kind::Concentrated: j["init"] = "concentrated"; break;
        case InitialCondition::Kind::ConcentratedSlab: j["init"] = "concentrated-slab"; break;
        case InitialCondition::Kind::CosineBump: j["init"] = "cosine-bump"; break;
    }
    j["init_delta"] = c.initial.delta;
    j["seed"] = c.seed;
    j["pde"] = {{"dt", c.pde_dt},
                {"steps", c.pde_steps},
                {"snapshot_stride", c.pde_snapshot_stride},
                {"advection", c.pde_advection == AdvectionMode::Implicit ? "implicit" : "explicit"}};
    j["sde"] = {{"n", c.sde_n},
                {"dt", c.sde_dt},
                {"steps", c.sde_steps},
                {"snapshot_stride", c.sde_snapshot_stride},
                {"eps2", c.sde_eps2},
                {"noise_std", c.sde_noise_std},
                {"noise", c.sde_noise == NoiseMode::FiguresFaithful ? "figures" : "euler-maruyama"},
                {"boundary", c.sde_boundary == BoundaryMode::Clamp ? "clamp" : "reflect"},
                {"a_rule", c.a_rule == ARule::Fixed ? "fixed" : "inv-sqrt-n"}};
    j["hist_binwidth"] = c.resolved_hist_binwidth();
    return j;
}

std::string snapshot_csv(const PdeSnapshot& snap) {
    std::ostringstream out;
    out << "x,u,drift,saturation\n";
    const Grid& grid = snap.density.grid;
    for (std::size_t i = 0; i < grid.cell_count; ++i) {
        out << format_double(grid.center(i)) << ',' << format_double(snap.density.values[i]) << ','
            << format_double(snap.drift.values[i]) << ','
            << format_double(snap.saturation.values[i]) << '\n';
    }
    return out.str();
}

std::string gnuplot_script(const std::string& title, const std::string& ylabel,
                           const std::vector<std::pair<std::string, std::string>>& series) {
    std::ostringstream gp;
    gp << "set title '" << title << "'\n";
    gp << "set xlabel 'x'\nset ylabel '" << ylabel << "'\nset grid\n";
    gp << "set datafile separator ','\n";
    gp << "plot ";
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i) gp << ", \\\n     ";
        gp << series[i].first << " " << series[i].second;
    }
    gp << "\n";
    return gp.str();
}

} // namespace

double ExperimentConfig::resolved_sde_gamma() const {
    if (sde_gamma > 0.0) return sde_gamma;
    // Mean-field matched default: an SDE with gamma_sde = gamma * D has the
    // same rescaled density equation as the Eulerian run with gamma.
    SdeConfig probe;
    probe.dt = sde_dt;
    probe.eps2 = sde_eps2;
    probe.noise_std = sde_noise_std;
    probe.noise = sde_noise;
    return spec.gamma * effective_diffusion(probe);
}

double ExperimentConfig::resolved_hist_binwidth() const {
    if (hist_binwidth > 0.0) return hist_binwidth;
    if (spec.kind == ModelKind::LocalSat) return 2.0 / std::sqrt(static_cast<double>(sde_n));
    return 0.01;
}

SolverConfig ExperimentConfig::solver_config() const {
    SolverConfig s;
    s.grid = grid();
    s.dt = pde_dt;
    s.n_steps = pde_steps;
    s.snapshot_stride = pde_snapshot_stride;
    s.spec = spec;
    s.initial = initial;
    s.seed = seed;
    s.advection = pde_advection;
    return s;
}

SdeConfig ExperimentConfig::sde_config() const {
    SdeConfig s;
    s.n_particles = sde_n;
    s.dt = sde_dt;
    s.n_steps = sde_steps;
    s.snapshot_stride = sde_snapshot_stride;
    s.eps2 = sde_eps2;
    s.noise_std = sde_noise_std;
    s.noise = sde_noise;
    s.boundary = sde_boundary;
    s.spec = spec;
    s.spec.gamma = resolved_sde_gamma();
    s.a_rule = a_rule;
    s.half_length = half_length;
    s.init_delta = (initial.kind == InitialCondition::Kind::Concentrated ||
                    initial.kind == InitialCondition::Kind::ConcentratedSlab)
                       ? initial.delta
                       : 0.0;
    s.seed = seed;
    s.threads = resolve_thread_count(threads);
    return s;
}

void validate_experiment(const ExperimentConfig& config) {
    const auto fail = [](const std::string& field, const std::string& why) {
        throw ConfigError("config field '" + field + "': " + why);
    };
    if (!(config.half_length > 0.0)) fail("L", "must be positive");
    if (config.cells < 2) fail("cells", "need at least two cells");
    const auto violations = spec_violations(config.spec, config.grid());
    if (!violations.empty()) fail("model", violations.front());
    if (!(config.pde_dt > 0.0)) fail("pde_dt", "must be positive");
    if (!(config.sde_dt > 0.0)) fail("sde_dt", "must be positive");
    if (config.sde_n < 2) fail("sde_n", "need at least two particles");
    if (config.sde_eps2 < 0.0) fail("sde_eps2", "must be nonnegative");
    const bool concentrated = config.initial.kind == InitialCondition::Kind::Concentrated ||
                              config.initial.kind == InitialCondition::Kind::ConcentratedSlab;
    if (concentrated && !(config.initial.delta > 0.0 && config.initial.delta <= config.half_length))
        fail("init_delta", "must be in (0, L]");
    if (config.initial.kind == InitialCondition::Kind::ConcentratedSlab &&
        config.perspective != Perspective::Pde)
        fail("init", "concentrated-slab carries sub-unit mass, which the unit-mass empirical "
                     "measure of the particle system cannot represent; use perspective = pde");
    if (config.hist_binwidth < 0.0) fail("hist_binwidth", "must be nonnegative");
    if (needs_seed(config) && !config.seed_set)
        fail("seed", "a seed is mandatory for stochastic runs");
    if (config.out_dir.empty()) fail("out_dir", "must be set");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig config;
    for (const RawEntry& e : read_entries(text)) {
        if (e.value.find(',') != std::string::npos)
            throw ConfigError("line " + std::to_string(e.line) +
                              ": comma lists are only valid in sweep configs");
        apply_entry(config, e);
    }
    validate_experiment(config);
    return config;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

std::vector<ExperimentConfig> expand_sweep_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sweep config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    const std::vector<RawEntry> entries = read_entries(text.str());

    std::vector<std::vector<RawEntry>> axes; // one entry variant list per line
    std::vector<std::string> seen_keys;
    for (const RawEntry& e : entries) {
        if (std::find(seen_keys.begin(), seen_keys.end(), e.key) != seen_keys.end())
            throw ConfigError("line " + std::to_string(e.line) + ": duplicate key '" + e.key +
                              "' in a sweep config");
        seen_keys.push_back(e.key);
        std::vector<RawEntry> variants;
        std::istringstream items(e.value);
        std::string item;
        while (std::getline(items, item, ',')) {
            const std::string value = trim(item);
            if (value.empty())
                throw ConfigError("line " + std::to_string(e.line) + ": empty list item");
            variants.push_back(RawEntry{e.line, e.key, value});
        }
        axes.push_back(std::move(variants));
    }

    std::vector<ExperimentConfig> combos;
    std::vector<std::size_t> pick(axes.size(), 0);
    while (true) {
        ExperimentConfig config;
        std::string suffix;
        for (std::size_t i = 0; i < axes.size(); ++i) {
            const RawEntry& e = axes[i][pick[i]];
            apply_entry(config, e);
            if (axes[i].size() > 1) suffix += "/" + e.key + "=" + e.value;
        }
        if (!suffix.empty()) config.out_dir += suffix;
        validate_experiment(config);
        combos.push_back(std::move(config));

        std::size_t axis = axes.size();
        while (axis-- > 0) {
            if (++pick[axis] < axes[axis].size()) break;
            pick[axis] = 0;
            if (axis == 0) return combos;
        }
        if (axes.empty()) return combos;
    }
}

std::filesystem::path resolve_out_root(const std::string& explicit_root) {
    if (!explicit_root.empty()) return explicit_root;
    if (const char* env = std::getenv("ADHESION_OUT_ROOT")) return env;
    return "out";
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_root) {
    namespace fs = std::filesystem;
    ExperimentResult result;
    result.out_dir = out_root / config.out_dir;
    fs::create_directories(result.out_dir);

    const int threads = resolve_thread_count(config.threads);
    const bool run_pde_side = config.perspective != Perspective::Sde;
    const bool run_sde_side = config.perspective != Perspective::Pde;
    const std::string tag = model_tag(config);

    write_text_file(result.out_dir / "config_echo.json", config_to_json(config).dump(2) + "\n",
                    result.written);

    // --- Lagrangian side -----------------------------------------------
    SdeRunResult sde_result;
    SdeConfig sde_cfg = config.sde_config();
    sde_cfg.threads = threads;
    const MeanFieldEquivalent map = mean_field_equivalent(sde_cfg);
    if (run_sde_side) {
        sde_result = run_sde(sde_cfg);
        fs::create_directories(result.out_dir / "sde");
        std::ostringstream csv;
        csv << "t,particle,x\n";
        for (const SdeSnapshot& snap : sde_result.snapshots)
            for (std::size_t i = 0; i < snap.positions.size(); ++i)
                csv << format_double(snap.t) << ',' << i << ',' << format_double(snap.positions[i])
                    << '\n';
        write_text_file(result.out_dir / "sde" / "trajectories.csv", csv.str(), result.written);

        json meta;
        meta["config"] = config_to_json(config);
        meta["effective_diffusion"] = map.time_scale;
        meta["mean_field_gamma"] = map.gamma_pde;
        meta["snapshots"] = json::array();
        for (const SdeSnapshot& snap : sde_result.snapshots)
            meta["snapshots"].push_back({{"t", snap.t}, {"step", snap.step}});
        write_text_file(result.out_dir / "sde" / "meta.json", meta.dump(2) + "\n", result.written);
    }

    // --- Eulerian side --------------------------------------------------
    PdeRunResult pde_result;
    SolverConfig pde_cfg = config.solver_config();
    if (config.perspective == Perspective::Both) {
        // Align PDE snapshots with the SDE ones through the mean-field time
        // map tau = D * t; the drift strength was already matched.
        pde_cfg.spec.gamma = map.gamma_pde;
        pde_cfg.snapshot_steps.clear();
        double horizon = 0.0;
        for (const SdeSnapshot& snap : sde_result.snapshots) {
            const double tau = map.time_scale * snap.t;
            pde_cfg.snapshot_steps.push_back(
                static_cast<std::size_t>(std::llround(tau / pde_cfg.dt)));
            horizon = std::max(horizon, tau);
        }
        pde_cfg.n_steps = static_cast<std::size_t>(std::llround(horizon / pde_cfg.dt));
    }
    if (run_pde_side) {
        pde_result = run_pde(pde_cfg);
        result.pde_trace = pde_result.trace;
        fs::create_directories(result.out_dir / "pde");
        json meta;
        meta["config"] = config_to_json(config);
        meta["gamma_used"] = pde_cfg.spec.gamma;
        meta["trace"] = {{"max_mass_error", pde_result.trace.max_mass_error},
                         {"min_density", pde_result.trace.min_density},
                         {"max_cfl", pde_result.trace.max_cfl},
                         {"cfl_warning", pde_result.trace.cfl_warning},
                         {"local_saturation_out_of_range",
                          pde_result.trace.local_saturation_out_of_range}};
        meta["mass_trace"] = json::array();
        meta["cfl_trace"] = json::array();
        for (const PdeSnapshot& snap : pde_result.snapshots) {
            meta["mass_trace"].push_back({{"t", snap.t}, {"mass", snap.mass}});
            meta["cfl_trace"].push_back({{"t", snap.t}, {"cfl", snap.cfl}});
            char name[96];
            std::snprintf(name, sizeof(name), "snap_%s_step%07zu.csv", tag.c_str(), snap.step);
            write_text_file(result.out_dir / "pde" / name, snapshot_csv(snap), result.written);
        }
        write_text_file(result.out_dir / "pde" / "meta.json", meta.dump(2) + "\n", result.written);
    }

    // --- Cross-perspective comparison ------------------------------------
    if (config.perspective == Perspective::Both) {
        json rows = json::array();
        const double binwidth = config.resolved_hist_binwidth();
        for (std::size_t k = 0; k < sde_result.snapshots.size(); ++k) {
            const SdeSnapshot& snap = sde_result.snapshots[k];
            const std::size_t pde_step =
                static_cast<std::size_t>(std::llround(map.time_scale * snap.t / pde_cfg.dt));
            const auto it = std::find_if(
                pde_result.snapshots.begin(), pde_result.snapshots.end(),
                [&](const PdeSnapshot& p) { return p.step == pde_step; });
            if (it == pde_result.snapshots.end()) continue;

            const Histogram hist = histogram(snap.positions, binwidth, config.half_length);
            const Grid hist_grid(config.half_length, hist.density.size());
            const FieldDistance density_dist =
                compare_fields(hist.density, hist_grid, it->density.values, it->density.grid);

            FieldPair fields = empirical_fields(snap.positions, sde_cfg.spec,
                                                effective_window(sde_cfg), binwidth,
                                                config.half_length, threads);
            // The empirical drift carries the SDE force strength; scale the
            // Eulerian closure to the same units before comparing.
            std::vector<double> pde_drift = it->drift.values;
            for (double& v : pde_drift) v *= sde_cfg.spec.gamma;
            const FieldDistance drift_dist = compare_fields(fields.drift.values, fields.drift.grid,
                                                            pde_drift, it->drift.grid);
            const FieldDistance sat_dist =
                compare_fields(fields.saturation.values, fields.saturation.grid,
                               it->saturation.values, it->saturation.grid);

            const auto row = [&](const char* field, const FieldDistance& d) {
                rows.push_back({{"field", field},
                                {"model", to_string(config.spec.kind)},
                                {"K", config.spec.capacity},
                                {"N", config.sde_n},
                                {"seed", config.seed},
                                {"time_sde", snap.t},
                                {"time_pde", it->t},
                                {"l1", d.l1},
                                {"linf", d.linf},
                                {"rel_l1", d.rel_l1}});
            };
            row("density", density_dist);
            row("drift", drift_dist);
            row("saturation", sat_dist);

            // Plot-ready joined panel at this snapshot time.
            std::ostringstream panel;
            panel << "x,pde_u,sde_hist,pde_drift,sde_drift,pde_saturation,sde_saturation\n";
            const std::vector<double> pde_u_resampled =
                resample(it->density.values, it->density.grid, hist_grid);
            const std::vector<double> pde_drift_resampled =
                resample(pde_drift, it->drift.grid, hist_grid);
            const std::vector<double> pde_sat_resampled =
                resample(it->saturation.values, it->saturation.grid, hist_grid);
            for (std::size_t b = 0; b < hist.density.size(); ++b) {
                panel << format_double(hist_grid.center(b)) << ','
                      << format_double(pde_u_resampled[b]) << ',' << format_double(hist.density[b])
                      << ',' << format_double(pde_drift_resampled[b]) << ','
                      << format_double(fields.drift.values[b]) << ','
                      << format_double(pde_sat_resampled[b]) << ','
                      << format_double(fields.saturation.values[b]) << '\n';
            }
            fs::create_directories(result.out_dir / "panels");
            char name[64];
            std::snprintf(name, sizeof(name), "panel_step%07zu.csv", snap.step);
            write_text_file(result.out_dir / "panels" / name, panel.str(), result.written);
        }
        write_text_file(result.out_dir / "compare.json", rows.dump(2) + "\n", result.written);
    }

    // --- Gnuplot scripts --------------------------------------------------
    fs::create_directories(result.out_dir / "panels");
    if (run_sde_side) {
        write_text_file(result.out_dir / "panels" / "trajectories.gp",
                        gnuplot_script("particle trajectories", "x",
                                       {{"'../sde/trajectories.csv'",
                                         "using 1:3 with dots title 'cells'"}}),
                        result.written);
    }
    if (run_pde_side && !pde_result.snapshots.empty()) {
        char last_name[96];
        std::snprintf(last_name, sizeof(last_name), "snap_%s_step%07zu.csv", tag.c_str(),
                      pde_result.snapshots.back().step);
        const std::string file = std::string("'../pde/") + last_name + "'";
        write_text_file(result.out_dir / "panels" / "density.gp",
                        gnuplot_script("density, final time", "u",
                                       {{file, "using 1:2 with lines title 'pde'"}}),
                        result.written);
        write_text_file(result.out_dir / "panels" / "drift.gp",
                        gnuplot_script("drift, final time", "K(u)",
                                       {{file, "using 1:3 with lines title 'pde'"}}),
                        result.written);
        write_text_file(result.out_dir / "panels" / "saturation.gp",
                        gnuplot_script("saturation, final time", "S",
                                       {{file, "using 1:4 with lines title 'pde'"}}),
                        result.written);
    }
    return result;
}

} // namespace adhesion
