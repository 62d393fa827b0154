#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "adhesion/analysis.hpp"
#include "adhesion/particles.hpp"
#include "adhesion/pde_solver.hpp"

namespace adhesion {

enum class Perspective { Pde, Sde, Both };

/// One experiment: which perspective(s) to run, the shared model closure, and
/// the per-perspective numerics. Parsed from a key = value file (with '#'
/// comments) or produced by a named preset.
struct ExperimentConfig {
    /// Defaults follow the common-parameter block: L = 1, R = 0.5,
    /// h = 2e-3, pde dt = 1e-4, gamma = 1e3, eps2 = 0.4, sde dt = 0.01.
    ExperimentConfig() {
        spec.gamma = 1000.0;
        spec.sensing_radius = 0.5;
        spec.window_halfwidth = 0.5;
        spec.attraction = WeightKind::LinearDecay;
    }

    std::string name = "custom";
    Perspective perspective = Perspective::Pde;
    ModelSpec spec;          // gamma is the Eulerian drift strength
    double sde_gamma = 0.0;  // 0 -> gamma * effective diffusion (mean-field matched)
    double half_length = 1.0;
    std::size_t cells = 1000;
    InitialCondition initial;
    std::uint64_t seed = 1;
    bool seed_set = false;
    std::string out_dir;
    int threads = 0; // 0 -> ADHESION_THREADS or hardware

    double pde_dt = 1e-4;
    std::size_t pde_steps = 10000;
    std::size_t pde_snapshot_stride = 2000;
    AdvectionMode pde_advection = AdvectionMode::Implicit;

    std::size_t sde_n = 300;
    double sde_dt = 0.01;
    std::size_t sde_steps = 1000;
    std::size_t sde_snapshot_stride = 100;
    double sde_eps2 = 0.4;
    double sde_noise_std = 0.1;
    NoiseMode sde_noise = NoiseMode::FiguresFaithful;
    BoundaryMode sde_boundary = BoundaryMode::Clamp;
    ARule a_rule = ARule::Fixed;

    double hist_binwidth = 0.0; // 0 -> 0.01, or 2/sqrt(N) for local-sat

    Grid grid() const { return Grid(half_length, cells); }
    double resolved_sde_gamma() const;
    double resolved_hist_binwidth() const;
    SolverConfig solver_config() const;
    SdeConfig sde_config() const;
};

/// Raised for malformed config files (message carries the line number) and
/// for config validation failures (message carries the field).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parse and validate a config; unknown keys are rejected. Values may not
/// contain commas here - comma lists belong to sweep configs.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

/// Cross product expansion of a sweep config: every comma-separated value
/// becomes an axis, and each combination gets "<key>=<value>" appended to its
/// output directory.
std::vector<ExperimentConfig> expand_sweep_file(const std::filesystem::path& path);

/// Validation shared by both entry points; throws ConfigError naming the
/// offending field.
void validate_experiment(const ExperimentConfig& config);

struct ExperimentResult {
    std::filesystem::path out_dir;
    PdeRunTrace pde_trace;
    std::vector<std::string> written;
};

/// Run the configured perspective(s) and write the artifact bundle
/// (CSV snapshots, JSON metadata, comparison report, plot-ready panels) under
/// out_root / config.out_dir. Deterministic for a fixed config and seed.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_root);

/// Output root resolution: explicit path if nonempty, else ADHESION_OUT_ROOT,
/// else ./out.
std::filesystem::path resolve_out_root(const std::string& explicit_root);

} // namespace adhesion
