#pragma once

#include <cstdint>
#include <vector>

#include "adhesion/model_spec.hpp"

namespace adhesion {

/// Positions of the interacting-particle system plus the RNG bookkeeping
/// that makes every trajectory a pure function of (seed, config).
struct ParticleState {
    std::vector<double> positions;
    double t = 0.0;
    std::size_t step = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> stream_ids; // per-particle noise stream keys
};

/// Noise conventions for the discrete step.
///   FiguresFaithful: adds eps2 * eta with eta ~ N(0, noise_std) - a fixed
///                    per-step kick independent of dt; the figure presets use
///                    it, so it stays the default for reproducibility.
///   EulerMaruyama:   adds sqrt(2 * eps2 * dt) * N(0, 1), the consistent
///                    discretization of sqrt(2) eps dB_t.
enum class NoiseMode { FiguresFaithful, EulerMaruyama };

/// Wall treatment: projection onto [-L, L] (default) or reflection.
enum class BoundaryMode { Clamp, Reflect };

/// Saturation window rule: fixed a from the model spec, or a = 1/sqrt(N)
/// (the local-saturation limit regime).
enum class ARule { Fixed, InvSqrtN };

/// Pair interaction path; both must agree bitwise.
enum class ForcePath { Auto, Naive, Bucketed };

struct SdeConfig {
    std::size_t n_particles = 300;
    double dt = 0.01;
    std::size_t n_steps = 0;
    std::size_t snapshot_stride = 100;
    double eps2 = 0.4;
    double noise_std = 0.1;
    NoiseMode noise = NoiseMode::FiguresFaithful;
    BoundaryMode boundary = BoundaryMode::Clamp;
    ModelSpec spec;
    ARule a_rule = ARule::Fixed;
    double half_length = 1.0;
    double init_delta = 0.0; // 0 -> uniform over the whole domain
    std::uint64_t seed = 0;
    int threads = 1;
    ForcePath force_path = ForcePath::Auto;
};

struct SdeSnapshot {
    double t = 0.0;
    std::size_t step = 0;
    std::vector<double> positions;
};

struct SdeRunResult {
    std::vector<SdeSnapshot> snapshots;
};

/// Saturation window half-width after applying the a-rule.
double effective_window(const SdeConfig& config);

/// Diffusion coefficient of the mean-field density equation implied by the
/// configured noise recipe (variance per unit time divided by two).
double effective_diffusion(const SdeConfig& config);

/// Pairwise attraction gamma * w(|xi - xj|) * sign(xj - xi); antisymmetric,
/// zero at coincidence and beyond the sensing radius.
double pairwise_force(double xi, double xj, const ModelSpec& spec);

/// Nonlocal saturation coefficient S_a(x_i) from the empirical measure; the
/// sum counts every particle including i itself.
double particle_saturation(std::size_t i, const ParticleState& state, const SdeConfig& config);

/// Saturation coefficient evaluated at an arbitrary point x (used when
/// reconstructing fields on a mesh from particle data).
double saturation_at(double x, const std::vector<double>& positions, const ModelSpec& spec,
                     double window_halfwidth);

ParticleState initial_particles(const SdeConfig& config);

/// One Euler step against the pre-step position snapshot; forces accumulate
/// in ascending particle index so the result is independent of the force
/// path, the evaluation order and the thread count.
ParticleState step_sde(const ParticleState& state, const SdeConfig& config);

SdeRunResult run_sde(const SdeConfig& config);

} // namespace adhesion
