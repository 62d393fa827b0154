#pragma once

#include <cstdint>
#include <vector>

#include "adhesion/density_field.hpp"
#include "adhesion/fields.hpp"
#include "adhesion/model_spec.hpp"

namespace adhesion {

/// Initial data for the density: a perturbed constant on the whole domain, a
/// perturbed constant concentrated on [-delta, delta], or the smooth cosine
/// bump used by analytic tests.
///
/// `Concentrated` renormalizes to unit mass (base 1/(2 delta));
/// `ConcentratedSlab` keeps the whole-domain base 1/(2L) restricted to
/// [-delta, delta] without renormalizing (total mass delta/L), the sub-unit
/// regime where weak repulsion contracts the support instead of spreading it.
struct InitialCondition {
    enum class Kind { UniformPerturbed, Concentrated, ConcentratedSlab, CosineBump };
    Kind kind = Kind::UniformPerturbed;
    double delta = 0.3;
};

/// Treatment of the advection term within the linear step. `Implicit` keeps
/// the upwind fluxes in the matrix (frozen drift), which is positivity
/// preserving for any dt; `Explicit` moves them to the right-hand side and is
/// only admissible at small advective CFL.
enum class AdvectionMode { Implicit, Explicit };

struct SolverConfig {
    Grid grid;
    double dt = 1e-4;
    std::size_t n_steps = 0;
    std::size_t snapshot_stride = 1000;
    std::vector<std::size_t> snapshot_steps; // overrides the stride when set
    ModelSpec spec;
    InitialCondition initial;
    std::uint64_t seed = 0;
    AdvectionMode advection = AdvectionMode::Implicit;
    double cfl_warn_threshold = 0.9;
};

/// Diffusion coefficient of the density equation after time rescaling.
inline constexpr double kDiffusionCoefficient = 1.0;

struct PdeState {
    DensityField u;
    double t = 0.0;
    std::size_t step = 0;
    DriftField drift; // drift used by the latest accepted step (explicit lag)
    double cfl = 0.0; // advective CFL of the latest accepted step
};

struct PdeSnapshot {
    double t = 0.0;
    std::size_t step = 0;
    DensityField density;
    DriftField drift;
    SaturationField saturation;
    double mass = 0.0;
    double cfl = 0.0;
};

struct PdeRunTrace {
    double initial_mass = 0.0;
    double max_mass_error = 0.0; // running max |mass - initial mass|, every step
    double min_density = 0.0;    // running min over every step
    double max_cfl = 0.0;
    bool cfl_warning = false;
    bool local_saturation_out_of_range = false;
};

struct PdeRunResult {
    std::vector<PdeSnapshot> snapshots;
    PdeRunTrace trace;
};

/// Total face fluxes of the advective term: F_{j+1/2} upwinded on the face
/// velocity gamma * (K_j + K_{j+1})/2, zero at both walls (no-flux).
/// Returns M+1 values.
std::vector<double> upwind_face_flux(const DensityField& u, const DriftField& drift, double gamma);

/// Build the initial density for a descriptor; perturbations are seeded and
/// the result is normalized to unit mass.
DensityField make_initial(const InitialCondition& descriptor, const Grid& grid, std::uint64_t seed);

PdeState initial_state(const SolverConfig& config);

/// One semi-implicit step: backward Euler diffusion, upwind advection with
/// the nonlocal drift frozen at u^n. The update is applied in flux form
/// (every face flux enters its two cells with opposite signs), so the total
/// mass telescopes exactly. Throws if the updated density dips below -1e-12.
PdeState step_pde(const PdeState& state, const SolverConfig& config);

/// Run n_steps from the configured initial condition, collecting snapshots
/// (always including t = 0 and the final step) and per-step extrema.
PdeRunResult run_pde(const SolverConfig& config);

} // namespace adhesion
