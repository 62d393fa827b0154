#pragma once

#include <cstddef>
#include <vector>

#include "adhesion/density_field.hpp"
#include "adhesion/grid.hpp"
#include "adhesion/model_spec.hpp"

namespace adhesion {

/// Per-cell proportions s_j (cell mass shares summing to 1). This module is
/// the explicit gain/loss balance used as an oracle for the production PDE
/// solver; it keeps the integer stencils i in [j-r, j+r] with r = floor(R/h)
/// and cell-center weights of the discrete balance, unlike nonlocal_ops'
/// fractional windows. Not a production integrator: the explicit step needs
/// dt of order h^2 and short horizons.
struct ProportionVector {
    Grid grid;
    std::vector<double> values;

    static ProportionVector from_density(const DensityField& u);
    DensityField to_density() const;
    double total() const;
};

enum class Transition {
    IntoFromLeft,  // I_{j-1} -> I_j
    IntoFromRight, // I_{j+1} -> I_j
    OutLeft,       // I_j -> I_{j-1}
    OutRight,      // I_j -> I_{j+1}
};

/// Stencil radius r = floor(R/h); an absolute nudge absorbs the
/// representation error of h so exact multiples stay exact.
std::size_t stencil_radius(double sensing_radius, double cell_width);

/// Single transition probability, evaluated with direct stencil sums exactly
/// as written. Throws std::out_of_range for an invalid cell index. Stencils
/// are truncated to the domain: the population can neither enter nor leave.
double transition_probability(const ProportionVector& s, std::size_t j, Transition direction,
                              const ModelSpec& spec);

/// Net interaction rate G_int - L_int per cell. Each s_k * P outflow product
/// is computed once and reused as the neighbor's gain, so the global sum
/// cancels pairwise (zero to rounding).
std::vector<double> interaction_balance(const ProportionVector& s, const ModelSpec& spec);

/// Net diffusion rate: jumps to each neighbor with probability p/2; jumps
/// across a wall are suppressed and the mass stays (reflecting wall).
/// Throws for p outside (0, 1].
std::vector<double> diffusion_balance(const ProportionVector& s, double jump_probability);

/// Frequency scalings: q_diff = alpha_diff / h^2, q_int = alpha_int / h with
/// alpha_int chosen so gamma = 2 alpha_int / (p alpha_diff) matches the
/// configured gamma. The induced continuum limit is
///   u_t = (alpha_diff * p / 2) u_xx - alpha_int d/dx(u K(u)),
/// so alpha_diff = 2/p aligns the master-equation clock with the
/// unit-diffusion PDE solver.
struct MasterFrequencies {
    double q_diff = 0.0;
    double q_int = 0.0;
};
MasterFrequencies master_frequencies(double gamma, double cell_width, double jump_probability = 0.5,
                                     double alpha_diff = 1.0);

/// One explicit step s' = s + dt [q_diff (G-L)_diff + q_int (G-L)_int].
/// Throws if any updated cell would go negative, naming the cell and a dt
/// that would keep the step admissible.
ProportionVector step_master(const ProportionVector& s, double dt, double jump_probability,
                             double q_diff, double q_int, const ModelSpec& spec);

} // namespace adhesion
