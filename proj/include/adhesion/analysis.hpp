#pragma once

#include <cstdint>
#include <vector>

#include "adhesion/density_field.hpp"
#include "adhesion/fields.hpp"
#include "adhesion/model_spec.hpp"
#include "adhesion/particles.hpp"

namespace adhesion {

/// Particle histogram normalized to a density estimate (count / (N * bin)),
/// so Eulerian and Lagrangian plots share axes.
struct Histogram {
    double half_length = 1.0;
    double requested_binwidth = 0.01;
    double binwidth = 0.01; // adjusted so the bins tile [-L, L] exactly
    std::vector<std::uint64_t> counts;
    std::vector<double> density;
    std::uint64_t total = 0;

    double bin_center(std::size_t b) const {
        return -half_length + (static_cast<double>(b) + 0.5) * binwidth;
    }
};

/// Bin particle positions over [-L, L]; the bin width is adjusted to the
/// nearest exact divisor of 2L and boundary-clamped particles land in the end
/// bins. Throws on an empty position set.
Histogram histogram(const std::vector<double>& positions, double binwidth, double half_length);

/// Reconstruct the drift and saturation a particle at x would feel, on a mesh
/// of width ~binwidth: drift(x) = S_a(x) * (1/N) sum_j F(x, x_j) and
/// saturation(x) = S_a(x), directly comparable to the Eulerian fields (up to
/// the gamma factor carried by F).
FieldPair empirical_fields(const std::vector<double>& positions, const ModelSpec& spec,
                           double window_halfwidth, double binwidth, double half_length,
                           int threads = 1);

struct FieldDistance {
    double l1 = 0.0;
    double linf = 0.0;
    double rel_l1 = 0.0; // l1 relative to the L1 norm of the reference (second) field
};

/// Conservative resampling of cell-averaged values onto another grid by exact
/// cell-overlap averaging. Throws if the domains differ.
std::vector<double> resample(const std::vector<double>& values, const Grid& from, const Grid& to);

/// Discrete distances weighted by cell width; B is resampled onto A's mesh
/// when the meshes differ.
FieldDistance compare_fields(const std::vector<double>& a, const Grid& grid_a,
                             const std::vector<double>& b, const Grid& grid_b);
FieldDistance compare_fields(const DensityField& a, const DensityField& b);

struct ConvergenceResult {
    double order = 0.0;
    bool monotone = true; // false flags a non-monotone error sequence
};

/// Least-squares slope of log(error) against log(h); needs at least three
/// refinement levels and positive errors.
ConvergenceResult convergence_order(const std::vector<double>& cell_widths,
                                    const std::vector<double>& errors);

/// Draw n i.i.d. samples from a density field by inverse-CDF sampling.
std::vector<double> sample_from_density(const DensityField& u, std::size_t n, std::uint64_t seed);

/// PDE-side twin of an SDE configuration: the mean-field density of the
/// particle run solves the unit-diffusion equation with drift strength
/// gamma_pde, with PDE time = time_scale * SDE time.
struct MeanFieldEquivalent {
    double gamma_pde = 0.0;
    double time_scale = 0.0;
};
MeanFieldEquivalent mean_field_equivalent(const SdeConfig& config);

} // namespace adhesion
