#pragma once

#include <vector>

#include "adhesion/density_field.hpp"
#include "adhesion/fields.hpp"
#include "adhesion/model_spec.hpp"

namespace adhesion {

enum class Side { Minus, Plus };

/// One-sided windowed integrals of a density field,
///
///   minus: integral over [x - R, x] of u(y) w(x - y) dy
///   plus:  integral over [x, x + R] of u(y) w(y - x) dy
///
/// evaluated at every cell center x with the window clipped to the domain.
/// Windows intersect cell extents exactly (fractional end cells); the weight
/// is taken at the midpoint of each clipped segment, which integrates both
/// supported weight profiles exactly per segment.
///
/// `one_sided_kernel` runs in O(M) via prefix sums; `one_sided_kernel_direct`
/// is the O(M*r) reference that walks every stencil segment. The two agree to
/// 1e-12 and the direct path is kept as the verification oracle.
std::vector<double> one_sided_kernel(const DensityField& u, Side side, double radius,
                                     WeightKind weight);
std::vector<double> one_sided_kernel_direct(const DensityField& u, Side side, double radius,
                                            WeightKind weight);

/// G^- / G^+ of the drift term: one_sided_kernel with the spec's attraction
/// weight and sensing radius.
std::vector<double> directional_kernel(const DensityField& u, Side side, const ModelSpec& spec);

/// Nonlocal gradient G^+ - G^-; equals the integral of
/// (u(x+r) - u(x-r)) w(r) over r in [0, R] with domain truncation.
DriftField nonlocal_gradient(const DensityField& u, const ModelSpec& spec);

/// Mass of u inside [x - R, x + R] clipped to the domain; lies in [0, 1] for
/// unit-mass fields.
std::vector<double> windowed_mass(const DensityField& u, const ModelSpec& spec);

/// Saturation coefficient of the drift:
///   aps          -> 1 everywhere
///   local-sat    -> 1 - u (flagged, not clamped, if u leaves [0, 1])
///   nonlocal-sat -> 1 - (1/K) * integral of w_hat(|y - x|) u(y) over the
///                   clipped window (w_hat == 1 reduces it to 1 - U/K)
SaturationField saturation_field(const DensityField& u, const ModelSpec& spec);

/// Drift closure K(u) = S * (G^+ - G^-) per cell; for aps this is exactly the
/// nonlocal gradient.
DriftField drift_closure(const DensityField& u, const ModelSpec& spec);

} // namespace adhesion
