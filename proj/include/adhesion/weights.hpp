#pragma once

#include <string>

namespace adhesion {

/// Interaction weight profiles over the sensing radius R. Both vanish
/// identically for r >= R.
enum class WeightKind {
    ConstantOne, // w(r) = 1 on [0, R)
    LinearDecay, // w(r) = (R - r)/R on [0, R)
};

/// Evaluate w(r) for the given kind and sensing radius.
/// Throws std::invalid_argument for r < 0 or R <= 0.
double eval_weight(WeightKind kind, double r, double sensing_radius);

std::string to_string(WeightKind kind);
WeightKind weight_kind_from_string(const std::string& name);

} // namespace adhesion
