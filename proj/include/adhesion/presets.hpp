#pragma once

#include <string>
#include <vector>

#include "adhesion/experiment.hpp"

namespace adhesion {

/// Named experiment presets, one per bundled figure regime: the aps
/// aggregation run, the local-saturation runs at K = 1 / 0.7 / 0.4, and the
/// nonlocal-saturation runs across capacities, weights and initial data.
/// Final times are pinned here so every preset is fully reproducible.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
ExperimentConfig preset(const std::string& name);

} // namespace adhesion
