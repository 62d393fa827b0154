#pragma once

#include <vector>

#include "adhesion/grid.hpp"

namespace adhesion {

/// Signed drift velocity K(u) per cell center.
struct DriftField {
    Grid grid;
    std::vector<double> values;
};

/// Dimensionless saturation coefficient per cell, split into its positive and
/// negative parts (values == positive + negative, positive >= 0 >= negative).
/// A negative coefficient flips attraction into repulsion.
struct SaturationField {
    Grid grid;
    std::vector<double> values;
    std::vector<double> positive;
    std::vector<double> negative;
    /// Set when a local-saturation coefficient saw densities outside [0, 1].
    bool local_out_of_range = false;
};

/// Co-registered drift and saturation on one mesh, produced by either the
/// Eulerian or the Lagrangian pipeline for side-by-side comparison.
struct FieldPair {
    DriftField drift;
    SaturationField saturation;
};

} // namespace adhesion
