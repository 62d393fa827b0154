#pragma once

#include <vector>

#include "adhesion/grid.hpp"

namespace adhesion {

/// Piecewise-constant density per unit length on a Grid. A conserved
/// population carries total mass sum(values) * h == 1; use `normalized` to
/// construct such a field from raw nonnegative samples.
struct DensityField {
    Grid grid;
    std::vector<double> values;

    DensityField() = default;
    DensityField(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {}

    /// Normalize a nonnegative raw vector to unit mass. Throws for negative
    /// entries, zero total mass, or a size mismatch.
    static DensityField normalized(const Grid& grid, std::vector<double> raw);

    double mass() const;

    /// Proportion of mass in cell i (the per-cell share values[i] * h).
    double proportion(std::size_t i) const { return values[i] * grid.cell_width; }
};

/// Largest |mass - 1| style diagnostics used by tests and steppers.
double min_value(const std::vector<double>& values);

} // namespace adhesion
