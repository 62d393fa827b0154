#include "adhesion/density_field.hpp"

#include <algorithm>
#include <stdexcept>

namespace adhesion {

DensityField DensityField::normalized(const Grid& grid, std::vector<double> raw) {
    if (raw.size() != grid.cell_count)
        throw std::invalid_argument("DensityField: value count does not match grid");
    double total = 0.0;
    for (double v : raw) {
        if (v < 0.0) throw std::invalid_argument("DensityField: negative density value");
        total += v;
    }
    total *= grid.cell_width;
    if (!(total > 0.0)) throw std::invalid_argument("DensityField: zero total mass");
    for (double& v : raw) v /= total;
    return DensityField(grid, std::move(raw));
}

double DensityField::mass() const {
    double total = 0.0;
    for (double v : values) total += v;
    return total * grid.cell_width;
}

double min_value(const std::vector<double>& values) {
    return *std::min_element(values.begin(), values.end());
}

} // namespace adhesion
