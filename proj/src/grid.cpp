#include "adhesion/grid.hpp"

#include <algorithm>
#include <cmath>

namespace adhesion {

std::size_t Grid::cell_of(double x) const {
    const double rel = (x + half_length) / cell_width;
    auto idx = static_cast<long long>(std::floor(rel));
    idx = std::clamp<long long>(idx, 0, static_cast<long long>(cell_count) - 1);
    return static_cast<std::size_t>(idx);
}

std::vector<double> Grid::centers() const {
    std::vector<double> xs(cell_count);
    for (std::size_t i = 0; i < cell_count; ++i) xs[i] = center(i);
    return xs;
}

} // namespace adhesion
