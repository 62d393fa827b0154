#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace adhesion {

/// Uniform 1D mesh of the closed domain [-L, L], indexed by cell.
///
/// Cell i (0-based) spans [edge(i), edge(i+1)] and is represented by its
/// center. All fields in this library live on cell centers.
struct Grid {
    double half_length = 1.0;   // L
    std::size_t cell_count = 2; // M
    double cell_width = 1.0;    // h = 2L/M

    Grid() = default;
    Grid(double L, std::size_t M)
        : half_length(L), cell_count(M), cell_width(2.0 * L / static_cast<double>(M)) {
        if (!(L > 0.0)) throw std::invalid_argument("Grid: half_length must be positive");
        if (M < 2) throw std::invalid_argument("Grid: cell_count must be at least 2");
    }

    double center(std::size_t i) const {
        return -half_length + (static_cast<double>(i) + 0.5) * cell_width;
    }
    double left_edge(std::size_t i) const {
        return -half_length + static_cast<double>(i) * cell_width;
    }
    double right_edge(std::size_t i) const { return left_edge(i + 1); }

    /// Index of the cell containing x, clamped to [0, M-1]; x = +L maps to the
    /// last cell.
    std::size_t cell_of(double x) const;

    std::vector<double> centers() const;

    bool operator==(const Grid& other) const = default;
};

} // namespace adhesion
