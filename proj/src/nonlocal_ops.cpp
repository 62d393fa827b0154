#include "adhesion/nonlocal_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adhesion {

namespace {

/// Exact integrals of a piecewise-constant field from -L to an arbitrary x:
///   mass_to(x)   = integral of u(y) dy
///   moment_to(x) = integral of u(y) * y dy
/// Both are prefix sums over whole cells plus an analytic partial-cell term.
struct WindowPrefix {
    const Grid grid;
    const std::vector<double>& u;
    std::vector<double> mass;   // mass[i] = integral over cells [0, i)
    std::vector<double> moment; // moment[i] = y-moment over cells [0, i)

    explicit WindowPrefix(const DensityField& field) : grid(field.grid), u(field.values) {
        const std::size_t m = grid.cell_count;
        mass.assign(m + 1, 0.0);
        moment.assign(m + 1, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            const double a = grid.left_edge(i);
            const double b = grid.right_edge(i);
            mass[i + 1] = mass[i] + u[i] * (b - a);
            moment[i + 1] = moment[i] + u[i] * 0.5 * (b * b - a * a);
        }
    }

    double mass_to(double x) const {
        const std::size_t i = grid.cell_of(x);
        return mass[i] + u[i] * (x - grid.left_edge(i));
    }

    double moment_to(double x) const {
        const std::size_t i = grid.cell_of(x);
        const double a = grid.left_edge(i);
        return moment[i] + u[i] * 0.5 * (x * x - a * a);
    }
};

double clip_lo(const Grid& grid, double x) { return std::max(x, -grid.half_length); }
double clip_hi(const Grid& grid, double x) { return std::min(x, grid.half_length); }

} // namespace

std::vector<double> one_sided_kernel(const DensityField& u, Side side, double radius,
                                     WeightKind weight) {
    const Grid& grid = u.grid;
    const std::size_t m = grid.cell_count;
    const WindowPrefix prefix(u);
    std::vector<double> out(m, 0.0);

    for (std::size_t j = 0; j < m; ++j) {
        const double x = grid.center(j);
        const double lo = (side == Side::Minus) ? clip_lo(grid, x - radius) : x;
        const double hi = (side == Side::Minus) ? x : clip_hi(grid, x + radius);
        if (!(hi > lo)) continue;
        const double dm = prefix.mass_to(hi) - prefix.mass_to(lo);
        if (weight == WeightKind::ConstantOne) {
            out[j] = dm;
        } else {
            // w(|x - y|) = (R - |x - y|)/R is linear in y on each side, so the
            // integral decomposes into mass and first-moment terms.
            const double dq = prefix.moment_to(hi) - prefix.moment_to(lo);
            if (side == Side::Minus) {
                out[j] = ((radius - x) * dm + dq) / radius;
            } else {
                out[j] = ((radius + x) * dm - dq) / radius;
            }
        }
    }
    return out;
}

std::vector<double> one_sided_kernel_direct(const DensityField& u, Side side, double radius,
                                            WeightKind weight) {
    const Grid& grid = u.grid;
    const std::size_t m = grid.cell_count;
    std::vector<double> out(m, 0.0);

    // Segments accumulate outward from the center cell so that mirrored
    // stencils of symmetric data sum in the same order.
    for (std::size_t j = 0; j < m; ++j) {
        const double x = grid.center(j);
        double acc = 0.0;
        if (side == Side::Minus) {
            const double lo = clip_lo(grid, x - radius);
            for (std::size_t step = 0; step <= j; ++step) {
                const std::size_t i = j - step;
                const double a = std::max(grid.left_edge(i), lo);
                const double b = std::min(grid.right_edge(i), x);
                if (!(b > a)) {
                    if (grid.right_edge(i) <= lo) break;
                    continue;
                }
                const double mid = 0.5 * (a + b);
                acc += u.values[i] * eval_weight(weight, x - mid, radius) * (b - a);
            }
        } else {
            const double hi = clip_hi(grid, x + radius);
            for (std::size_t i = j; i < m; ++i) {
                const double a = std::max(grid.left_edge(i), x);
                const double b = std::min(grid.right_edge(i), hi);
                if (!(b > a)) {
                    if (grid.left_edge(i) >= hi) break;
                    continue;
                }
                const double mid = 0.5 * (a + b);
                acc += u.values[i] * eval_weight(weight, mid - x, radius) * (b - a);
            }
        }
        out[j] = acc;
    }
    return out;
}

std::vector<double> directional_kernel(const DensityField& u, Side side, const ModelSpec& spec) {
    return one_sided_kernel(u, side, spec.sensing_radius, spec.attraction);
}

DriftField nonlocal_gradient(const DensityField& u, const ModelSpec& spec) {
    const auto minus = directional_kernel(u, Side::Minus, spec);
    const auto plus = directional_kernel(u, Side::Plus, spec);
    DriftField field{u.grid, std::vector<double>(u.grid.cell_count, 0.0)};
    for (std::size_t j = 0; j < field.values.size(); ++j) field.values[j] = plus[j] - minus[j];
    return field;
}

std::vector<double> windowed_mass(const DensityField& u, const ModelSpec& spec) {
    const auto minus = one_sided_kernel(u, Side::Minus, spec.sensing_radius, WeightKind::ConstantOne);
    const auto plus = one_sided_kernel(u, Side::Plus, spec.sensing_radius, WeightKind::ConstantOne);
    std::vector<double> out(u.grid.cell_count, 0.0);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = minus[j] + plus[j];
    return out;
}

SaturationField saturation_field(const DensityField& u, const ModelSpec& spec) {
    const std::size_t m = u.grid.cell_count;
    SaturationField field{u.grid, std::vector<double>(m, 1.0), std::vector<double>(m, 1.0),
                          std::vector<double>(m, 0.0), false};
    switch (spec.kind) {
        case ModelKind::Aps:
            return field;
        case ModelKind::LocalSat: {
            for (std::size_t j = 0; j < m; ++j) {
                if (u.values[j] < 0.0 || u.values[j] > 1.0) field.local_out_of_range = true;
                field.values[j] = 1.0 - u.values[j];
            }
            break;
        }
        case ModelKind::NonlocalSat: {
            const auto minus =
                one_sided_kernel(u, Side::Minus, spec.sensing_radius, spec.saturation);
            const auto plus =
                one_sided_kernel(u, Side::Plus, spec.sensing_radius, spec.saturation);
            for (std::size_t j = 0; j < m; ++j)
                field.values[j] = 1.0 - (minus[j] + plus[j]) / spec.capacity;
            break;
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        field.positive[j] = std::max(field.values[j], 0.0);
        field.negative[j] = std::min(field.values[j], 0.0);
    }
    return field;
}

DriftField drift_closure(const DensityField& u, const ModelSpec& spec) {
    DriftField gradient = nonlocal_gradient(u, spec);
    if (spec.kind == ModelKind::Aps) return gradient;
    const SaturationField sat = saturation_field(u, spec);
    for (std::size_t j = 0; j < gradient.values.size(); ++j)
        gradient.values[j] *= sat.values[j];
    return gradient;
}

} // namespace adhesion
