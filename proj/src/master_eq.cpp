#include "adhesion/master_eq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace adhesion {

namespace {

/// Largest offset k whose stencil distance k*h carries a nonzero weight.
/// Distances are always taken as offset times cell width, so this criterion
/// is bit-identical to the per-term weight cutoff.
std::size_t support_radius(double sensing_radius, double cell_width) {
    std::size_t k = stencil_radius(sensing_radius, cell_width) + 1;
    while (k > 0 && !(static_cast<double>(k) * cell_width < sensing_radius)) --k;
    return k;
}

struct StencilSums {
    // left[k]  = sum_{i=k-1-r..k-1} s_i w(y_k - y_i)
    // right[k] = sum_{i=k+1..k+1+r} s_i w(y_i - y_k)
    // window[k] = sum_{i=k-r..k+r} s_i      (integer-window mass)
    std::vector<double> left, right, window;
};

StencilSums stencil_sums(const ProportionVector& s, const ModelSpec& spec) {
    const Grid& grid = s.grid;
    const std::size_t m = grid.cell_count;
    const double h = grid.cell_width;
    const double radius = spec.sensing_radius;
    const std::size_t r = stencil_radius(radius, h);
    const std::size_t ksup = support_radius(radius, h);

    std::vector<double> ps(m + 1, 0.0), py(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        ps[i + 1] = ps[i] + s.values[i];
        py[i + 1] = py[i] + s.values[i] * grid.center(i);
    }
    const auto range_mass = [&](std::size_t a, std::size_t b) { // cells [a, b], inclusive
        return ps[b + 1] - ps[a];
    };
    const auto range_moment = [&](std::size_t a, std::size_t b) { return py[b + 1] - py[a]; };

    StencilSums sums;
    sums.left.assign(m, 0.0);
    sums.right.assign(m, 0.0);
    sums.window.assign(m, 0.0);
    const bool linear = spec.attraction == WeightKind::LinearDecay;

    for (std::size_t k = 0; k < m; ++k) {
        const double yk = grid.center(k);
        if (k > 0 && ksup > 0) {
            const std::size_t a = k > ksup ? k - ksup : 0;
            const std::size_t b = k - 1;
            if (a <= b) {
                sums.left[k] = linear ? ((radius - yk) * range_mass(a, b) + range_moment(a, b)) / radius
                                      : range_mass(a, b);
            }
        }
        if (k + 1 < m && ksup > 0) {
            const std::size_t a = k + 1;
            const std::size_t b = std::min(m - 1, k + ksup);
            if (a <= b) {
                sums.right[k] = linear ? ((radius + yk) * range_mass(a, b) - range_moment(a, b)) / radius
                                       : range_mass(a, b);
            }
        }
        const std::size_t wa = k > r ? k - r : 0;
        const std::size_t wb = std::min(m - 1, k + r);
        sums.window[k] = range_mass(wa, wb);
    }
    return sums;
}

/// Outgoing probabilities of cell k toward each neighbor, from precomputed
/// stencil sums. Aggregation moves toward the occupied side; a negative
/// saturation coefficient redirects the move to the opposite side.
void out_probabilities(const ProportionVector& s, const ModelSpec& spec, const StencilSums& sums,
                       std::vector<double>& out_left, std::vector<double>& out_right) {
    const std::size_t m = s.grid.cell_count;
    const double h = s.grid.cell_width;
    out_left.assign(m, 0.0);
    out_right.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        switch (spec.kind) {
            case ModelKind::Aps:
                out_left[k] = sums.left[k];
                out_right[k] = sums.right[k];
                break;
            case ModelKind::LocalSat: {
                const double coeff = 1.0 - s.values[k] / h;
                out_left[k] = coeff * sums.left[k];
                out_right[k] = coeff * sums.right[k];
                break;
            }
            case ModelKind::NonlocalSat: {
                const double coeff = 1.0 - sums.window[k] / spec.capacity;
                const double cpos = std::max(coeff, 0.0);
                const double cneg = std::min(coeff, 0.0);
                out_left[k] = cpos * sums.left[k] - cneg * sums.right[k];
                out_right[k] = cpos * sums.right[k] - cneg * sums.left[k];
                break;
            }
        }
    }
    // Walls are impenetrable: no outgoing move across them.
    if (m > 0) {
        out_left[0] = 0.0;
        out_right[m - 1] = 0.0;
    }
}

} // namespace

ProportionVector ProportionVector::from_density(const DensityField& u) {
    ProportionVector s{u.grid, std::vector<double>(u.grid.cell_count, 0.0)};
    for (std::size_t i = 0; i < s.values.size(); ++i)
        s.values[i] = u.values[i] * u.grid.cell_width;
    return s;
}

DensityField ProportionVector::to_density() const {
    DensityField u{grid, std::vector<double>(grid.cell_count, 0.0)};
    for (std::size_t i = 0; i < values.size(); ++i) u.values[i] = values[i] / grid.cell_width;
    return u;
}

double ProportionVector::total() const {
    double t = 0.0;
    for (double v : values) t += v;
    return t;
}

std::size_t stencil_radius(double sensing_radius, double cell_width) {
    return static_cast<std::size_t>(std::floor(sensing_radius / cell_width + 1e-9));
}

double transition_probability(const ProportionVector& s, std::size_t j, Transition direction,
                              const ModelSpec& spec) {
    const Grid& grid = s.grid;
    const std::size_t m = grid.cell_count;
    if (j >= m) throw std::out_of_range("transition_probability: cell index out of range");
    const std::size_t r = stencil_radius(spec.sensing_radius, grid.cell_width);

    // Direct stencil sums around the moving cell k; distances are offset
    // multiples of h, matching the prefix path's support cutoff.
    const auto left_sum = [&](std::size_t k) {
        double acc = 0.0;
        const std::size_t lo = k > r + 1 ? k - r - 1 : 0;
        for (std::size_t i = lo; i + 1 <= k; ++i)
            acc += s.values[i] * eval_weight(spec.attraction,
                                             static_cast<double>(k - i) * grid.cell_width,
                                             spec.sensing_radius);
        return acc;
    };
    const auto right_sum = [&](std::size_t k) {
        double acc = 0.0;
        const std::size_t hi = std::min(m - 1, k + r + 1);
        for (std::size_t i = k + 1; i <= hi; ++i)
            acc += s.values[i] * eval_weight(spec.attraction,
                                             static_cast<double>(i - k) * grid.cell_width,
                                             spec.sensing_radius);
        return acc;
    };
    const auto window_sum = [&](std::size_t k) {
        double acc = 0.0;
        const std::size_t lo = k > r ? k - r : 0;
        const std::size_t hi = std::min(m - 1, k + r);
        for (std::size_t i = lo; i <= hi; ++i) acc += s.values[i];
        return acc;
    };

    // The mover's cell and its attempted side.
    std::size_t mover = j;
    bool moving_left = false;
    switch (direction) {
        case Transition::IntoFromLeft:
            if (j == 0) return 0.0;
            mover = j - 1;
            moving_left = false;
            break;
        case Transition::IntoFromRight:
            if (j + 1 >= m) return 0.0;
            mover = j + 1;
            moving_left = true;
            break;
        case Transition::OutLeft:
            if (j == 0) return 0.0; // wall: no way out
            moving_left = true;
            break;
        case Transition::OutRight:
            if (j + 1 >= m) return 0.0;
            moving_left = false;
            break;
    }

    const double toward = moving_left ? left_sum(mover) : right_sum(mover);
    const double away = moving_left ? right_sum(mover) : left_sum(mover);
    switch (spec.kind) {
        case ModelKind::Aps:
            return toward;
        case ModelKind::LocalSat:
            return (1.0 - s.values[mover] / grid.cell_width) * toward;
        case ModelKind::NonlocalSat: {
            const double coeff = 1.0 - window_sum(mover) / spec.capacity;
            return std::max(coeff, 0.0) * toward - std::min(coeff, 0.0) * away;
        }
    }
    return 0.0;
}

std::vector<double> interaction_balance(const ProportionVector& s, const ModelSpec& spec) {
    const std::size_t m = s.grid.cell_count;
    const StencilSums sums = stencil_sums(s, spec);
    std::vector<double> out_left, out_right;
    out_probabilities(s, spec, sums, out_left, out_right);

    // flux_left[k] = s_k P(I_k -> I_{k-1}), reused verbatim as the gain of
    // cell k-1 so departures and arrivals cancel exactly.
    std::vector<double> flux_left(m, 0.0), flux_right(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        flux_left[k] = s.values[k] * out_left[k];
        flux_right[k] = s.values[k] * out_right[k];
    }
    std::vector<double> net(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double gain = 0.0;
        if (j + 1 < m) gain += flux_left[j + 1];
        if (j > 0) gain += flux_right[j - 1];
        net[j] = gain - flux_left[j] - flux_right[j];
    }
    return net;
}

std::vector<double> diffusion_balance(const ProportionVector& s, double jump_probability) {
    if (!(jump_probability > 0.0 && jump_probability <= 1.0))
        throw std::invalid_argument("diffusion_balance: jump probability must be in (0, 1]");
    const std::size_t m = s.grid.cell_count;
    std::vector<double> net(m, 0.0);
    // Interior face exchange (p/2)(s_right - s_left); wall faces exchange
    // nothing, so the row sums stay conservative.
    std::vector<double> face(m + 1, 0.0);
    for (std::size_t f = 1; f < m; ++f)
        face[f] = 0.5 * jump_probability * (s.values[f] - s.values[f - 1]);
    for (std::size_t j = 0; j < m; ++j) net[j] = face[j + 1] - face[j];
    return net;
}

MasterFrequencies master_frequencies(double gamma, double cell_width, double jump_probability,
                                     double alpha_diff) {
    const double alpha_int = gamma * jump_probability * alpha_diff / 2.0;
    return MasterFrequencies{alpha_diff / (cell_width * cell_width), alpha_int / cell_width};
}

ProportionVector step_master(const ProportionVector& s, double dt, double jump_probability,
                             double q_diff, double q_int, const ModelSpec& spec) {
    const std::vector<double> diff = diffusion_balance(s, jump_probability);
    const std::vector<double> inter = interaction_balance(s, spec);
    ProportionVector next = s;
    double worst_dt = std::numeric_limits<double>::infinity();
    std::size_t worst_cell = 0;
    bool violated = false;
    for (std::size_t j = 0; j < s.values.size(); ++j) {
        const double rate = q_diff * diff[j] + q_int * inter[j];
        const double updated = s.values[j] + dt * rate;
        if (updated < 0.0) {
            violated = true;
            const double admissible = rate < 0.0 ? s.values[j] / (-rate) : 0.0;
            if (admissible < worst_dt) {
                worst_dt = admissible;
                worst_cell = j;
            }
        }
        next.values[j] = updated;
    }
    if (violated) {
        std::ostringstream msg;
        msg << "step_master: negativity at cell " << worst_cell << "; dt <= " << 0.5 * worst_dt
            << " would be admissible";
        throw std::runtime_error(msg.str());
    }
    return next;
}

} // namespace adhesion
