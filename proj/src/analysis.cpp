#include "adhesion/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "adhesion/parallel.hpp"
#include "adhesion/rng.hpp"

namespace adhesion {

namespace {

std::size_t bin_count_for(double binwidth, double half_length) {
    if (!(binwidth > 0.0)) throw std::invalid_argument("histogram: bin width must be positive");
    const double bins = 2.0 * half_length / binwidth;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(bins)));
}

} // namespace

Histogram histogram(const std::vector<double>& positions, double binwidth, double half_length) {
    if (positions.empty()) throw std::invalid_argument("histogram: empty position set");
    Histogram h;
    h.half_length = half_length;
    h.requested_binwidth = binwidth;
    const std::size_t bins = bin_count_for(binwidth, half_length);
    h.binwidth = 2.0 * half_length / static_cast<double>(bins);
    h.counts.assign(bins, 0);
    for (double x : positions) {
        auto b = static_cast<long long>(std::floor((x + half_length) / h.binwidth));
        b = std::clamp<long long>(b, 0, static_cast<long long>(bins) - 1);
        ++h.counts[static_cast<std::size_t>(b)];
    }
    h.total = positions.size();
    h.density.assign(bins, 0.0);
    const double norm = static_cast<double>(h.total) * h.binwidth;
    for (std::size_t b = 0; b < bins; ++b)
        h.density[b] = static_cast<double>(h.counts[b]) / norm;
    return h;
}

FieldPair empirical_fields(const std::vector<double>& positions, const ModelSpec& spec,
                           double window_halfwidth, double binwidth, double half_length,
                           int threads) {
    const std::size_t bins = bin_count_for(binwidth, half_length);
    const Grid mesh(half_length, bins);
    const double inv_n = 1.0 / static_cast<double>(positions.size());

    FieldPair pair;
    pair.drift.grid = mesh;
    pair.drift.values.assign(bins, 0.0);
    pair.saturation.grid = mesh;
    pair.saturation.values.assign(bins, 1.0);
    pair.saturation.positive.assign(bins, 1.0);
    pair.saturation.negative.assign(bins, 0.0);

    parallel_for(bins, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t b = begin; b < end; ++b) {
            const double x = mesh.center(b);
            const double coeff = saturation_at(x, positions, spec, window_halfwidth);
            double force_sum = 0.0;
            for (double y : positions) force_sum += pairwise_force(x, y, spec);
            pair.drift.values[b] = coeff * inv_n * force_sum;
            pair.saturation.values[b] = coeff;
            pair.saturation.positive[b] = std::max(coeff, 0.0);
            pair.saturation.negative[b] = std::min(coeff, 0.0);
        }
    });
    return pair;
}

std::vector<double> resample(const std::vector<double>& values, const Grid& from, const Grid& to) {
    if (std::abs(from.half_length - to.half_length) > 1e-12 * std::max(1.0, from.half_length))
        throw std::invalid_argument("resample: incompatible domains");
    std::vector<double> out(to.cell_count, 0.0);
    for (std::size_t i = 0; i < to.cell_count; ++i) {
        const double lo = to.left_edge(i);
        const double hi = to.right_edge(i);
        double integral = 0.0;
        std::size_t k = from.cell_of(lo);
        for (; k < from.cell_count; ++k) {
            const double a = std::max(from.left_edge(k), lo);
            const double b = std::min(from.right_edge(k), hi);
            if (b > a) integral += values[k] * (b - a);
            if (from.right_edge(k) >= hi) break;
        }
        out[i] = integral / (hi - lo);
    }
    return out;
}

FieldDistance compare_fields(const std::vector<double>& a, const Grid& grid_a,
                             const std::vector<double>& b, const Grid& grid_b) {
    const std::vector<double>* rhs = &b;
    std::vector<double> resampled;
    if (!(grid_a == grid_b)) {
        resampled = resample(b, grid_b, grid_a);
        rhs = &resampled;
    }
    if (a.size() != rhs->size()) throw std::invalid_argument("compare_fields: size mismatch");
    FieldDistance d;
    double ref_l1 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = std::abs(a[i] - (*rhs)[i]);
        d.l1 += diff * grid_a.cell_width;
        d.linf = std::max(d.linf, diff);
        ref_l1 += std::abs((*rhs)[i]) * grid_a.cell_width;
    }
    d.rel_l1 = ref_l1 > 0.0 ? d.l1 / ref_l1 : d.l1;
    return d;
}

FieldDistance compare_fields(const DensityField& a, const DensityField& b) {
    return compare_fields(a.values, a.grid, b.values, b.grid);
}

ConvergenceResult convergence_order(const std::vector<double>& cell_widths,
                                    const std::vector<double>& errors) {
    if (cell_widths.size() != errors.size() || cell_widths.size() < 3)
        throw std::invalid_argument("convergence_order: need at least three refinement levels");
    ConvergenceResult result;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!(errors[i] > 0.0))
            throw std::invalid_argument("convergence_order: errors must be positive");
        lx.push_back(std::log(cell_widths[i]));
        ly.push_back(std::log(errors[i]));
        if (i > 0 && cell_widths[i] < cell_widths[i - 1] && errors[i] >= errors[i - 1])
            result.monotone = false;
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    result.order = num / den;
    return result;
}

std::vector<double> sample_from_density(const DensityField& u, std::size_t n, std::uint64_t seed) {
    const Grid& grid = u.grid;
    std::vector<double> cdf(grid.cell_count + 1, 0.0);
    for (std::size_t i = 0; i < grid.cell_count; ++i)
        cdf[i + 1] = cdf[i] + u.values[i] * grid.cell_width;
    const double total = cdf.back();
    if (!(total > 0.0)) throw std::invalid_argument("sample_from_density: zero mass");

    const CounterRng rng{seed};
    std::vector<double> xs(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double target = total * rng.uniform01(kStreamSampling, k, 0);
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
        std::size_t i = static_cast<std::size_t>(std::distance(cdf.begin(), it));
        i = std::min(i == 0 ? 0 : i - 1, grid.cell_count - 1);
        const double within = u.values[i] > 0.0 ? (target - cdf[i]) / u.values[i] : 0.0;
        xs[k] = std::min(grid.left_edge(i) + within, grid.half_length);
    }
    return xs;
}

MeanFieldEquivalent mean_field_equivalent(const SdeConfig& config) {
    const double diffusion = effective_diffusion(config);
    return MeanFieldEquivalent{config.spec.gamma / diffusion, diffusion};
}

} // namespace adhesion
