#include "adhesion/particles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "adhesion/parallel.hpp"
#include "adhesion/rng.hpp"

namespace adhesion {

namespace {

constexpr std::uint64_t kInitStepTag = ~0ull;

double clamp_position(double x, double half_length) {
    return std::clamp(x, -half_length, half_length);
}

double reflect_position(double x, double half_length) {
    // Fold into the domain; one pass per wall is enough for small steps but
    // loop in case of an extreme draw.
    for (int guard = 0; guard < 64; ++guard) {
        if (x > half_length)
            x = 2.0 * half_length - x;
        else if (x < -half_length)
            x = -2.0 * half_length - x;
        else
            return x;
    }
    return clamp_position(x, half_length);
}

/// Position-sorted traversal order. Every interaction sum walks particles in
/// ascending position (ties by stream-id-independent value equality), which
/// makes the sums invariant under relabeling and under the bucket split.
std::vector<std::uint32_t> position_order(const std::vector<double>& xs) {
    std::vector<std::uint32_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (xs[a] != xs[b]) return xs[a] < xs[b];
        return a < b;
    });
    return order;
}

/// Index buckets of width >= interaction radius over [-L, L], filled in
/// position order; a particle's candidates live in its bucket and the two
/// adjacent ones, and concatenating those preserves the position order.
struct Buckets {
    double lo = 0.0;
    double width = 1.0;
    std::vector<std::vector<std::uint32_t>> bins;

    Buckets(const std::vector<double>& xs, const std::vector<std::uint32_t>& order,
            double half_length, double radius) {
        lo = -half_length;
        const int n = std::max(1, static_cast<int>(std::floor(2.0 * half_length / radius)));
        width = 2.0 * half_length / n;
        bins.assign(static_cast<std::size_t>(n), {});
        for (std::uint32_t i : order) bins[bin_of(xs[i])].push_back(i);
    }

    std::size_t bin_of(double x) const {
        auto b = static_cast<long long>(std::floor((x - lo) / width));
        b = std::clamp<long long>(b, 0, static_cast<long long>(bins.size()) - 1);
        return static_cast<std::size_t>(b);
    }

    void gather(double x, std::vector<std::uint32_t>& out) const {
        out.clear();
        const std::size_t b = bin_of(x);
        const std::size_t first = b == 0 ? 0 : b - 1;
        const std::size_t last = std::min(bins.size() - 1, b + 1);
        for (std::size_t k = first; k <= last; ++k)
            out.insert(out.end(), bins[k].begin(), bins[k].end());
    }
};

} // namespace

double effective_window(const SdeConfig& config) {
    if (config.a_rule == ARule::InvSqrtN)
        return 1.0 / std::sqrt(static_cast<double>(config.n_particles));
    return config.spec.window_halfwidth;
}

double effective_diffusion(const SdeConfig& config) {
    if (config.noise == NoiseMode::EulerMaruyama) return config.eps2;
    const double step_std = config.eps2 * config.noise_std;
    return step_std * step_std / (2.0 * config.dt);
}

double pairwise_force(double xi, double xj, const ModelSpec& spec) {
    const double d = std::abs(xi - xj);
    if (d >= spec.sensing_radius || xi == xj) return 0.0;
    const double magnitude = spec.gamma * eval_weight(spec.attraction, d, spec.sensing_radius);
    return xj > xi ? magnitude : -magnitude;
}

double saturation_at(double x, const std::vector<double>& positions, const ModelSpec& spec,
                     double window_halfwidth) {
    if (spec.lambda == 0) return 1.0;
    const double norm = 1.0 / (2.0 * window_halfwidth * spec.capacity *
                               static_cast<double>(positions.size()));
    double sum = 0.0;
    for (double y : positions) sum += eval_weight(spec.saturation, std::abs(y - x), window_halfwidth);
    return 1.0 - sum * norm;
}

double particle_saturation(std::size_t i, const ParticleState& state, const SdeConfig& config) {
    if (i >= state.positions.size())
        throw std::out_of_range("particle_saturation: index out of range");
    return saturation_at(state.positions[i], state.positions, config.spec,
                         effective_window(config));
}

ParticleState initial_particles(const SdeConfig& config) {
    if (config.n_particles < 2)
        throw std::invalid_argument("initial_particles: need at least two particles");
    const double delta = config.init_delta > 0.0 ? config.init_delta : config.half_length;
    if (delta > config.half_length)
        throw std::invalid_argument("initial_particles: init_delta exceeds the domain");
    ParticleState state;
    state.seed = config.seed;
    state.positions.resize(config.n_particles);
    state.stream_ids.resize(config.n_particles);
    const CounterRng rng{config.seed};
    for (std::size_t i = 0; i < config.n_particles; ++i) {
        state.stream_ids[i] = i;
        const double u = rng.uniform01(i, kInitStepTag, 0);
        state.positions[i] = -delta + 2.0 * delta * u;
    }
    return state;
}

ParticleState step_sde(const ParticleState& state, const SdeConfig& config) {
    const std::size_t n = state.positions.size();
    const ModelSpec& spec = config.spec;
    const double window = effective_window(config);
    const double gather_radius =
        std::min(std::max(spec.sensing_radius, window), 2.0 * config.half_length);
    const CounterRng rng{state.seed};

    const std::vector<std::uint32_t> order = position_order(state.positions);
    const bool bucketed = config.force_path == ForcePath::Bucketed ||
                          (config.force_path == ForcePath::Auto && n >= 64);
    const Buckets buckets(state.positions, order, config.half_length, gather_radius);

    ParticleState next = state;
    next.t = state.t + config.dt;
    next.step = state.step + 1;

    const double inv_n = 1.0 / static_cast<double>(n);
    const double sat_norm = 1.0 / (2.0 * window * spec.capacity * static_cast<double>(n));

    parallel_for(n, config.threads, [&](std::size_t begin, std::size_t end) {
        std::vector<std::uint32_t> candidates;
        for (std::size_t i = begin; i < end; ++i) {
            const double xi = state.positions[i];

            double force_sum = 0.0;
            double weight_sum = 0.0;
            const auto accumulate = [&](std::size_t j) {
                const double xj = state.positions[j];
                if (j != i) force_sum += pairwise_force(xi, xj, spec);
                if (spec.lambda != 0)
                    weight_sum += eval_weight(spec.saturation, std::abs(xj - xi), window);
            };
            if (bucketed) {
                buckets.gather(xi, candidates);
                for (std::uint32_t j : candidates) accumulate(j);
            } else {
                for (std::uint32_t j : order) accumulate(j);
            }

            const double coeff = spec.lambda == 0 ? 1.0 : 1.0 - weight_sum * sat_norm;
            const double drift = coeff * inv_n * force_sum;

            double noise = 0.0;
            if (config.noise == NoiseMode::FiguresFaithful) {
                noise = config.eps2 * config.noise_std * rng.normal(state.stream_ids[i], state.step);
            } else {
                noise = std::sqrt(2.0 * config.eps2 * config.dt) *
                        rng.normal(state.stream_ids[i], state.step);
            }

            const double moved = xi + config.dt * drift + noise;
            next.positions[i] = config.boundary == BoundaryMode::Clamp
                                    ? clamp_position(moved, config.half_length)
                                    : reflect_position(moved, config.half_length);
        }
    });
    return next;
}

SdeRunResult run_sde(const SdeConfig& config) {
    SdeRunResult result;
    ParticleState state = initial_particles(config);
    const auto record = [&](const ParticleState& s) {
        result.snapshots.push_back(SdeSnapshot{s.t, s.step, s.positions});
    };
    record(state);
    for (std::size_t k = 0; k < config.n_steps; ++k) {
        state = step_sde(state, config);
        const bool last = k + 1 == config.n_steps;
        if (last || (config.snapshot_stride > 0 && state.step % config.snapshot_stride == 0))
            record(state);
    }
    return result;
}

} // namespace adhesion
