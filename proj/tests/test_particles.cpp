#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "adhesion/analysis.hpp"
#include "adhesion/particles.hpp"

using namespace adhesion;

namespace {

SdeConfig base_sde(ModelKind kind, double capacity, double gamma) {
    SdeConfig cfg;
    cfg.spec = ModelSpec::make(kind, gamma, 0.5, capacity);
    cfg.n_particles = 32;
    cfg.dt = 0.01;
    cfg.seed = 1234;
    cfg.half_length = 1.0;
    return cfg;
}

} // namespace

TEST_CASE("pairwise force") {
    const ModelSpec spec = ModelSpec::make(ModelKind::Aps, 1.0, 0.5, 1.0);

    CHECK(pairwise_force(0.2, 0.2, spec) == 0.0); // coincident: sign(0) = 0
    CHECK(pairwise_force(0.0, 0.25, spec) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pairwise_force(0.0, 0.6, spec) == 0.0); // outside the sensing radius
    CHECK(pairwise_force(0.0, -0.25, spec) == doctest::Approx(-0.5).epsilon(1e-15));

    // Bitwise antisymmetry.
    std::mt19937 gen(2);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = dist(gen), b = dist(gen);
        CHECK(pairwise_force(a, b, spec) == -pairwise_force(b, a, spec));
    }
}

TEST_CASE("particle saturation coefficient") {
    SUBCASE("switched off for pure aggregation") {
        const SdeConfig cfg = base_sde(ModelKind::Aps, 1.0, 1.0);
        const ParticleState state = initial_particles(cfg);
        for (std::size_t i = 0; i < 5; ++i) CHECK(particle_saturation(i, state, cfg) == 1.0);
    }

    SUBCASE("everyone inside the window at unit capacity") {
        SdeConfig cfg = base_sde(ModelKind::NonlocalSat, 1.0, 1.0);
        cfg.spec.capacity = 1.0;
        ParticleState state = initial_particles(cfg);
        // Pack all particles within the window of particle 0; w_hat is the
        // constant weight, so the empirical sum counts everyone.
        for (std::size_t i = 0; i < state.positions.size(); ++i)
            state.positions[i] = 0.1 + 1e-4 * static_cast<double>(i);
        const double s = particle_saturation(0, state, cfg);
        CHECK(std::abs(s - (1.0 - 1.0 / (2.0 * 0.5))) <= 1e-14); // 1 - 1/(2a) = 0
    }

    SUBCASE("lonely particle keeps only its self term") {
        SdeConfig cfg = base_sde(ModelKind::NonlocalSat, 0.5, 1.0);
        ParticleState state = initial_particles(cfg);
        const std::size_t n = state.positions.size();
        for (std::size_t i = 1; i < n; ++i) state.positions[i] = -0.9;
        state.positions[0] = 0.9;
        const double expected =
            1.0 - 1.0 / (2.0 * 0.5 * 0.5 * static_cast<double>(n)); // self term only
        CHECK(particle_saturation(0, state, cfg) == doctest::Approx(expected).epsilon(1e-13));
    }

    SUBCASE("the inv-sqrt-n rule shrinks the window") {
        SdeConfig cfg = base_sde(ModelKind::LocalSat, 1.0, 1.0);
        cfg.n_particles = 400;
        cfg.a_rule = ARule::InvSqrtN;
        CHECK(effective_window(cfg) == doctest::Approx(0.05).epsilon(1e-14));
    }
}

TEST_CASE("single step behavior") {
    SUBCASE("no noise, no force: positions are fixed bitwise") {
        SdeConfig cfg = base_sde(ModelKind::Aps, 1.0, 1.0);
        cfg.spec.gamma = 0.0;
        cfg.eps2 = 0.0;
        const ParticleState state = initial_particles(cfg);
        const ParticleState next = step_sde(state, cfg);
        for (std::size_t i = 0; i < state.positions.size(); ++i)
            CHECK(next.positions[i] == state.positions[i]);
    }

    SUBCASE("two particles approach symmetrically") {
        SdeConfig cfg = base_sde(ModelKind::Aps, 1.0, 1.0);
        cfg.eps2 = 0.0;
        cfg.n_particles = 2;
        ParticleState state = initial_particles(cfg);
        state.positions = {-0.1, 0.1};
        const ParticleState next = step_sde(state, cfg);
        CHECK(next.positions[0] > -0.1);
        CHECK(next.positions[1] < 0.1);
        CHECK(next.positions[0] == -next.positions[1]); // antisymmetric bitwise
    }

    SUBCASE("overcrowding pushes the edge particle into the wall clamp") {
        SdeConfig cfg = base_sde(ModelKind::NonlocalSat, 0.1, 1.0);
        cfg.eps2 = 0.0;
        cfg.n_particles = 16;
        ParticleState state = initial_particles(cfg);
        for (std::size_t i = 0; i < 15; ++i)
            state.positions[i] = 0.90 + 0.005 * static_cast<double>(i);
        state.positions[15] = 0.999;
        const ParticleState clamped = step_sde(state, cfg);
        CHECK(clamped.positions[15] == 1.0);

        SdeConfig reflecting = cfg;
        reflecting.boundary = BoundaryMode::Reflect;
        const ParticleState reflected = step_sde(state, reflecting);
        CHECK(reflected.positions[15] < 1.0);
        CHECK(reflected.positions[15] > 0.9);
    }

    SUBCASE("mean position is conserved without saturation or clamping") {
        SdeConfig cfg = base_sde(ModelKind::Aps, 1.0, 2.0);
        cfg.eps2 = 0.0;
        cfg.n_particles = 64;
        cfg.init_delta = 0.5; // keep everyone far from the walls
        ParticleState state = initial_particles(cfg);
        const double mean0 =
            std::accumulate(state.positions.begin(), state.positions.end(), 0.0) / 64.0;
        for (int n = 0; n < 20; ++n) state = step_sde(state, cfg);
        const double mean1 =
            std::accumulate(state.positions.begin(), state.positions.end(), 0.0) / 64.0;
        CHECK(std::abs(mean1 - mean0) <= 1e-13);
    }
}

TEST_CASE("force paths agree bitwise") {
    for (const double radius : {0.5, 0.12}) {
        for (const auto& [kind, capacity] : std::vector<std::pair<ModelKind, double>>{
                 {ModelKind::Aps, 1.0}, {ModelKind::NonlocalSat, 0.4}}) {
            SdeConfig cfg = base_sde(kind, capacity, 3.0);
            cfg.spec.sensing_radius = radius;
            cfg.spec.window_halfwidth = radius;
            cfg.n_particles = 257;
            cfg.eps2 = 0.3;

            SdeConfig naive = cfg;
            naive.force_path = ForcePath::Naive;
            SdeConfig bucketed = cfg;
            bucketed.force_path = ForcePath::Bucketed;

            ParticleState a = initial_particles(naive);
            ParticleState b = initial_particles(bucketed);
            for (int n = 0; n < 5; ++n) {
                a = step_sde(a, naive);
                b = step_sde(b, bucketed);
            }
            for (std::size_t i = 0; i < a.positions.size(); ++i)
                CHECK(a.positions[i] == b.positions[i]);
        }
    }
}

TEST_CASE("exchangeability: relabeling permutes trajectories bitwise") {
    SdeConfig cfg = base_sde(ModelKind::NonlocalSat, 0.5, 2.0);
    cfg.n_particles = 48;
    cfg.eps2 = 0.4;

    ParticleState state = initial_particles(cfg);

    std::vector<std::size_t> perm(cfg.n_particles);
    std::iota(perm.begin(), perm.end(), 0u);
    std::mt19937 gen(9);
    std::shuffle(perm.begin(), perm.end(), gen);

    ParticleState shuffled = state;
    for (std::size_t k = 0; k < perm.size(); ++k) {
        shuffled.positions[k] = state.positions[perm[k]];
        shuffled.stream_ids[k] = state.stream_ids[perm[k]];
    }

    ParticleState next = state;
    ParticleState shuffled_next = shuffled;
    for (int n = 0; n < 10; ++n) {
        next = step_sde(next, cfg);
        shuffled_next = step_sde(shuffled_next, cfg);
    }
    for (std::size_t k = 0; k < perm.size(); ++k)
        CHECK(shuffled_next.positions[k] == next.positions[perm[k]]);
}

TEST_CASE("trajectories are reproducible and thread independent") {
    SdeConfig cfg = base_sde(ModelKind::Aps, 1.0, 5.0);
    cfg.n_particles = 300;
    cfg.n_steps = 20;
    cfg.snapshot_stride = 0;

    SdeConfig threaded = cfg;
    threaded.threads = 3;

    const SdeRunResult a = run_sde(cfg);
    const SdeRunResult b = run_sde(cfg);
    const SdeRunResult c = run_sde(threaded);
    REQUIRE(a.snapshots.size() == b.snapshots.size());
    for (std::size_t s = 0; s < a.snapshots.size(); ++s)
        for (std::size_t i = 0; i < cfg.n_particles; ++i) {
            CHECK(a.snapshots[s].positions[i] == b.snapshots[s].positions[i]);
            CHECK(a.snapshots[s].positions[i] == c.snapshots[s].positions[i]);
        }
}

TEST_CASE("strong aggregation collapses the ensemble into bands") {
    // Constant-weight attraction at the mean-field strength of the aps
    // preset: after the transient, most of the population sits in a few
    // narrow bands. Band positions wander under the fixed-kick noise, so the
    // statistics are averaged over the later snapshots.
    SdeConfig cfg;
    cfg.spec = ModelSpec::make(ModelKind::Aps, 80.0, 0.5, 1.0, WeightKind::ConstantOne);
    cfg.n_particles = 300;
    cfg.dt = 0.01;
    cfg.n_steps = 2500;
    cfg.snapshot_stride = 500;
    cfg.eps2 = 0.4;
    cfg.seed = 20240101;
    cfg.threads = 2;
    const SdeRunResult run = run_sde(cfg);

    const auto stats = [](const std::vector<double>& xs) {
        const Histogram h = histogram(xs, 0.05, 1.0);
        double peak = 0.0;
        int occupied = 0;
        for (const double d : h.density) {
            peak = std::max(peak, d);
            if (d > 0.0) ++occupied;
        }
        return std::pair<double, int>{peak, occupied};
    };

    const auto [peak0, occupied0] = stats(run.snapshots.front().positions);
    CHECK(peak0 <= 2.0); // starts spread out
    CHECK(occupied0 >= 35);

    double mean_peak = 0.0, mean_occupied = 0.0;
    int counted = 0;
    for (const SdeSnapshot& snap : run.snapshots) {
        if (snap.t < 5.0) continue;
        const auto [peak, occupied] = stats(snap.positions);
        mean_peak += peak;
        mean_occupied += static_cast<double>(occupied);
        ++counted;
    }
    mean_peak /= counted;
    mean_occupied /= counted;
    CHECK(mean_peak >= 1.8);      // several-fold above the uniform level 0.5
    CHECK(mean_occupied <= 30.0); // a band structure, not a spread cloud
}

TEST_CASE("shrinking windows recover the local saturation coefficient") {
    // With a = 1/sqrt(N) and K = 1, the empirical coefficient approaches
    // 1 - u(x) for particles drawn from the density u.
    const double pi = std::numbers::pi;
    const Grid grid(1.0, 500);
    std::vector<double> raw(grid.cell_count);
    for (std::size_t j = 0; j < grid.cell_count; ++j)
        raw[j] = 1.0 + std::cos(pi * grid.center(j));
    const DensityField bump = DensityField::normalized(grid, std::move(raw));
    const ModelSpec spec = ModelSpec::make(ModelKind::LocalSat, 1.0, 0.5, 1.0);

    std::vector<double> mean_errors;
    for (const std::size_t n : {1000u, 10000u, 100000u}) {
        const std::vector<double> xs = sample_from_density(bump, n, 5);
        const double window = 1.0 / std::sqrt(static_cast<double>(n));
        double total = 0.0;
        int points = 0;
        for (double x = -0.8; x <= 0.8001; x += 0.05) {
            const double expected = 1.0 - bump.values[grid.cell_of(x)];
            total += std::abs(saturation_at(x, xs, spec, window) - expected);
            ++points;
        }
        mean_errors.push_back(total / points);
    }
    CHECK(mean_errors[1] < mean_errors[0]);
    CHECK(mean_errors[2] < mean_errors[1]);
    CHECK(mean_errors[2] <= 0.04);
}

TEST_CASE("run plumbing and support invariant") {
    SdeConfig cfg = base_sde(ModelKind::Aps, 1.0, 2.0);
    cfg.init_delta = 0.4;

    SUBCASE("zero steps returns only the initial snapshot") {
        cfg.n_steps = 0;
        const SdeRunResult run = run_sde(cfg);
        REQUIRE(run.snapshots.size() == 1);
        for (const double x : run.snapshots[0].positions) CHECK(std::abs(x) <= 0.4);
    }

    SUBCASE("positions stay inside the closed domain") {
        cfg.n_steps = 200;
        cfg.snapshot_stride = 50;
        cfg.eps2 = 0.8; // strong noise exercises the clamp
        const SdeRunResult run = run_sde(cfg);
        for (const SdeSnapshot& snap : run.snapshots)
            for (const double x : snap.positions) CHECK(std::abs(x) <= 1.0);
    }

    SUBCASE("noise conventions differ as designed") {
        SdeConfig figures = cfg;
        figures.eps2 = 0.8;
        SdeConfig em = figures;
        em.noise = NoiseMode::EulerMaruyama;
        CHECK(effective_diffusion(figures) ==
              doctest::Approx((0.8 * 0.1) * (0.8 * 0.1) / (2.0 * 0.01)).epsilon(1e-12));
        CHECK(effective_diffusion(em) == doctest::Approx(0.8).epsilon(1e-15));
    }
}
