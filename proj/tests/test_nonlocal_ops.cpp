#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "adhesion/nonlocal_ops.hpp"
#include "oracles.hpp"

using namespace adhesion;
using namespace adhesion::testing;

namespace {

ModelSpec aps_spec(WeightKind w, double gamma = 1.0) {
    ModelSpec spec = ModelSpec::make(ModelKind::Aps, gamma, 0.5, 1.0, w);
    return spec;
}

DensityField random_density(const Grid& grid, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(0.05, 2.0);
    std::vector<double> raw(grid.cell_count);
    for (double& v : raw) v = dist(gen);
    return DensityField::normalized(grid, std::move(raw));
}

} // namespace

TEST_CASE("kernels of the zero and constant fields") {
    const Grid grid(1.0, 400);
    const DensityField zero(grid, std::vector<double>(grid.cell_count, 0.0));
    for (const auto side : {Side::Minus, Side::Plus}) {
        for (double g : one_sided_kernel(zero, side, 0.5, WeightKind::ConstantOne)) CHECK(g == 0.0);
        for (double g : one_sided_kernel_direct(zero, side, 0.5, WeightKind::LinearDecay))
            CHECK(g == 0.0);
    }

    // Constant density: both sides integrate the same window, so the direct
    // path (mirrored segment order) matches bitwise at interior cells.
    const DensityField uniform(grid, std::vector<double>(grid.cell_count, 0.5));
    const auto minus = one_sided_kernel_direct(uniform, Side::Minus, 0.5, WeightKind::ConstantOne);
    const auto plus = one_sided_kernel_direct(uniform, Side::Plus, 0.5, WeightKind::ConstantOne);
    for (std::size_t j = 0; j < grid.cell_count; ++j) {
        const double x = grid.center(j);
        if (std::abs(x) > 0.45) continue; // full windows only
        CHECK(minus[j] == plus[j]);
        CHECK(minus[j] == doctest::Approx(0.25).epsilon(1e-12)); // 0.5 * R
    }
}

TEST_CASE("prefix and direct paths agree to 1e-12") {
    for (const unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
        const Grid grid(1.0, 100 + 37 * seed);
        const DensityField u = random_density(grid, seed);
        for (const double radius : {0.5, 0.31, 0.07}) {
            for (const auto kind : {WeightKind::ConstantOne, WeightKind::LinearDecay}) {
                for (const auto side : {Side::Minus, Side::Plus}) {
                    const auto fast = one_sided_kernel(u, side, radius, kind);
                    const auto slow = one_sided_kernel_direct(u, side, radius, kind);
                    for (std::size_t j = 0; j < grid.cell_count; ++j)
                        CHECK(std::abs(fast[j] - slow[j]) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("directional kernels match the quadrature oracle") {
    const Grid grid(1.0, 1000);
    const auto u_fn = [](double x) { return 0.5 + 0.3 * std::sin(2.0 * x) + 0.2 * x * x; };
    const DensityField u = sample_field(grid, u_fn);
    for (const auto kind : {WeightKind::ConstantOne, WeightKind::LinearDecay}) {
        const ModelSpec spec = aps_spec(kind);
        const auto w_fn = [&](double r) { return eval_weight(kind, r, spec.sensing_radius); };
        const auto minus = directional_kernel(u, Side::Minus, spec);
        const auto plus = directional_kernel(u, Side::Plus, spec);
        for (const std::size_t j : {5u, 137u, 500u, 800u, 994u}) {
            const double x = grid.center(j);
            CHECK(minus[j] ==
                  doctest::Approx(oracle_kernel_minus(u_fn, w_fn, x, 0.5, 1.0)).epsilon(5e-5));
            CHECK(plus[j] ==
                  doctest::Approx(oracle_kernel_plus(u_fn, w_fn, x, 0.5, 1.0)).epsilon(5e-5));
        }
    }
}

TEST_CASE("nonlocal gradient of reference fields") {
    const Grid grid(1.0, 1000);

    // Affine density x + 1 (raw values, not renormalized).
    const DensityField affine = sample_field(grid, [](double x) { return x + 1.0; });

    const DriftField grad_const = nonlocal_gradient(affine, aps_spec(WeightKind::ConstantOne));
    const DriftField grad_lin = nonlocal_gradient(affine, aps_spec(WeightKind::LinearDecay));
    for (std::size_t j = 0; j < grid.cell_count; ++j) {
        const double x = grid.center(j);
        if (std::abs(x) > 0.49) continue;
        CHECK(grad_const.values[j] == doctest::Approx(0.25).epsilon(1e-4)); // R^2
        CHECK(grad_lin.values[j] == doctest::Approx(0.25 / 3.0).epsilon(1e-4)); // R^2/3
    }

    // Constant density: exact cancellation away from the boundary.
    const DensityField uniform(grid, std::vector<double>(grid.cell_count, 0.5));
    const DriftField grad_uniform = nonlocal_gradient(uniform, aps_spec(WeightKind::LinearDecay));
    for (std::size_t j = 0; j < grid.cell_count; ++j) {
        if (std::abs(grid.center(j)) > 0.49) continue;
        CHECK(std::abs(grad_uniform.values[j]) <= 1e-13);
    }
}

TEST_CASE("nonlocal gradient mirror antisymmetry") {
    const Grid grid(1.0, 256);
    const DensityField u = random_density(grid, 11);
    DensityField reflected = u;
    std::reverse(reflected.values.begin(), reflected.values.end());

    for (const auto kind : {WeightKind::ConstantOne, WeightKind::LinearDecay}) {
        const DriftField g = nonlocal_gradient(u, aps_spec(kind));
        const DriftField gr = nonlocal_gradient(reflected, aps_spec(kind));
        for (std::size_t j = 0; j < grid.cell_count; ++j) {
            const double mirrored = -gr.values[grid.cell_count - 1 - j];
            CHECK(std::abs(g.values[j] - mirrored) <= 1e-12);
        }
    }
}

TEST_CASE("quadrature order of the nonlocal gradient") {
    // Halving h must cut the error by about four (midpoint rule).
    const double pi = std::numbers::pi;
    const double iw = 1.0 / pi - 2.0 / (pi * pi); // linear-decay weight moment
    double errors[2];
    int level = 0;
    for (const std::size_t m : {500u, 1000u}) {
        const Grid grid(1.0, m);
        const DensityField u =
            sample_field(grid, [&](double x) { return (1.0 + std::cos(pi * x)) / 2.0; });
        const DriftField grad = nonlocal_gradient(u, aps_spec(WeightKind::LinearDecay));
        double err = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double x = grid.center(j);
            if (std::abs(x) > 0.5 - grid.cell_width) continue;
            err = std::max(err, std::abs(grad.values[j] + std::sin(pi * x) * iw));
        }
        errors[level++] = err;
    }
    CHECK(errors[0] / errors[1] >= std::pow(2.0, 1.9));
}

TEST_CASE("windowed mass") {
    const Grid grid(1.0, 1000);
    const DensityField uniform(grid, std::vector<double>(grid.cell_count, 0.5));
    const ModelSpec spec = ModelSpec::make(ModelKind::NonlocalSat, 1.0, 0.5, 0.6);
    const auto mass = windowed_mass(uniform, spec);

    const std::size_t center = grid.cell_of(0.0);
    CHECK(mass[center] == doctest::Approx(0.5).epsilon(1e-10));
    // Truncated window at the wall: the integral over [0.5, 1].
    CHECK(mass[grid.cell_count - 1] == doctest::Approx(0.25).epsilon(2.0 * grid.cell_width));

    for (const unsigned seed : {21u, 22u, 23u}) {
        const DensityField u = random_density(grid, seed);
        for (const double m : windowed_mass(u, spec)) {
            CHECK(m >= -1e-14);
            CHECK(m <= 1.0 + 1e-12);
        }
    }

    const DensityField zero(grid, std::vector<double>(grid.cell_count, 0.0));
    for (const double m : windowed_mass(zero, spec)) CHECK(m == 0.0);
}

TEST_CASE("saturation field forms and split") {
    const Grid grid(1.0, 1000);

    SUBCASE("aps is identically one") {
        const DensityField u = random_density(grid, 31);
        const SaturationField s = saturation_field(u, ModelSpec::make(ModelKind::Aps, 1.0, 0.5, 1.0));
        for (std::size_t j = 0; j < grid.cell_count; ++j) {
            CHECK(s.values[j] == 1.0);
            CHECK(s.positive[j] == 1.0);
            CHECK(s.negative[j] == 0.0);
        }
    }

    SUBCASE("local saturation is 1 - u and flags out-of-range input") {
        const ModelSpec spec = ModelSpec::make(ModelKind::LocalSat, 1.0, 0.5, 1.0);
        DensityField u(grid, std::vector<double>(grid.cell_count, 0.4));
        u.values[10] = 1.0;
        SaturationField s = saturation_field(u, spec);
        CHECK(s.values[10] == 0.0);
        CHECK(s.values[20] == doctest::Approx(0.6).epsilon(1e-15));
        CHECK(!s.local_out_of_range);

        u.values[11] = 1.25;
        s = saturation_field(u, spec);
        CHECK(s.local_out_of_range);
        CHECK(s.values[11] == doctest::Approx(-0.25).epsilon(1e-14)); // not clamped
    }

    SUBCASE("nonlocal saturation against hand values") {
        const ModelSpec spec = ModelSpec::make(ModelKind::NonlocalSat, 1.0, 0.5, 0.6);
        const DensityField uniform(grid, std::vector<double>(grid.cell_count, 0.5));
        const SaturationField s = saturation_field(uniform, spec);
        const std::size_t center = grid.cell_of(0.0);
        CHECK(s.values[center] == doctest::Approx(1.0 - 0.5 / 0.6).epsilon(1e-9));
        CHECK(s.negative[center] == 0.0);

        // Window mass 1.2 > K: coefficient -1 exactly.
        const DensityField dense(grid, std::vector<double>(grid.cell_count, 1.2));
        const SaturationField sd = saturation_field(dense, spec);
        CHECK(sd.values[center] == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(sd.positive[center] == 0.0);
        CHECK(sd.negative[center] == doctest::Approx(-1.0).epsilon(1e-9));
    }

    SUBCASE("threshold: window mass equal to the capacity") {
        const ModelSpec spec = ModelSpec::make(ModelKind::NonlocalSat, 1.0, 0.5, 0.625);
        const DensityField u(grid, std::vector<double>(grid.cell_count, 0.625));
        const SaturationField s = saturation_field(u, spec);
        const std::size_t center = grid.cell_of(0.0);
        CHECK(std::abs(s.values[center]) <= 1e-13);
        CHECK(std::abs(s.positive[center]) <= 1e-13);
        CHECK(std::abs(s.negative[center]) <= 1e-13);
    }

    SUBCASE("split identity on random fields") {
        for (const unsigned seed : {41u, 42u}) {
            const DensityField u = random_density(grid, seed);
            const SaturationField s =
                saturation_field(u, ModelSpec::make(ModelKind::NonlocalSat, 1.0, 0.5, 0.3));
            for (std::size_t j = 0; j < grid.cell_count; ++j) {
                CHECK(s.positive[j] + s.negative[j] == s.values[j]);
                CHECK(s.positive[j] * s.negative[j] == 0.0);
                CHECK(s.positive[j] >= 0.0);
                CHECK(s.negative[j] <= 0.0);
            }
        }
    }
}

TEST_CASE("drift closure") {
    const Grid grid(1.0, 1000);

    SUBCASE("aps equals the nonlocal gradient exactly") {
        const DensityField u = random_density(grid, 51);
        const ModelSpec spec = ModelSpec::make(ModelKind::Aps, 2.0, 0.5, 1.0);
        const DriftField k = drift_closure(u, spec);
        const DriftField g = nonlocal_gradient(u, spec);
        for (std::size_t j = 0; j < grid.cell_count; ++j) CHECK(k.values[j] == g.values[j]);
    }

    SUBCASE("constant density gives zero drift for all models") {
        const DensityField uniform(grid, std::vector<double>(grid.cell_count, 0.5));
        for (const auto& [kind, capacity] :
             std::vector<std::pair<ModelKind, double>>{{ModelKind::Aps, 1.0},
                                                       {ModelKind::LocalSat, 1.0},
                                                       {ModelKind::NonlocalSat, 0.6}}) {
            const DriftField k = drift_closure(uniform, ModelSpec::make(kind, 1.0, 0.5, capacity));
            for (std::size_t j = 0; j < grid.cell_count; ++j) {
                if (std::abs(grid.center(j)) > 0.49) continue;
                CHECK(std::abs(k.values[j]) <= 1e-12);
            }
        }
    }

    SUBCASE("oversaturation flips attraction into repulsion") {
        // Dense block left of x = -0.5 with a sparse tail: at the cell near
        // -0.5 the gradient points right (toward the block) but the window
        // mass exceeds K, so the drift must point away.
        std::vector<double> raw(grid.cell_count, 0.05);
        for (std::size_t j = 0; j < grid.cell_count; ++j) {
            const double x = grid.center(j);
            if (x >= -0.45 && x <= 0.0) raw[j] = 2.0;
        }
        const DensityField u(grid, raw);
        const ModelSpec spec = ModelSpec::make(ModelKind::NonlocalSat, 1.0, 0.5, 0.6);

        const std::size_t probe = grid.cell_of(-0.5);
        const DriftField gradient = nonlocal_gradient(u, spec);
        const auto mass = windowed_mass(u, spec);
        const DriftField drift = drift_closure(u, spec);

        CHECK(gradient.values[probe] > 0.1);
        CHECK(mass[probe] > spec.capacity);
        CHECK(drift.values[probe] < -0.01);

        // Cross-check the gradient sign with the quadrature oracle.
        const auto u_fn = [&](double y) {
            return (y >= -0.45 && y <= 0.0) ? 2.0 : 0.05;
        };
        const auto w_fn = [&](double r) {
            return eval_weight(spec.attraction, r, spec.sensing_radius);
        };
        CHECK(oracle_nonlocal_gradient(u_fn, w_fn, grid.center(probe), 0.5, 1.0) > 0.1);
    }
}
