#include "adhesion/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "adhesion/nonlocal_ops.hpp"
#include "adhesion/rng.hpp"

namespace adhesion {

namespace {

/// Thomas solve of a tridiagonal system; the assembled matrices here are
/// strictly diagonally dominant M-matrices, so no pivoting is needed and a
/// nonnegative right-hand side yields a nonnegative solution.
std::vector<double> solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                                      std::vector<double> upper, std::vector<double> rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
        if (!(diag[i] > 0.0))
            throw std::logic_error("solve_tridiagonal: pivot lost positivity");
    }
    std::vector<double> x(n, 0.0);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    return x;
}

std::vector<double> face_velocities(const DriftField& drift, double gamma) {
    const std::size_t m = drift.grid.cell_count;
    std::vector<double> v(m + 1, 0.0);
    for (std::size_t f = 1; f < m; ++f)
        v[f] = gamma * 0.5 * (drift.values[f - 1] + drift.values[f]);
    return v;
}

} // namespace

std::vector<double> upwind_face_flux(const DensityField& u, const DriftField& drift, double gamma) {
    const std::size_t m = u.grid.cell_count;
    const std::vector<double> v = face_velocities(drift, gamma);
    std::vector<double> flux(m + 1, 0.0);
    for (std::size_t f = 1; f < m; ++f)
        flux[f] = v[f] > 0.0 ? v[f] * u.values[f - 1] : v[f] * u.values[f];
    return flux;
}

DensityField make_initial(const InitialCondition& descriptor, const Grid& grid,
                          std::uint64_t seed) {
    const CounterRng rng{seed};
    const double L = grid.half_length;
    std::vector<double> raw(grid.cell_count, 0.0);
    switch (descriptor.kind) {
        case InitialCondition::Kind::UniformPerturbed: {
            const double base = 1.0 / (2.0 * L);
            for (std::size_t j = 0; j < raw.size(); ++j) {
                const double noise = 2.0 * rng.uniform01(kStreamInitialDensity, 0, j) - 1.0;
                raw[j] = base * (1.0 + 0.1 * noise);
            }
            break;
        }
        case InitialCondition::Kind::Concentrated:
        case InitialCondition::Kind::ConcentratedSlab: {
            if (!(descriptor.delta > 0.0 && descriptor.delta <= L))
                throw std::invalid_argument("make_initial: delta must be in (0, L]");
            const bool slab = descriptor.kind == InitialCondition::Kind::ConcentratedSlab;
            const double base = slab ? 1.0 / (2.0 * L) : 1.0 / (2.0 * descriptor.delta);
            for (std::size_t j = 0; j < raw.size(); ++j) {
                if (std::abs(grid.center(j)) > descriptor.delta) continue;
                const double noise = 2.0 * rng.uniform01(kStreamInitialDensity, 0, j) - 1.0;
                raw[j] = base * (1.0 + 0.1 * noise);
            }
            if (slab) return DensityField(grid, std::move(raw)); // mass delta/L by design
            break;
        }
        case InitialCondition::Kind::CosineBump: {
            for (std::size_t j = 0; j < raw.size(); ++j)
                raw[j] = (1.0 + std::cos(std::numbers::pi * grid.center(j) / L)) / (2.0 * L);
            break;
        }
    }
    return DensityField::normalized(grid, std::move(raw));
}

PdeState initial_state(const SolverConfig& config) {
    PdeState state;
    state.u = make_initial(config.initial, config.grid, config.seed);
    state.t = 0.0;
    state.step = 0;
    state.drift = drift_closure(state.u, config.spec);
    state.cfl = 0.0;
    return state;
}

PdeState step_pde(const PdeState& state, const SolverConfig& config) {
    const Grid& grid = config.grid;
    const std::size_t m = grid.cell_count;
    const double h = grid.cell_width;
    const double dt = config.dt;
    const double diffusion = kDiffusionCoefficient;
    const double dtd = dt * diffusion / (h * h);

    const DriftField drift = drift_closure(state.u, config.spec);
    const std::vector<double> v = face_velocities(drift, config.spec.gamma);

    double max_speed = 0.0;
    for (double value : drift.values) max_speed = std::max(max_speed, std::abs(value));
    const double cfl = config.spec.gamma * max_speed * dt / h;

    std::vector<double> lower(m, 0.0), diag(m, 0.0), upper(m, 0.0), rhs(m, 0.0);
    const bool implicit_advection = config.advection == AdvectionMode::Implicit;

    for (std::size_t j = 0; j < m; ++j) {
        const double vl = v[j];
        const double vr = v[j + 1];
        double d = 1.0;
        if (implicit_advection)
            d += (dt / h) * (std::max(vr, 0.0) - std::min(vl, 0.0));
        if (j > 0) {
            d += dtd;
            lower[j] = -dtd - (implicit_advection ? (dt / h) * std::max(vl, 0.0) : 0.0);
        }
        if (j + 1 < m) {
            d += dtd;
            upper[j] = -dtd + (implicit_advection ? (dt / h) * std::min(vr, 0.0) : 0.0);
        }
        diag[j] = d;
        rhs[j] = state.u.values[j];
    }
    if (!implicit_advection) {
        const std::vector<double> flux = upwind_face_flux(state.u, drift, config.spec.gamma);
        for (std::size_t j = 0; j < m; ++j) rhs[j] -= (dt / h) * (flux[j + 1] - flux[j]);
    }

    const std::vector<double> solved = solve_tridiagonal(lower, diag, upper, rhs);

    // Reapply the update in flux form so the mass telescopes exactly: total
    // face flux = upwinded advection minus the diffusive gradient flux, both
    // taken from the solved state (or the old state where the term was
    // explicit), zero at the walls.
    const DensityField* advected = implicit_advection ? nullptr : &state.u;
    std::vector<double> total_flux(m + 1, 0.0);
    for (std::size_t f = 1; f < m; ++f) {
        const double ul = advected ? advected->values[f - 1] : solved[f - 1];
        const double ur = advected ? advected->values[f] : solved[f];
        const double advective = v[f] > 0.0 ? v[f] * ul : v[f] * ur;
        const double diffusive = diffusion * (solved[f] - solved[f - 1]) / h;
        total_flux[f] = advective - diffusive;
    }

    PdeState next;
    next.u.grid = grid;
    next.u.values.assign(m, 0.0);
    double min_u = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        next.u.values[j] = state.u.values[j] - (dt / h) * (total_flux[j + 1] - total_flux[j]);
        min_u = std::min(min_u, next.u.values[j]);
    }
    if (min_u < -1e-12) {
        std::ostringstream msg;
        msg << "step_pde: density " << min_u << " below -1e-12 at step " << state.step
            << " (advective CFL " << cfl << "); reduce dt or use implicit advection";
        throw std::runtime_error(msg.str());
    }
    next.t = state.t + dt;
    next.step = state.step + 1;
    next.drift = drift;
    next.cfl = cfl;
    return next;
}

PdeRunResult run_pde(const SolverConfig& config) {
    PdeRunResult result;
    PdeState state = initial_state(config);
    result.trace.initial_mass = state.u.mass();
    result.trace.min_density = min_value(state.u.values);
    result.trace.max_mass_error = 0.0;

    const auto record = [&](const PdeState& s) {
        PdeSnapshot snap;
        snap.t = s.t;
        snap.step = s.step;
        snap.density = s.u;
        snap.drift = drift_closure(s.u, config.spec); // co-registered with the density
        snap.saturation = saturation_field(s.u, config.spec);
        snap.mass = s.u.mass();
        snap.cfl = s.cfl;
        result.trace.local_saturation_out_of_range |= snap.saturation.local_out_of_range;
        result.snapshots.push_back(std::move(snap));
    };

    const auto wants_snapshot = [&](std::size_t step) {
        if (!config.snapshot_steps.empty())
            return std::find(config.snapshot_steps.begin(), config.snapshot_steps.end(), step) !=
                   config.snapshot_steps.end();
        return config.snapshot_stride > 0 && step % config.snapshot_stride == 0;
    };

    record(state);
    for (std::size_t n = 0; n < config.n_steps; ++n) {
        state = step_pde(state, config);
        result.trace.max_mass_error = std::max(
            result.trace.max_mass_error, std::abs(state.u.mass() - result.trace.initial_mass));
        result.trace.min_density = std::min(result.trace.min_density, min_value(state.u.values));
        result.trace.max_cfl = std::max(result.trace.max_cfl, state.cfl);
        const bool last = n + 1 == config.n_steps;
        if ((last || wants_snapshot(state.step)) &&
            (result.snapshots.empty() || result.snapshots.back().step != state.step))
            record(state);
    }
    if (result.trace.max_cfl > config.cfl_warn_threshold) {
        result.trace.cfl_warning = true;
        std::cerr << "[pde] warning: advective CFL reached " << result.trace.max_cfl << " (> "
                  << config.cfl_warn_threshold << ")\n";
    }
    return result;
}

} // namespace adhesion
