#include "adhesion/presets.hpp"

#include <algorithm>
#include <stdexcept>

namespace adhesion {

namespace {

ExperimentConfig base_config(const std::string& name) {
    ExperimentConfig c;
    c.name = name;
    c.out_dir = name;
    c.perspective = Perspective::Both;
    c.half_length = 1.0;
    c.cells = 1000;
    c.spec.sensing_radius = 0.5;
    c.spec.window_halfwidth = 0.5;
    c.spec.gamma = 1000.0;
    c.spec.attraction = WeightKind::LinearDecay;
    c.spec.saturation = WeightKind::ConstantOne;
    c.seed = 20240101;
    c.seed_set = true;
    c.pde_dt = 1e-4;
    c.sde_dt = 0.01;
    c.sde_n = 300;
    c.sde_eps2 = 0.4;
    c.sde_noise_std = 0.1;
    // SDE horizon 25 maps to PDE time 2 through the mean-field clock
    // (effective diffusion 0.08 for the figures noise at dt = 0.01).
    c.sde_steps = 2500;
    c.sde_snapshot_stride = 1250; // initial / intermediate / final
    c.pde_steps = 20000;
    c.pde_snapshot_stride = 10000;
    return c;
}

ExperimentConfig local_sat(const std::string& name, double capacity, std::size_t n_particles) {
    ExperimentConfig c = base_config(name);
    c.spec.kind = ModelKind::LocalSat;
    c.spec.lambda = 1;
    c.spec.capacity = capacity;
    c.sde_n = n_particles;
    c.sde_dt = 0.001;
    c.a_rule = ARule::InvSqrtN;
    // Keep the pairwise workload of N ~ thousands within desk scale.
    c.sde_steps = 1000;
    c.sde_snapshot_stride = 500;
    return c;
}

ExperimentConfig nonlocal_sat(const std::string& name, double capacity) {
    ExperimentConfig c = base_config(name);
    c.spec.kind = ModelKind::NonlocalSat;
    c.spec.lambda = 1;
    c.spec.capacity = capacity;
    return c;
}

} // namespace

std::vector<std::string> preset_names() {
    return {
        "fig-aps",
        "fig-localsat-k1",
        "fig-localsat-k07",
        "fig-localsat-k04",
        "fig-nlsat-k1",
        "fig-nlsat-k1-cw",
        "fig-nlsat-k06",
        "fig-nlsat-k06-wlin",
        "fig-nlsat-k06-concentrated",
        "fig-nlsat-k04",
        "fig-nlsat-k04-cw",
        "fig-nlsat-k02",
        "fig-nlsat-k02-concentrated",
    };
}

bool is_preset(const std::string& name) {
    const auto names = preset_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

ExperimentConfig preset(const std::string& name) {
    if (name == "fig-aps") {
        ExperimentConfig c = base_config(name);
        c.spec.kind = ModelKind::Aps;
        c.spec.lambda = 0;
        c.spec.capacity = 1.0;
        // The 2R peak spacing belongs to the constant-weight aggregation
        // model; the linear weight drives the instability to much shorter
        // wavelengths at this drift strength.
        c.spec.attraction = WeightKind::ConstantOne;
        return c;
    }
    if (name == "fig-localsat-k1") return local_sat(name, 1.0, 3500);
    if (name == "fig-localsat-k07") return local_sat(name, 0.7, 3500);
    if (name == "fig-localsat-k04") return local_sat(name, 0.4, 2500);
    if (name == "fig-nlsat-k1") return nonlocal_sat(name, 1.0);
    if (name == "fig-nlsat-k1-cw") {
        ExperimentConfig c = nonlocal_sat(name, 1.0);
        c.spec.attraction = WeightKind::ConstantOne;
        return c;
    }
    if (name == "fig-nlsat-k06") return nonlocal_sat(name, 0.6);
    if (name == "fig-nlsat-k06-wlin") {
        ExperimentConfig c = nonlocal_sat(name, 0.6);
        c.spec.saturation = WeightKind::LinearDecay;
        return c;
    }
    if (name == "fig-nlsat-k06-concentrated") {
        // Concentrated slab data: the regime that contracts into [-0.2, 0.2].
        // Eulerian-only; the unit-mass particle ensemble cannot carry the
        // sub-unit slab mass.
        ExperimentConfig c = nonlocal_sat(name, 0.6);
        c.perspective = Perspective::Pde;
        c.initial.kind = InitialCondition::Kind::ConcentratedSlab;
        c.initial.delta = 0.3;
        return c;
    }
    if (name == "fig-nlsat-k04") return nonlocal_sat(name, 0.4);
    if (name == "fig-nlsat-k04-cw") {
        ExperimentConfig c = nonlocal_sat(name, 0.4);
        c.spec.attraction = WeightKind::ConstantOne;
        return c;
    }
    if (name == "fig-nlsat-k02") return nonlocal_sat(name, 0.2);
    if (name == "fig-nlsat-k02-concentrated") {
        ExperimentConfig c = nonlocal_sat(name, 0.2);
        c.perspective = Perspective::Pde;
        c.initial.kind = InitialCondition::Kind::ConcentratedSlab;
        c.initial.delta = 0.3;
        return c;
    }
    throw std::invalid_argument("unknown preset: " + name);
}

} // namespace adhesion
