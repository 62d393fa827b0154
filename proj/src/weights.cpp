#include "adhesion/weights.hpp"

#include <stdexcept>

namespace adhesion {

double eval_weight(WeightKind kind, double r, double sensing_radius) {
    if (r < 0.0) throw std::invalid_argument("eval_weight: r must be nonnegative");
    if (!(sensing_radius > 0.0)) throw std::invalid_argument("eval_weight: R must be positive");
    if (r >= sensing_radius) return 0.0;
    switch (kind) {
        case WeightKind::ConstantOne: return 1.0;
        case WeightKind::LinearDecay: return (sensing_radius - r) / sensing_radius;
    }
    return 0.0;
}

std::string to_string(WeightKind kind) {
    return kind == WeightKind::ConstantOne ? "constant-one" : "linear-decay";
}

WeightKind weight_kind_from_string(const std::string& name) {
    if (name == "constant-one") return WeightKind::ConstantOne;
    if (name == "linear-decay") return WeightKind::LinearDecay;
    throw std::invalid_argument("unknown weight kind: " + name);
}

} // namespace adhesion
