#include "adhesion/rng.hpp"

#include <cmath>
#include <numbers>

namespace adhesion {

namespace {

// SplitMix64 finalizer; full-avalanche 64-bit mix.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t CounterRng::raw(std::uint64_t stream, std::uint64_t step, std::uint64_t slot) const {
    std::uint64_t h = mix64(seed ^ 0x6A09E667F3BCC909ull);
    h = mix64(h ^ mix64(stream));
    h = mix64(h ^ mix64(step));
    h = mix64(h ^ mix64(slot));
    return h;
}

double CounterRng::uniform01(std::uint64_t stream, std::uint64_t step, std::uint64_t slot) const {
    const std::uint64_t bits = raw(stream, step, slot) >> 11; // top 53 bits
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t stream, std::uint64_t step, std::uint64_t slot) const {
    const double u1 = uniform01(stream, step, 2 * slot);
    const double u2 = uniform01(stream, step, 2 * slot + 1);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    return radius * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace adhesion
