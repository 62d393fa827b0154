#pragma once

#include <cstdint>

namespace adhesion {

/// Counter-based random numbers: every draw is a pure function of
/// (seed, stream, step, slot), so per-particle streams can be evaluated in
/// any order and on any thread without changing a single bit of output.
///
/// `stream` is the per-particle (or per-purpose) identifier, `step` the time
/// step, `slot` distinguishes draws within one (stream, step) pair.
struct CounterRng {
    std::uint64_t seed = 0;

    std::uint64_t raw(std::uint64_t stream, std::uint64_t step, std::uint64_t slot) const;

    /// Uniform on (0, 1]; never returns 0 so log() is safe.
    double uniform01(std::uint64_t stream, std::uint64_t step, std::uint64_t slot) const;

    /// Standard normal via Box-Muller on slots (2*slot, 2*slot+1).
    double normal(std::uint64_t stream, std::uint64_t step, std::uint64_t slot = 0) const;
};

// Stream tags reserved for non-particle draws.
inline constexpr std::uint64_t kStreamInitialDensity = 0xA11CE5EEDull;
inline constexpr std::uint64_t kStreamInitialPositions = 0xB0B5EEDull;
inline constexpr std::uint64_t kStreamSampling = 0xCAFE5EEDull;

} // namespace adhesion
