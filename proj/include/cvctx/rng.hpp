#pragma once

// Deterministic seeded substreams. A stream is fully determined by
// (seed, stream, index), so work can be split across threads without
// changing any drawn value.

#include <cstdint>
#include <random>

namespace cvctx::rng {

using Engine = std::mt19937_64;

Engine substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller; consumes two draws.
double standard_normal(Engine& eng);

}  // namespace cvctx::rng
