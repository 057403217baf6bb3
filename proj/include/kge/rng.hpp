#pragma once

#include <cassert>
#include <cstdint>
#include <random>
#include <string_view>

#include "kge/types.hpp"

namespace kge {

using Rng = std::mt19937_64;

/// Derives an independent generator from a master seed and a stream name,
/// so that every consumer of randomness (init, batching, sampler,
/// negatives, ...) draws from its own reproducible stream.
inline Rng make_stream(std::uint64_t master_seed, std::string_view name) {
  std::uint64_t tag = 1469598103934665603ull;
  for (char c : name) {
    tag ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    tag *= 1099511628211ull;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(tag),
                    static_cast<std::uint32_t>(tag >> 32)};
  return Rng(seq);
}

/// Uniform draw from [0, n).
inline Index uniform_index(Rng& rng, Index n) {
  assert(n > 0);
  std::uniform_int_distribution<Index> dist(0, n - 1);
  return dist(rng);
}

/// Uniform draw from [0, n) \ {excluded}. Requires n >= 2.
inline Index uniform_index_excluding(Rng& rng, Index n, Index excluded) {
  assert(n >= 2);
  std::uniform_int_distribution<Index> dist(0, n - 2);
  Index v = dist(rng);
  return v >= excluded ? v + 1 : v;
}

inline Scalar uniform_real(Rng& rng) {
  std::uniform_real_distribution<Scalar> dist(0.0, 1.0);
  return dist(rng);
}

}  // namespace kge
