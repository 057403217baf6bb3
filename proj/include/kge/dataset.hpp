#pragma once

#include <span>
#include <vector>

#include "kge/rng.hpp"
#include "kge/triple_store.hpp"
#include "kge/types.hpp"

namespace kge {

struct SplitResult {
  TripleStore train;
  TripleStore test;
};

/// Disjoint partition of the deduplicated triple set. The test side gets
/// round(test_fraction * unique_size) triples; both sides keep the
/// original first-appearance order. Deterministic given the seed.
SplitResult split(const TripleStore& store, double test_fraction,
                  std::uint64_t seed);

/// Shuffled permutation of the triples partitioned into batches of
/// batch_size; the last batch may be short. Consumes the generator, so
/// successive calls yield fresh shuffles.
std::vector<std::vector<Triple>> make_batches(std::span<const Triple> triples,
                                              std::size_t batch_size,
                                              Rng& rng);

/// Seed-owning convenience overload.
std::vector<std::vector<Triple>> iterate_batches(const TripleStore& store,
                                                 std::size_t batch_size,
                                                 std::uint64_t seed);

}  // namespace kge
