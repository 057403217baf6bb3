#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kge/embedding.hpp"
#include "kge/rng.hpp"
#include "kge/types.hpp"

namespace kge {

enum class TriplePosition : std::uint8_t { Subject, Predicate, Object };

/// Which triple positions the proposal may corrupt.
struct ProposalPositions {
  bool subject = true;
  bool predicate = true;
  bool object = true;

  bool any() const { return subject || predicate || object; }
};

struct SamplerConfig {
  int steps_per_chain = 20;  // the "free samples" knob
  int chains_per_triple = 1;
  ProposalPositions positions{};
};

/// A Markov chain over the triple universe, seeded at a data triple.
struct ChainState {
  Triple current;
  Triple origin;
};

struct Proposal {
  Triple candidate;
  TriplePosition position;
};

/// Picks a position uniformly among the enabled ones and replaces its
/// value uniformly, excluding the current one. Throws DataError when an
/// enabled position has fewer than two values to choose from.
Proposal propose(Rng& rng, const Triple& t, Index num_entities,
                 Index num_relations, const ProposalPositions& positions);

/// min(1, exp(score(to) - score(from))), overflow-free.
Scalar acceptance_prob(const EmbeddingSpace& space, const Triple& from,
                       const Triple& to);

/// One propose/accept step; rejected proposals leave the chain unchanged.
ChainState step(const EmbeddingSpace& space, ChainState chain, Rng& rng,
               const ProposalPositions& positions);

struct SamplerStats {
  std::int64_t proposals = 0;
  std::int64_t accepted = 0;

  Scalar acceptance_rate() const {
    return proposals > 0 ? static_cast<Scalar>(accepted) / proposals : 0.0;
  }
};

/// Runs config.chains_per_triple chains of config.steps_per_chain steps
/// from every batch triple and collects the final chain states: the
/// model-driven sample set S with |S| = |batch| * chains_per_triple.
/// Chains are independent given their own generators; the serial order
/// used here is seeded and bit-reproducible.
std::vector<Triple> generate_samples(const EmbeddingSpace& space,
                                     std::span<const Triple> batch,
                                     const SamplerConfig& config, Rng& rng,
                                     SamplerStats* stats = nullptr);

}  // namespace kge
