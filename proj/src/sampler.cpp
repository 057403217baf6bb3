#include "kge/sampler.hpp"

#include <array>
#include <cmath>

#include "kge/errors.hpp"

namespace kge {

Proposal propose(Rng& rng, const Triple& t, Index num_entities,
                 Index num_relations, const ProposalPositions& positions) {
  std::array<TriplePosition, 3> enabled{};
  int count = 0;
  if (positions.subject) enabled[count++] = TriplePosition::Subject;
  if (positions.predicate) enabled[count++] = TriplePosition::Predicate;
  if (positions.object) enabled[count++] = TriplePosition::Object;
  if (count == 0) throw DataError("propose: no positions enabled");

  if ((positions.subject || positions.object) && num_entities < 2) {
    throw DataError("propose: need >= 2 entities to corrupt subject/object");
  }
  if (positions.predicate && num_relations < 2) {
    throw DataError("propose: need >= 2 relations to corrupt the predicate");
  }

  TriplePosition pos = enabled[uniform_index(rng, count)];
  Triple candidate = t;
  switch (pos) {
    case TriplePosition::Subject:
      candidate.s = uniform_index_excluding(rng, num_entities, t.s);
      break;
    case TriplePosition::Predicate:
      candidate.p = uniform_index_excluding(rng, num_relations, t.p);
      break;
    case TriplePosition::Object:
      candidate.o = uniform_index_excluding(rng, num_entities, t.o);
      break;
  }
  return Proposal{candidate, pos};
}

Scalar acceptance_prob(const EmbeddingSpace& space, const Triple& from,
                       const Triple& to) {
  Scalar diff = score(space, to) - score(space, from);
  return diff >= 0 ? 1.0 : std::exp(diff);
}

ChainState step(const EmbeddingSpace& space, ChainState chain, Rng& rng,
               const ProposalPositions& positions) {
  Proposal proposal = propose(rng, chain.current, space.num_entities(),
                              space.num_relations(), positions);
  Scalar accept = acceptance_prob(space, chain.current, proposal.candidate);
  if (uniform_real(rng) < accept) chain.current = proposal.candidate;
  return chain;
}

std::vector<Triple> generate_samples(const EmbeddingSpace& space,
                                     std::span<const Triple> batch,
                                     const SamplerConfig& config, Rng& rng,
                                     SamplerStats* stats) {
  if (batch.empty()) throw DataError("generate_samples: batch is empty");
  if (config.steps_per_chain < 1) {
    throw DataError("generate_samples: steps_per_chain must be >= 1");
  }
  if (config.chains_per_triple < 1) {
    throw DataError("generate_samples: chains_per_triple must be >= 1");
  }

  std::vector<Triple> samples;
  samples.reserve(batch.size() *
                  static_cast<std::size_t>(config.chains_per_triple));

  SamplerStats local;
  for (const Triple& origin : batch) {
    for (int c = 0; c < config.chains_per_triple; ++c) {
      // Each chain owns a generator, so chains could run concurrently
      // without changing the seeded serial result.
      Rng chain_rng(rng());
      ChainState chain{origin, origin};
      for (int s = 0; s < config.steps_per_chain; ++s) {
        Triple before = chain.current;
        chain = step(space, chain, chain_rng, config.positions);
        ++local.proposals;
        if (chain.current != before) ++local.accepted;
      }
      samples.push_back(chain.current);
    }
  }
  if (stats) *stats = local;
  return samples;
}

}  // namespace kge
