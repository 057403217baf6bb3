#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kge/rng.hpp"
#include "kge/scoring.hpp"
#include "kge/types.hpp"

namespace kge {

enum class RelationKind : std::uint8_t { Full, Diagonal };

/// Entity vectors e in R^N plus relation parameters: one N x N matrix per
/// relation (Full) or one length-N diagonal per relation (Diagonal).
/// Diagonals are stored as 1 x N blocks and never materialized as
/// matrices.
class EmbeddingSpace {
 public:
  EmbeddingSpace(Index num_entities, Index num_relations, Index dim,
                 RelationKind kind);

  /// Every parameter i.i.d. N(mu, sigma^2).
  static EmbeddingSpace random(Index num_entities, Index num_relations,
                               Index dim, RelationKind kind, Scalar mu,
                               Scalar sigma, Rng& rng);

  Index num_entities() const { return entities_.rows(); }
  Index num_relations() const { return static_cast<Index>(relations_.size()); }
  Index dim() const { return entities_.cols(); }
  RelationKind kind() const { return kind_; }

  auto entity(Index i) const { return entities_.row(i).transpose(); }
  auto entity(Index i) { return entities_.row(i).transpose(); }
  const RowMatrix& relation(Index p) const { return relations_[p]; }
  RowMatrix& relation(Index p) { return relations_[p]; }

  RowMatrix& entity_table() { return entities_; }
  const RowMatrix& entity_table() const { return entities_; }
  std::vector<RowMatrix>& relation_blocks() { return relations_; }
  const std::vector<RowMatrix>& relation_blocks() const { return relations_; }

  bool all_finite() const;

 private:
  RelationKind kind_;
  RowMatrix entities_;                // |E| x N
  std::vector<RowMatrix> relations_;  // N x N (Full) or 1 x N (Diagonal)
};

/// Entity and relation vectors of the translational baseline.
struct TransEParams {
  TransEParams(Index num_entities, Index num_relations, Index dim);
  static TransEParams random(Index num_entities, Index num_relations,
                             Index dim, Scalar mu, Scalar sigma, Rng& rng);

  Index num_entities() const { return entities.rows(); }
  Index num_relations() const { return static_cast<Index>(relations.size()); }
  Index dim() const { return entities.cols(); }
  bool all_finite() const;

  RowMatrix entities;                // |E| x N
  std::vector<RowMatrix> relations;  // 1 x N each
};

/// f(s,p,o) = e_s^T R_p e_o.
Scalar score(const EmbeddingSpace& space, const Triple& t);

/// sigma(f(s,p,o)); numerically stable for large |score|.
Scalar prob(const EmbeddingSpace& space, const Triple& t);

/// ||e_s + r_p - e_o||.
Scalar score_transe(const TransEParams& params, const Triple& t);

/// Entry o equals score(space, {s, p, o}).
Vector score_all_objects(const EmbeddingSpace& space, Index s, Index p);
/// Entry s equals score(space, {s, p, o}).
Vector score_all_subjects(const EmbeddingSpace& space, Index p, Index o);

Vector score_all_objects(const TransEParams& params, Index s, Index p);
Vector score_all_subjects(const TransEParams& params, Index p, Index o);

/// Dense binary assignment over every (s, p, o) slot of a small
/// universe. Oracle use only: construction rejects universes with more
/// than 20 slots, keeping 2^slots graph enumeration tractable.
class GraphIndicator {
 public:
  GraphIndicator(Index num_entities, Index num_relations);

  static GraphIndicator from_triples(Index num_entities, Index num_relations,
                                     std::span<const Triple> triples);

  Index num_entities() const { return num_entities_; }
  Index num_relations() const { return num_relations_; }
  Index slots() const { return static_cast<Index>(bits_.size()); }

  bool get(Index s, Index p, Index o) const { return bits_[slot(s, p, o)]; }
  void set(Index s, Index p, Index o, bool value) {
    bits_[slot(s, p, o)] = value ? 1 : 0;
  }

  /// Slot order: p major, then s, then o.
  Index slot(Index s, Index p, Index o) const {
    return (p * num_entities_ + s) * num_entities_ + o;
  }
  Triple slot_triple(Index slot) const;

  void assign_bits(std::uint64_t mask);

 private:
  Index num_entities_;
  Index num_relations_;
  std::vector<std::uint8_t> bits_;
};

/// E(X) = -sum over set slots of f(s,p,o).
Scalar graph_energy(const EmbeddingSpace& space, const GraphIndicator& x);

/// log Z = sum over all (s,p,o) slots (self-loops included) of
/// softplus(f), the log of the product form of the partition function.
Scalar log_partition(const EmbeddingSpace& space);

/// log p(X) = -E(X) - log Z.
Scalar log_prob_graph(const EmbeddingSpace& space, const GraphIndicator& x);

/// The same value via the per-slot Bernoulli product:
/// sum_{X=1} log sigma(f) + sum_{X=0} log(1 - sigma(f)).
Scalar log_prob_graph_bernoulli(const EmbeddingSpace& space,
                                const GraphIndicator& x);

}  // namespace kge
