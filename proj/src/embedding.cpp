#include "kge/embedding.hpp"

#include <random>

#include "kge/errors.hpp"

namespace kge {
namespace {

void fill_normal(RowMatrix& m, Scalar mu, Scalar sigma, Rng& rng) {
  std::normal_distribution<Scalar> dist(mu, sigma);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = sigma > 0 ? dist(rng) : mu;
  }
}

}  // namespace

EmbeddingSpace::EmbeddingSpace(Index num_entities, Index num_relations,
                               Index dim, RelationKind kind)
    : kind_(kind) {
  if (num_entities < 1 || num_relations < 1) {
    throw DataError("embedding space needs at least one entity and relation");
  }
  if (dim < 1) throw DataError("embedding dimension must be >= 1");
  entities_ = RowMatrix::Zero(num_entities, dim);
  Index rel_rows = kind == RelationKind::Full ? dim : 1;
  relations_.assign(num_relations, RowMatrix::Zero(rel_rows, dim));
}

EmbeddingSpace EmbeddingSpace::random(Index num_entities, Index num_relations,
                                      Index dim, RelationKind kind, Scalar mu,
                                      Scalar sigma, Rng& rng) {
  if (sigma < 0) throw DataError("init sigma must be >= 0");
  EmbeddingSpace space(num_entities, num_relations, dim, kind);
  fill_normal(space.entities_, mu, sigma, rng);
  for (RowMatrix& r : space.relations_) fill_normal(r, mu, sigma, rng);
  return space;
}

bool EmbeddingSpace::all_finite() const {
  if (!entities_.allFinite()) return false;
  for (const RowMatrix& r : relations_) {
    if (!r.allFinite()) return false;
  }
  return true;
}

TransEParams::TransEParams(Index num_entities, Index num_relations,
                           Index dim) {
  if (num_entities < 1 || num_relations < 1) {
    throw DataError("TransE params need at least one entity and relation");
  }
  if (dim < 1) throw DataError("embedding dimension must be >= 1");
  entities = RowMatrix::Zero(num_entities, dim);
  relations.assign(num_relations, RowMatrix::Zero(1, dim));
}

TransEParams TransEParams::random(Index num_entities, Index num_relations,
                                  Index dim, Scalar mu, Scalar sigma,
                                  Rng& rng) {
  if (sigma < 0) throw DataError("init sigma must be >= 0");
  TransEParams params(num_entities, num_relations, dim);
  fill_normal(params.entities, mu, sigma, rng);
  for (RowMatrix& r : params.relations) fill_normal(r, mu, sigma, rng);
  return params;
}

bool TransEParams::all_finite() const {
  if (!entities.allFinite()) return false;
  for (const RowMatrix& r : relations) {
    if (!r.allFinite()) return false;
  }
  return true;
}

Scalar score(const EmbeddingSpace& space, const Triple& t) {
  if (space.kind() == RelationKind::Full) {
    return bilinear_score(space.entity(t.s), space.relation(t.p),
                          space.entity(t.o));
  }
  return diagonal_score(space.entity(t.s),
                        space.relation(t.p).row(0).transpose(),
                        space.entity(t.o));
}

Scalar prob(const EmbeddingSpace& space, const Triple& t) {
  return sigmoid(score(space, t));
}

Scalar score_transe(const TransEParams& params, const Triple& t) {
  return translation_distance(params.entities.row(t.s),
                              params.relations[t.p].row(0),
                              params.entities.row(t.o));
}

Vector score_all_objects(const EmbeddingSpace& space, Index s, Index p) {
  // f(s,p,o) = (R_p^T e_s) . e_o for every o at once.
  Vector latent;
  if (space.kind() == RelationKind::Full) {
    latent = space.relation(p).transpose() * space.entity(s);
  } else {
    latent = space.relation(p).row(0).transpose().cwiseProduct(
        space.entity(s));
  }
  return space.entity_table() * latent;
}

Vector score_all_subjects(const EmbeddingSpace& space, Index p, Index o) {
  Vector latent;
  if (space.kind() == RelationKind::Full) {
    latent = space.relation(p) * space.entity(o);
  } else {
    latent = space.relation(p).row(0).transpose().cwiseProduct(
        space.entity(o));
  }
  return space.entity_table() * latent;
}

Vector score_all_objects(const TransEParams& params, Index s, Index p) {
  RowVector translated = params.entities.row(s) + params.relations[p].row(0);
  return (params.entities.rowwise() - translated).rowwise().norm();
}

Vector score_all_subjects(const TransEParams& params, Index p, Index o) {
  RowVector target = params.entities.row(o) - params.relations[p].row(0);
  return (params.entities.rowwise() - target).rowwise().norm();
}

GraphIndicator::GraphIndicator(Index num_entities, Index num_relations)
    : num_entities_(num_entities), num_relations_(num_relations) {
  if (num_entities < 1 || num_relations < 1) {
    throw DataError("graph indicator needs a non-empty universe");
  }
  Index slots = num_entities * num_entities * num_relations;
  if (slots > 20) {
    throw DataError("graph indicator universe too large (" +
                    std::to_string(slots) + " slots, cap 20)");
  }
  bits_.assign(static_cast<std::size_t>(slots), 0);
}

GraphIndicator GraphIndicator::from_triples(Index num_entities,
                                            Index num_relations,
                                            std::span<const Triple> triples) {
  GraphIndicator x(num_entities, num_relations);
  for (const Triple& t : triples) x.set(t.s, t.p, t.o, true);
  return x;
}

Triple GraphIndicator::slot_triple(Index slot) const {
  Index o = slot % num_entities_;
  Index rest = slot / num_entities_;
  Index s = rest % num_entities_;
  Index p = rest / num_entities_;
  return Triple{s, p, o};
}

void GraphIndicator::assign_bits(std::uint64_t mask) {
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    bits_[i] = (mask >> i) & 1u;
  }
}

Scalar graph_energy(const EmbeddingSpace& space, const GraphIndicator& x) {
  if (x.num_entities() != space.num_entities() ||
      x.num_relations() != space.num_relations()) {
    throw DataError("graph indicator does not match the embedding space");
  }
  Scalar energy = 0;
  for (Index slot = 0; slot < x.slots(); ++slot) {
    Triple t = x.slot_triple(slot);
    if (x.get(t.s, t.p, t.o)) energy -= score(space, t);
  }
  return energy;
}

Scalar log_partition(const EmbeddingSpace& space) {
  Scalar sum = 0;
  for (Index p = 0; p < space.num_relations(); ++p) {
    for (Index s = 0; s < space.num_entities(); ++s) {
      for (Index o = 0; o < space.num_entities(); ++o) {
        sum += softplus(score(space, Triple{s, p, o}));
      }
    }
  }
  return sum;
}

Scalar log_prob_graph(const EmbeddingSpace& space, const GraphIndicator& x) {
  return -graph_energy(space, x) - log_partition(space);
}

Scalar log_prob_graph_bernoulli(const EmbeddingSpace& space,
                                const GraphIndicator& x) {
  Scalar sum = 0;
  for (Index slot = 0; slot < x.slots(); ++slot) {
    Triple t = x.slot_triple(slot);
    Scalar f = score(space, t);
    sum += x.get(t.s, t.p, t.o) ? log_sigmoid(f) : log_sigmoid(-f);
  }
  return sum;
}

}  // namespace kge
