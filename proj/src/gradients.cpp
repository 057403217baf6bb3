#include "kge/gradients.hpp"

#include <cmath>

#include "kge/errors.hpp"
#include "kge/scoring.hpp"

namespace kge {

Vector& GradientSet::entity_grad(Index i, Index dim) {
  auto it = entity.find(i);
  if (it == entity.end()) {
    it = entity.emplace(i, Vector::Zero(dim)).first;
  }
  return it->second;
}

RowMatrix& GradientSet::relation_grad(Index p, Index rows, Index cols) {
  auto it = relation.find(p);
  if (it == relation.end()) {
    it = relation.emplace(p, RowMatrix::Zero(rows, cols)).first;
  }
  return it->second;
}

void GradientSet::add_scaled(const GradientSet& other, Scalar w) {
  for (const auto& [i, g] : other.entity) {
    entity_grad(i, g.size()) += w * g;
  }
  for (const auto& [p, g] : other.relation) {
    relation_grad(p, g.rows(), g.cols()) += w * g;
  }
}

void GradientSet::scale(Scalar w) {
  for (auto& [i, g] : entity) g *= w;
  for (auto& [p, g] : relation) g *= w;
}

void accumulate_triple(const EmbeddingSpace& space, const Triple& t, Scalar w,
                       GradientSet& out) {
  const Index dim = space.dim();
  Vector e_s = space.entity(t.s);
  Vector e_o = space.entity(t.o);
  if (space.kind() == RelationKind::Full) {
    const RowMatrix& rel = space.relation(t.p);
    out.relation_grad(t.p, dim, dim) += w * (e_s * e_o.transpose());
    out.entity_grad(t.s, dim) += w * (rel * e_o);
    out.entity_grad(t.o, dim) += w * (rel.transpose() * e_s);
  } else {
    Vector diag = space.relation(t.p).row(0).transpose();
    out.relation_grad(t.p, 1, dim).row(0) +=
        w * (e_s.cwiseProduct(e_o)).transpose();
    out.entity_grad(t.s, dim) += w * diag.cwiseProduct(e_o);
    out.entity_grad(t.o, dim) += w * diag.cwiseProduct(e_s);
  }
}

GradientSet wake_sleep_gradients(const EmbeddingSpace& space,
                                 std::span<const Triple> batch,
                                 std::span<const Triple> samples) {
  if (batch.empty()) throw DataError("wake_sleep_gradients: empty batch");
  // The phases are summed separately so that identical batch and sample
  // lists cancel exactly, not merely to rounding.
  GradientSet data;
  for (const Triple& t : batch) accumulate_triple(space, t, 1.0, data);
  GradientSet model;
  for (const Triple& t : samples) accumulate_triple(space, t, 1.0, model);

  data.scale(1.0 / static_cast<Scalar>(batch.size()));
  if (!samples.empty()) {
    data.add_scaled(model, -1.0 / static_cast<Scalar>(samples.size()));
  }
  return data;
}

GradientSet eta_gated_update(const EmbeddingSpace& space, const Triple& t,
                             int eta, int teacher_signal) {
  GradientSet out;
  const Scalar w = static_cast<Scalar>(eta * teacher_signal);
  if (w != 0) accumulate_triple(space, t, w, out);
  return out;
}

Scalar rese_loss(const EmbeddingSpace& space,
                 std::span<const ScoredTarget> items) {
  if (items.empty()) throw DataError("rese_loss: no items");
  Scalar loss = 0;
  for (const ScoredTarget& item : items) {
    Scalar r = item.target - score(space, item.triple);
    loss += r * r;
  }
  return loss / static_cast<Scalar>(items.size());
}

Scalar rese_gradients(const EmbeddingSpace& space,
                      std::span<const ScoredTarget> items, GradientSet& out) {
  if (items.empty()) throw DataError("rese_gradients: no items");
  const Scalar inv = 1.0 / static_cast<Scalar>(items.size());
  Scalar loss = 0;
  for (const ScoredTarget& item : items) {
    Scalar r = item.target - score(space, item.triple);
    loss += r * r;
    // d/df of (target - f)^2 / M
    accumulate_triple(space, item.triple, -2.0 * r * inv, out);
  }
  return loss * inv;
}

namespace {

// log softmax denominator over positives + negatives, stably.
Scalar stable_logsumexp(const std::vector<Scalar>& scores) {
  Scalar m = scores.front();
  for (Scalar s : scores) m = std::max(m, s);
  Scalar sum = 0;
  for (Scalar s : scores) sum += std::exp(s - m);
  return m + std::log(sum);
}

std::vector<Scalar> support_scores(const EmbeddingSpace& space,
                                   std::span<const Triple> positives,
                                   std::span<const Triple> negatives) {
  std::vector<Scalar> scores;
  scores.reserve(positives.size() + negatives.size());
  for (const Triple& t : positives) scores.push_back(score(space, t));
  for (const Triple& t : negatives) scores.push_back(score(space, t));
  return scores;
}

}  // namespace

Scalar rekl_loss(const EmbeddingSpace& space, std::span<const Triple> positives,
                 std::span<const Triple> negatives) {
  if (positives.empty()) throw DataError("rekl_loss: no positives");
  auto scores = support_scores(space, positives, negatives);
  Scalar lse = stable_logsumexp(scores);
  Scalar loss = 0;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    loss -= scores[i] - lse;
  }
  return loss / static_cast<Scalar>(positives.size());
}

Scalar rekl_gradients(const EmbeddingSpace& space,
                      std::span<const Triple> positives,
                      std::span<const Triple> negatives, GradientSet& out) {
  if (positives.empty()) throw DataError("rekl_gradients: no positives");
  auto scores = support_scores(space, positives, negatives);
  Scalar lse = stable_logsumexp(scores);
  const Scalar inv_pos = 1.0 / static_cast<Scalar>(positives.size());

  Scalar loss = 0;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    loss -= scores[i] - lse;
  }

  // d loss / d f_j = softmax_j - [j is positive] / |P|
  for (std::size_t j = 0; j < scores.size(); ++j) {
    const Triple& t = j < positives.size() ? positives[j]
                                           : negatives[j - positives.size()];
    Scalar softmax_j = std::exp(scores[j] - lse);
    Scalar dj = softmax_j - (j < positives.size() ? inv_pos : 0.0);
    accumulate_triple(space, t, dj, out);
  }
  return loss * inv_pos;
}

namespace {

// d ||v|| / d v, with the zero-vector subgradient taken as 0.
RowVector norm_direction(const RowVector& v) {
  Scalar n = v.norm();
  if (n == 0) return RowVector::Zero(v.size());
  return v / n;
}

void accumulate_transe_distance(const TransEParams& params, const Triple& t,
                                Scalar w, GradientSet& out) {
  RowVector v = params.entities.row(t.s) + params.relations[t.p].row(0) -
                params.entities.row(t.o);
  RowVector dir = w * norm_direction(v);
  const Index dim = params.dim();
  out.entity_grad(t.s, dim) += dir.transpose();
  out.entity_grad(t.o, dim) -= dir.transpose();
  out.relation_grad(t.p, 1, dim).row(0) += dir;
}

}  // namespace

Scalar transe_loss(const TransEParams& params,
                   std::span<const TransEPair> pairs, Scalar margin) {
  if (pairs.empty()) throw DataError("transe_loss: no pairs");
  Scalar loss = 0;
  for (const TransEPair& pair : pairs) {
    loss += softplus(margin + score_transe(params, pair.positive) -
                     score_transe(params, pair.negative));
  }
  return loss / static_cast<Scalar>(pairs.size());
}

Scalar transe_gradients(const TransEParams& params,
                        std::span<const TransEPair> pairs, Scalar margin,
                        GradientSet& out) {
  if (pairs.empty()) throw DataError("transe_gradients: no pairs");
  const Scalar inv = 1.0 / static_cast<Scalar>(pairs.size());
  Scalar loss = 0;
  for (const TransEPair& pair : pairs) {
    Scalar arg = margin + score_transe(params, pair.positive) -
                 score_transe(params, pair.negative);
    loss += softplus(arg);
    Scalar w = sigmoid(arg) * inv;  // d softplus
    accumulate_transe_distance(params, pair.positive, w, out);
    accumulate_transe_distance(params, pair.negative, -w, out);
  }
  return loss * inv;
}

namespace {

template <typename Block>
void regularize_block(Eigen::MatrixBase<Block>& grad,
                      const RowMatrix& value_block, Scalar l1, Scalar l2) {
  if (l2 > 0) grad += 2.0 * l2 * value_block;
  if (l1 > 0) grad += l1 * value_block.unaryExpr([](Scalar v) -> Scalar {
    return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
  });
}

}  // namespace

void apply_regularization(GradientSet& grads, const EmbeddingSpace& space,
                          Scalar l1_weight, Scalar l2_weight) {
  if (l1_weight <= 0 && l2_weight <= 0) return;
  for (auto& [i, g] : grads.entity) {
    RowMatrix row = space.entity_table().row(i);
    Eigen::Map<RowMatrix> gm(g.data(), 1, g.size());
    regularize_block(gm, row, l1_weight, l2_weight);
  }
  for (auto& [p, g] : grads.relation) {
    regularize_block(g, space.relation(p), l1_weight, l2_weight);
  }
}

void apply_regularization(GradientSet& grads, const TransEParams& params,
                          Scalar l1_weight, Scalar l2_weight) {
  if (l1_weight <= 0 && l2_weight <= 0) return;
  for (auto& [i, g] : grads.entity) {
    RowMatrix row = params.entities.row(i);
    Eigen::Map<RowMatrix> gm(g.data(), 1, g.size());
    regularize_block(gm, row, l1_weight, l2_weight);
  }
  for (auto& [p, g] : grads.relation) {
    regularize_block(g, params.relations[p], l1_weight, l2_weight);
  }
}

}  // namespace kge
