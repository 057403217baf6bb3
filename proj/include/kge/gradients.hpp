#pragma once

#include <map>
#include <span>
#include <vector>

#include "kge/embedding.hpp"
#include "kge/types.hpp"

namespace kge {

/// Sparse gradient container: only entities/relations touched by a batch
/// carry entries. Relation blocks match the owning table's block shape
/// (N x N full, 1 x N diagonal or translational).
struct GradientSet {
  std::map<Index, Vector> entity;
  std::map<Index, RowMatrix> relation;

  Vector& entity_grad(Index i, Index dim);
  RowMatrix& relation_grad(Index p, Index rows, Index cols);

  void add_scaled(const GradientSet& other, Scalar w);
  void scale(Scalar w);
  bool empty() const { return entity.empty() && relation.empty(); }
};

/// Adds w times the per-triple log-likelihood direction:
///   d f / d R_p = e_s e_o^T   (e_s . e_o elementwise for Diagonal)
///   d f / d e_s = R_p e_o
///   d f / d e_o = R_p^T e_s
void accumulate_triple(const EmbeddingSpace& space, const Triple& t, Scalar w,
                       GradientSet& out);

/// Two-phase learning rule: the mean per-triple direction over the data
/// batch minus the mean over the model-generated samples. Ascending this
/// raises the likelihood of data triples and lowers that of sampled
/// ones. An empty sample set contributes zero.
GradientSet wake_sleep_gradients(const EmbeddingSpace& space,
                                 std::span<const Triple> batch,
                                 std::span<const Triple> samples);

/// Single-triple contribution gated by the phase factor eta in
/// {-1, 0, +1} and the output-neuron teaching signal s_p in {0, 1}:
/// eta * s_p times the per-triple direction. Summing +1-gated
/// contributions over a batch and -1-gated ones over the samples,
/// each divided by its set size, reproduces wake_sleep_gradients.
GradientSet eta_gated_update(const EmbeddingSpace& space, const Triple& t,
                             int eta, int teacher_signal);

/// A triple with its regression target (1 data, 0 negative).
struct ScoredTarget {
  Triple triple;
  Scalar target = 1.0;
};

/// Mean squared reconstruction error, mean((target - f)^2).
Scalar rese_loss(const EmbeddingSpace& space,
                 std::span<const ScoredTarget> items);
/// Accumulates d loss / d params; returns the loss.
Scalar rese_gradients(const EmbeddingSpace& space,
                      std::span<const ScoredTarget> items, GradientSet& out);

/// Cross-entropy of the positives against a softmax over the scores of
/// positives and negatives together (the mini-batch approximation of the
/// softmax normalization), divided by the number of positives.
Scalar rekl_loss(const EmbeddingSpace& space, std::span<const Triple> positives,
                 std::span<const Triple> negatives);
Scalar rekl_gradients(const EmbeddingSpace& space,
                      std::span<const Triple> positives,
                      std::span<const Triple> negatives, GradientSet& out);

struct TransEPair {
  Triple positive;
  Triple negative;
};

/// Soft margin loss, mean over pairs of
/// softplus(margin + dist(positive) - dist(negative)).
Scalar transe_loss(const TransEParams& params,
                   std::span<const TransEPair> pairs, Scalar margin);
Scalar transe_gradients(const TransEParams& params,
                        std::span<const TransEPair> pairs, Scalar margin,
                        GradientSet& out);

/// Adds l2 * 2 * theta + l1 * sign(theta) to the loss gradients of every
/// touched parameter; sign(0) = 0.
void apply_regularization(GradientSet& grads, const EmbeddingSpace& space,
                          Scalar l1_weight, Scalar l2_weight);
void apply_regularization(GradientSet& grads, const TransEParams& params,
                          Scalar l1_weight, Scalar l2_weight);

}  // namespace kge
