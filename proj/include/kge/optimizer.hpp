#pragma once

#include <cstdint>
#include <vector>

#include "kge/embedding.hpp"
#include "kge/gradients.hpp"
#include "kge/types.hpp"

namespace kge {

enum class OptimizerKind : std::uint8_t { Adagrad, Adam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adagrad;
  Scalar adagrad_eps = 1e-10;  // inside the square root
  Scalar beta1 = 0.9;
  Scalar beta2 = 0.999;
  Scalar adam_eps = 1e-8;
};

/// Per-parameter accumulators: Adagrad keeps the running sum of squared
/// gradients; Adam keeps first/second moment estimates plus the step
/// counter used for bias correction. Only parameters touched by a
/// gradient set are updated.
class OptimizerState {
 public:
  OptimizerState(const OptimizerConfig& config, const EmbeddingSpace& space);
  OptimizerState(const OptimizerConfig& config, const TransEParams& params);

  /// Descends the loss gradients: param -= lr * adjusted gradient.
  void step(EmbeddingSpace& space, const GradientSet& loss_grads, Scalar lr);
  void step(TransEParams& params, const GradientSet& loss_grads, Scalar lr);

  std::int64_t step_count() const { return step_count_; }

 private:
  void init_shapes(Index entity_rows, Index dim, Index num_relations,
                   Index rel_rows);
  void apply(RowMatrix& entity_table, std::vector<RowMatrix>& relation_blocks,
             const GradientSet& grads, Scalar lr);
  void update_block(Eigen::Ref<RowMatrix> param, Eigen::Ref<RowMatrix> acc,
                    Eigen::Ref<RowMatrix> second, const RowMatrix& grad,
                    Scalar lr, Scalar bias1, Scalar bias2);

  OptimizerConfig config_;
  std::int64_t step_count_ = 0;
  RowMatrix entity_acc_;     // Adagrad sum of g^2, or Adam first moment
  RowMatrix entity_second_;  // Adam second moment
  std::vector<RowMatrix> relation_acc_;
  std::vector<RowMatrix> relation_second_;
};

}  // namespace kge
