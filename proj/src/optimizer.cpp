#include "kge/optimizer.hpp"

#include <cmath>

#include "kge/errors.hpp"

namespace kge {

OptimizerState::OptimizerState(const OptimizerConfig& config,
                               const EmbeddingSpace& space)
    : config_(config) {
  init_shapes(space.num_entities(), space.dim(), space.num_relations(),
              space.kind() == RelationKind::Full ? space.dim() : 1);
}

OptimizerState::OptimizerState(const OptimizerConfig& config,
                               const TransEParams& params)
    : config_(config) {
  init_shapes(params.num_entities(), params.dim(), params.num_relations(), 1);
}

void OptimizerState::init_shapes(Index entity_rows, Index dim,
                                 Index num_relations, Index rel_rows) {
  entity_acc_ = RowMatrix::Zero(entity_rows, dim);
  relation_acc_.assign(num_relations, RowMatrix::Zero(rel_rows, dim));
  if (config_.kind == OptimizerKind::Adam) {
    entity_second_ = RowMatrix::Zero(entity_rows, dim);
    relation_second_.assign(num_relations, RowMatrix::Zero(rel_rows, dim));
  }
}

void OptimizerState::step(EmbeddingSpace& space, const GradientSet& loss_grads,
                          Scalar lr) {
  apply(space.entity_table(), space.relation_blocks(), loss_grads, lr);
}

void OptimizerState::step(TransEParams& params, const GradientSet& loss_grads,
                          Scalar lr) {
  apply(params.entities, params.relations, loss_grads, lr);
}

void OptimizerState::apply(RowMatrix& entity_table,
                           std::vector<RowMatrix>& relation_blocks,
                           const GradientSet& grads, Scalar lr) {
  ++step_count_;
  Scalar bias1 = 1, bias2 = 1;
  if (config_.kind == OptimizerKind::Adam) {
    bias1 = 1 - std::pow(config_.beta1, static_cast<Scalar>(step_count_));
    bias2 = 1 - std::pow(config_.beta2, static_cast<Scalar>(step_count_));
  }

  for (const auto& [i, g] : grads.entity) {
    if (i < 0 || i >= entity_table.rows()) {
      throw DataError("optimizer: entity index out of range");
    }
    RowMatrix grad = g.transpose();
    update_block(entity_table.row(i), entity_acc_.row(i),
                 config_.kind == OptimizerKind::Adam
                     ? Eigen::Ref<RowMatrix>(entity_second_.row(i))
                     : Eigen::Ref<RowMatrix>(entity_acc_.row(i)),
                 grad, lr, bias1, bias2);
  }
  for (const auto& [p, g] : grads.relation) {
    if (p < 0 || p >= static_cast<Index>(relation_blocks.size())) {
      throw DataError("optimizer: relation index out of range");
    }
    update_block(relation_blocks[p], relation_acc_[p],
                 config_.kind == OptimizerKind::Adam
                     ? Eigen::Ref<RowMatrix>(relation_second_[p])
                     : Eigen::Ref<RowMatrix>(relation_acc_[p]),
                 g, lr, bias1, bias2);
  }
}

void OptimizerState::update_block(Eigen::Ref<RowMatrix> param,
                                  Eigen::Ref<RowMatrix> acc,
                                  Eigen::Ref<RowMatrix> second,
                                  const RowMatrix& grad, Scalar lr,
                                  Scalar bias1, Scalar bias2) {
  if (config_.kind == OptimizerKind::Adagrad) {
    acc.array() += grad.array().square();
    param.array() -=
        lr * grad.array() / (acc.array() + config_.adagrad_eps).sqrt();
    return;
  }
  acc = config_.beta1 * acc + (1 - config_.beta1) * grad;
  second.array() = config_.beta2 * second.array() +
                   (1 - config_.beta2) * grad.array().square();
  param.array() -= lr * (acc.array() / bias1) /
                   ((second.array() / bias2).sqrt() + config_.adam_eps);
}

}  // namespace kge
