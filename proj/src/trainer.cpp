#include "kge/trainer.hpp"

#include <algorithm>

#include "kge/dataset.hpp"
#include "kge/errors.hpp"
#include "kge/scoring.hpp"

namespace kge {

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::EnM:
      return "enm";
    case ModelKind::EnMd:
      return "enmd";
    case ModelKind::ReSE:
      return "rese";
    case ModelKind::ReKL:
      return "rekl";
    case ModelKind::TransE:
      return "transe";
  }
  return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
  for (auto kind : {ModelKind::EnM, ModelKind::EnMd, ModelKind::ReSE,
                    ModelKind::ReKL, ModelKind::TransE}) {
    if (name == model_kind_name(kind)) return kind;
  }
  throw DataError("unknown model kind: " + name);
}

RelationKind relation_kind(ModelKind kind) {
  return kind == ModelKind::EnMd ? RelationKind::Diagonal : RelationKind::Full;
}

void TrainConfig::validate() const {
  if (dim < 1) throw DataError("dim must be >= 1");
  if (learning_rate < 0) throw DataError("lr must be >= 0");
  if (epochs < 0) throw DataError("epochs must be >= 0");
  if (batch_size < 1) throw DataError("batch size must be >= 1");
  if (neg_subject < 0 || neg_object < 0) {
    throw DataError("negative sample counts must be >= 0");
  }
  if (l1_weight < 0 || l2_weight < 0) {
    throw DataError("regularization weights must be >= 0");
  }
  if (init_sigma < 0) throw DataError("init sigma must be >= 0");
  if (sampler.steps_per_chain < 1) {
    throw DataError("free samples (steps per chain) must be >= 1");
  }
  if (sampler.chains_per_triple < 1) {
    throw DataError("chains per triple must be >= 1");
  }
  if (!sampler.positions.any()) {
    throw DataError("at least one proposal position must be enabled");
  }
}

std::vector<Triple> negative_samples(Rng& rng, const Triple& t, int k_subj,
                                     int k_obj, Index num_entities) {
  if (num_entities < 2) {
    throw DataError("negative_samples: need >= 2 entities");
  }
  std::vector<Triple> out;
  out.reserve(static_cast<std::size_t>(k_subj + k_obj));
  for (int i = 0; i < k_subj; ++i) {
    Triple neg = t;
    neg.s = uniform_index_excluding(rng, num_entities, t.s);
    out.push_back(neg);
  }
  for (int i = 0; i < k_obj; ++i) {
    Triple neg = t;
    neg.o = uniform_index_excluding(rng, num_entities, t.o);
    out.push_back(neg);
  }
  return out;
}

namespace {

void check_train_inputs(const TripleStore& train) {
  if (train.empty()) throw DataError("training set is empty");
}

struct ScoreTally {
  Scalar score_sum = 0;
  Scalar prob_sum = 0;
  std::int64_t count = 0;

  void observe(Scalar f) {
    score_sum += f;
    prob_sum += sigmoid(f);
    ++count;
  }
};

}  // namespace

EpochStats train_energy_epoch(EmbeddingSpace& space, const TripleStore& train,
                              const TrainConfig& config,
                              OptimizerState& optimizer, Rng& batch_rng,
                              Rng& sampler_rng) {
  if (config.model != ModelKind::EnM && config.model != ModelKind::EnMd) {
    throw DataError("train_energy_epoch: config.model is not an energy model");
  }
  check_train_inputs(train);

  ScoreTally tally;
  SamplerStats sampler_total;
  auto batches = make_batches(train.triples(), config.batch_size, batch_rng);
  for (const auto& batch : batches) {
    for (const Triple& t : batch) tally.observe(score(space, t));

    SamplerStats stats;
    std::vector<Triple> samples =
        generate_samples(space, batch, config.sampler, sampler_rng, &stats);
    sampler_total.proposals += stats.proposals;
    sampler_total.accepted += stats.accepted;

    GradientSet ascent = wake_sleep_gradients(space, batch, samples);
    ascent.scale(-1.0);  // likelihood ascent as loss descent
    apply_regularization(ascent, space, config.l1_weight, config.l2_weight);
    optimizer.step(space, ascent, config.learning_rate);
  }

  EpochStats out;
  out.mean_score = tally.count ? tally.score_sum / tally.count : 0;
  out.mean_prob = tally.count ? tally.prob_sum / tally.count : 0;
  out.acceptance_rate = sampler_total.acceptance_rate();
  return out;
}

EpochStats train_rese_epoch(EmbeddingSpace& space, const TripleStore& train,
                            const TrainConfig& config,
                            OptimizerState& optimizer, Rng& batch_rng,
                            Rng& negative_rng) {
  if (config.model != ModelKind::ReSE) {
    throw DataError("train_rese_epoch: config.model is not rese");
  }
  check_train_inputs(train);

  ScoreTally tally;
  Scalar loss_sum = 0;
  std::size_t batch_count = 0;
  auto batches = make_batches(train.triples(), config.batch_size, batch_rng);
  std::vector<ScoredTarget> items;
  for (const auto& batch : batches) {
    items.clear();
    for (const Triple& t : batch) {
      tally.observe(score(space, t));
      items.push_back({t, 1.0});
      for (const Triple& neg :
           negative_samples(negative_rng, t, config.neg_subject,
                            config.neg_object, space.num_entities())) {
        items.push_back({neg, 0.0});
      }
    }
    GradientSet grads;
    loss_sum += rese_gradients(space, items, grads);
    ++batch_count;
    apply_regularization(grads, space, config.l1_weight, config.l2_weight);
    optimizer.step(space, grads, config.learning_rate);
  }

  EpochStats out;
  out.mean_score = tally.count ? tally.score_sum / tally.count : 0;
  out.mean_prob = tally.count ? tally.prob_sum / tally.count : 0;
  out.loss = batch_count ? loss_sum / batch_count : 0;
  return out;
}

EpochStats train_rekl_epoch(EmbeddingSpace& space, const TripleStore& train,
                            const TrainConfig& config,
                            OptimizerState& optimizer, Rng& batch_rng,
                            Rng& negative_rng) {
  if (config.model != ModelKind::ReKL) {
    throw DataError("train_rekl_epoch: config.model is not rekl");
  }
  check_train_inputs(train);

  ScoreTally tally;
  Scalar loss_sum = 0;
  std::size_t batch_count = 0;
  auto batches = make_batches(train.triples(), config.batch_size, batch_rng);
  std::vector<Triple> negatives;
  for (const auto& batch : batches) {
    negatives.clear();
    for (const Triple& t : batch) {
      tally.observe(score(space, t));
      for (const Triple& neg :
           negative_samples(negative_rng, t, config.neg_subject,
                            config.neg_object, space.num_entities())) {
        negatives.push_back(neg);
      }
    }
    GradientSet grads;
    loss_sum += rekl_gradients(space, batch, negatives, grads);
    ++batch_count;
    apply_regularization(grads, space, config.l1_weight, config.l2_weight);
    optimizer.step(space, grads, config.learning_rate);
  }

  EpochStats out;
  out.mean_score = tally.count ? tally.score_sum / tally.count : 0;
  out.mean_prob = tally.count ? tally.prob_sum / tally.count : 0;
  out.loss = batch_count ? loss_sum / batch_count : 0;
  return out;
}

EpochStats train_transe_epoch(TransEParams& params, const TripleStore& train,
                              const TrainConfig& config,
                              OptimizerState& optimizer, Rng& batch_rng,
                              Rng& negative_rng) {
  if (config.model != ModelKind::TransE) {
    throw DataError("train_transe_epoch: config.model is not transe");
  }
  check_train_inputs(train);
  if (config.neg_subject + config.neg_object < 1) {
    throw DataError("transe training needs at least one negative per triple");
  }

  Scalar distance_sum = 0;
  std::int64_t distance_count = 0;
  Scalar loss_sum = 0;
  std::size_t batch_count = 0;
  auto batches = make_batches(train.triples(), config.batch_size, batch_rng);
  std::vector<TransEPair> pairs;
  for (const auto& batch : batches) {
    pairs.clear();
    for (const Triple& t : batch) {
      distance_sum += score_transe(params, t);
      ++distance_count;
      for (const Triple& neg :
           negative_samples(negative_rng, t, config.neg_subject,
                            config.neg_object, params.num_entities())) {
        pairs.push_back({t, neg});
      }
    }
    GradientSet grads;
    loss_sum += transe_gradients(params, pairs, config.margin, grads);
    ++batch_count;
    apply_regularization(grads, params, config.l1_weight, config.l2_weight);
    optimizer.step(params, grads, config.learning_rate);
  }

  EpochStats out;
  // For TransE "score" is a distance; smaller is better.
  out.mean_score = distance_count ? distance_sum / distance_count : 0;
  out.loss = batch_count ? loss_sum / batch_count : 0;
  return out;
}

}  // namespace kge
