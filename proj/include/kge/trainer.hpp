#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kge/embedding.hpp"
#include "kge/gradients.hpp"
#include "kge/optimizer.hpp"
#include "kge/rng.hpp"
#include "kge/sampler.hpp"
#include "kge/triple_store.hpp"

namespace kge {

enum class ModelKind : std::uint8_t {
  EnM = 0,    // energy model, full relation matrices
  EnMd = 1,   // energy model, diagonal relation matrices
  ReSE = 2,   // squared-error tensor factorization
  ReKL = 3,   // softmax/KL-trained factorization
  TransE = 4  // translational baseline
};

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);
RelationKind relation_kind(ModelKind kind);

struct TrainConfig {
  ModelKind model = ModelKind::EnMd;
  Index dim = 20;
  Scalar learning_rate = 0.02;
  int epochs = 50;
  std::size_t batch_size = 100;
  int neg_subject = 0;  // negatives per positive, subject position
  int neg_object = 0;   // negatives per positive, object position
  SamplerConfig sampler{};
  Scalar l1_weight = 0;
  Scalar l2_weight = 0;
  OptimizerKind optimizer = OptimizerKind::Adagrad;
  Scalar init_mu = 0;
  Scalar init_sigma = 0.1;
  Scalar margin = 1;  // TransE soft margin
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochStats {
  Scalar mean_score = 0;       // mean f over the epoch's data triples
  Scalar mean_prob = 0;        // mean sigma(f) over the same
  Scalar acceptance_rate = 0;  // sampler acceptance (energy models)
  Scalar loss = 0;             // baseline training loss (0 for energy)
};

/// k_subj subject-corrupted plus k_obj object-corrupted copies of t,
/// replacements uniform over entities excluding the original.
std::vector<Triple> negative_samples(Rng& rng, const Triple& t, int k_subj,
                                     int k_obj, Index num_entities);

/// One wake-sleep pass over the training triples: per batch, draw the
/// model sample set S by Metropolis-Hastings chains, ascend the
/// two-phase gradient (maximization implemented as descent on its
/// negation), with L1/L2 applied as loss gradients.
EpochStats train_energy_epoch(EmbeddingSpace& space, const TripleStore& train,
                              const TrainConfig& config,
                              OptimizerState& optimizer, Rng& batch_rng,
                              Rng& sampler_rng);

/// One squared-error pass: positives target 1, generated negatives 0.
EpochStats train_rese_epoch(EmbeddingSpace& space, const TripleStore& train,
                            const TrainConfig& config,
                            OptimizerState& optimizer, Rng& batch_rng,
                            Rng& negative_rng);

/// One softmax cross-entropy pass over batch positives + negatives.
EpochStats train_rekl_epoch(EmbeddingSpace& space, const TripleStore& train,
                            const TrainConfig& config,
                            OptimizerState& optimizer, Rng& batch_rng,
                            Rng& negative_rng);

/// One soft-margin pass over positive/negative pairs.
EpochStats train_transe_epoch(TransEParams& params, const TripleStore& train,
                              const TrainConfig& config,
                              OptimizerState& optimizer, Rng& batch_rng,
                              Rng& negative_rng);

}  // namespace kge
