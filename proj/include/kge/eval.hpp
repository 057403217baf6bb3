#pragma once

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "kge/embedding.hpp"
#include "kge/triple_store.hpp"
#include "kge/types.hpp"

namespace kge {

/// Link-prediction scorer: higher means more plausible. Wraps any model
/// so ranking code stays model-agnostic (TransE plugs in with negated
/// distances).
struct Scorer {
  Index num_entities = 0;
  std::function<Scalar(const Triple&)> single;
  std::function<Vector(Index s, Index p)> objects;   // scores over all o
  std::function<Vector(Index p, Index o)> subjects;  // scores over all s
};

Scorer make_scorer(const EmbeddingSpace& space);
Scorer make_scorer(const TransEParams& params);

/// Ranks are fractional because tied candidates share the mean of their
/// tied rank positions.
struct RankResult {
  Triple triple;
  Scalar subject_rank = 0;
  Scalar object_rank = 0;
};

/// Filtered rank: competitors are entities whose corrupted triple is not
/// a known-true one (the target itself always competes).
RankResult filtered_rank(const Scorer& scorer, const Triple& t,
                         const TripleSet& filter);

std::vector<RankResult> filtered_ranks(const Scorer& scorer,
                                       std::span<const Triple> test,
                                       const TripleSet& filter,
                                       int threads = 1);

/// Mean of 1/rank over subject and object ranks of all test triples.
Scalar mrr(const Scorer& scorer, std::span<const Triple> test,
           const TripleSet& filter);

/// Fraction of ranks <= k.
Scalar hits_at_k(const Scorer& scorer, std::span<const Triple> test,
                 const TripleSet& filter, Scalar k);

Scalar mrr_from_ranks(std::span<const RankResult> ranks);
Scalar hits_from_ranks(std::span<const RankResult> ranks, Scalar k);

struct Histogram {
  Scalar lo = 0;
  Scalar hi = 1;
  std::vector<std::int64_t> counts;

  Index occupied_bins() const;
};

Histogram make_histogram(std::span<const Scalar> values, Scalar lo, Scalar hi,
                         int bins);

struct GroupSummary {
  Scalar mean = 0;
  Scalar median = 0;
  Histogram histogram;
};

/// Score and probability distributions for positive vs negative triples.
struct ScoreDistributions {
  GroupSummary score_positive;
  GroupSummary score_negative;
  GroupSummary prob_positive;
  GroupSummary prob_negative;
};

ScoreDistributions score_distributions(const Scorer& scorer,
                                       std::span<const Triple> positives,
                                       std::span<const Triple> negatives,
                                       int score_bins = 40,
                                       int prob_bins = 20);

/// Line-oriented `metric<TAB>value` report rows.
std::vector<std::pair<std::string, std::string>> distribution_report(
    const ScoreDistributions& d);

}  // namespace kge
