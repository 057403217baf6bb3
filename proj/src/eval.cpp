#include "kge/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "kge/errors.hpp"
#include "kge/scoring.hpp"

namespace kge {

Scorer make_scorer(const EmbeddingSpace& space) {
  Scorer s;
  s.num_entities = space.num_entities();
  s.single = [&space](const Triple& t) { return score(space, t); };
  s.objects = [&space](Index subj, Index p) {
    return score_all_objects(space, subj, p);
  };
  s.subjects = [&space](Index p, Index obj) {
    return score_all_subjects(space, p, obj);
  };
  return s;
}

Scorer make_scorer(const TransEParams& params) {
  Scorer s;
  s.num_entities = params.num_entities();
  s.single = [&params](const Triple& t) { return -score_transe(params, t); };
  s.objects = [&params](Index subj, Index p) {
    return Vector(-score_all_objects(params, subj, p));
  };
  s.subjects = [&params](Index p, Index obj) {
    return Vector(-score_all_subjects(params, p, obj));
  };
  return s;
}

namespace {

// Rank of `target_index` within `scores`, counting only candidates for
// which `competes` returns true. Ties share the mean tied rank.
Scalar rank_among(const Vector& scores, Index target_index,
                  const std::function<bool(Index)>& competes) {
  const Scalar target = scores[target_index];
  Index greater = 0;
  Index tied_other = 0;
  for (Index i = 0; i < scores.size(); ++i) {
    if (i == target_index || !competes(i)) continue;
    if (scores[i] > target) {
      ++greater;
    } else if (scores[i] == target) {
      ++tied_other;
    }
  }
  // Tied block occupies ranks [greater+1, greater+1+tied]; the mean.
  return static_cast<Scalar>(greater) + 1.0 +
         static_cast<Scalar>(tied_other) / 2.0;
}

}  // namespace

RankResult filtered_rank(const Scorer& scorer, const Triple& t,
                         const TripleSet& filter) {
  RankResult out;
  out.triple = t;

  Vector object_scores = scorer.objects(t.s, t.p);
  out.object_rank = rank_among(object_scores, t.o, [&](Index o) {
    return filter.count(Triple{t.s, t.p, o}) == 0;
  });

  Vector subject_scores = scorer.subjects(t.p, t.o);
  out.subject_rank = rank_among(subject_scores, t.s, [&](Index s) {
    return filter.count(Triple{s, t.p, t.o}) == 0;
  });
  return out;
}

std::vector<RankResult> filtered_ranks(const Scorer& scorer,
                                       std::span<const Triple> test,
                                       const TripleSet& filter, int threads) {
  std::vector<RankResult> out(test.size());
  if (threads <= 1 || test.size() < 2) {
    for (std::size_t i = 0; i < test.size(); ++i) {
      out[i] = filtered_rank(scorer, test[i], filter);
    }
    return out;
  }
  // Results land in preassigned slots, so the aggregation is
  // deterministic regardless of scheduling.
  std::vector<std::thread> pool;
  std::size_t n = test.size();
  std::size_t workers = std::min<std::size_t>(threads, n);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < n; i += workers) {
        out[i] = filtered_rank(scorer, test[i], filter);
      }
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

Scalar mrr_from_ranks(std::span<const RankResult> ranks) {
  if (ranks.empty()) throw DataError("mrr: no ranks");
  Scalar sum = 0;
  for (const RankResult& r : ranks) {
    sum += 1.0 / r.subject_rank + 1.0 / r.object_rank;
  }
  return sum / (2.0 * static_cast<Scalar>(ranks.size()));
}

Scalar hits_from_ranks(std::span<const RankResult> ranks, Scalar k) {
  if (ranks.empty()) throw DataError("hits@k: no ranks");
  if (k < 1) throw DataError("hits@k: k must be >= 1");
  std::int64_t hits = 0;
  for (const RankResult& r : ranks) {
    if (r.subject_rank <= k) ++hits;
    if (r.object_rank <= k) ++hits;
  }
  return static_cast<Scalar>(hits) / (2.0 * static_cast<Scalar>(ranks.size()));
}

Scalar mrr(const Scorer& scorer, std::span<const Triple> test,
           const TripleSet& filter) {
  auto ranks = filtered_ranks(scorer, test, filter);
  return mrr_from_ranks(ranks);
}

Scalar hits_at_k(const Scorer& scorer, std::span<const Triple> test,
                 const TripleSet& filter, Scalar k) {
  auto ranks = filtered_ranks(scorer, test, filter);
  return hits_from_ranks(ranks, k);
}

Index Histogram::occupied_bins() const {
  Index n = 0;
  for (std::int64_t c : counts) {
    if (c > 0) ++n;
  }
  return n;
}

Histogram make_histogram(std::span<const Scalar> values, Scalar lo, Scalar hi,
                         int bins) {
  if (bins < 1) throw DataError("histogram: bins must be >= 1");
  if (!(hi > lo)) hi = lo + 1;
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  const Scalar width = (hi - lo) / bins;
  for (Scalar v : values) {
    auto bin = static_cast<std::int64_t>((v - lo) / width);
    bin = std::clamp<std::int64_t>(bin, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(bin)];
  }
  return h;
}

namespace {

GroupSummary summarize(std::vector<Scalar> values, Scalar lo, Scalar hi,
                       int bins) {
  GroupSummary g;
  Scalar sum = 0;
  for (Scalar v : values) sum += v;
  g.mean = sum / static_cast<Scalar>(values.size());
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  g.median = n % 2 == 1 ? values[n / 2]
                        : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  g.histogram = make_histogram(values, lo, hi, bins);
  return g;
}

}  // namespace

ScoreDistributions score_distributions(const Scorer& scorer,
                                       std::span<const Triple> positives,
                                       std::span<const Triple> negatives,
                                       int score_bins, int prob_bins) {
  if (positives.empty() || negatives.empty()) {
    throw DataError("score_distributions: both groups must be non-empty");
  }
  std::vector<Scalar> pos_scores, neg_scores, pos_probs, neg_probs;
  for (const Triple& t : positives) {
    Scalar f = scorer.single(t);
    pos_scores.push_back(f);
    pos_probs.push_back(sigmoid(f));
  }
  for (const Triple& t : negatives) {
    Scalar f = scorer.single(t);
    neg_scores.push_back(f);
    neg_probs.push_back(sigmoid(f));
  }

  Scalar lo = pos_scores[0], hi = pos_scores[0];
  for (const auto* v : {&pos_scores, &neg_scores}) {
    for (Scalar s : *v) {
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
  }

  ScoreDistributions d;
  d.score_positive = summarize(pos_scores, lo, hi, score_bins);
  d.score_negative = summarize(neg_scores, lo, hi, score_bins);
  d.prob_positive = summarize(pos_probs, 0.0, 1.0, prob_bins);
  d.prob_negative = summarize(neg_probs, 0.0, 1.0, prob_bins);
  return d;
}

namespace {

std::string format_scalar(Scalar v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

void histogram_rows(
    std::vector<std::pair<std::string, std::string>>& rows,
    const std::string& prefix, const GroupSummary& g) {
  rows.emplace_back(prefix + "_mean", format_scalar(g.mean));
  rows.emplace_back(prefix + "_median", format_scalar(g.median));
  const Histogram& h = g.histogram;
  const Scalar width =
      (h.hi - h.lo) / static_cast<Scalar>(h.counts.size());
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    std::ostringstream key;
    key << prefix << "_bin_" << format_scalar(h.lo + width * i) << "_"
        << format_scalar(h.lo + width * (i + 1));
    rows.emplace_back(key.str(), std::to_string(h.counts[i]));
  }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> distribution_report(
    const ScoreDistributions& d) {
  std::vector<std::pair<std::string, std::string>> rows;
  histogram_rows(rows, "score_positive", d.score_positive);
  histogram_rows(rows, "score_negative", d.score_negative);
  histogram_rows(rows, "prob_positive", d.prob_positive);
  histogram_rows(rows, "prob_negative", d.prob_negative);
  return rows;
}

}  // namespace kge
