#include "kge/anomaly.hpp"

#include <algorithm>
#include <array>

#include "kge/errors.hpp"
#include "kge/scoring.hpp"

namespace kge {

namespace {

void check_indices(const Model& model, const Triple& t) {
  if (t.s < 0 || t.s >= model.num_entities()) {
    throw UnknownSymbolError("entity index " + std::to_string(t.s));
  }
  if (t.o < 0 || t.o >= model.num_entities()) {
    throw UnknownSymbolError("entity index " + std::to_string(t.o));
  }
  if (t.p < 0 || t.p >= model.num_relations()) {
    throw UnknownSymbolError("relation index " + std::to_string(t.p));
  }
}

}  // namespace

Scalar suspiciousness(const Model& model, const Triple& t) {
  check_indices(model, t);
  switch (model.kind) {
    case ModelKind::EnM:
    case ModelKind::EnMd:
      return 1.0 - prob(model.space(), t);
    case ModelKind::ReSE:
      return 1.0 - score(model.space(), t);
    case ModelKind::ReKL:
      return -score(model.space(), t);
    case ModelKind::TransE:
      return score_transe(model.transe(), t);
  }
  throw DataError("suspiciousness: unhandled model kind");
}

std::vector<Suspiciousness> score_events(
    const Model& model, std::span<const LabeledEvent> events) {
  std::vector<Suspiciousness> out;
  out.reserve(events.size());
  for (const LabeledEvent& e : events) {
    out.push_back(Suspiciousness{e.triple, suspiciousness(model, e.triple),
                                 model.kind, e.label});
  }
  return out;
}

std::vector<Suspiciousness> score_events(const Model& model,
                                         std::span<const Triple> triples) {
  std::vector<Suspiciousness> out;
  out.reserve(triples.size());
  for (const Triple& t : triples) {
    out.push_back(
        Suspiciousness{t, suspiciousness(model, t), model.kind, std::nullopt});
  }
  return out;
}

std::vector<Suspiciousness> rank_alerts(std::vector<Suspiciousness> scored,
                                        std::optional<Index> entity_filter) {
  if (entity_filter) {
    std::erase_if(scored, [&](const Suspiciousness& s) {
      return s.triple.s != *entity_filter && s.triple.o != *entity_filter;
    });
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const Suspiciousness& a, const Suspiciousness& b) {
                     return a.value > b.value;
                   });
  return scored;
}

Scalar severity_ordering_accuracy(std::span<const Suspiciousness> scored) {
  std::array<std::vector<Scalar>, kNumSeverityClasses> by_class;
  for (const Suspiciousness& s : scored) {
    if (!s.label) {
      throw DataError("severity_ordering_accuracy: unlabeled event");
    }
    by_class[static_cast<int>(*s.label)].push_back(s.value);
  }

  int classes_present = 0;
  for (auto& values : by_class) {
    if (!values.empty()) ++classes_present;
    std::sort(values.begin(), values.end());
  }
  if (classes_present < 2) {
    throw DataError(
        "severity_ordering_accuracy: need at least two distinct labels");
  }

  // Generalized Mann-Whitney count via sorted two-pointer sweeps: for
  // each (more severe, less severe) class pair, count how often the
  // more severe value wins, with ties worth one half.
  Scalar wins = 0;
  std::int64_t pairs = 0;
  for (int severe = 0; severe < kNumSeverityClasses; ++severe) {
    for (int mild = severe + 1; mild < kNumSeverityClasses; ++mild) {
      const auto& hi = by_class[severe];
      const auto& lo = by_class[mild];
      if (hi.empty() || lo.empty()) continue;
      pairs += static_cast<std::int64_t>(hi.size() * lo.size());
      std::size_t below = 0, equal = 0;
      for (Scalar v : hi) {
        while (below < lo.size() && lo[below] < v) ++below;
        equal = below;
        while (equal < lo.size() && lo[equal] == v) ++equal;
        wins += static_cast<Scalar>(below) +
                0.5 * static_cast<Scalar>(equal - below);
      }
    }
  }
  return wins / static_cast<Scalar>(pairs);
}

std::array<std::optional<Scalar>, kNumSeverityClasses>
class_mean_suspiciousness(std::span<const Suspiciousness> scored) {
  std::array<Scalar, kNumSeverityClasses> sums{};
  std::array<std::int64_t, kNumSeverityClasses> counts{};
  for (const Suspiciousness& s : scored) {
    if (!s.label) continue;
    sums[static_cast<int>(*s.label)] += s.value;
    ++counts[static_cast<int>(*s.label)];
  }
  std::array<std::optional<Scalar>, kNumSeverityClasses> means;
  for (int c = 0; c < kNumSeverityClasses; ++c) {
    if (counts[c] > 0) means[c] = sums[c] / static_cast<Scalar>(counts[c]);
  }
  return means;
}

}  // namespace kge
