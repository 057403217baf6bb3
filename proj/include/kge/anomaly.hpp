#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "kge/model.hpp"
#include "kge/triple_store.hpp"
#include "kge/types.hpp"

namespace kge {

/// A scored event; for energy models the value lies in (0, 1).
struct Suspiciousness {
  Triple triple;
  Scalar value = 0;
  ModelKind model = ModelKind::EnMd;
  std::optional<SeverityClass> label;
};

/// Model-specific suspiciousness of a novel triple:
///   energy models   1 - sigma(f)
///   rese            1 - f
///   rekl            -f
///   transe          ||e_s + r_p - e_o||
/// Out-of-vocabulary indices raise UnknownSymbolError; there is no
/// silent default.
Scalar suspiciousness(const Model& model, const Triple& t);

std::vector<Suspiciousness> score_events(const Model& model,
                                         std::span<const LabeledEvent> events);
std::vector<Suspiciousness> score_events(const Model& model,
                                         std::span<const Triple> triples);

/// Sorts descending by suspiciousness (stable, so equal values keep
/// their input order). With an entity filter, keeps only events whose
/// subject or object is that entity.
std::vector<Suspiciousness> rank_alerts(std::vector<Suspiciousness> scored,
                                        std::optional<Index> entity_filter);

/// Pairwise ordering accuracy over all event pairs with different
/// severity labels: the fraction where the more-severe event scores
/// strictly higher; equal scores count one half. Throws DataError when
/// fewer than two distinct labels are present.
Scalar severity_ordering_accuracy(std::span<const Suspiciousness> scored);

/// Mean suspiciousness per severity class, most severe first; classes
/// with no events yield nullopt.
std::array<std::optional<Scalar>, kNumSeverityClasses> class_mean_suspiciousness(
    std::span<const Suspiciousness> scored);

}  // namespace kge
