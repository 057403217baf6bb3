#pragma once

#include <cstdint>
#include <vector>

#include "kge/triple_store.hpp"
#include "kge/types.hpp"
#include "kge/vocabulary.hpp"

namespace kge {

/// Knobs of the synthetic industrial-automation graph: a PLC with
/// sensors and process tags, edge computers hosting apps, developer
/// hosts pushing apps to a repository, a historian, and occasional
/// internet access — with stochastically repeated activity triples.
struct SynthConfig {
  int dev_hosts = 5;
  int edge_computers = 4;
  int apps = 6;     // the last app is stored in the repo but never pushed
  int sensors = 8;
  int tags = 12;    // trailing reserved_tags are published but never read
  int reserved_tags = 4;
  int apps_per_dev = 2;   // apps each dev host pushes
  int apps_per_edge = 2;  // apps each edge computer hosts
  int tags_per_app = 4;   // tags each app reads beyond the common ones
  double activity_scale = 5.0;  // multiplies every activity rate
  int static_repeats = 3;       // repetitions of structural triples
  int events_per_class = 20;    // held-out labeled events per severity

  void validate() const;
};

struct SynthResult {
  Vocabulary vocab;
  TripleStore baseline;
  std::vector<LabeledEvent> events;
};

/// Deterministic given the seed. Every severity class is non-empty, all
/// event symbols occur in the baseline, and no event other than the
/// Observed ones appears in the baseline set.
SynthResult synth_industrial_graph(const SynthConfig& config,
                                   std::uint64_t seed);

}  // namespace kge
