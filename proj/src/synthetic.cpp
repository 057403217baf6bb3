#include "kge/synthetic.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "kge/errors.hpp"
#include "kge/rng.hpp"

namespace kge {

void SynthConfig::validate() const {
  if (dev_hosts < 2 || edge_computers < 2) {
    throw DataError("synth: need at least two dev hosts and edge computers");
  }
  if (apps < 3 || sensors < 1 || tags < 2) {
    throw DataError("synth: need >= 3 apps, >= 1 sensor, >= 2 tags");
  }
  if (reserved_tags < 1 || reserved_tags >= tags) {
    throw DataError("synth: reserved_tags must lie in [1, tags)");
  }
  if (apps_per_dev < 1 || apps_per_dev >= apps - 1 || apps_per_edge < 1 ||
      apps_per_edge >= apps - 1) {
    throw DataError("synth: per-device app subsets must leave siblings room");
  }
  if (tags_per_app < 1 || tags_per_app >= tags - reserved_tags) {
    throw DataError("synth: tags_per_app must leave unread readable tags");
  }
  if (activity_scale <= 0) throw DataError("synth: activity_scale must be > 0");
  if (static_repeats < 1) throw DataError("synth: static_repeats must be >= 1");
  if (events_per_class < 1) {
    throw DataError("synth: events_per_class must be >= 1");
  }
}

namespace {

struct Universe {
  Index plc, opcua, historian, app_repo, internet;
  std::vector<Index> devs, edges, apps, sensors, tags;
  Index r_connected, r_publishes, r_stores, r_stored_in;
  Index r_https, r_ssh, r_pushes, r_pulls, r_hosts, r_reads;
};

Universe make_universe(const SynthConfig& cfg, Vocabulary& vocab) {
  Universe u;
  u.plc = vocab.add_entity("plc");
  u.opcua = vocab.add_entity("opcua_server");
  u.historian = vocab.add_entity("historian");
  u.app_repo = vocab.add_entity("app_repo");
  u.internet = vocab.add_entity("internet");
  for (int i = 0; i < cfg.dev_hosts; ++i) {
    u.devs.push_back(vocab.add_entity("dev_host_" + std::to_string(i + 1)));
  }
  for (int i = 0; i < cfg.edge_computers; ++i) {
    u.edges.push_back(
        vocab.add_entity("edge_computer_" + std::to_string(i + 1)));
  }
  for (int i = 0; i < cfg.apps; ++i) {
    u.apps.push_back(vocab.add_entity("app_" + std::to_string(i + 1)));
  }
  for (int i = 0; i < cfg.sensors; ++i) {
    u.sensors.push_back(vocab.add_entity("sensor_" + std::to_string(i + 1)));
  }
  for (int i = 0; i < cfg.tags; ++i) {
    u.tags.push_back(vocab.add_entity("tag_" + std::to_string(i + 1)));
  }
  u.r_connected = vocab.add_relation("connected_to");
  u.r_publishes = vocab.add_relation("publishes_tag");
  u.r_stores = vocab.add_relation("stores_tag");
  u.r_stored_in = vocab.add_relation("stored_in");
  u.r_https = vocab.add_relation("https_connection");
  u.r_ssh = vocab.add_relation("ssh_connection");
  u.r_pushes = vocab.add_relation("pushes_app");
  u.r_pulls = vocab.add_relation("pulls_app");
  u.r_hosts = vocab.add_relation("hosts_app");
  u.r_reads = vocab.add_relation("reads_tag");
  return u;
}

// Rotated subset over a seed-shuffled order: guarantees every device
// class member differs from its siblings while staying random-looking.
std::vector<std::vector<Index>> rotated_subsets(const std::vector<Index>& pool,
                                                int members, int per_member,
                                                Rng& rng) {
  std::vector<Index> order = pool;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<Index>> subsets(members);
  for (int m = 0; m < members; ++m) {
    for (int k = 0; k < per_member; ++k) {
      subsets[m].push_back(
          order[(m + k) % static_cast<int>(order.size())]);
    }
  }
  return subsets;
}

class BaselineBuilder {
 public:
  BaselineBuilder(TripleStore& store, double scale, Rng& rng)
      : store_(store), scale_(scale), rng_(rng) {}

  void repeated(Index s, Index p, Index o, double rate) {
    std::poisson_distribution<int> dist(rate * scale_);
    int n = dist(rng_);
    for (int i = 0; i < n; ++i) store_.add(Triple{s, p, o});
  }

  void fixed(Index s, Index p, Index o, int n) {
    for (int i = 0; i < n; ++i) store_.add(Triple{s, p, o});
  }

 private:
  TripleStore& store_;
  double scale_;
  Rng& rng_;
};

std::vector<Triple> pick_events(std::vector<Triple> pool, int count,
                                Rng& rng) {
  std::shuffle(pool.begin(), pool.end(), rng);
  if (static_cast<int>(pool.size()) > count) pool.resize(count);
  return pool;
}

}  // namespace

SynthResult synth_industrial_graph(const SynthConfig& cfg,
                                   std::uint64_t seed) {
  cfg.validate();

  SynthResult result;
  Universe u = make_universe(cfg, result.vocab);
  Rng rng = make_stream(seed, "synth");

  // Per-device behavior subsets; the last app stays unpushed/unhosted
  // and the trailing tags stay unread, so both can seed events below.
  std::vector<Index> pushable(u.apps.begin(), u.apps.end() - 1);
  std::vector<Index> readable(u.tags.begin(),
                              u.tags.end() - cfg.reserved_tags);
  auto dev_apps = rotated_subsets(pushable, cfg.dev_hosts, cfg.apps_per_dev,
                                  rng);
  auto edge_apps = rotated_subsets(pushable, cfg.edge_computers,
                                   cfg.apps_per_edge, rng);
  auto app_tags = rotated_subsets(readable, cfg.apps, cfg.tags_per_app, rng);

  BaselineBuilder make(result.baseline, cfg.activity_scale, rng);

  // Structure: emitted a fixed number of times.
  for (Index sensor : u.sensors) {
    make.fixed(sensor, u.r_connected, u.plc, cfg.static_repeats);
  }
  for (Index edge : u.edges) {
    make.fixed(edge, u.r_connected, u.opcua, cfg.static_repeats);
  }
  for (Index app : u.apps) {
    make.fixed(app, u.r_stored_in, u.app_repo, cfg.static_repeats);
  }

  // Process data: the PLC publishes every tag, the historian stores it.
  for (Index tag : u.tags) {
    make.repeated(u.plc, u.r_publishes, tag, 7.0);
    make.repeated(u.historian, u.r_stores, tag, 5.0);
  }

  // Development activity.
  for (int d = 0; d < cfg.dev_hosts; ++d) {
    Index dev = u.devs[d];
    make.repeated(dev, u.r_https, u.historian, 22.0);
    make.repeated(dev, u.r_https, u.app_repo, 15.0);
    make.repeated(dev, u.r_ssh, u.app_repo, 9.0);
    make.repeated(dev, u.r_ssh, u.historian, 6.0);
    make.repeated(dev, u.r_https, u.internet, 4.0);
    for (Index app : dev_apps[d]) make.repeated(dev, u.r_pushes, app, 7.5);
  }

  // Edge activity.
  for (int e = 0; e < cfg.edge_computers; ++e) {
    Index edge = u.edges[e];
    make.repeated(edge, u.r_pulls, u.app_repo, 18.0);
    make.repeated(edge, u.r_https, u.app_repo, 11.0);
    for (Index app : edge_apps[e]) make.repeated(edge, u.r_hosts, app, 9.0);
  }

  // App data access: a couple of process tags everyone reads (tight
  // app cluster) plus each app's own subset.
  for (int a = 0; a < cfg.apps; ++a) {
    for (int k = 0; k < 2 && k < static_cast<int>(readable.size()); ++k) {
      make.repeated(u.apps[a], u.r_reads, readable[k], 9.0);
    }
    for (Index tag : app_tags[a]) {
      make.repeated(u.apps[a], u.r_reads, tag, 11.0);
    }
  }

  const TripleSet& known = result.baseline.membership();
  auto unseen = [&known](std::vector<Triple> pool) {
    std::erase_if(pool,
                  [&known](const Triple& t) { return known.count(t) > 0; });
    return pool;
  };

  // Observed: events already in the baseline, drawn frequency-weighted
  // from the activity stream so they represent typical behavior.
  std::vector<Triple> observed_pool;
  {
    const auto& stream = result.baseline.triples();
    TripleSet picked;
    int attempts = cfg.events_per_class * 50;
    while (static_cast<int>(observed_pool.size()) < cfg.events_per_class &&
           attempts-- > 0) {
      const Triple& t = stream[uniform_index(
          rng, static_cast<Index>(stream.size()))];
      if (picked.insert(t).second) observed_pool.push_back(t);
    }
  }

  // Expected: behavior a sibling of the same device class exhibits.
  std::vector<Triple> expected_pool;
  for (int d = 0; d < cfg.dev_hosts; ++d) {
    for (int sibling = 0; sibling < cfg.dev_hosts; ++sibling) {
      if (sibling == d) continue;
      for (Index app : dev_apps[sibling]) {
        expected_pool.push_back(Triple{u.devs[d], u.r_pushes, app});
      }
    }
  }
  for (int e = 0; e < cfg.edge_computers; ++e) {
    for (int sibling = 0; sibling < cfg.edge_computers; ++sibling) {
      if (sibling == e) continue;
      for (Index app : edge_apps[sibling]) {
        expected_pool.push_back(Triple{u.edges[e], u.r_hosts, app});
      }
    }
  }
  for (int a = 0; a < cfg.apps; ++a) {
    for (int sibling = 0; sibling < cfg.apps; ++sibling) {
      if (sibling == a) continue;
      for (Index tag : app_tags[sibling]) {
        expected_pool.push_back(Triple{u.apps[a], u.r_reads, tag});
      }
    }
  }
  expected_pool = unseen(std::move(expected_pool));

  // Unexpected: a class-typical relation toward a target no sibling
  // pairs with (reserved tags and the never-pushed app).
  std::vector<Triple> unexpected_pool;
  for (Index app : u.apps) {
    for (int k = 0; k < cfg.reserved_tags; ++k) {
      unexpected_pool.push_back(
          Triple{app, u.r_reads, u.tags[cfg.tags - 1 - k]});
    }
  }
  for (Index dev : u.devs) {
    unexpected_pool.push_back(Triple{dev, u.r_pushes, u.apps.back()});
  }
  for (Index edge : u.edges) {
    unexpected_pool.push_back(Triple{edge, u.r_hosts, u.apps.back()});
  }
  unexpected_pool = unseen(std::move(unexpected_pool));

  // Suspicious: a device that is not a dev host reaching the historian.
  std::vector<Triple> suspicious_pool;
  for (Index edge : u.edges) {
    suspicious_pool.push_back(Triple{edge, u.r_https, u.historian});
    suspicious_pool.push_back(Triple{edge, u.r_ssh, u.app_repo});
  }
  suspicious_pool.push_back(Triple{u.plc, u.r_https, u.historian});
  suspicious_pool.push_back(Triple{u.historian, u.r_https, u.app_repo});
  suspicious_pool = unseen(std::move(suspicious_pool));

  // Highly suspicious: edge devices leaving the local network, edge-to-
  // edge SSH, and a network scan from the second edge computer.
  std::vector<Triple> highly_pool;
  for (Index edge : u.edges) {
    highly_pool.push_back(Triple{edge, u.r_https, u.internet});
    for (Index other : u.edges) {
      if (other != edge) highly_pool.push_back(Triple{edge, u.r_ssh, other});
    }
  }
  Index scanner = u.edges[1];
  for (Index sensor : u.sensors) {
    highly_pool.push_back(Triple{scanner, u.r_ssh, sensor});
  }
  for (Index dev : u.devs) {
    highly_pool.push_back(Triple{scanner, u.r_ssh, dev});
  }
  highly_pool.push_back(Triple{scanner, u.r_https, u.plc});
  highly_pool = unseen(std::move(highly_pool));

  auto emit = [&](std::vector<Triple> pool, SeverityClass label) {
    if (pool.empty()) {
      throw DataError(std::string("synth: empty event pool for ") +
                      severity_name(label));
    }
    for (const Triple& t : pick_events(std::move(pool), cfg.events_per_class,
                                       rng)) {
      result.events.push_back(LabeledEvent{t, label});
    }
  };
  emit(std::move(highly_pool), SeverityClass::HighlySuspicious);
  emit(std::move(suspicious_pool), SeverityClass::Suspicious);
  emit(std::move(unexpected_pool), SeverityClass::Unexpected);
  emit(std::move(expected_pool), SeverityClass::Expected);
  emit(std::move(observed_pool), SeverityClass::Observed);

  return result;
}

}  // namespace kge
