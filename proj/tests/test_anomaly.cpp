#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "kge/anomaly.hpp"
#include "kge/errors.hpp"
#include "testutil.hpp"

using namespace kge;

namespace {

Model make_model(ModelKind kind, std::uint64_t seed, Index entities = 6,
                 Index relations = 3, Index dim = 4) {
  Model model;
  model.kind = kind;
  if (kind == ModelKind::TransE) {
    model.params = test::random_transe(entities, relations, dim, seed);
  } else {
    model.params =
        test::random_space(entities, relations, dim, relation_kind(kind), seed);
  }
  for (Index i = 0; i < entities; ++i) {
    model.vocab.add_entity("e" + std::to_string(i));
  }
  for (Index i = 0; i < relations; ++i) {
    model.vocab.add_relation("r" + std::to_string(i));
  }
  return model;
}

}  // namespace

TEST_CASE("suspiciousness formulas per model kind") {
  Model enm = make_model(ModelKind::EnM, 1);
  enm.space().entity_table().setZero();  // every score 0
  CHECK(suspiciousness(enm, {0, 0, 1}) == 0.5);

  Model transe = make_model(ModelKind::TransE, 2);
  transe.transe().entities.row(1) =
      transe.transe().entities.row(0) + transe.transe().relations[0].row(0);
  CHECK(suspiciousness(transe, {0, 0, 1}) == 0.0);

  Model rese = make_model(ModelKind::ReSE, 3);
  Scalar f = score(rese.space(), {2, 1, 3});
  CHECK(suspiciousness(rese, {2, 1, 3}) == 1.0 - f);

  Model rekl = make_model(ModelKind::ReKL, 4);
  f = score(rekl.space(), {2, 1, 3});
  CHECK(suspiciousness(rekl, {2, 1, 3}) == -f);
}

TEST_CASE("energy suspiciousness is strictly antitone in the score") {
  Model model = make_model(ModelKind::EnMd, 5);
  auto triples = test::random_triples(6, 3, 60, 6);
  for (std::size_t i = 1; i < triples.size(); ++i) {
    Scalar f1 = score(model.space(), triples[i - 1]);
    Scalar f2 = score(model.space(), triples[i]);
    Scalar s1 = suspiciousness(model, triples[i - 1]);
    Scalar s2 = suspiciousness(model, triples[i]);
    CHECK(s1 > 0.0);
    CHECK(s1 < 1.0);
    if (f1 < f2) {
      CHECK(s1 > s2);
    } else if (f1 > f2) {
      CHECK(s1 < s2);
    }
  }
}

TEST_CASE("unknown symbols raise instead of scoring") {
  Model model = make_model(ModelKind::EnM, 7);
  CHECK_THROWS_AS(suspiciousness(model, {99, 0, 1}), UnknownSymbolError);
  CHECK_THROWS_AS(suspiciousness(model, {0, 99, 1}), UnknownSymbolError);
  CHECK_THROWS_AS(suspiciousness(model, {0, 0, -1}), UnknownSymbolError);

  std::vector<LabeledEvent> events{{{0, 0, 99}, SeverityClass::Expected}};
  CHECK_THROWS_AS(score_events(model, events), UnknownSymbolError);
}

TEST_CASE("score_events carries labels through and is idempotent") {
  Model model = make_model(ModelKind::EnMd, 8);
  CHECK(score_events(model, std::span<const LabeledEvent>{}).empty());

  std::vector<LabeledEvent> events;
  Rng rng = make_stream(9, "events");
  for (const Triple& t : test::random_triples(6, 3, 25, 10)) {
    events.push_back(
        {t, static_cast<SeverityClass>(uniform_index(rng, 5))});
  }
  auto a = score_events(model, events);
  auto b = score_events(model, events);
  REQUIRE(a.size() == events.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].value == b[i].value);
    CHECK(a[i].label == events[i].label);
    CHECK(a[i].triple == events[i].triple);
    CHECK(a[i].value == suspiciousness(model, events[i].triple));
  }
}

TEST_CASE("rank_alerts sorts and filters like the brute-force oracle") {
  Model model = make_model(ModelKind::EnMd, 11, 8, 3, 4);
  auto triples = test::random_triples(8, 3, 50, 12);
  auto scored = score_events(model, std::span<const Triple>(triples));

  auto ranked = rank_alerts(scored, std::nullopt);
  REQUIRE(ranked.size() == scored.size());
  for (std::size_t i = 1; i < ranked.size(); ++i) {
    CHECK(ranked[i - 1].value >= ranked[i].value);
  }
  // Permutation of the input.
  auto sort_key = [](const Suspiciousness& s) {
    return std::tuple(s.triple.s, s.triple.p, s.triple.o, s.value);
  };
  auto lhs = scored, rhs = ranked;
  std::sort(lhs.begin(), lhs.end(), [&](const auto& a, const auto& b) {
    return sort_key(a) < sort_key(b);
  });
  std::sort(rhs.begin(), rhs.end(), [&](const auto& a, const auto& b) {
    return sort_key(a) < sort_key(b);
  });
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    CHECK(lhs[i].triple == rhs[i].triple);
  }

  // Entity filter equals filter-then-sort.
  for (Index entity : {Index(0), Index(3), Index(7)}) {
    auto filtered = rank_alerts(scored, entity);
    std::vector<Suspiciousness> expect;
    for (const auto& s : scored) {
      if (s.triple.s == entity || s.triple.o == entity) expect.push_back(s);
    }
    std::stable_sort(expect.begin(), expect.end(),
                     [](const auto& a, const auto& b) {
                       return a.value > b.value;
                     });
    REQUIRE(filtered.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
      CHECK(filtered[i].triple == expect[i].triple);
      CHECK(filtered[i].value == expect[i].value);
    }
  }

  // Filtering on an entity that appears nowhere gives the empty list.
  auto none = rank_alerts(scored, Index(999));
  CHECK(none.empty());
}

namespace {

std::vector<Suspiciousness> labeled_values(
    const std::vector<std::pair<Scalar, SeverityClass>>& items) {
  std::vector<Suspiciousness> out;
  Index i = 0;
  for (const auto& [value, label] : items) {
    Suspiciousness s;
    s.triple = Triple{i++, 0, 0};
    s.value = value;
    s.label = label;
    out.push_back(s);
  }
  return out;
}

// Independent O(n^2) reference.
Scalar oracle_ordering_accuracy(std::span<const Suspiciousness> scored) {
  Scalar wins = 0;
  std::int64_t pairs = 0;
  for (const auto& a : scored) {
    for (const auto& b : scored) {
      if (!more_severe(*a.label, *b.label)) continue;
      ++pairs;
      if (a.value > b.value) {
        wins += 1;
      } else if (a.value == b.value) {
        wins += 0.5;
      }
    }
  }
  return wins / static_cast<Scalar>(pairs);
}

}  // namespace

TEST_CASE("severity ordering accuracy: perfect, constant, errors") {
  auto perfect = labeled_values({{0.9, SeverityClass::HighlySuspicious},
                                 {0.7, SeverityClass::Suspicious},
                                 {0.5, SeverityClass::Unexpected},
                                 {0.3, SeverityClass::Expected},
                                 {0.1, SeverityClass::Observed}});
  CHECK(severity_ordering_accuracy(perfect) == 1.0);

  auto constant = labeled_values({{0.5, SeverityClass::HighlySuspicious},
                                  {0.5, SeverityClass::Observed},
                                  {0.5, SeverityClass::Expected}});
  CHECK(severity_ordering_accuracy(constant) == 0.5);

  auto one_class = labeled_values({{0.5, SeverityClass::Expected},
                                   {0.9, SeverityClass::Expected}});
  CHECK_THROWS_AS(severity_ordering_accuracy(one_class), DataError);
  CHECK_THROWS_AS(
      severity_ordering_accuracy(std::span<const Suspiciousness>{}),
      DataError);
}

TEST_CASE("severity ordering accuracy matches the pairwise oracle") {
  Rng rng = make_stream(13, "soa");
  for (int round = 0; round < 30; ++round) {
    std::vector<std::pair<Scalar, SeverityClass>> items;
    int n = 10 + static_cast<int>(uniform_index(rng, 40));
    for (int i = 0; i < n; ++i) {
      // Coarse values make ties common.
      Scalar v = std::round(uniform_real(rng) * 8) / 8.0;
      items.emplace_back(v,
                         static_cast<SeverityClass>(uniform_index(rng, 5)));
    }
    auto scored = labeled_values(items);
    int classes = 0;
    std::array<bool, kNumSeverityClasses> present{};
    for (const auto& s : scored) present[static_cast<int>(*s.label)] = true;
    for (bool b : present) classes += b;
    if (classes < 2) continue;
    CHECK(severity_ordering_accuracy(scored) ==
          doctest::Approx(oracle_ordering_accuracy(scored)).epsilon(1e-12));
  }
}

TEST_CASE("ordering accuracy is invariant under increasing transforms") {
  Rng rng = make_stream(14, "soa2");
  std::vector<std::pair<Scalar, SeverityClass>> items;
  for (int i = 0; i < 60; ++i) {
    items.emplace_back(uniform_real(rng) * 2 - 1,
                       static_cast<SeverityClass>(uniform_index(rng, 5)));
  }
  auto scored = labeled_values(items);
  Scalar base = severity_ordering_accuracy(scored);

  auto transformed = scored;
  for (auto& s : transformed) s.value = s.value * s.value * s.value * 5 + 2;
  CHECK(severity_ordering_accuracy(transformed) == base);
}

TEST_CASE("class mean suspiciousness") {
  auto scored = labeled_values({{0.9, SeverityClass::HighlySuspicious},
                                {0.8, SeverityClass::HighlySuspicious},
                                {0.2, SeverityClass::Observed}});
  auto means = class_mean_suspiciousness(scored);
  CHECK(means[0].has_value());
  CHECK(*means[0] == doctest::Approx(0.85));
  CHECK_FALSE(means[1].has_value());
  CHECK(*means[4] == doctest::Approx(0.2));
}
