#include "kge/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kge/errors.hpp"

namespace kge {

SplitResult split(const TripleStore& store, double test_fraction,
                  std::uint64_t seed) {
  if (store.empty()) throw DataError("split: store is empty");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw DataError("split: test_fraction must lie in (0, 1)");
  }

  std::vector<Triple> unique = store.unique_in_order();
  const std::size_t n = unique.size();
  const auto test_count = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(n)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = make_stream(seed, "split");
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<bool> is_test(n, false);
  for (std::size_t i = 0; i < test_count; ++i) is_test[order[i]] = true;

  SplitResult result;
  for (std::size_t i = 0; i < n; ++i) {
    (is_test[i] ? result.test : result.train).add(unique[i]);
  }
  return result;
}

std::vector<std::vector<Triple>> make_batches(std::span<const Triple> triples,
                                              std::size_t batch_size,
                                              Rng& rng) {
  if (batch_size == 0) throw DataError("batch_size must be >= 1");
  std::vector<Triple> shuffled(triples.begin(), triples.end());
  std::shuffle(shuffled.begin(), shuffled.end(), rng);

  std::vector<std::vector<Triple>> batches;
  for (std::size_t start = 0; start < shuffled.size(); start += batch_size) {
    std::size_t end = std::min(start + batch_size, shuffled.size());
    batches.emplace_back(shuffled.begin() + start, shuffled.begin() + end);
  }
  return batches;
}

std::vector<std::vector<Triple>> iterate_batches(const TripleStore& store,
                                                 std::size_t batch_size,
                                                 std::uint64_t seed) {
  Rng rng = make_stream(seed, "batching");
  return make_batches(store.triples(), batch_size, rng);
}

}  // namespace kge
