#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

namespace kge {

using Scalar = double;
using Index = std::int64_t;

using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
// Parameter tables are row-major so one entity/relation occupies a
// contiguous strip; this is also the on-disk coefficient order.
using RowMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One (subject, predicate, object) edge, integer-encoded.
struct Triple {
  Index s = 0;
  Index p = 0;
  Index o = 0;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    // FNV-1a over the three indices
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t v : {static_cast<std::uint64_t>(t.s),
                            static_cast<std::uint64_t>(t.p),
                            static_cast<std::uint64_t>(t.o)}) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

using TripleSet = std::unordered_set<Triple, TripleHash>;

}  // namespace kge
