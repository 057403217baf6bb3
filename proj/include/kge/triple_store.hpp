#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kge/errors.hpp"
#include "kge/types.hpp"

namespace kge {

/// Ordered list of triples plus a membership set. The list keeps
/// duplicates (streaming data reweights frequent facts); the set is
/// deduplicated and backs split and filtered ranking.
class TripleStore {
 public:
  TripleStore() = default;
  explicit TripleStore(std::vector<Triple> triples) {
    for (const Triple& t : triples) add(t);
  }

  void add(const Triple& t) {
    triples_.push_back(t);
    membership_.insert(t);
  }

  const std::vector<Triple>& triples() const { return triples_; }
  const TripleSet& membership() const { return membership_; }

  bool contains(const Triple& t) const { return membership_.count(t) > 0; }

  std::size_t size() const { return triples_.size(); }
  std::size_t unique_size() const { return membership_.size(); }
  bool empty() const { return triples_.empty(); }

  /// Deduplicated triples in first-appearance order.
  std::vector<Triple> unique_in_order() const {
    std::vector<Triple> out;
    out.reserve(membership_.size());
    TripleSet seen;
    for (const Triple& t : triples_) {
      if (seen.insert(t).second) out.push_back(t);
    }
    return out;
  }

 private:
  std::vector<Triple> triples_;
  TripleSet membership_;
};

/// Ordered severity labels, most severe first.
enum class SeverityClass : std::uint8_t {
  HighlySuspicious = 0,
  Suspicious = 1,
  Unexpected = 2,
  Expected = 3,
  Observed = 4,
};

inline constexpr int kNumSeverityClasses = 5;

/// True when a is strictly more severe than b.
inline bool more_severe(SeverityClass a, SeverityClass b) {
  return static_cast<int>(a) < static_cast<int>(b);
}

inline const char* severity_name(SeverityClass c) {
  switch (c) {
    case SeverityClass::HighlySuspicious:
      return "highly_suspicious";
    case SeverityClass::Suspicious:
      return "suspicious";
    case SeverityClass::Unexpected:
      return "unexpected";
    case SeverityClass::Expected:
      return "expected";
    case SeverityClass::Observed:
      return "observed";
  }
  return "?";
}

inline std::optional<SeverityClass> severity_from_name(const std::string& s) {
  for (int i = 0; i < kNumSeverityClasses; ++i) {
    auto c = static_cast<SeverityClass>(i);
    if (s == severity_name(c)) return c;
  }
  return std::nullopt;
}

/// A test triple tagged with its ground-truth severity.
struct LabeledEvent {
  Triple triple;
  SeverityClass label = SeverityClass::Observed;
};

}  // namespace kge
