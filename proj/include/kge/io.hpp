#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kge/triple_store.hpp"
#include "kge/types.hpp"
#include "kge/vocabulary.hpp"

namespace kge {

using RawTriple = std::array<std::string, 3>;

/// A parsed event line: triple names plus an optional severity label.
struct RawEvent {
  RawTriple names;
  std::optional<SeverityClass> label;
  std::size_t line = 0;
};

/// Reads `subject<TAB>predicate<TAB>object` lines. Blank lines and lines
/// starting with '#' are skipped; LF and CRLF both accepted.
/// Throws ParseError (with line number) on any other shape.
std::vector<RawTriple> parse_triples(std::istream& in);
std::vector<RawTriple> read_triple_file(const std::filesystem::path& path);

/// Reads triple lines with an optional fourth severity-label column.
std::vector<RawEvent> parse_events(std::istream& in);
std::vector<RawEvent> read_event_file(const std::filesystem::path& path);

/// Entities collected from subject and object positions in
/// first-appearance order; relations from the predicate position.
Vocabulary build_vocabulary(const std::vector<RawTriple>& triples);

/// Encodes names against an existing vocabulary.
/// Throws UnknownSymbolError naming the offending string.
TripleStore encode(const Vocabulary& vocab,
                   const std::vector<RawTriple>& triples);
Triple encode_one(const Vocabulary& vocab, const RawTriple& names);
RawTriple decode(const Vocabulary& vocab, const Triple& t);

void write_triple_file(const std::filesystem::path& path,
                       const Vocabulary& vocab,
                       const std::vector<Triple>& triples);
void write_event_file(const std::filesystem::path& path,
                      const Vocabulary& vocab,
                      const std::vector<LabeledEvent>& events);

/// Vocabulary sidecar: `E<TAB>name` / `R<TAB>name` lines in index order.
void write_vocabulary(const std::filesystem::path& path,
                      const Vocabulary& vocab);
Vocabulary read_vocabulary(const std::filesystem::path& path);

/// FNV-1a over a file's bytes; used for dataset checksums in manifests.
std::uint64_t file_checksum(const std::filesystem::path& path);

}  // namespace kge
