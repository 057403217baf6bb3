#include "kge/io.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "kge/errors.hpp"

namespace kge {
namespace {

// Splits on tabs. Returns false for blank/comment lines.
bool split_line(const std::string& raw, std::vector<std::string>& fields) {
  std::string line = raw;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.empty() || line.front() == '#') return false;
  fields.clear();
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return true;
}

void check_fields(const std::vector<std::string>& fields, std::size_t expected,
                  std::size_t line_no) {
  if (fields.size() != expected) {
    throw ParseError(line_no, "expected " + std::to_string(expected) +
                                  " tab-separated fields, got " +
                                  std::to_string(fields.size()));
  }
  for (const std::string& f : fields) {
    if (f.empty()) throw ParseError(line_no, "empty field");
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<RawTriple> parse_triples(std::istream& in) {
  std::vector<RawTriple> out;
  std::vector<std::string> fields;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!split_line(line, fields)) continue;
    check_fields(fields, 3, line_no);
    out.push_back({fields[0], fields[1], fields[2]});
  }
  return out;
}

std::vector<RawEvent> parse_events(std::istream& in) {
  std::vector<RawEvent> out;
  std::vector<std::string> fields;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!split_line(line, fields)) continue;
    if (fields.size() != 3 && fields.size() != 4) {
      throw ParseError(line_no, "expected 3 or 4 tab-separated fields, got " +
                                    std::to_string(fields.size()));
    }
    check_fields(fields, fields.size(), line_no);
    RawEvent ev;
    ev.names = {fields[0], fields[1], fields[2]};
    ev.line = line_no;
    if (fields.size() == 4) {
      auto label = severity_from_name(fields[3]);
      if (!label) throw ParseError(line_no, "unknown label: " + fields[3]);
      ev.label = *label;
    }
    out.push_back(std::move(ev));
  }
  return out;
}

std::vector<RawTriple> read_triple_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_triples(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

std::vector<RawEvent> read_event_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_events(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

Vocabulary build_vocabulary(const std::vector<RawTriple>& triples) {
  Vocabulary vocab;
  for (const RawTriple& t : triples) {
    vocab.add_entity(t[0]);
    vocab.add_relation(t[1]);
    vocab.add_entity(t[2]);
  }
  return vocab;
}

Triple encode_one(const Vocabulary& vocab, const RawTriple& names) {
  return Triple{vocab.require_entity(names[0]),
                vocab.require_relation(names[1]),
                vocab.require_entity(names[2])};
}

TripleStore encode(const Vocabulary& vocab,
                   const std::vector<RawTriple>& triples) {
  TripleStore store;
  for (const RawTriple& t : triples) store.add(encode_one(vocab, t));
  return store;
}

RawTriple decode(const Vocabulary& vocab, const Triple& t) {
  return {vocab.entity_name(t.s), vocab.relation_name(t.p),
          vocab.entity_name(t.o)};
}

void write_triple_file(const std::filesystem::path& path,
                       const Vocabulary& vocab,
                       const std::vector<Triple>& triples) {
  auto out = open_output(path);
  for (const Triple& t : triples) {
    out << vocab.entity_name(t.s) << '\t' << vocab.relation_name(t.p) << '\t'
        << vocab.entity_name(t.o) << '\n';
  }
}

void write_event_file(const std::filesystem::path& path,
                      const Vocabulary& vocab,
                      const std::vector<LabeledEvent>& events) {
  auto out = open_output(path);
  for (const LabeledEvent& e : events) {
    out << vocab.entity_name(e.triple.s) << '\t'
        << vocab.relation_name(e.triple.p) << '\t'
        << vocab.entity_name(e.triple.o) << '\t' << severity_name(e.label)
        << '\n';
  }
}

void write_vocabulary(const std::filesystem::path& path,
                      const Vocabulary& vocab) {
  auto out = open_output(path);
  for (const std::string& name : vocab.entity_names()) {
    out << "E\t" << name << '\n';
  }
  for (const std::string& name : vocab.relation_names()) {
    out << "R\t" << name << '\n';
  }
}

Vocabulary read_vocabulary(const std::filesystem::path& path) {
  auto in = open_input(path);
  Vocabulary vocab;
  std::vector<std::string> fields;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!split_line(line, fields)) continue;
    check_fields(fields, 2, line_no);
    if (fields[0] == "E") {
      vocab.add_entity(fields[1]);
    } else if (fields[0] == "R") {
      vocab.add_relation(fields[1]);
    } else {
      throw ParseError(line_no, "expected E or R, got " + fields[0]);
    }
  }
  return vocab;
}

std::uint64_t file_checksum(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::uint64_t h = 1469598103934665603ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (!in) break;
  }
  return h;
}

}  // namespace kge
