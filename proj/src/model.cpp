#include "kge/model.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "kge/errors.hpp"
#include "kge/io.hpp"

namespace kge {

namespace {

constexpr std::array<char, 4> kMagic{'K', 'G', 'E', 'B'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<unsigned char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = (v >> (8 * i)) & 0xff;
  out.write(reinterpret_cast<const char*>(b.data()), b.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<unsigned char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
  out.write(reinterpret_cast<const char*>(b.data()), b.size());
}

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u64(out, bits);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), b.size());
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), b.size());
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  std::uint64_t bits = get_u64(in);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

void put_block(std::ostream& out, const RowMatrix& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) put_f64(out, m(r, c));
  }
}

void get_block(std::istream& in, RowMatrix& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = get_f64(in);
  }
}

}  // namespace

Index Model::num_entities() const {
  return is_transe() ? transe().num_entities() : space().num_entities();
}

Index Model::num_relations() const {
  return is_transe() ? transe().num_relations() : space().num_relations();
}

Index Model::dim() const { return is_transe() ? transe().dim() : space().dim(); }

bool Model::all_finite() const {
  return is_transe() ? transe().all_finite() : space().all_finite();
}

Scorer Model::scorer() const {
  return is_transe() ? make_scorer(transe()) : make_scorer(space());
}

void write_embeddings(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());

  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kFormatVersion);
  out.put(static_cast<char>(model.kind));
  put_u64(out, static_cast<std::uint64_t>(model.num_entities()));
  put_u64(out, static_cast<std::uint64_t>(model.num_relations()));
  put_u64(out, static_cast<std::uint64_t>(model.dim()));

  if (model.is_transe()) {
    put_block(out, model.transe().entities);
    for (const RowMatrix& r : model.transe().relations) put_block(out, r);
  } else {
    put_block(out, model.space().entity_table());
    for (const RowMatrix& r : model.space().relation_blocks()) {
      put_block(out, r);
    }
  }
  if (!out) throw DataError("failed writing " + path.string());
}

Model read_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());

  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) {
    throw DataError(path.string() + ": not a KGEB embedding file");
  }
  std::uint32_t version = get_u32(in);
  if (version != kFormatVersion) {
    throw DataError(path.string() + ": unsupported format version " +
                    std::to_string(version));
  }
  int kind_tag = in.get();
  if (kind_tag < 0 || kind_tag > 4) {
    throw DataError(path.string() + ": bad model kind tag");
  }
  auto kind = static_cast<ModelKind>(kind_tag);
  auto num_entities = static_cast<Index>(get_u64(in));
  auto num_relations = static_cast<Index>(get_u64(in));
  auto dim = static_cast<Index>(get_u64(in));
  if (!in || num_entities < 1 || num_relations < 1 || dim < 1) {
    throw DataError(path.string() + ": corrupt header");
  }

  Model model;
  model.kind = kind;
  if (kind == ModelKind::TransE) {
    TransEParams params(num_entities, num_relations, dim);
    get_block(in, params.entities);
    for (RowMatrix& r : params.relations) get_block(in, r);
    model.params = std::move(params);
  } else {
    EmbeddingSpace space(num_entities, num_relations, dim,
                         relation_kind(kind));
    get_block(in, space.entity_table());
    for (RowMatrix& r : space.relation_blocks()) get_block(in, r);
    model.params = std::move(space);
  }
  if (!in) throw DataError(path.string() + ": truncated embedding file");
  return model;
}

namespace {

std::filesystem::path vocab_sidecar(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  p += ".vocab";
  return p;
}

}  // namespace

void save_model(const std::filesystem::path& path, const Model& model) {
  write_embeddings(path, model);
  write_vocabulary(vocab_sidecar(path), model.vocab);
}

Model load_model(const std::filesystem::path& path) {
  Model model = read_embeddings(path);
  model.vocab = read_vocabulary(vocab_sidecar(path));
  if (model.vocab.num_entities() != model.num_entities() ||
      model.vocab.num_relations() != model.num_relations()) {
    throw DataError(path.string() +
                    ": vocabulary sidecar does not match embedding sizes");
  }
  return model;
}

void export_text(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out.precision(17);

  auto write_row = [&out](const std::string& name, const RowMatrix& block) {
    out << name;
    for (Index r = 0; r < block.rows(); ++r) {
      for (Index c = 0; c < block.cols(); ++c) out << '\t' << block(r, c);
    }
    out << '\n';
  };

  if (model.is_transe()) {
    const TransEParams& p = model.transe();
    for (Index i = 0; i < p.num_entities(); ++i) {
      write_row(model.vocab.entity_name(i), p.entities.row(i));
    }
    for (Index r = 0; r < p.num_relations(); ++r) {
      write_row(model.vocab.relation_name(r), p.relations[r]);
    }
  } else {
    const EmbeddingSpace& s = model.space();
    for (Index i = 0; i < s.num_entities(); ++i) {
      write_row(model.vocab.entity_name(i), s.entity_table().row(i));
    }
    for (Index r = 0; r < s.num_relations(); ++r) {
      write_row(model.vocab.relation_name(r), s.relation(r));
    }
  }
}

}  // namespace kge
