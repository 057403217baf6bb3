#pragma once

#include <filesystem>
#include <variant>

#include "kge/embedding.hpp"
#include "kge/eval.hpp"
#include "kge/trainer.hpp"
#include "kge/vocabulary.hpp"

namespace kge {

/// A trained model: the kind tag, its parameters, and the vocabulary the
/// parameters were trained over.
struct Model {
  ModelKind kind = ModelKind::EnMd;
  std::variant<EmbeddingSpace, TransEParams> params{
      EmbeddingSpace(1, 1, 1, RelationKind::Diagonal)};
  Vocabulary vocab;

  const EmbeddingSpace& space() const {
    return std::get<EmbeddingSpace>(params);
  }
  EmbeddingSpace& space() { return std::get<EmbeddingSpace>(params); }
  const TransEParams& transe() const {
    return std::get<TransEParams>(params);
  }
  TransEParams& transe() { return std::get<TransEParams>(params); }

  bool is_transe() const { return kind == ModelKind::TransE; }

  Index num_entities() const;
  Index num_relations() const;
  Index dim() const;
  bool all_finite() const;

  Scorer scorer() const;
};

/// Binary embedding container. Header: magic "KGEB", format version u32,
/// kind tag u8, |E| u64, |R| u64, N u64; then little-endian doubles,
/// entities row-major followed by relations row-major.
void write_embeddings(const std::filesystem::path& path, const Model& model);

/// Reads the container; the vocabulary sidecar is read separately.
Model read_embeddings(const std::filesystem::path& path);

/// Model + vocabulary sidecar (`<path>.vocab`).
void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

/// TSV inspection dump: one line per entity/relation, name then values.
void export_text(const std::filesystem::path& path, const Model& model);

}  // namespace kge
