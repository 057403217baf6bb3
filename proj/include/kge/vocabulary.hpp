#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kge/errors.hpp"
#include "kge/types.hpp"

namespace kge {

/// Dense, 0-based, first-appearance-ordered index over entity and
/// relation names. Indices are stable for the lifetime of the object.
class Vocabulary {
 public:
  Index add_entity(const std::string& name) {
    return add(name, entity_names_, entity_index_);
  }
  Index add_relation(const std::string& name) {
    return add(name, relation_names_, relation_index_);
  }

  std::optional<Index> entity_index(std::string_view name) const {
    return find(name, entity_index_);
  }
  std::optional<Index> relation_index(std::string_view name) const {
    return find(name, relation_index_);
  }

  Index require_entity(const std::string& name) const {
    auto idx = entity_index(name);
    if (!idx) throw UnknownSymbolError(name);
    return *idx;
  }
  Index require_relation(const std::string& name) const {
    auto idx = relation_index(name);
    if (!idx) throw UnknownSymbolError(name);
    return *idx;
  }

  const std::string& entity_name(Index i) const { return entity_names_.at(i); }
  const std::string& relation_name(Index i) const {
    return relation_names_.at(i);
  }

  Index num_entities() const {
    return static_cast<Index>(entity_names_.size());
  }
  Index num_relations() const {
    return static_cast<Index>(relation_names_.size());
  }

  const std::vector<std::string>& entity_names() const {
    return entity_names_;
  }
  const std::vector<std::string>& relation_names() const {
    return relation_names_;
  }

 private:
  static Index add(const std::string& name, std::vector<std::string>& names,
                   std::unordered_map<std::string, Index>& index) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    Index id = static_cast<Index>(names.size());
    names.push_back(name);
    index.emplace(name, id);
    return id;
  }

  static std::optional<Index> find(
      std::string_view name,
      const std::unordered_map<std::string, Index>& index) {
    auto it = index.find(std::string(name));
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  std::vector<std::string> entity_names_;
  std::vector<std::string> relation_names_;
  std::unordered_map<std::string, Index> entity_index_;
  std::unordered_map<std::string, Index> relation_index_;
};

}  // namespace kge
