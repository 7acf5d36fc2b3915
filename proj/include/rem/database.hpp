#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rem/egraph.hpp"

namespace rem {

/// Set of fixed-width tuples over e-class ids, stored row-major, sorted and
/// duplicate free. Column 0 is the containing class; columns 1..arity are the
/// children of the e-node the tuple came from.
class Relation {
 public:
  Relation(std::string symbol, std::size_t arity, std::vector<EClassId> rows);

  [[nodiscard]] auto symbol() const -> const std::string & { return symbol_; }
  [[nodiscard]] auto arity() const -> std::size_t { return width_ - 1; }
  [[nodiscard]] auto width() const -> std::size_t { return width_; }
  [[nodiscard]] auto size() const -> std::size_t { return data_.size() / width_; }
  [[nodiscard]] auto empty() const -> bool { return data_.empty(); }
  [[nodiscard]] auto row(std::size_t i) const -> std::span<const EClassId> {
    return {data_.data() + i * width_, width_};
  }
  [[nodiscard]] auto data() const -> const std::vector<EClassId> & { return data_; }

  /// True when columns 1..arity determine column 0 (always the case for
  /// relations extracted from a rebuilt e-graph).
  [[nodiscard]] auto has_id_dependency() const -> bool { return id_dependency_; }

 private:
  std::string symbol_;
  std::size_t width_;
  std::vector<EClassId> data_;
  bool id_dependency_ = true;
};

/// Per-symbol relations over canonical e-class ids. Immutable once handed out;
/// every mutation produces a new version().
class Database {
 public:
  Database();

  void add_relation(Relation relation);
  void set_classes(std::vector<EClassId> classes);

  [[nodiscard]] auto find(std::string_view symbol) const -> const Relation *;
  /// Throws UnknownSymbol.
  [[nodiscard]] auto relation(std::string_view symbol) const -> const Relation &;
  [[nodiscard]] auto relations() const -> const std::map<std::string, Relation, std::less<>> & { return relations_; }

  /// Canonical e-class ids (the domain), sorted.
  [[nodiscard]] auto classes() const -> std::span<const EClassId> { return classes_; }
  [[nodiscard]] auto domain_size() const -> std::size_t { return classes_.size(); }
  [[nodiscard]] auto total_tuples() const -> std::size_t;

  [[nodiscard]] auto version() const -> std::uint64_t { return version_; }

 private:
  std::map<std::string, Relation, std::less<>> relations_;
  std::vector<EClassId> classes_;
  std::uint64_t version_;
};

/// One relation per registered symbol, one tuple per canonical e-node.
/// Throws DirtyEGraph if the e-graph has unions pending a rebuild.
auto egraph_to_database(const EGraph &egraph) -> Database;

}  // namespace rem
