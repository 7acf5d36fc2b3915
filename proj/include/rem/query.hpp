#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rem/pattern.hpp"

namespace rem {

using VarId = std::uint32_t;

enum class VarRole {
  Root,       ///< class id of a pattern's top-level App
  Pattern,    ///< a pattern variable, named "?name"
  Auxiliary,  ///< class id of a nested App; projected out
};

struct QueryVariable {
  std::string name;
  VarRole role;

  friend auto operator==(const QueryVariable &, const QueryVariable &) -> bool = default;
};

/// One relation occurrence. args[0] binds the class-id column.
struct Atom {
  std::string symbol;
  std::vector<VarId> args;

  friend auto operator==(const Atom &, const Atom &) -> bool = default;
};

/// Q(head) <- body. Variables are referred to by index into `variables`.
struct ConjunctiveQuery {
  std::vector<QueryVariable> variables;
  std::vector<VarId> head;
  std::vector<Atom> body;

  [[nodiscard]] auto find_variable(std::string_view name) const -> std::optional<VarId>;
  [[nodiscard]] auto head_names() const -> std::vector<std::string>;
  /// Number of atoms that mention `var`.
  [[nodiscard]] auto occurrences(VarId var) const -> std::size_t;
  [[nodiscard]] auto is_head(VarId var) const -> bool;

  /// Throws Error when a head variable is missing from the body or an index is
  /// out of range.
  void validate() const;

  /// "Q(root, ?a) <- f(root, ?a, x1), g(x1, ?a)"
  [[nodiscard]] auto to_string() const -> std::string;

  friend auto operator==(const ConjunctiveQuery &, const ConjunctiveQuery &) -> bool = default;
};

/// Builds a query from variable names. Head variables get VarRole::Pattern,
/// the others VarRole::Auxiliary.
auto make_query(const std::vector<std::string> &head,
                const std::vector<std::pair<std::string, std::vector<std::string>>> &body) -> ConjunctiveQuery;

/// Unnests an App pattern into a conjunctive query. The top App binds "root";
/// a nested App with pre-order index k binds the auxiliary "x<k>".
/// Throws ArityError on inconsistent symbol use and Error on a bare variable.
auto compile(const Pattern &p) -> ConjunctiveQuery;

/// Compiles patterns sharing one variable namespace into one query with roots
/// "root", "root_2", ...
auto compile_multi(std::span<const Pattern> patterns) -> ConjunctiveQuery;

/// Structural equality up to a bijective renaming of auxiliary variables.
auto equivalent_modulo_aux(const ConjunctiveQuery &a, const ConjunctiveQuery &b) -> bool;

}  // namespace rem
