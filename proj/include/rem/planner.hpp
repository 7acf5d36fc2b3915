#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rem/database.hpp"
#include "rem/query.hpp"
#include "rem/trie.hpp"

namespace rem {

/// Variables bound together at one generic-join level.
using VariableGroup = std::vector<VarId>;

struct VariableOrdering {
  std::vector<VariableGroup> groups;

  /// Position of each variable's group, indexed by VarId.
  [[nodiscard]] auto group_of(std::size_t num_vars) const -> std::vector<std::size_t>;
  /// "[?a, x1, (root ?b)]"
  [[nodiscard]] auto to_string(const ConjunctiveQuery &q) const -> std::string;

  friend auto operator==(const VariableOrdering &, const VariableOrdering &) -> bool = default;
};

/// Inputs to the ordering heuristics, indexed by VarId.
struct PlanStats {
  std::vector<std::size_t> occurrences;        ///< atoms mentioning the variable
  std::vector<std::size_t> min_relation_size;  ///< smallest relation among those atoms
  std::vector<std::size_t> fd_depth;           ///< longest chain of determinants below it
  std::vector<std::size_t> first_occurrence;   ///< position of first mention in the body
};

/// Throws UnknownSymbol if an atom's relation is missing, ArityError if an
/// atom's width disagrees with its relation.
auto plan_stats(const ConjunctiveQuery &q, const Database &db) -> PlanStats;

/**
 * Heuristic variable ordering. Variables sort by occurrence count (desc),
 * smallest containing relation (asc), functional-dependency depth (asc) and
 * first occurrence. Variables that occur in a single atom (once) are then
 * batched per atom at the end.
 */
auto plan(const ConjunctiveQuery &q, const Database &db) -> VariableOrdering;

/// Throws InvalidOrdering unless the groups partition the variables and every
/// multi-variable group consists of variables occurring once, in one common atom.
void validate_ordering(const ConjunctiveQuery &q, const VariableOrdering &ordering);

/// Parses "?a,x1,root" (comma separated, '+' joins a batched group), as
/// accepted by the CLI's --ordering flag. The result is validated.
auto parse_ordering(const ConjunctiveQuery &q, std::string_view text) -> VariableOrdering;

/// Trie layout per atom: columns ordered by their variable's group, columns of
/// a batched group sharing one level.
auto required_permutations(const ConjunctiveQuery &q, const VariableOrdering &ordering) -> std::vector<TrieLayout>;

}  // namespace rem
