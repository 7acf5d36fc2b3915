#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "rem/database.hpp"
#include "rem/egraph.hpp"
#include "rem/generic_join.hpp"
#include "rem/pattern.hpp"
#include "rem/planner.hpp"
#include "rem/query.hpp"
#include "rem/trie.hpp"

namespace rem {

enum class Engine {
  GenericJoin,
  Backtracking,
};

auto parse_engine(std::string_view name) -> Engine;  ///< "gj" or "em"
auto to_string(Engine engine) -> const char *;

struct MatchOptions {
  Engine engine = Engine::GenericJoin;
  /// Explicit ordering in parse_ordering() syntax; disables the fast path.
  std::optional<std::string> ordering;
  /// Answer NonNested and BareVariable patterns by a scan.
  bool fast_path = true;
};

/**
 * Pattern matching over one e-graph through its relational form. The database
 * is rebuilt when the e-graph's version changes; tries are cached per
 * database.
 */
class RelationalMatcher {
 public:
  explicit RelationalMatcher(const EGraph &egraph) : egraph_(egraph) {}

  auto match(const Pattern &p, const MatchOptions &options = {}) -> MatchSet;
  auto match(std::span<const Pattern> multi, const MatchOptions &options = {}) -> MatchSet;
  /// Generic join of an arbitrary query (planned unless `ordering` is given).
  auto match_query(const ConjunctiveQuery &q, const std::optional<std::string> &ordering = std::nullopt) -> MatchSet;

  /// Current database; throws DirtyEGraph if the e-graph needs a rebuild.
  auto database() -> const Database &;
  auto cache() -> TrieCache & { return cache_; }

 private:
  // Empty-result shortcut: some atom's relation is missing or empty.
  auto trivially_empty(const ConjunctiveQuery &q) -> bool;

  const EGraph &egraph_;
  std::unique_ptr<Database> db_;
  std::uint64_t db_egraph_version_ = 0;
  TrieCache cache_;
};

/// One-shot matching; builds the database each call.
auto ematch(const Pattern &p, const EGraph &egraph, const MatchOptions &options = {}) -> MatchSet;
auto ematch(std::span<const Pattern> multi, const EGraph &egraph, const MatchOptions &options = {}) -> MatchSet;

}  // namespace rem
