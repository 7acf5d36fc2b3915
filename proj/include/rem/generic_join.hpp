#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rem/database.hpp"
#include "rem/pattern.hpp"
#include "rem/planner.hpp"
#include "rem/query.hpp"
#include "rem/trie.hpp"

namespace rem {

/// Head variable name -> class id.
using Substitution = std::map<std::string, EClassId, std::less<>>;

struct Counters {
  std::uint64_t intersection_steps = 0;  ///< keys examined while intersecting
  std::uint64_t values_enumerated = 0;   ///< values surviving an intersection
  std::uint64_t leaves_emitted = 0;      ///< complete bindings reached
  std::uint64_t candidates = 0;          ///< e-nodes visited (backtracking engine)
  /// Largest number of values accepted at one level for one prefix, per group.
  std::vector<std::uint64_t> max_domain;
};

/// Rows of class ids under a fixed head, the common output of every engine.
class MatchSet {
 public:
  MatchSet() = default;
  explicit MatchSet(std::vector<std::string> head);

  [[nodiscard]] auto head() const -> const std::vector<std::string> & { return head_; }
  [[nodiscard]] auto width() const -> std::size_t { return head_.size(); }
  [[nodiscard]] auto size() const -> std::size_t { return rows_; }
  [[nodiscard]] auto empty() const -> bool { return rows_ == 0; }
  [[nodiscard]] auto row(std::size_t i) const -> std::span<const EClassId> {
    return {data_.data() + i * width(), width()};
  }
  [[nodiscard]] auto substitution(std::size_t i) const -> Substitution;
  /// Column index of a head variable, or -1.
  [[nodiscard]] auto column(std::string_view name) const -> std::ptrdiff_t;

  void push_row(std::span<const EClassId> row);
  void reserve(std::size_t rows) { data_.reserve(rows * width()); }
  /// Sorts rows lexicographically and drops duplicates.
  void normalize();
  [[nodiscard]] auto is_normalized() const -> bool;
  /// Same head and the same set of rows.
  [[nodiscard]] auto same_rows_as(const MatchSet &other) const -> bool;
  /// Rows present in exactly one of the two sets, printed one per line.
  [[nodiscard]] auto symmetric_difference(const MatchSet &other) const -> std::vector<std::string>;
  /// "root=3 ?a=1"
  [[nodiscard]] auto format_row(std::size_t i) const -> std::string;

  Counters counters;

 private:
  std::vector<std::string> head_;
  std::vector<EClassId> data_;
  std::size_t rows_ = 0;
};

/// A node of one trie level, for intersect().
struct TrieNodeRef {
  const Trie *trie;
  std::size_t level;
  std::uint32_t node;
};

/// Keys present in every node (width-1 levels), sorted. Iterates the smallest
/// node and probes the others.
auto intersect(std::span<const TrieNodeRef> nodes) -> std::vector<EClassId>;

/// Generic join with a fixed global ordering. Tries come from the cache under
/// required_permutations(q, ordering). Throws InvalidOrdering.
auto eval(const ConjunctiveQuery &q, const Database &db, const VariableOrdering &ordering, TrieCache &cache)
    -> MatchSet;

/// Same, over tries supplied per atom (built under required_permutations).
/// Throws MissingTrie if one is null or has the wrong layout.
auto eval(const ConjunctiveQuery &q, const VariableOrdering &ordering,
          std::span<const std::shared_ptr<const Trie>> tries) -> MatchSet;

/// Scan answer for NonNested and BareVariable patterns, with head
/// match_head(p). Repeated variables filter tuples; a bare variable matches
/// every class. Throws ArityError if the relation width disagrees.
auto eval_nonnested(const Pattern &p, const Database &db) -> MatchSet;

}  // namespace rem
