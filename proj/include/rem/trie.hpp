#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "rem/database.hpp"

namespace rem {

/// Column order of a relation inside a trie, plus how many consecutive columns
/// share one trie level (more than one only for batched variable groups).
struct TrieLayout {
  std::vector<std::uint32_t> columns;
  std::vector<std::uint32_t> widths;

  static auto identity(std::size_t width) -> TrieLayout;

  friend auto operator<=>(const TrieLayout &, const TrieLayout &) = default;
  friend auto operator==(const TrieLayout &, const TrieLayout &) -> bool = default;

  [[nodiscard]] auto to_string() const -> std::string;
};

/**
 * Immutable nested-map index over one relation under one layout.
 *
 * Nodes of level L are identified by the entry of level L-1 that leads to
 * them (the root is node 0 of level 0). The entries of a node are a
 * contiguous range, so the entry index at level L is the child node id at
 * level L+1. Keys of large width-1 nodes are hash indexed; small nodes are
 * scanned.
 */
class Trie {
 public:
  static constexpr std::uint32_t kRoot = 0;
  static constexpr std::uint32_t kNoEntry = UINT32_MAX;
  static constexpr std::uint32_t kScanLimit = 8;

  [[nodiscard]] auto layout() const -> const TrieLayout & { return layout_; }
  [[nodiscard]] auto depth() const -> std::size_t { return levels_.size(); }
  [[nodiscard]] auto width(std::size_t level) const -> std::uint32_t { return levels_[level].width; }

  [[nodiscard]] auto begin(std::size_t level, std::uint32_t node) const -> std::uint32_t {
    return levels_[level].offsets[node];
  }
  [[nodiscard]] auto end(std::size_t level, std::uint32_t node) const -> std::uint32_t {
    return levels_[level].offsets[node + 1];
  }
  [[nodiscard]] auto node_size(std::size_t level, std::uint32_t node) const -> std::uint32_t {
    return end(level, node) - begin(level, node);
  }

  [[nodiscard]] auto key(std::size_t level, std::uint32_t entry) const -> EClassId {
    return levels_[level].keys[entry];
  }
  [[nodiscard]] auto key_tuple(std::size_t level, std::uint32_t entry) const -> std::span<const EClassId> {
    const auto &l = levels_[level];
    return {l.keys.data() + static_cast<std::size_t>(entry) * l.width, l.width};
  }

  /// Entry of `node` whose (width-1) key is `value`, or kNoEntry.
  [[nodiscard]] auto find(std::size_t level, std::uint32_t node, EClassId value) const -> std::uint32_t;

  /// Keys of a width-1 node, in increasing order.
  [[nodiscard]] auto keys(std::size_t level, std::uint32_t node) const -> std::vector<EClassId>;

  [[nodiscard]] auto num_tuples() const -> std::size_t;
  /// Every root-to-leaf path, in layout column order.
  [[nodiscard]] auto tuples() const -> std::vector<std::vector<EClassId>>;

 private:
  friend auto build_trie(const Relation &relation, const TrieLayout &layout) -> Trie;

  struct Level {
    std::uint32_t width = 1;
    std::vector<EClassId> keys;
    std::vector<std::uint32_t> offsets;
    absl::flat_hash_map<std::uint64_t, std::uint32_t> index;
  };

  TrieLayout layout_;
  std::vector<Level> levels_;
};

/// Throws InvalidOrdering if `layout` is not a permutation of the relation's
/// columns partitioned into nonempty levels.
auto build_trie(const Relation &relation, const TrieLayout &layout) -> Trie;

/// Memoizes tries by (symbol, layout) for one database version at a time.
class TrieCache {
 public:
  struct Entry {
    std::shared_ptr<const Trie> trie;
    std::uint64_t build_ns = 0;  ///< zero on a cache hit
  };

  /// Throws UnknownSymbol if the database has no such relation.
  auto get(const Database &db, std::string_view symbol, const TrieLayout &layout) -> Entry;

  void clear();
  [[nodiscard]] auto size() const -> std::size_t;
  [[nodiscard]] auto builds() const -> std::size_t;
  [[nodiscard]] auto total_build_ns() const -> std::uint64_t;

 private:
  mutable std::mutex mutex_;
  std::uint64_t version_ = 0;
  std::map<std::pair<std::string, TrieLayout>, std::shared_ptr<const Trie>, std::less<>> tries_;
  std::size_t builds_ = 0;
  std::uint64_t total_build_ns_ = 0;
};

}  // namespace rem
