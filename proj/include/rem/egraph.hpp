#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <absl/container/flat_hash_map.h>

namespace rem {

/// Dense identifier of an e-class. Valid iff value < number of ids ever created.
struct EClassId {
  std::uint32_t value = 0;

  constexpr EClassId() = default;
  constexpr explicit EClassId(std::uint32_t v) : value(v) {}

  constexpr auto operator<=>(const EClassId &) const = default;

  template <typename H>
  friend auto AbslHashValue(H h, EClassId id) -> H {
    return H::combine(std::move(h), id.value);
  }
};

struct SymbolId {
  std::uint32_t value = 0;

  constexpr SymbolId() = default;
  constexpr explicit SymbolId(std::uint32_t v) : value(v) {}

  constexpr auto operator<=>(const SymbolId &) const = default;

  template <typename H>
  friend auto AbslHashValue(H h, SymbolId id) -> H {
    return H::combine(std::move(h), id.value);
  }
};

/// Registry of function symbols and their arities. An arity is fixed by the
/// first registration of a name; later registrations must agree.
class SymbolTable {
 public:
  /// Registers `name` with `arity`, or checks it against the existing entry.
  /// Throws ArityError on disagreement.
  auto intern(std::string_view name, std::size_t arity) -> SymbolId;

  [[nodiscard]] auto lookup(std::string_view name) const -> std::optional<SymbolId>;
  [[nodiscard]] auto name(SymbolId id) const -> const std::string &;
  [[nodiscard]] auto arity(SymbolId id) const -> std::size_t;
  [[nodiscard]] auto contains(SymbolId id) const -> bool { return id.value < names_.size(); }
  [[nodiscard]] auto size() const -> std::size_t { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::vector<std::size_t> arities_;
  absl::flat_hash_map<std::string, SymbolId> by_name_;
};

/// A function symbol applied to e-class ids.
struct ENode {
  SymbolId symbol;
  std::vector<EClassId> children;

  friend auto operator==(const ENode &, const ENode &) -> bool = default;
  friend auto operator<=>(const ENode &, const ENode &) = default;

  template <typename H>
  friend auto AbslHashValue(H h, const ENode &n) -> H {
    return H::combine(std::move(h), n.symbol, n.children);
  }
};

class UnionFind {
 public:
  auto make_set() -> EClassId;

  /// Representative lookup without mutation; union-by-size keeps paths short.
  [[nodiscard]] auto find(EClassId id) const -> EClassId;
  auto find_compress(EClassId id) -> EClassId;

  /// Links the two roots; returns the surviving root. Both must be roots.
  auto link(EClassId a, EClassId b) -> EClassId;

  [[nodiscard]] auto size() const -> std::size_t { return parent_.size(); }
  [[nodiscard]] auto set_size(EClassId root) const -> std::uint32_t { return size_[root.value]; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

/**
 * Hash-consed e-graph with deferred congruence restoration.
 *
 * merge() only records the merged class on a worklist; rebuild() restores the
 * hashcons and congruence invariants to a fixpoint. Between rebuilds the
 * structure is single-writer; after rebuild() it can be read concurrently.
 */
class EGraph {
 public:
  struct EClass {
    /// Sorted by (symbol, children) and duplicate free after rebuild().
    std::vector<ENode> nodes;
    /// (node as stored in the hashcons, class that contains it) for every
    /// node that has this class as a child.
    std::vector<std::pair<ENode, EClassId>> parents;
  };

  auto symbols() -> SymbolTable & { return symbols_; }
  [[nodiscard]] auto symbols() const -> const SymbolTable & { return symbols_; }
  auto intern(std::string_view name, std::size_t arity) -> SymbolId { return symbols_.intern(name, arity); }

  /// Inserts `node` (children may be stale) or returns the class that already
  /// contains its canonical form.
  auto add(ENode node) -> EClassId;
  auto add(std::string_view symbol, std::vector<EClassId> children = {}) -> EClassId;

  /// Union of two classes; returns the new canonical id.
  auto merge(EClassId a, EClassId b) -> EClassId;

  [[nodiscard]] auto find(EClassId id) const -> EClassId;

  /// Restores congruence closure; returns the number of hashcons repairs.
  auto rebuild() -> std::size_t;

  [[nodiscard]] auto canonicalize(ENode node) const -> ENode;
  [[nodiscard]] auto lookup(const ENode &node) const -> std::optional<EClassId>;

  [[nodiscard]] auto is_clean() const -> bool { return pending_.empty(); }
  [[nodiscard]] auto num_ids() const -> std::size_t { return uf_.size(); }
  [[nodiscard]] auto num_classes() const -> std::size_t { return num_classes_; }
  /// Number of stored e-nodes; exact after rebuild(), an upper bound before.
  [[nodiscard]] auto num_nodes() const -> std::size_t { return num_nodes_; }

  /// Canonical class ids in increasing order.
  [[nodiscard]] auto class_ids() const -> std::vector<EClassId>;
  [[nodiscard]] auto eclass(EClassId id) const -> const EClass &;
  [[nodiscard]] auto nodes(EClassId id) const -> std::span<const ENode> { return eclass(id).nodes; }

  /// The `symbol`-application nodes of a class. Requires a clean e-graph.
  [[nodiscard]] auto nodes_with_symbol(EClassId id, SymbolId symbol) const -> std::span<const ENode>;

  /// Node that created id i, for every id i, in creation order.
  [[nodiscard]] auto creation_log() const -> const std::vector<ENode> & { return created_; }

  /// Bumped on every mutation; used to invalidate derived databases.
  [[nodiscard]] auto version() const -> std::uint64_t { return version_; }

  /// Checks hashcons functionality, canonicality and congruence; returns a
  /// description of the first violation, or nullopt.
  [[nodiscard]] auto check_invariants() const -> std::optional<std::string>;

 private:
  void check_id(EClassId id) const;
  void repair(EClassId id, std::size_t &repairs);
  void canonicalize_classes();

  SymbolTable symbols_;
  UnionFind uf_;
  std::vector<EClass> classes_;
  absl::flat_hash_map<ENode, EClassId> hashcons_;
  std::vector<EClassId> pending_;
  std::vector<ENode> created_;
  std::size_t num_classes_ = 0;
  std::size_t num_nodes_ = 0;
  std::uint64_t version_ = 0;
};

}  // namespace rem

template <>
struct std::hash<rem::EClassId> {
  auto operator()(rem::EClassId id) const noexcept -> std::size_t { return std::hash<std::uint32_t>{}(id.value); }
};
