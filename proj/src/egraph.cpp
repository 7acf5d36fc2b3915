#include "rem/egraph.hpp"

#include <algorithm>

#include "rem/error.hpp"

namespace rem {

auto SymbolTable::intern(std::string_view name, std::size_t arity) -> SymbolId {
  if (auto it = by_name_.find(absl::string_view(name.data(), name.size())); it != by_name_.end()) {
    if (arities_[it->second.value] != arity) {
      throw ArityError("symbol '" + std::string(name) + "' has arity " + std::to_string(arities_[it->second.value]) +
                       ", used with " + std::to_string(arity) + " arguments");
    }
    return it->second;
  }
  SymbolId id{static_cast<std::uint32_t>(names_.size())};
  names_.emplace_back(name);
  arities_.push_back(arity);
  by_name_.emplace(std::string(name), id);
  return id;
}

auto SymbolTable::lookup(std::string_view name) const -> std::optional<SymbolId> {
  if (auto it = by_name_.find(absl::string_view(name.data(), name.size())); it != by_name_.end()) return it->second;
  return std::nullopt;
}

auto SymbolTable::name(SymbolId id) const -> const std::string & {
  if (!contains(id)) throw UnknownSymbol("#" + std::to_string(id.value));
  return names_[id.value];
}

auto SymbolTable::arity(SymbolId id) const -> std::size_t {
  if (!contains(id)) throw UnknownSymbol("#" + std::to_string(id.value));
  return arities_[id.value];
}

auto UnionFind::make_set() -> EClassId {
  EClassId id{static_cast<std::uint32_t>(parent_.size())};
  parent_.push_back(id.value);
  size_.push_back(1);
  return id;
}

auto UnionFind::find(EClassId id) const -> EClassId {
  auto v = id.value;
  while (parent_[v] != v) v = parent_[v];
  return EClassId{v};
}

auto UnionFind::find_compress(EClassId id) -> EClassId {
  auto root = find(id).value;
  auto v = id.value;
  while (parent_[v] != root) {
    auto next = parent_[v];
    parent_[v] = root;
    v = next;
  }
  return EClassId{root};
}

auto UnionFind::link(EClassId a, EClassId b) -> EClassId {
  if (a == b) return a;
  // Larger set wins; ties go to the smaller id so merges are reproducible.
  if (size_[a.value] < size_[b.value] || (size_[a.value] == size_[b.value] && b < a)) std::swap(a, b);
  parent_[b.value] = a.value;
  size_[a.value] += size_[b.value];
  return a;
}

void EGraph::check_id(EClassId id) const {
  if (id.value >= uf_.size()) {
    throw InvalidId("e-class id " + std::to_string(id.value) + " out of range (" + std::to_string(uf_.size()) +
                    " ids)");
  }
}

auto EGraph::find(EClassId id) const -> EClassId {
  check_id(id);
  return uf_.find(id);
}

auto EGraph::canonicalize(ENode node) const -> ENode {
  for (auto &child : node.children) child = find(child);
  return node;
}

auto EGraph::lookup(const ENode &node) const -> std::optional<EClassId> {
  auto it = hashcons_.find(canonicalize(node));
  if (it == hashcons_.end()) return std::nullopt;
  return uf_.find(it->second);
}

auto EGraph::add(ENode node) -> EClassId {
  if (!symbols_.contains(node.symbol)) throw UnknownSymbol("#" + std::to_string(node.symbol.value));
  if (symbols_.arity(node.symbol) != node.children.size()) {
    throw ArityError("symbol '" + symbols_.name(node.symbol) + "' has arity " +
                     std::to_string(symbols_.arity(node.symbol)) + ", got " + std::to_string(node.children.size()) +
                     " children");
  }
  for (auto &child : node.children) {
    check_id(child);
    child = uf_.find_compress(child);
  }

  if (auto it = hashcons_.find(node); it != hashcons_.end()) return uf_.find(it->second);

  auto id = uf_.make_set();
  classes_.push_back(EClass{{node}, {}});
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    auto child = node.children[i];
    if (std::find(node.children.begin(), node.children.begin() + static_cast<std::ptrdiff_t>(i), child) !=
        node.children.begin() + static_cast<std::ptrdiff_t>(i)) {
      continue;
    }
    classes_[child.value].parents.emplace_back(node, id);
  }
  hashcons_.emplace(node, id);
  created_.push_back(std::move(node));
  ++num_classes_;
  ++num_nodes_;
  ++version_;
  return id;
}

auto EGraph::add(std::string_view symbol, std::vector<EClassId> children) -> EClassId {
  auto sym = symbols_.intern(symbol, children.size());
  return add(ENode{sym, std::move(children)});
}

auto EGraph::merge(EClassId a, EClassId b) -> EClassId {
  check_id(a);
  check_id(b);
  a = uf_.find_compress(a);
  b = uf_.find_compress(b);
  if (a == b) return a;

  auto root = uf_.link(a, b);
  auto other = root == a ? b : a;
  auto &from = classes_[other.value];
  auto &into = classes_[root.value];
  into.nodes.insert(into.nodes.end(), std::make_move_iterator(from.nodes.begin()),
                    std::make_move_iterator(from.nodes.end()));
  into.parents.insert(into.parents.end(), std::make_move_iterator(from.parents.begin()),
                      std::make_move_iterator(from.parents.end()));
  from = EClass{};

  pending_.push_back(root);
  --num_classes_;
  ++version_;
  return root;
}

void EGraph::repair(EClassId id, std::size_t &repairs) {
  id = uf_.find_compress(id);
  auto parents = std::exchange(classes_[id.value].parents, {});

  for (auto &[node, owner] : parents) {
    hashcons_.erase(node);
    for (auto &child : node.children) child = uf_.find_compress(child);
    owner = uf_.find_compress(owner);
    hashcons_.insert_or_assign(node, owner);
    ++repairs;
  }

  // Parents that became equal after canonicalization are congruent.
  std::sort(parents.begin(), parents.end());
  std::vector<std::pair<ENode, EClassId>> unique;
  unique.reserve(parents.size());
  for (auto &entry : parents) {
    if (!unique.empty() && unique.back().first == entry.first) {
      auto merged = merge(unique.back().second, entry.second);
      unique.back().second = merged;
      hashcons_.insert_or_assign(unique.back().first, merged);
      continue;
    }
    unique.push_back(std::move(entry));
  }

  auto &target = classes_[uf_.find_compress(id).value].parents;
  target.insert(target.end(), std::make_move_iterator(unique.begin()), std::make_move_iterator(unique.end()));
}

// Parent lists may hold a node in a form older than its hashcons key, so
// repair() can leave stale keys behind; the table is rebuilt from the classes.
void EGraph::canonicalize_classes() {
  num_nodes_ = 0;
  hashcons_.clear();
  for (std::uint32_t i = 0; i < classes_.size(); ++i) {
    if (uf_.find(EClassId{i}).value != i) continue;
    auto &nodes = classes_[i].nodes;
    for (auto &node : nodes) {
      for (auto &child : node.children) child = uf_.find_compress(child);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    num_nodes_ += nodes.size();
    for (const auto &node : nodes) hashcons_.emplace(node, EClassId{i});
  }
}

auto EGraph::rebuild() -> std::size_t {
  if (pending_.empty()) return 0;
  std::size_t repairs = 0;
  while (!pending_.empty()) {
    auto todo = std::exchange(pending_, {});
    for (auto &id : todo) id = uf_.find_compress(id);
    std::sort(todo.begin(), todo.end());
    todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
    for (auto id : todo) repair(id, repairs);
  }
  canonicalize_classes();
  ++version_;
  return repairs;
}

auto EGraph::class_ids() const -> std::vector<EClassId> {
  std::vector<EClassId> ids;
  ids.reserve(num_classes_);
  for (std::uint32_t i = 0; i < classes_.size(); ++i) {
    if (uf_.find(EClassId{i}).value == i) ids.emplace_back(i);
  }
  return ids;
}

auto EGraph::eclass(EClassId id) const -> const EClass & { return classes_[find(id).value]; }

auto EGraph::nodes_with_symbol(EClassId id, SymbolId symbol) const -> std::span<const ENode> {
  if (!is_clean()) throw DirtyEGraph("nodes_with_symbol requires a rebuilt e-graph");
  const auto &nodes = eclass(id).nodes;
  auto lo = std::lower_bound(nodes.begin(), nodes.end(), symbol,
                             [](const ENode &n, SymbolId s) { return n.symbol < s; });
  auto hi = std::upper_bound(lo, nodes.end(), symbol, [](SymbolId s, const ENode &n) { return s < n.symbol; });
  return {lo, hi};
}

auto EGraph::check_invariants() const -> std::optional<std::string> {
  if (!is_clean()) return "pending unions";
  std::size_t total = 0;
  for (auto id : class_ids()) {
    for (const auto &node : classes_[id.value].nodes) {
      ++total;
      if (canonicalize(node) != node) return "non-canonical node in class " + std::to_string(id.value);
      auto it = hashcons_.find(node);
      if (it == hashcons_.end()) return "node missing from hashcons in class " + std::to_string(id.value);
      if (uf_.find(it->second) != id) {
        return "hashcons maps a node of class " + std::to_string(id.value) + " to class " +
               std::to_string(uf_.find(it->second).value);
      }
    }
  }
  if (total != num_nodes_) return "node count mismatch";
  for (const auto &[node, owner] : hashcons_) {
    if (canonicalize(node) != node) return "stale hashcons key";
    const auto &nodes = classes_[uf_.find(owner).value].nodes;
    if (!std::binary_search(nodes.begin(), nodes.end(), node)) return "hashcons entry not stored in its class";
  }
  return std::nullopt;
}

}  // namespace rem
