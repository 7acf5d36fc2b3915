#include "rem/trie.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "rem/error.hpp"

namespace rem {

namespace {

auto index_key(std::uint32_t node, EClassId value) -> std::uint64_t {
  return (static_cast<std::uint64_t>(node) << 32) | value.value;
}

}  // namespace

auto TrieLayout::identity(std::size_t width) -> TrieLayout {
  TrieLayout layout;
  layout.columns.resize(width);
  std::iota(layout.columns.begin(), layout.columns.end(), 0U);
  layout.widths.assign(width, 1);
  return layout;
}

auto TrieLayout::to_string() const -> std::string {
  std::string out = "[";
  std::size_t c = 0;
  for (std::size_t l = 0; l < widths.size(); ++l) {
    if (l > 0) out += ", ";
    if (widths[l] > 1) out += "(";
    for (std::uint32_t i = 0; i < widths[l]; ++i, ++c) {
      if (i > 0) out += " ";
      out += std::to_string(columns[c]);
    }
    if (widths[l] > 1) out += ")";
  }
  return out + "]";
}

auto Trie::find(std::size_t level, std::uint32_t node, EClassId value) const -> std::uint32_t {
  const auto &l = levels_[level];
  auto lo = l.offsets[node];
  auto hi = l.offsets[node + 1];
  if (hi - lo <= kScanLimit) {
    for (auto e = lo; e < hi; ++e) {
      if (l.keys[e] == value) return e;
    }
    return kNoEntry;
  }
  auto it = l.index.find(index_key(node, value));
  return it == l.index.end() ? kNoEntry : it->second;
}

auto Trie::keys(std::size_t level, std::uint32_t node) const -> std::vector<EClassId> {
  std::vector<EClassId> out;
  for (auto e = begin(level, node); e < end(level, node); ++e) out.push_back(key(level, e));
  return out;
}

auto Trie::num_tuples() const -> std::size_t { return levels_.empty() ? 0 : levels_.back().keys.size() / levels_.back().width; }

auto Trie::tuples() const -> std::vector<std::vector<EClassId>> {
  std::vector<std::vector<EClassId>> out;
  std::vector<EClassId> path;
  auto walk = [&](auto &&self, std::size_t level, std::uint32_t node) -> void {
    if (level == levels_.size()) {
      out.push_back(path);
      return;
    }
    for (auto e = begin(level, node); e < end(level, node); ++e) {
      auto k = key_tuple(level, e);
      path.insert(path.end(), k.begin(), k.end());
      self(self, level + 1, e);
      path.resize(path.size() - k.size());
    }
  };
  if (!levels_.empty()) walk(walk, 0, kRoot);
  return out;
}

auto build_trie(const Relation &relation, const TrieLayout &layout) -> Trie {
  const auto width = relation.width();
  {
    auto sorted = layout.columns;
    std::sort(sorted.begin(), sorted.end());
    bool permutation = sorted.size() == width;
    for (std::size_t i = 0; permutation && i < width; ++i) permutation = sorted[i] == i;
    auto total = std::accumulate(layout.widths.begin(), layout.widths.end(), std::size_t{0});
    bool levels_ok = total == width && std::find(layout.widths.begin(), layout.widths.end(), 0U) == layout.widths.end();
    if (!permutation || !levels_ok) {
      throw InvalidOrdering("layout " + layout.to_string() + " is not a permutation of the " + std::to_string(width) +
                            " columns of '" + relation.symbol() + "'");
    }
  }

  const auto n = relation.size();
  std::vector<EClassId> permuted(n * width);
  for (std::size_t r = 0; r < n; ++r) {
    auto row = relation.row(r);
    for (std::size_t c = 0; c < width; ++c) permuted[r * width + c] = row[layout.columns[c]];
  }
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0U);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::lexicographical_compare(permuted.begin() + a * width, permuted.begin() + (a + 1) * width,
                                        permuted.begin() + b * width, permuted.begin() + (b + 1) * width);
  });

  Trie trie;
  trie.layout_ = layout;
  const auto depth = layout.widths.size();
  trie.levels_.resize(depth);
  std::vector<std::size_t> start(depth);
  for (std::size_t l = 0, s = 0; l < depth; ++l) {
    trie.levels_[l].width = layout.widths[l];
    start[l] = s;
    s += layout.widths[l];
  }

  // parents[l][e]: node (entry of level l-1) owning entry e of level l.
  std::vector<std::vector<std::uint32_t>> parents(depth);
  const EClassId *prev = nullptr;
  for (auto r : order) {
    const EClassId *row = permuted.data() + static_cast<std::size_t>(r) * width;
    std::size_t diff = 0;
    if (prev != nullptr) {
      while (diff < depth && std::equal(row + start[diff], row + start[diff] + layout.widths[diff],
                                        prev + start[diff])) {
        ++diff;
      }
    }
    for (auto l = diff; l < depth; ++l) {
      auto &level = trie.levels_[l];
      auto parent = l == 0 ? Trie::kRoot : static_cast<std::uint32_t>(parents[l - 1].size() - 1);
      parents[l].push_back(parent);
      level.keys.insert(level.keys.end(), row + start[l], row + start[l] + layout.widths[l]);
    }
    prev = row;
  }

  for (std::size_t l = 0; l < depth; ++l) {
    auto &level = trie.levels_[l];
    std::size_t nodes = l == 0 ? 1 : parents[l - 1].size();
    level.offsets.assign(nodes + 1, 0);
    for (auto p : parents[l]) ++level.offsets[p + 1];
    std::partial_sum(level.offsets.begin(), level.offsets.end(), level.offsets.begin());
    if (level.width != 1) continue;
    for (std::uint32_t node = 0; node < nodes; ++node) {
      if (level.offsets[node + 1] - level.offsets[node] <= Trie::kScanLimit) continue;
      for (auto e = level.offsets[node]; e < level.offsets[node + 1]; ++e) {
        level.index.emplace(index_key(node, level.keys[e]), e);
      }
    }
  }
  return trie;
}

auto TrieCache::get(const Database &db, std::string_view symbol, const TrieLayout &layout) -> Entry {
  std::lock_guard lock(mutex_);
  if (db.version() != version_) {
    tries_.clear();
    version_ = db.version();
  }
  auto key = std::make_pair(std::string(symbol), layout);
  if (auto it = tries_.find(key); it != tries_.end()) return {it->second, 0};

  const auto &relation = db.relation(symbol);
  auto t0 = std::chrono::steady_clock::now();
  auto trie = std::make_shared<const Trie>(build_trie(relation, layout));
  auto elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0);
  // A measured duration of zero would read as a cache hit.
  auto ns = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(elapsed.count()));
  tries_.emplace(std::move(key), trie);
  ++builds_;
  total_build_ns_ += ns;
  return {std::move(trie), ns};
}

void TrieCache::clear() {
  std::lock_guard lock(mutex_);
  tries_.clear();
  builds_ = 0;
  total_build_ns_ = 0;
}

auto TrieCache::size() const -> std::size_t {
  std::lock_guard lock(mutex_);
  return tries_.size();
}

auto TrieCache::builds() const -> std::size_t {
  std::lock_guard lock(mutex_);
  return builds_;
}

auto TrieCache::total_build_ns() const -> std::uint64_t {
  std::lock_guard lock(mutex_);
  return total_build_ns_;
}

}  // namespace rem
