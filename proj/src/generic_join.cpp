#include "rem/generic_join.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>

#include "rem/error.hpp"

namespace rem {

MatchSet::MatchSet(std::vector<std::string> head) : head_(std::move(head)) {}

auto MatchSet::substitution(std::size_t i) const -> Substitution {
  Substitution s;
  auto r = row(i);
  for (std::size_t c = 0; c < head_.size(); ++c) s.emplace(head_[c], r[c]);
  return s;
}

auto MatchSet::column(std::string_view name) const -> std::ptrdiff_t {
  auto it = std::find(head_.begin(), head_.end(), name);
  return it == head_.end() ? -1 : it - head_.begin();
}

void MatchSet::push_row(std::span<const EClassId> row) {
  assert(row.size() == width());
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

void MatchSet::normalize() {
  const auto w = width();
  if (w == 0) {
    rows_ = std::min<std::size_t>(rows_, 1);
    return;
  }
  std::vector<std::uint32_t> order(rows_);
  std::iota(order.begin(), order.end(), 0U);
  auto less = [&](std::uint32_t a, std::uint32_t b) {
    return std::lexicographical_compare(data_.begin() + a * w, data_.begin() + (a + 1) * w, data_.begin() + b * w,
                                        data_.begin() + (b + 1) * w);
  };
  std::sort(order.begin(), order.end(), less);
  std::vector<EClassId> sorted;
  sorted.reserve(data_.size());
  std::size_t kept = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && !less(order[i - 1], order[i])) continue;
    sorted.insert(sorted.end(), data_.begin() + order[i] * w, data_.begin() + (order[i] + 1) * w);
    ++kept;
  }
  data_ = std::move(sorted);
  rows_ = kept;
}

auto MatchSet::is_normalized() const -> bool {
  for (std::size_t i = 1; i < rows_; ++i) {
    auto a = row(i - 1);
    auto b = row(i);
    if (!std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end())) return false;
  }
  return true;
}

auto MatchSet::same_rows_as(const MatchSet &other) const -> bool {
  if (head_ != other.head_) return false;
  MatchSet a = *this;
  MatchSet b = other;
  a.normalize();
  b.normalize();
  return a.rows_ == b.rows_ && a.data_ == b.data_;
}

auto MatchSet::symmetric_difference(const MatchSet &other) const -> std::vector<std::string> {
  MatchSet a = *this;
  MatchSet b = other;
  a.normalize();
  b.normalize();
  std::vector<std::string> out;
  std::size_t i = 0;
  std::size_t j = 0;
  auto lt = [](std::span<const EClassId> x, std::span<const EClassId> y) {
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  };
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && lt(a.row(i), b.row(j)))) {
      out.push_back("- " + a.format_row(i++));
    } else if (i == a.size() || lt(b.row(j), a.row(i))) {
      out.push_back("+ " + b.format_row(j++));
    } else {
      ++i;
      ++j;
    }
  }
  return out;
}

auto MatchSet::format_row(std::size_t i) const -> std::string {
  std::string out;
  auto r = row(i);
  for (std::size_t c = 0; c < head_.size(); ++c) {
    if (c > 0) out += ' ';
    out += head_[c] + "=" + std::to_string(r[c].value);
  }
  return out;
}

auto intersect(std::span<const TrieNodeRef> nodes) -> std::vector<EClassId> {
  std::vector<EClassId> out;
  if (nodes.empty()) return out;
  auto smallest = std::min_element(nodes.begin(), nodes.end(), [](const TrieNodeRef &a, const TrieNodeRef &b) {
    return a.trie->node_size(a.level, a.node) < b.trie->node_size(b.level, b.node);
  });
  for (auto e = smallest->trie->begin(smallest->level, smallest->node);
       e < smallest->trie->end(smallest->level, smallest->node); ++e) {
    auto value = smallest->trie->key(smallest->level, e);
    bool everywhere = std::all_of(nodes.begin(), nodes.end(), [&](const TrieNodeRef &n) {
      return &n == &*smallest || n.trie->find(n.level, n.node, value) != Trie::kNoEntry;
    });
    if (everywhere) out.push_back(value);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();

// One atom taking part in binding a group: the trie level where the group
// starts in that atom, and how many further levels repeat the same variable.
struct Participant {
  std::uint32_t atom;
  std::uint32_t level;
  std::uint32_t followers;
};

struct GroupPlan {
  std::vector<Participant> participants;
  bool batched = false;
  // For a batched group: the variable bound by each column of its one level.
  std::vector<VarId> columns;
  bool fd_singleton = false;
};

struct Frame {
  std::uint32_t group;
  std::uint32_t lead;  // participant whose node is enumerated
  std::uint32_t cursor;
  std::uint32_t end;
  std::uint64_t accepted = 0;
};

class Join {
 public:
  Join(const ConjunctiveQuery &q, const VariableOrdering &ordering, std::span<const std::shared_ptr<const Trie>> tries,
       const std::vector<bool> &fd_singleton_groups, bool head_determines_all)
      : q_(q), ordering_(ordering) {
    const auto group = ordering.group_of(q.variables.size());
    plans_.resize(ordering.groups.size());
    for (std::size_t g = 0; g < plans_.size(); ++g) {
      plans_[g].batched = ordering.groups[g].size() > 1;
      plans_[g].fd_singleton = g < fd_singleton_groups.size() && fd_singleton_groups[g];
    }
    tries_.reserve(tries.size());
    nodes_.resize(q.body.size());
    for (std::uint32_t a = 0; a < q.body.size(); ++a) {
      const Trie *trie = tries[a].get();
      tries_.push_back(trie);
      nodes_[a].assign(trie->depth() + 1, Trie::kRoot);
      const auto &layout = trie->layout();
      std::size_t col = 0;
      std::uint32_t prev_group = kNone;
      for (std::uint32_t level = 0; level < trie->depth(); ++level) {
        auto v = q.body[a].args[layout.columns[col]];
        auto g = static_cast<std::uint32_t>(group[v]);
        if (plans_[g].batched) {
          for (std::uint32_t i = 0; i < trie->width(level); ++i) plans_[g].columns.push_back(q.body[a].args[layout.columns[col + i]]);
          plans_[g].participants.push_back({a, level, 0});
        } else if (g == prev_group) {
          ++plans_[g].participants.back().followers;
        } else {
          plans_[g].participants.push_back({a, level, 0});
        }
        prev_group = g;
        col += trie->width(level);
      }
    }

    last_head_group_ = -1;
    for (auto v : q.head) last_head_group_ = std::max(last_head_group_, static_cast<std::ptrdiff_t>(group[v]));
    // A non-head variable bound before the last head variable can repeat a
    // head tuple, unless the head determines it.
    for (std::size_t g = 0; g < plans_.size() && static_cast<std::ptrdiff_t>(g) < last_head_group_; ++g) {
      for (auto v : ordering.groups[g]) needs_dedup_ = needs_dedup_ || !q.is_head(v);
    }
    needs_dedup_ = needs_dedup_ && !head_determines_all;
    binding_.assign(q.variables.size(), EClassId{});
  }

  auto run() -> MatchSet {
    MatchSet out(q_.head_names());
    auto &counters = out.counters;
    counters.max_domain.assign(plans_.size(), 0);
    std::vector<EClassId> row(q_.head.size());
    const auto groups = plans_.size();
    const auto keep = static_cast<std::size_t>(last_head_group_ + 1);

    std::vector<Frame> stack;
    stack.reserve(groups);
    if (groups == 0 || !open(0, stack)) return out;
    while (!stack.empty()) {
      auto &f = stack.back();
      if (f.cursor == f.end) {
        close(f, counters);
        stack.pop_back();
        continue;
      }
      auto entry = f.cursor++;
      if (!bind(f, entry, counters)) continue;
      ++f.accepted;
      ++counters.values_enumerated;
      if (f.group + 1 < groups) {
        open(f.group + 1, stack);
        continue;
      }
      ++counters.leaves_emitted;
      for (std::size_t i = 0; i < row.size(); ++i) row[i] = binding_[q_.head[i]];
      out.push_row(row);
      // Only existentially quantified groups below: one witness suffices.
      while (stack.size() > keep) {
        close(stack.back(), counters);
        stack.pop_back();
      }
    }
    if (needs_dedup_) out.normalize();
    return out;
  }

 private:
  auto open(std::uint32_t g, std::vector<Frame> &stack) -> bool {
    const auto &plan = plans_[g];
    std::uint32_t lead = 0;
    std::uint32_t best = kNone;
    for (std::uint32_t i = 0; i < plan.participants.size(); ++i) {
      const auto &p = plan.participants[i];
      auto size = tries_[p.atom]->node_size(p.level, nodes_[p.atom][p.level]);
      if (size < best) {
        best = size;
        lead = i;
      }
    }
    if (best == 0) return false;
    const auto &p = plan.participants[lead];
    const auto *trie = tries_[p.atom];
    auto node = nodes_[p.atom][p.level];
    stack.push_back(Frame{g, lead, trie->begin(p.level, node), trie->end(p.level, node)});
    return true;
  }

  void close(const Frame &f, Counters &counters) const {
    auto &m = counters.max_domain[f.group];
    m = std::max(m, f.accepted);
    assert(!plans_[f.group].fd_singleton || f.accepted <= 1);
  }

  // Descends every participant of f's group with the entry's key; false if
  // some atom lacks it.
  auto bind(const Frame &f, std::uint32_t entry, Counters &counters) -> bool {
    const auto &plan = plans_[f.group];
    ++counters.intersection_steps;
    if (plan.batched) {
      const auto &p = plan.participants[0];
      auto keys = tries_[p.atom]->key_tuple(p.level, entry);
      for (std::size_t i = 0; i < keys.size(); ++i) binding_[plan.columns[i]] = keys[i];
      nodes_[p.atom][p.level + 1] = entry;
      return true;
    }
    const auto &lead = plan.participants[f.lead];
    const auto value = tries_[lead.atom]->key(lead.level, entry);
    for (std::uint32_t i = 0; i < plan.participants.size(); ++i) {
      const auto &p = plan.participants[i];
      const auto *trie = tries_[p.atom];
      auto e = i == f.lead ? entry : trie->find(p.level, nodes_[p.atom][p.level], value);
      for (std::uint32_t k = 1; e != Trie::kNoEntry && k <= p.followers; ++k) e = trie->find(p.level + k, e, value);
      if (e == Trie::kNoEntry) return false;
      nodes_[p.atom][p.level + p.followers + 1] = e;
    }
    binding_[ordering_.groups[f.group][0]] = value;
    return true;
  }

  const ConjunctiveQuery &q_;
  const VariableOrdering &ordering_;
  std::vector<GroupPlan> plans_;
  std::vector<const Trie *> tries_;
  std::vector<std::vector<std::uint32_t>> nodes_;  // nodes_[atom][level]
  std::vector<EClassId> binding_;
  std::ptrdiff_t last_head_group_ = -1;
  bool needs_dedup_ = false;
};

// Groups whose variable is the id column of a functional atom whose other
// columns are all bound earlier: at most one value can survive there.
auto fd_singleton_groups(const ConjunctiveQuery &q, const Database &db, const VariableOrdering &ordering)
    -> std::vector<bool> {
  std::vector<bool> out(ordering.groups.size(), false);
  auto group = ordering.group_of(q.variables.size());
  for (const auto &atom : q.body) {
    const auto *r = db.find(atom.symbol);
    if (r == nullptr || !r->has_id_dependency()) continue;
    auto g = group[atom.args[0]];
    if (ordering.groups[g].size() > 1) continue;
    bool determined = std::all_of(atom.args.begin() + 1, atom.args.end(), [&](VarId v) { return group[v] < g; });
    if (determined) out[g] = true;
  }
  return out;
}

// True if the functional dependencies of the atoms' relations determine every
// variable from the head variables.
auto head_determines_all(const ConjunctiveQuery &q, const Database &db) -> bool {
  std::vector<bool> known(q.variables.size(), false);
  for (auto v : q.head) known[v] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto &atom : q.body) {
      const auto *r = db.find(atom.symbol);
      if (r == nullptr || !r->has_id_dependency() || known[atom.args[0]]) continue;
      if (std::all_of(atom.args.begin() + 1, atom.args.end(), [&](VarId v) { return known[v]; })) {
        known[atom.args[0]] = true;
        changed = true;
      }
    }
  }
  return std::all_of(known.begin(), known.end(), [](bool k) { return k; });
}

auto run_join(const ConjunctiveQuery &q, const VariableOrdering &ordering,
              std::span<const std::shared_ptr<const Trie>> tries, const std::vector<bool> &fd_groups,
              bool determined) -> MatchSet {
  validate_ordering(q, ordering);
  if (tries.size() != q.body.size()) throw MissingTrie("expected one trie per atom");
  auto layouts = required_permutations(q, ordering);
  for (std::size_t a = 0; a < tries.size(); ++a) {
    if (!tries[a]) throw MissingTrie("no trie for atom " + std::to_string(a) + " ('" + q.body[a].symbol + "')");
    if (tries[a]->layout() != layouts[a]) {
      throw MissingTrie("trie for atom " + std::to_string(a) + " has layout " + tries[a]->layout().to_string() +
                        ", ordering needs " + layouts[a].to_string());
    }
  }
  return Join(q, ordering, tries, fd_groups, determined).run();
}

}  // namespace

auto eval(const ConjunctiveQuery &q, const Database &db, const VariableOrdering &ordering, TrieCache &cache)
    -> MatchSet {
  validate_ordering(q, ordering);
  auto layouts = required_permutations(q, ordering);
  std::vector<std::shared_ptr<const Trie>> tries;
  tries.reserve(q.body.size());
  for (std::size_t a = 0; a < q.body.size(); ++a) {
    const auto &r = db.relation(q.body[a].symbol);
    if (r.width() != q.body[a].args.size()) {
      throw ArityError("atom '" + q.body[a].symbol + "' has " + std::to_string(q.body[a].args.size()) +
                       " columns, relation has " + std::to_string(r.width()));
    }
    tries.push_back(cache.get(db, q.body[a].symbol, layouts[a]).trie);
  }
  return run_join(q, ordering, tries, fd_singleton_groups(q, db, ordering), head_determines_all(q, db));
}

auto eval(const ConjunctiveQuery &q, const VariableOrdering &ordering,
          std::span<const std::shared_ptr<const Trie>> tries) -> MatchSet {
  return run_join(q, ordering, tries, {}, false);
}

auto eval_nonnested(const Pattern &p, const Database &db) -> MatchSet {
  MatchSet out(match_head(p));
  if (p.is_var()) {
    out.reserve(db.domain_size());
    for (auto c : db.classes()) {
      EClassId row[2] = {c, c};
      out.push_row(row);
    }
    out.counters.leaves_emitted = out.size();
    return out;
  }
  if (classify(p) != PatternShape::NonNested) throw Error("pattern " + p.to_string() + " is nested");

  const auto *r = db.find(p.name());
  if (r == nullptr) return out;
  if (r->arity() != p.children().size()) {
    throw ArityError("pattern " + p.to_string() + " uses '" + p.name() + "' with " +
                     std::to_string(p.children().size()) + " arguments, relation has " +
                     std::to_string(r->arity()));
  }
  // slot[i]: output column of child i; first[i]: earliest child with the same variable.
  auto vars = p.variables();
  std::vector<std::size_t> slot(p.children().size());
  std::vector<std::size_t> first(p.children().size());
  for (std::size_t i = 0; i < p.children().size(); ++i) {
    const auto &name = p.children()[i].name();
    slot[i] = 1 + static_cast<std::size_t>(std::find(vars.begin(), vars.end(), name) - vars.begin());
    first[i] = i;
    for (std::size_t j = 0; j < i; ++j) {
      if (p.children()[j].name() == name) {
        first[i] = j;
        break;
      }
    }
  }
  std::vector<EClassId> row(out.width());
  for (std::size_t t = 0; t < r->size(); ++t) {
    auto tuple = r->row(t);
    ++out.counters.intersection_steps;
    bool ok = true;
    for (std::size_t i = 0; ok && i < slot.size(); ++i) ok = tuple[1 + i] == tuple[1 + first[i]];
    if (!ok) continue;
    row[0] = tuple[0];
    for (std::size_t i = 0; i < slot.size(); ++i) row[slot[i]] = tuple[1 + i];
    out.push_row(row);
  }
  out.counters.values_enumerated = out.size();
  out.counters.leaves_emitted = out.size();
  return out;
}

}  // namespace rem
