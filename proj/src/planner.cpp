#include "rem/planner.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>

#include "rem/error.hpp"

namespace rem {

namespace {

auto count_in_atom(const Atom &atom, VarId v) -> std::size_t {
  return static_cast<std::size_t>(std::count(atom.args.begin(), atom.args.end(), v));
}

// Index of the single atom mentioning v, if v is mentioned by exactly one atom
// exactly once.
auto sole_atom(const ConjunctiveQuery &q, VarId v) -> std::optional<std::size_t> {
  std::optional<std::size_t> found;
  for (std::size_t a = 0; a < q.body.size(); ++a) {
    auto n = count_in_atom(q.body[a], v);
    if (n == 0) continue;
    if (n > 1 || found) return std::nullopt;
    found = a;
  }
  return found;
}

// Output of compile(): has a root, and no pattern variable in an id column.
auto is_compiled_shape(const ConjunctiveQuery &q) -> bool {
  auto has_root = std::any_of(q.variables.begin(), q.variables.end(),
                              [](const QueryVariable &v) { return v.role == VarRole::Root; });
  return has_root && std::all_of(q.body.begin(), q.body.end(), [&](const Atom &a) {
    return q.variables[a.args[0]].role != VarRole::Pattern;
  });
}

// Longest chain of functional dependencies (children -> class id) leading to
// each variable. Zero everywhere when the dependency graph is cyclic, which
// cannot happen for compiled patterns.
auto fd_depths(const ConjunctiveQuery &q, const Database &db) -> std::vector<std::size_t> {
  const auto n = q.variables.size();
  std::vector<std::vector<std::size_t>> determining(n);
  for (std::size_t a = 0; a < q.body.size(); ++a) {
    const auto *r = db.find(q.body[a].symbol);
    if (r != nullptr && r->has_id_dependency()) determining[q.body[a].args[0]].push_back(a);
  }

  constexpr auto kUnvisited = std::numeric_limits<std::size_t>::max();
  constexpr auto kVisiting = kUnvisited - 1;
  std::vector<std::size_t> depth(n, kUnvisited);
  bool cyclic = false;
  auto visit = [&](auto &&self, VarId v) -> std::size_t {
    if (depth[v] == kVisiting) {
      cyclic = true;
      return 0;
    }
    if (depth[v] != kUnvisited) return depth[v];
    depth[v] = kVisiting;
    std::size_t best = determining[v].empty() ? 0 : kUnvisited;
    for (auto a : determining[v]) {
      const auto &args = q.body[a].args;
      std::size_t d = 0;
      for (std::size_t i = 1; i < args.size(); ++i) d = std::max(d, self(self, args[i]) + 1);
      best = std::min(best, d);
    }
    depth[v] = best;
    return best;
  };
  for (VarId v = 0; v < n; ++v) visit(visit, v);

  if (cyclic) {
    if (is_compiled_shape(q)) throw std::logic_error("cyclic functional dependencies in compiled query");
    std::fill(depth.begin(), depth.end(), 0);
  }
  return depth;
}

}  // namespace

auto VariableOrdering::group_of(std::size_t num_vars) const -> std::vector<std::size_t> {
  std::vector<std::size_t> pos(num_vars, std::numeric_limits<std::size_t>::max());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (auto v : groups[g]) {
      if (v < num_vars) pos[v] = g;
    }
  }
  return pos;
}

auto VariableOrdering::to_string(const ConjunctiveQuery &q) const -> std::string {
  std::string out = "[";
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (g > 0) out += ", ";
    if (groups[g].size() > 1) out += "(";
    for (std::size_t i = 0; i < groups[g].size(); ++i) out += (i ? " " : "") + q.variables[groups[g][i]].name;
    if (groups[g].size() > 1) out += ")";
  }
  return out + "]";
}

auto plan_stats(const ConjunctiveQuery &q, const Database &db) -> PlanStats {
  const auto n = q.variables.size();
  PlanStats stats;
  stats.occurrences.assign(n, 0);
  stats.min_relation_size.assign(n, std::numeric_limits<std::size_t>::max());
  stats.first_occurrence.assign(n, std::numeric_limits<std::size_t>::max());

  std::size_t position = 0;
  for (const auto &atom : q.body) {
    const auto &r = db.relation(atom.symbol);
    if (r.width() != atom.args.size()) {
      throw ArityError("atom '" + atom.symbol + "' has " + std::to_string(atom.args.size()) +
                       " columns, relation has " + std::to_string(r.width()));
    }
    for (std::size_t i = 0; i < atom.args.size(); ++i, ++position) {
      auto v = atom.args[i];
      stats.first_occurrence[v] = std::min(stats.first_occurrence[v], position);
      if (std::find(atom.args.begin(), atom.args.begin() + static_cast<std::ptrdiff_t>(i), v) !=
          atom.args.begin() + static_cast<std::ptrdiff_t>(i)) {
        continue;
      }
      ++stats.occurrences[v];
      stats.min_relation_size[v] = std::min(stats.min_relation_size[v], r.size());
    }
  }
  stats.fd_depth = fd_depths(q, db);
  return stats;
}

auto plan(const ConjunctiveQuery &q, const Database &db) -> VariableOrdering {
  q.validate();
  auto stats = plan_stats(q, db);
  std::vector<VarId> order(q.variables.size());
  std::iota(order.begin(), order.end(), VarId{0});
  auto key = [&](VarId v) {
    return std::make_tuple(std::numeric_limits<std::size_t>::max() - stats.occurrences[v], stats.min_relation_size[v],
                           stats.fd_depth[v], stats.first_occurrence[v]);
  };
  std::sort(order.begin(), order.end(), [&](VarId a, VarId b) { return key(a) < key(b); });

  VariableOrdering ordering;
  std::vector<std::size_t> batch_of_atom(q.body.size(), std::numeric_limits<std::size_t>::max());
  for (auto v : order) {
    auto atom = stats.occurrences[v] == 1 ? sole_atom(q, v) : std::nullopt;
    if (!atom) {
      ordering.groups.push_back({v});
      continue;
    }
    auto &slot = batch_of_atom[*atom];
    if (slot == std::numeric_limits<std::size_t>::max()) {
      slot = ordering.groups.size();
      ordering.groups.emplace_back();
    }
    ordering.groups[slot].push_back(v);
  }

  // Batched variables keep the column order of their atom.
  for (std::size_t a = 0; a < q.body.size(); ++a) {
    auto slot = batch_of_atom[a];
    if (slot == std::numeric_limits<std::size_t>::max()) continue;
    const auto &args = q.body[a].args;
    std::sort(ordering.groups[slot].begin(), ordering.groups[slot].end(), [&](VarId x, VarId y) {
      return std::find(args.begin(), args.end(), x) < std::find(args.begin(), args.end(), y);
    });
  }
  return ordering;
}

void validate_ordering(const ConjunctiveQuery &q, const VariableOrdering &ordering) {
  std::vector<int> seen(q.variables.size(), 0);
  for (const auto &group : ordering.groups) {
    if (group.empty()) throw InvalidOrdering("empty variable group");
    for (auto v : group) {
      if (v >= q.variables.size()) throw InvalidOrdering("ordering refers to an unknown variable");
      if (seen[v]++) throw InvalidOrdering("variable '" + q.variables[v].name + "' ordered twice");
    }
    if (group.size() == 1) continue;
    std::optional<std::size_t> atom;
    for (auto v : group) {
      auto sole = sole_atom(q, v);
      if (!sole || (atom && *atom != *sole)) {
        throw InvalidOrdering("batched group " + ordering.to_string(q) +
                              " must hold variables occurring once, all in the same atom");
      }
      atom = sole;
    }
  }
  for (VarId v = 0; v < q.variables.size(); ++v) {
    if (!seen[v]) throw InvalidOrdering("variable '" + q.variables[v].name + "' missing from ordering");
  }
}

auto parse_ordering(const ConjunctiveQuery &q, std::string_view text) -> VariableOrdering {
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  auto split = [](std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
      if (i == s.size() || s[i] == sep) {
        parts.push_back(s.substr(start, i - start));
        start = i + 1;
      }
    }
    return parts;
  };

  VariableOrdering ordering;
  for (auto group_text : split(text, ',')) {
    VariableGroup group;
    for (auto name : split(group_text, '+')) {
      name = trim(name);
      auto v = q.find_variable(name);
      if (!v) throw InvalidOrdering("unknown variable '" + std::string(name) + "' in ordering");
      group.push_back(*v);
    }
    ordering.groups.push_back(std::move(group));
  }
  validate_ordering(q, ordering);
  return ordering;
}

auto required_permutations(const ConjunctiveQuery &q, const VariableOrdering &ordering) -> std::vector<TrieLayout> {
  auto group = ordering.group_of(q.variables.size());
  std::vector<TrieLayout> layouts;
  layouts.reserve(q.body.size());
  for (const auto &atom : q.body) {
    std::vector<std::uint32_t> cols(atom.args.size());
    std::iota(cols.begin(), cols.end(), 0U);
    auto rank = [&](std::uint32_t c) {
      auto v = atom.args[c];
      const auto &members = ordering.groups[group[v]];
      auto within = static_cast<std::size_t>(std::find(members.begin(), members.end(), v) - members.begin());
      return std::make_tuple(group[v], within, c);
    };
    std::sort(cols.begin(), cols.end(), [&](auto a, auto b) { return rank(a) < rank(b); });

    TrieLayout layout;
    layout.columns = cols;
    for (std::size_t i = 0; i < cols.size();) {
      auto g = group[atom.args[cols[i]]];
      std::uint32_t width = 1;
      if (ordering.groups[g].size() > 1) {
        while (i + width < cols.size() && group[atom.args[cols[i + width]]] == g) ++width;
      }
      layout.widths.push_back(width);
      i += width;
    }
    layouts.push_back(std::move(layout));
  }
  return layouts;
}

}  // namespace rem
