#include "rem/baseline.hpp"

#include <algorithm>
#include <optional>

#include "rem/error.hpp"

namespace rem {

namespace {

// Pattern tree with symbols resolved and variables numbered.
struct PNode {
  bool is_var = false;
  std::uint32_t slot = 0;  // variable slot
  SymbolId symbol;
  std::vector<std::uint32_t> children;
};

class Matcher {
 public:
  // Returns nullopt when a symbol of p is unknown to the e-graph (no matches).
  static auto make(const Pattern &p, const EGraph &egraph) -> std::optional<Matcher> {
    Matcher m(egraph);
    if (!m.lower(p)) return std::nullopt;
    m.binding_.assign(m.vars_.size(), std::nullopt);
    return m;
  }

  [[nodiscard]] auto vars() const -> const std::vector<std::string> & { return vars_; }

  void seed(const Substitution &s) {
    std::fill(binding_.begin(), binding_.end(), std::nullopt);
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (auto it = s.find("?" + vars_[i]); it != s.end()) binding_[i] = it->second;
    }
  }

  template <typename Emit>
  void run(EClassId c, Emit &&emit) {
    todo_.assign(1, {0, c});
    step(emit);
  }

  [[nodiscard]] auto binding(std::size_t slot) const -> std::optional<EClassId> { return binding_[slot]; }

  std::uint64_t candidates = 0;

 private:
  explicit Matcher(const EGraph &egraph) : egraph_(egraph) {}

  auto lower(const Pattern &p) -> bool {
    auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    if (p.is_var()) {
      auto it = std::find(vars_.begin(), vars_.end(), p.name());
      nodes_[index].is_var = true;
      nodes_[index].slot = static_cast<std::uint32_t>(it - vars_.begin());
      if (it == vars_.end()) vars_.push_back(p.name());
      return true;
    }
    auto symbol = egraph_.symbols().lookup(p.name());
    if (!symbol) return false;
    if (egraph_.symbols().arity(*symbol) != p.children().size()) {
      throw ArityError("pattern uses '" + p.name() + "' with " + std::to_string(p.children().size()) +
                       " arguments, e-graph has arity " + std::to_string(egraph_.symbols().arity(*symbol)));
    }
    nodes_[index].symbol = *symbol;
    for (const auto &child : p.children()) {
      auto c = static_cast<std::uint32_t>(nodes_.size());
      if (!lower(child)) return false;
      nodes_[index].children.push_back(c);
    }
    return true;
  }

  // Pops one (pattern node, class) obligation, recursing on the rest.
  template <typename Emit>
  void step(Emit &emit) {
    if (todo_.empty()) {
      emit();
      return;
    }
    auto [pi, c] = todo_.back();
    todo_.pop_back();
    const auto &pn = nodes_[pi];
    if (pn.is_var) {
      auto &b = binding_[pn.slot];
      if (!b) {
        b = c;
        step(emit);
        b.reset();
      } else if (*b == c) {
        step(emit);
      }
    } else {
      const auto mark = todo_.size();
      for (const auto &node : egraph_.nodes_with_symbol(c, pn.symbol)) {
        ++candidates;
        for (std::size_t k = pn.children.size(); k-- > 0;) todo_.emplace_back(pn.children[k], node.children[k]);
        step(emit);
        todo_.resize(mark);
      }
    }
    todo_.emplace_back(pi, c);
  }

  const EGraph &egraph_;
  std::vector<PNode> nodes_;
  std::vector<std::string> vars_;
  std::vector<std::optional<EClassId>> binding_;
  std::vector<std::pair<std::uint32_t, EClassId>> todo_;
};

}  // namespace

auto bt_match(const Pattern &p, EClassId c, const std::vector<Substitution> &S, const EGraph &egraph,
              std::uint64_t *candidates) -> std::vector<Substitution> {
  if (!egraph.is_clean()) throw DirtyEGraph("match requires a rebuilt e-graph");
  std::vector<Substitution> out;
  auto m = Matcher::make(p, egraph);
  if (!m) return out;
  for (const auto &sigma : S) {
    m->seed(sigma);
    m->run(egraph.find(c), [&] {
      Substitution extended = sigma;
      for (std::size_t i = 0; i < m->vars().size(); ++i) extended["?" + m->vars()[i]] = *m->binding(i);
      out.push_back(std::move(extended));
    });
  }
  if (candidates != nullptr) *candidates += m->candidates;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

auto bt_ematch_all(const Pattern &p, const EGraph &egraph) -> MatchSet {
  if (!egraph.is_clean()) throw DirtyEGraph("match requires a rebuilt e-graph");
  MatchSet out(match_head(p));
  auto m = Matcher::make(p, egraph);
  if (!m) return out;
  std::vector<EClassId> row(out.width());
  for (auto c : egraph.class_ids()) {
    m->run(c, [&] {
      row[0] = c;
      for (std::size_t i = 0; i < m->vars().size(); ++i) row[1 + i] = *m->binding(i);
      out.push_row(row);
    });
  }
  out.counters.candidates = m->candidates;
  out.counters.leaves_emitted = out.size();
  return out;
}

auto bt_ematch_multi(std::span<const Pattern> patterns, const EGraph &egraph) -> MatchSet {
  std::vector<std::string> head;
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    head.push_back(i == 0 ? "root" : "root_" + std::to_string(i + 1));
    for (auto &v : patterns[i].variables()) {
      if (std::find(vars.begin(), vars.end(), "?" + v) == vars.end()) vars.push_back("?" + v);
    }
  }
  head.insert(head.end(), vars.begin(), vars.end());
  MatchSet out(head);

  std::vector<MatchSet> parts;
  std::uint64_t candidates = 0;
  for (const auto &p : patterns) {
    parts.push_back(bt_ematch_all(p, egraph));
    candidates += parts.back().counters.candidates;
  }

  // Nested loops over the per-pattern results, keeping consistent bindings.
  std::vector<std::optional<EClassId>> binding(head.size());
  auto column_in_head = [&](const std::string &name) {
    return static_cast<std::size_t>(std::find(head.begin(), head.end(), name) - head.begin());
  };
  auto extend = [&](auto &&self, std::size_t i) -> void {
    if (i == parts.size()) {
      std::vector<EClassId> row;
      for (auto &b : binding) row.push_back(*b);
      out.push_row(row);
      return;
    }
    const auto &part = parts[i];
    for (std::size_t r = 0; r < part.size(); ++r) {
      auto saved = binding;
      bool ok = true;
      for (std::size_t c = 0; ok && c < part.width(); ++c) {
        auto col = c == 0 ? i : column_in_head(part.head()[c]);
        auto value = part.row(r)[c];
        if (binding[col] && *binding[col] != value) ok = false;
        binding[col] = value;
      }
      if (ok) self(self, i + 1);
      binding = std::move(saved);
    }
  };
  extend(extend, 0);
  out.normalize();
  out.counters.candidates = candidates;
  return out;
}

auto naive_cq_eval(const ConjunctiveQuery &q, const Database &db, std::uint64_t cap) -> MatchSet {
  q.validate();
  MatchSet out(q.head_names());
  std::vector<const Relation *> relations;
  for (const auto &atom : q.body) {
    const auto &r = db.relation(atom.symbol);
    if (r.width() != atom.args.size()) {
      throw ArityError("atom '" + atom.symbol + "' has " + std::to_string(atom.args.size()) +
                       " columns, relation has " + std::to_string(r.width()));
    }
    relations.push_back(&r);
  }

  // One tuple per atom, in body order; a choice survives if it agrees with
  // the variables bound by earlier atoms.
  std::vector<std::optional<EClassId>> value(q.variables.size());
  std::vector<EClassId> row(q.head.size());
  std::uint64_t visited = 0;
  auto search = [&](auto &&self, std::size_t a) -> void {
    if (a == q.body.size()) {
      for (std::size_t i = 0; i < row.size(); ++i) row[i] = *value[q.head[i]];
      out.push_row(row);
      return;
    }
    const auto &args = q.body[a].args;
    for (std::size_t t = 0; t < relations[a]->size(); ++t) {
      if (++visited > cap) {
        throw SearchSpaceTooLarge("naive evaluation visited more than " + std::to_string(cap) + " assignments");
      }
      auto tuple = relations[a]->row(t);
      auto saved = value;
      bool ok = true;
      for (std::size_t c = 0; ok && c < args.size(); ++c) {
        auto &v = value[args[c]];
        if (v && *v != tuple[c]) ok = false;
        v = tuple[c];
      }
      if (ok) self(self, a + 1);
      value = std::move(saved);
    }
  };
  search(search, 0);
  out.normalize();
  out.counters.values_enumerated = visited;
  return out;
}

}  // namespace rem
