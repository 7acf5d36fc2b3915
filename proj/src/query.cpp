#include "rem/query.hpp"

#include <algorithm>
#include <map>

#include "rem/error.hpp"

namespace rem {

auto ConjunctiveQuery::find_variable(std::string_view name) const -> std::optional<VarId> {
  for (VarId v = 0; v < variables.size(); ++v) {
    if (variables[v].name == name) return v;
  }
  return std::nullopt;
}

auto ConjunctiveQuery::head_names() const -> std::vector<std::string> {
  std::vector<std::string> names;
  names.reserve(head.size());
  for (auto v : head) names.push_back(variables[v].name);
  return names;
}

auto ConjunctiveQuery::occurrences(VarId var) const -> std::size_t {
  return static_cast<std::size_t>(std::count_if(body.begin(), body.end(), [&](const Atom &a) {
    return std::find(a.args.begin(), a.args.end(), var) != a.args.end();
  }));
}

auto ConjunctiveQuery::is_head(VarId var) const -> bool {
  return std::find(head.begin(), head.end(), var) != head.end();
}

void ConjunctiveQuery::validate() const {
  for (const auto &atom : body) {
    if (atom.args.empty()) throw Error("atom '" + atom.symbol + "' has no columns");
    for (auto v : atom.args) {
      if (v >= variables.size()) throw Error("atom '" + atom.symbol + "' refers to unknown variable");
    }
  }
  for (std::size_t i = 0; i < head.size(); ++i) {
    if (head[i] >= variables.size()) throw Error("head refers to unknown variable");
    if (std::find(head.begin(), head.begin() + static_cast<std::ptrdiff_t>(i), head[i]) !=
        head.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw Error("head variable '" + variables[head[i]].name + "' repeated");
    }
    if (occurrences(head[i]) == 0) throw Error("head variable '" + variables[head[i]].name + "' not in body");
  }
  for (VarId v = 0; v < variables.size(); ++v) {
    if (occurrences(v) == 0) throw Error("variable '" + variables[v].name + "' not in body");
  }
}

auto ConjunctiveQuery::to_string() const -> std::string {
  std::string out = "Q(";
  for (std::size_t i = 0; i < head.size(); ++i) out += (i ? ", " : "") + variables[head[i]].name;
  out += ") <- ";
  for (std::size_t a = 0; a < body.size(); ++a) {
    out += (a ? ", " : "") + body[a].symbol + "(";
    for (std::size_t i = 0; i < body[a].args.size(); ++i) out += (i ? ", " : "") + variables[body[a].args[i]].name;
    out += ")";
  }
  return out;
}

auto make_query(const std::vector<std::string> &head,
                const std::vector<std::pair<std::string, std::vector<std::string>>> &body) -> ConjunctiveQuery {
  ConjunctiveQuery q;
  auto intern = [&](const std::string &name) {
    if (auto v = q.find_variable(name)) return *v;
    auto role = std::find(head.begin(), head.end(), name) != head.end() ? VarRole::Pattern : VarRole::Auxiliary;
    q.variables.push_back({name, role});
    return static_cast<VarId>(q.variables.size() - 1);
  };
  for (const auto &[symbol, args] : body) {
    Atom atom{symbol, {}};
    for (const auto &a : args) atom.args.push_back(intern(a));
    q.body.push_back(std::move(atom));
  }
  for (const auto &h : head) q.head.push_back(intern(h));
  q.validate();
  return q;
}

namespace {

class Compiler {
 public:
  auto root(const Pattern &p, std::string root_name) -> VarId {
    if (p.is_var()) throw Error("cannot compile bare-variable pattern " + p.to_string());
    roots_.push_back(new_var(std::move(root_name), VarRole::Root));
    unnest(p, roots_.back());
    return roots_.back();
  }

  auto finish() -> ConjunctiveQuery {
    query_.head = roots_;
    query_.head.insert(query_.head.end(), pattern_vars_.begin(), pattern_vars_.end());
    query_.validate();
    return std::move(query_);
  }

 private:
  auto new_var(std::string name, VarRole role) -> VarId {
    query_.variables.push_back({std::move(name), role});
    return static_cast<VarId>(query_.variables.size() - 1);
  }

  auto pattern_var(const std::string &name) -> VarId {
    auto full = "?" + name;
    if (auto v = query_.find_variable(full)) return *v;
    auto v = new_var(full, VarRole::Pattern);
    pattern_vars_.push_back(v);
    return v;
  }

  // Emits R_f(self, v_1, ..., v_k) ahead of the children's atoms.
  void unnest(const Pattern &p, VarId self) {
    ++preorder_;
    check_arity(p);
    auto slot = query_.body.size();
    query_.body.push_back(Atom{p.name(), {self}});
    for (const auto &child : p.children()) {
      VarId v;
      if (child.is_var()) {
        v = pattern_var(child.name());
      } else {
        v = new_var("x" + std::to_string(preorder_), VarRole::Auxiliary);
        unnest(child, v);
      }
      query_.body[slot].args.push_back(v);
    }
  }

  void check_arity(const Pattern &p) {
    auto [it, inserted] = arity_.try_emplace(p.name(), p.children().size());
    if (!inserted && it->second != p.children().size()) {
      throw ArityError("symbol '" + p.name() + "' used with " + std::to_string(it->second) + " and " +
                       std::to_string(p.children().size()) + " arguments");
    }
  }

  ConjunctiveQuery query_;
  std::vector<VarId> roots_;
  std::vector<VarId> pattern_vars_;
  std::map<std::string, std::size_t> arity_;
  std::size_t preorder_ = 0;
};

}  // namespace

auto compile(const Pattern &p) -> ConjunctiveQuery {
  Compiler c;
  c.root(p, "root");
  return c.finish();
}

auto compile_multi(std::span<const Pattern> patterns) -> ConjunctiveQuery {
  if (patterns.empty()) throw Error("empty multi-pattern");
  Compiler c;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    c.root(patterns[i], i == 0 ? "root" : "root_" + std::to_string(i + 1));
  }
  return c.finish();
}

auto equivalent_modulo_aux(const ConjunctiveQuery &a, const ConjunctiveQuery &b) -> bool {
  if (a.variables.size() != b.variables.size() || a.body.size() != b.body.size()) return false;
  if (a.head_names() != b.head_names()) return false;

  std::map<VarId, VarId> forward;
  std::map<VarId, VarId> backward;
  auto match = [&](VarId va, VarId vb) {
    const auto &x = a.variables[va];
    const auto &y = b.variables[vb];
    if (x.role != y.role) return false;
    if (x.role != VarRole::Auxiliary) return x.name == y.name;
    auto [fi, fnew] = forward.try_emplace(va, vb);
    auto [bi, bnew] = backward.try_emplace(vb, va);
    return fi->second == vb && bi->second == va;
  };
  for (std::size_t i = 0; i < a.body.size(); ++i) {
    const auto &x = a.body[i];
    const auto &y = b.body[i];
    if (x.symbol != y.symbol || x.args.size() != y.args.size()) return false;
    for (std::size_t j = 0; j < x.args.size(); ++j) {
      if (!match(x.args[j], y.args[j])) return false;
    }
  }
  return true;
}

}  // namespace rem
