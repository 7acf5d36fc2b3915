#include "rem/rewrite.hpp"

#include <algorithm>

#include "rem/error.hpp"
#include "rem/sexpr.hpp"

namespace rem {

auto make_rule(std::string name, Pattern lhs, Pattern rhs) -> RewriteRule {
  if (lhs.is_var()) throw Error("rule '" + name + "': left side is a bare variable");
  auto bound = lhs.variables();
  for (const auto &v : rhs.variables()) {
    if (std::find(bound.begin(), bound.end(), v) == bound.end()) {
      throw Error("rule '" + name + "': ?" + v + " does not occur on the left side");
    }
  }
  return RewriteRule{std::move(name), std::move(lhs), std::move(rhs)};
}

auto parse_rules(std::string_view text, SymbolTable &symbols) -> std::vector<RewriteRule> {
  std::vector<RewriteRule> rules;
  std::size_t line_start = 0;
  while (line_start < text.size()) {
    auto line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    auto line = text.substr(line_start, line_end - line_start);
    auto offset = line_start;
    line_start = line_end + 1;

    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#' || line[first] == ';') continue;
    auto colon = line.find(':');
    auto arrow = line.find("=>");
    if (colon == std::string_view::npos || arrow == std::string_view::npos || arrow < colon) {
      throw ParseError("expected 'name: lhs => rhs'", offset + first);
    }
    auto name = std::string(line.substr(first, colon - first));
    while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) name.pop_back();
    if (name.empty()) throw ParseError("rule without a name", offset + first);

    auto parse_side = [&](std::size_t from, std::size_t to) {
      try {
        return parse_pattern(line.substr(from, to - from), symbols);
      } catch (const ParseError &e) {
        throw ParseError("rule '" + name + "': malformed pattern", offset + from + e.offset());
      }
    };
    auto lhs = parse_side(colon + 1, arrow);
    auto rhs = parse_side(arrow + 2, line.size());
    rules.push_back(make_rule(std::move(name), std::move(lhs), std::move(rhs)));
  }
  return rules;
}

auto parse_terms(std::string_view text, SymbolTable &symbols) -> std::vector<Pattern> {
  std::vector<Pattern> terms;
  for (const auto &e : parse_sexprs(text)) {
    auto p = to_pattern(e, symbols);
    if (!p.is_ground()) throw ParseError("term contains a variable", e.offset);
    terms.push_back(std::move(p));
  }
  return terms;
}

auto instantiate(EGraph &egraph, const Pattern &rhs, const Substitution &sigma) -> EClassId {
  if (rhs.is_var()) {
    auto it = sigma.find("?" + rhs.name());
    if (it == sigma.end()) throw Error("unbound variable ?" + rhs.name());
    return it->second;
  }
  std::vector<EClassId> children;
  children.reserve(rhs.children().size());
  for (const auto &c : rhs.children()) children.push_back(instantiate(egraph, c, sigma));
  egraph.intern(rhs.name(), children.size());
  return egraph.add(rhs.name(), std::move(children));
}

namespace {

// Like instantiate, reading variables from a match row.
auto instantiate_row(EGraph &egraph, const Pattern &rhs, const MatchSet &matches, std::size_t row) -> EClassId {
  if (rhs.is_var()) return matches.row(row)[static_cast<std::size_t>(matches.column("?" + rhs.name()))];
  std::vector<EClassId> children;
  children.reserve(rhs.children().size());
  for (const auto &c : rhs.children()) children.push_back(instantiate_row(egraph, c, matches, row));
  egraph.intern(rhs.name(), children.size());
  return egraph.add(rhs.name(), std::move(children));
}

}  // namespace

auto saturate(EGraph &egraph, const std::vector<RewriteRule> &rules, const SaturationLimits &limits, Engine engine)
    -> SaturationReport {
  SaturationReport report;
  egraph.rebuild();
  RelationalMatcher matcher(egraph);
  MatchOptions options;
  options.engine = engine;

  while (true) {
    if (report.iterations >= limits.max_iterations) {
      report.stop_reason = "iteration-limit";
      return report;
    }
    std::vector<MatchSet> matches;
    matches.reserve(rules.size());
    for (const auto &rule : rules) {
      auto m = matcher.match(rule.lhs, options);
      m.normalize();
      matches.push_back(std::move(m));
    }

    ++report.iterations;
    const auto nodes_before = egraph.num_nodes();
    const auto classes_before = egraph.num_classes();
    bool limit_hit = false;
    for (std::size_t r = 0; r < rules.size() && !limit_hit; ++r) {
      const auto growth = rules[r].rhs.size();
      for (std::size_t i = 0; i < matches[r].size(); ++i) {
        if (egraph.num_nodes() + growth > limits.max_nodes) {
          // num_nodes() overcounts until congruent duplicates are merged.
          const auto before = egraph.num_nodes();
          egraph.rebuild();
          const auto freed = before - egraph.num_nodes();
          if (egraph.num_nodes() + growth > limits.max_nodes || freed * 100 < limits.max_nodes) {
            limit_hit = true;
            break;
          }
        }
        auto id = instantiate_row(egraph, rules[r].rhs, matches[r], i);
        egraph.merge(matches[r].row(i)[0], id);
        ++report.applications;
      }
    }
    egraph.rebuild();
    if (limit_hit) {
      report.stop_reason = "node-limit";
      return report;
    }
    if (egraph.num_nodes() == nodes_before && egraph.num_classes() == classes_before) {
      report.stop_reason = "saturated";
      return report;
    }
  }
}

}  // namespace rem
