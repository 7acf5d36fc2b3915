#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rem/egraph.hpp"
#include "rem/ematch.hpp"
#include "rem/pattern.hpp"

namespace rem {

struct RewriteRule {
  std::string name;
  Pattern lhs;
  Pattern rhs;
};

/// Validates that rhs variables occur in lhs and that lhs is not a bare
/// variable. Throws Error.
auto make_rule(std::string name, Pattern lhs, Pattern rhs) -> RewriteRule;

/// One rule per line, "name: lhs => rhs"; blank lines and lines starting with
/// '#' or ';' are skipped. Arities are checked against `symbols`.
/// Throws ParseError (offset into `text`) or ArityError.
auto parse_rules(std::string_view text, SymbolTable &symbols) -> std::vector<RewriteRule>;

/// Every top-level expression of `text` as a ground term.
auto parse_terms(std::string_view text, SymbolTable &symbols) -> std::vector<Pattern>;

/// Adds rhs under the substitution (keys "?name") and returns its class.
auto instantiate(EGraph &egraph, const Pattern &rhs, const Substitution &sigma) -> EClassId;

struct SaturationLimits {
  std::size_t max_nodes = 100'000;
  std::size_t max_iterations = 1'000;
};

struct SaturationReport {
  std::size_t iterations = 0;
  std::size_t applications = 0;
  /// "saturated", "node-limit" or "iteration-limit".
  std::string stop_reason;
};

/**
 * Equality saturation: each iteration matches every rule's lhs on the current
 * e-graph, then instantiates the rhs for each match and unions it with the
 * match root, then rebuilds. Stops at a fixpoint, at the iteration limit, or
 * before an application that could push the node count past max_nodes.
 */
auto saturate(EGraph &egraph, const std::vector<RewriteRule> &rules, const SaturationLimits &limits,
              Engine engine = Engine::GenericJoin) -> SaturationReport;

}  // namespace rem
