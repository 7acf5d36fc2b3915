#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rem/egraph.hpp"
#include "rem/pattern.hpp"

namespace rem {

/// Atom or parenthesized list, with the byte offset where it starts.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t offset = 0;
};

/// All top-level expressions of `text`. ';' starts a comment to end of line.
/// Throws ParseError.
auto parse_sexprs(std::string_view text) -> std::vector<SExpr>;

/// Converts an expression to a pattern: "?x" is a variable, any other atom a
/// constant, a list an application. Arities are checked against `symbols`
/// (registering new ones), so they stay consistent across calls.
auto to_pattern(const SExpr &e, SymbolTable &symbols) -> Pattern;

/// Exactly one expression. Throws ParseError or ArityError.
auto parse_pattern(std::string_view text, SymbolTable &symbols) -> Pattern;
auto parse_pattern(std::string_view text) -> Pattern;

/// "((f ?a ?b) (f ?a ?c))": a list whose items are patterns. A plain pattern
/// is accepted as a one-element multi-pattern.
auto parse_multi_pattern(std::string_view text, SymbolTable &symbols) -> std::vector<Pattern>;
auto parse_multi_pattern(std::string_view text) -> std::vector<Pattern>;

/// Inserts a ground pattern into the e-graph; returns its class.
/// Throws Error if the pattern has variables.
auto add_term(EGraph &egraph, const Pattern &term) -> EClassId;

}  // namespace rem
