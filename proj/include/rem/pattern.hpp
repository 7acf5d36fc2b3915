#pragma once

#include <string>
#include <vector>

namespace rem {

/// A term with variables: either a variable or a symbol applied to
/// sub-patterns. A ground term is a pattern without variables.
class Pattern {
 public:
  static auto var(std::string name) -> Pattern;
  static auto app(std::string symbol, std::vector<Pattern> children = {}) -> Pattern;

  [[nodiscard]] auto is_var() const -> bool { return is_var_; }
  /// Variable name (without '?') or function symbol.
  [[nodiscard]] auto name() const -> const std::string & { return name_; }
  [[nodiscard]] auto children() const -> const std::vector<Pattern> & { return children_; }

  [[nodiscard]] auto is_ground() const -> bool;
  /// Number of App nodes.
  [[nodiscard]] auto size() const -> std::size_t;
  [[nodiscard]] auto depth() const -> std::size_t;
  /// Distinct variables in first-occurrence (pre-order, left to right) order.
  [[nodiscard]] auto variables() const -> std::vector<std::string>;

  /// S-expression form, e.g. "(f ?a (g ?a))".
  [[nodiscard]] auto to_string() const -> std::string;

  friend auto operator==(const Pattern &, const Pattern &) -> bool = default;

 private:
  bool is_var_ = false;
  std::string name_;
  std::vector<Pattern> children_;
};

enum class PatternShape {
  BareVariable,  ///< p = ?x
  NonNested,     ///< one App whose children are all variables
  Nested,
};

auto classify(const Pattern &p) -> PatternShape;
auto to_string(PatternShape shape) -> const char *;

/// True for shapes answered by a scan instead of a join.
inline auto is_degenerate(const Pattern &p) -> bool { return classify(p) != PatternShape::Nested; }

/// Head of the match set of a single pattern: "root" followed by the pattern's
/// variables as "?name".
auto match_head(const Pattern &p) -> std::vector<std::string>;

}  // namespace rem
