#include "rem/pattern.hpp"

#include <algorithm>

namespace rem {

auto Pattern::var(std::string name) -> Pattern {
  Pattern p;
  p.is_var_ = true;
  p.name_ = std::move(name);
  return p;
}

auto Pattern::app(std::string symbol, std::vector<Pattern> children) -> Pattern {
  Pattern p;
  p.name_ = std::move(symbol);
  p.children_ = std::move(children);
  return p;
}

auto Pattern::is_ground() const -> bool {
  if (is_var_) return false;
  return std::all_of(children_.begin(), children_.end(), [](const Pattern &c) { return c.is_ground(); });
}

auto Pattern::size() const -> std::size_t {
  if (is_var_) return 0;
  std::size_t n = 1;
  for (const auto &c : children_) n += c.size();
  return n;
}

auto Pattern::depth() const -> std::size_t {
  if (is_var_) return 0;
  std::size_t d = 0;
  for (const auto &c : children_) d = std::max(d, c.depth());
  return d + 1;
}

auto Pattern::variables() const -> std::vector<std::string> {
  std::vector<std::string> out;
  auto walk = [&](auto &&self, const Pattern &p) -> void {
    if (p.is_var_) {
      if (std::find(out.begin(), out.end(), p.name_) == out.end()) out.push_back(p.name_);
      return;
    }
    for (const auto &c : p.children_) self(self, c);
  };
  walk(walk, *this);
  return out;
}

auto Pattern::to_string() const -> std::string {
  if (is_var_) return "?" + name_;
  if (children_.empty()) return name_;
  std::string out = "(" + name_;
  for (const auto &c : children_) out += " " + c.to_string();
  return out + ")";
}

auto classify(const Pattern &p) -> PatternShape {
  if (p.is_var()) return PatternShape::BareVariable;
  bool flat = std::all_of(p.children().begin(), p.children().end(), [](const Pattern &c) { return c.is_var(); });
  return flat ? PatternShape::NonNested : PatternShape::Nested;
}

auto to_string(PatternShape shape) -> const char * {
  switch (shape) {
    case PatternShape::BareVariable:
      return "bare-variable";
    case PatternShape::NonNested:
      return "non-nested";
    case PatternShape::Nested:
      return "nested";
  }
  return "?";
}

auto match_head(const Pattern &p) -> std::vector<std::string> {
  std::vector<std::string> head{"root"};
  for (auto &v : p.variables()) head.push_back("?" + v);
  return head;
}

}  // namespace rem
