#include "rem/sexpr.hpp"

#include <cctype>

#include "rem/error.hpp"

namespace rem {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  auto all() -> std::vector<SExpr> {
    std::vector<SExpr> out;
    while (skip(), pos_ < text_.size()) out.push_back(read());
    return out;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  auto read() -> SExpr {
    SExpr e;
    e.offset = pos_;
    if (text_[pos_] == ')') throw ParseError("unexpected ')'", pos_);
    if (text_[pos_] == '(') {
      e.is_list = true;
      ++pos_;
      while (true) {
        skip();
        if (pos_ >= text_.size()) throw ParseError("unclosed '('", e.offset);
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')' && text_[pos_] != ';') {
      e.atom += text_[pos_++];
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

auto only_one(std::string_view text) -> SExpr {
  auto all = parse_sexprs(text);
  if (all.empty()) throw ParseError("empty input", 0);
  if (all.size() > 1) throw ParseError("trailing input", all[1].offset);
  return std::move(all.front());
}

}  // namespace

auto parse_sexprs(std::string_view text) -> std::vector<SExpr> { return Reader(text).all(); }

auto to_pattern(const SExpr &e, SymbolTable &symbols) -> Pattern {
  if (!e.is_list) {
    if (e.atom.front() == '?') {
      if (e.atom.size() == 1) throw ParseError("variable without a name", e.offset);
      return Pattern::var(e.atom.substr(1));
    }
    symbols.intern(e.atom, 0);
    return Pattern::app(e.atom);
  }
  if (e.items.empty()) throw ParseError("empty application", e.offset);
  const auto &head = e.items.front();
  if (head.is_list || head.atom.front() == '?') throw ParseError("expected a function symbol", head.offset);
  std::vector<Pattern> children;
  for (std::size_t i = 1; i < e.items.size(); ++i) children.push_back(to_pattern(e.items[i], symbols));
  symbols.intern(head.atom, children.size());
  return Pattern::app(head.atom, std::move(children));
}

auto parse_pattern(std::string_view text, SymbolTable &symbols) -> Pattern { return to_pattern(only_one(text), symbols); }

auto parse_pattern(std::string_view text) -> Pattern {
  SymbolTable symbols;
  return parse_pattern(text, symbols);
}

auto parse_multi_pattern(std::string_view text, SymbolTable &symbols) -> std::vector<Pattern> {
  auto e = only_one(text);
  std::vector<Pattern> out;
  if (e.is_list && !e.items.empty() && e.items.front().is_list) {
    for (const auto &item : e.items) out.push_back(to_pattern(item, symbols));
  } else {
    out.push_back(to_pattern(e, symbols));
  }
  return out;
}

auto parse_multi_pattern(std::string_view text) -> std::vector<Pattern> {
  SymbolTable symbols;
  return parse_multi_pattern(text, symbols);
}

auto add_term(EGraph &egraph, const Pattern &term) -> EClassId {
  if (term.is_var()) throw Error("term contains variable ?" + term.name());
  std::vector<EClassId> children;
  children.reserve(term.children().size());
  for (const auto &c : term.children()) children.push_back(add_term(egraph, c));
  egraph.intern(term.name(), children.size());
  return egraph.add(term.name(), std::move(children));
}

}  // namespace rem
