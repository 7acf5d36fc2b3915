#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rem/bench.hpp"
#include "rem/ematch.hpp"
#include "rem/error.hpp"
#include "rem/rewrite.hpp"
#include "rem/serialize.hpp"
#include "rem/sexpr.hpp"
#include "rem/workloads.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitDisagree = 3;

auto split_list(const std::string &text) -> std::vector<std::string> {
  std::vector<std::string> out;
  std::string item;
  for (char c : text + ",") {
    if (c == ',') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else if (c != ' ') {
      item += c;
    }
  }
  return out;
}

// Patterns are read against the e-graph's symbol table so arity mismatches
// surface as parse errors.
auto symbols_of(const rem::EGraph &eg) -> rem::SymbolTable { return eg.symbols(); }

auto cmd_match(const std::string &egraph_path, const std::string &pattern, const std::string &engine,
               const std::string &ordering, bool stats) -> int {
  auto eg = rem::load_egraph(egraph_path);
  auto symbols = symbols_of(eg);
  auto patterns = rem::parse_multi_pattern(pattern, symbols);
  rem::MatchOptions options;
  options.engine = rem::parse_engine(engine);
  if (!ordering.empty()) options.ordering = ordering;
  rem::RelationalMatcher matcher(eg);
  auto result = matcher.match(patterns, options);
  result.normalize();
  for (std::size_t i = 0; i < result.size(); ++i) std::cout << result.format_row(i) << '\n';
  if (stats) {
    const auto &c = result.counters;
    std::cerr << "matches=" << result.size() << " intersection_steps=" << c.intersection_steps
              << " values_enumerated=" << c.values_enumerated << " candidates=" << c.candidates << '\n';
  }
  return kExitOk;
}

auto cmd_bench(const std::string &egraph_path, const std::string &patterns_path, const std::string &engines,
               std::size_t repeat, const std::string &csv_path) -> int {
  auto eg = rem::load_egraph(egraph_path);
  auto symbols = symbols_of(eg);
  std::vector<rem::Pattern> patterns;
  for (const auto &e : rem::parse_sexprs(rem::read_file(patterns_path))) patterns.push_back(rem::to_pattern(e, symbols));
  std::vector<rem::Engine> selected;
  for (const auto &name : split_list(engines)) selected.push_back(rem::parse_engine(name));
  auto records = rem::bench(eg, patterns, selected, repeat);
  if (csv_path.empty()) {
    rem::write_csv(std::cout, records);
  } else {
    std::ofstream out(csv_path);
    if (!out) throw rem::Error("cannot write " + csv_path);
    rem::write_csv(out, records);
  }
  return kExitOk;
}

auto cmd_saturate(const std::string &terms_path, const std::string &rules_path, std::size_t max_nodes,
                  std::size_t max_iters, const std::string &engine, const std::string &out_path) -> int {
  rem::SymbolTable symbols;
  auto terms = rem::parse_terms(rem::read_file(terms_path), symbols);
  auto rules = rem::parse_rules(rem::read_file(rules_path), symbols);
  rem::EGraph eg;
  for (const auto &t : terms) rem::add_term(eg, t);
  auto report = rem::saturate(eg, rules, {max_nodes, max_iters}, rem::parse_engine(engine));
  rem::save_egraph(out_path, eg);
  std::cerr << "iterations=" << report.iterations << " applications=" << report.applications
            << " nodes=" << eg.num_nodes() << " classes=" << eg.num_classes() << " stop=" << report.stop_reason
            << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Relational e-matching over e-graphs"};
  app.require_subcommand(1);

  std::string egraph_path;
  std::string pattern;
  std::string engine = "gj";
  std::string ordering;
  bool stats = false;
  auto *match = app.add_subcommand("match", "Print the matches of a pattern, one substitution per line");
  match->add_option("--egraph", egraph_path, "E-graph JSON file")->required();
  match->add_option("--pattern", pattern, "Pattern or multi-pattern s-expression")->required();
  match->add_option("--engine", engine, "gj (generic join) or em (backtracking)")->check(CLI::IsMember({"gj", "em"}));
  match->add_option("--ordering", ordering, "Variable ordering, e.g. ?a,x1,root ('+' batches)");
  match->add_flag("--stats", stats, "Print counters to stderr");

  std::string patterns_path;
  std::string engines = "gj,em";
  std::size_t repeat = 10;
  std::string csv_path;
  auto *bench = app.add_subcommand("bench", "Time engines on a pattern list");
  bench->add_option("--egraph", egraph_path, "E-graph JSON file")->required();
  bench->add_option("--patterns", patterns_path, "File of pattern s-expressions")->required();
  bench->add_option("--engines", engines, "Comma-separated engines");
  bench->add_option("--repeat", repeat, "Runs per (pattern, engine); the minimum is kept")->check(CLI::PositiveNumber);
  bench->add_option("--csv", csv_path, "Output CSV (default stdout)");

  std::size_t n = 0;
  std::string out_path;
  auto *gen = app.add_subcommand("gen-fgn", "Write the f/g example e-graph with N constants");
  gen->add_option("N", n, "Number of constants")->required()->check(CLI::PositiveNumber);
  gen->add_option("--out", out_path, "Output JSON file")->required();

  std::string terms_path;
  std::string rules_path;
  std::size_t max_nodes = 0;
  std::size_t max_iters = 1000;
  auto *sat = app.add_subcommand("saturate", "Run equality saturation and write the e-graph");
  sat->add_option("--terms", terms_path, "File of ground terms")->required();
  sat->add_option("--rules", rules_path, "Rule file, 'name: lhs => rhs' per line")->required();
  sat->add_option("--max-nodes", max_nodes, "Stop before exceeding this many e-nodes")->required();
  sat->add_option("--max-iters", max_iters, "Iteration limit");
  sat->add_option("--engine", engine, "Matching engine")->check(CLI::IsMember({"gj", "em"}));
  sat->add_option("--out", out_path, "Output JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*match) return cmd_match(egraph_path, pattern, engine, ordering, stats);
    if (*bench) return cmd_bench(egraph_path, patterns_path, engines, repeat, csv_path);
    if (*gen) {
      rem::save_egraph(out_path, rem::gen_fgn(n));
      return kExitOk;
    }
    if (*sat) return cmd_saturate(terms_path, rules_path, max_nodes, max_iters, engine, out_path);
  } catch (const rem::EngineDisagreement &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDisagree;
  } catch (const rem::ParseError &e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const rem::ArityError &e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const rem::UnknownSymbol &e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
