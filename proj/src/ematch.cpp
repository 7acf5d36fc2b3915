#include "rem/ematch.hpp"

#include "rem/baseline.hpp"
#include "rem/error.hpp"

namespace rem {

auto parse_engine(std::string_view name) -> Engine {
  if (name == "gj") return Engine::GenericJoin;
  if (name == "em") return Engine::Backtracking;
  throw Error("unknown engine '" + std::string(name) + "' (expected gj or em)");
}

auto to_string(Engine engine) -> const char * { return engine == Engine::GenericJoin ? "gj" : "em"; }

auto RelationalMatcher::database() -> const Database & {
  if (!egraph_.is_clean()) throw DirtyEGraph("matching requires a rebuilt e-graph");
  if (!db_ || db_egraph_version_ != egraph_.version()) {
    db_ = std::make_unique<Database>(egraph_to_database(egraph_));
    db_egraph_version_ = egraph_.version();
  }
  return *db_;
}

auto RelationalMatcher::trivially_empty(const ConjunctiveQuery &q) -> bool {
  const auto &db = database();
  bool empty = false;
  for (const auto &atom : q.body) {
    const auto *r = db.find(atom.symbol);
    if (r == nullptr) {
      empty = true;
      continue;
    }
    if (r->width() != atom.args.size()) {
      throw ArityError("pattern uses '" + atom.symbol + "' with " + std::to_string(atom.args.size() - 1) +
                       " arguments, e-graph has arity " + std::to_string(r->arity()));
    }
    empty = empty || r->empty();
  }
  return empty;
}

auto RelationalMatcher::match_query(const ConjunctiveQuery &q, const std::optional<std::string> &ordering)
    -> MatchSet {
  std::optional<VariableOrdering> explicit_order;
  if (ordering) explicit_order = parse_ordering(q, *ordering);
  if (trivially_empty(q)) return MatchSet(q.head_names());
  const auto &db = database();
  auto order = explicit_order ? *explicit_order : plan(q, db);
  return eval(q, db, order, cache_);
}

auto RelationalMatcher::match(const Pattern &p, const MatchOptions &options) -> MatchSet {
  if (options.engine == Engine::Backtracking) {
    if (options.ordering) throw Error("an explicit ordering applies only to the gj engine");
    return bt_ematch_all(p, egraph_);
  }
  auto shape = classify(p);
  if (shape == PatternShape::BareVariable) {
    if (options.ordering) throw InvalidOrdering("a bare-variable pattern has no variable ordering");
    return eval_nonnested(p, database());
  }
  if (shape == PatternShape::NonNested && options.fast_path && !options.ordering) {
    return eval_nonnested(p, database());
  }
  return match_query(compile(p), options.ordering);
}

auto RelationalMatcher::match(std::span<const Pattern> multi, const MatchOptions &options) -> MatchSet {
  if (multi.size() == 1) return match(multi.front(), options);
  if (options.engine == Engine::Backtracking) {
    if (options.ordering) throw Error("an explicit ordering applies only to the gj engine");
    return bt_ematch_multi(multi, egraph_);
  }
  return match_query(compile_multi(multi), options.ordering);
}

auto ematch(const Pattern &p, const EGraph &egraph, const MatchOptions &options) -> MatchSet {
  RelationalMatcher m(egraph);
  return m.match(p, options);
}

auto ematch(std::span<const Pattern> multi, const EGraph &egraph, const MatchOptions &options) -> MatchSet {
  RelationalMatcher m(egraph);
  return m.match(multi, options);
}

}  // namespace rem
