#include <doctest.h>

#include "rem/baseline.hpp"
#include "rem/ematch.hpp"
#include "rem/error.hpp"
#include "rem/generic_join.hpp"
#include "rem/sexpr.hpp"
#include "rem/workloads.hpp"
#include "testing.hpp"

using namespace rem;

namespace {

auto ids(std::initializer_list<std::uint32_t> values) -> std::vector<EClassId> {
  std::vector<EClassId> out;
  for (auto v : values) out.emplace_back(v);
  return out;
}

}  // namespace

TEST_SUITE("generic-join") {
  TEST_CASE("intersection of three trie nodes") {
    auto a = build_trie(Relation("a", 0, ids({1, 2, 3})), TrieLayout::identity(1));
    auto b = build_trie(Relation("b", 0, ids({2, 3, 4})), TrieLayout::identity(1));
    auto c = build_trie(Relation("c", 0, ids({3, 5})), TrieLayout::identity(1));
    std::vector<TrieNodeRef> nodes = {{&a, 0, Trie::kRoot}, {&b, 0, Trie::kRoot}, {&c, 0, Trie::kRoot}};
    CHECK(intersect(nodes) == ids({3}));
    std::vector<TrieNodeRef> two = {{&a, 0, Trie::kRoot}, {&b, 0, Trie::kRoot}};
    CHECK(intersect(two) == ids({2, 3}));
  }

  TEST_CASE("match set operations") {
    MatchSet m({"root", "?a"});
    m.push_row(ids({3, 1}));
    m.push_row(ids({2, 5}));
    m.push_row(ids({3, 1}));
    CHECK_FALSE(m.is_normalized());
    m.normalize();
    CHECK(m.is_normalized());
    REQUIRE(m.size() == 2);
    CHECK(m.format_row(1) == "root=3 ?a=1");
    CHECK(m.substitution(0).at("?a") == EClassId{5});
    CHECK(m.column("?a") == 1);
    CHECK(m.column("?z") == -1);

    MatchSet other({"root", "?a"});
    other.push_row(ids({3, 1}));
    other.push_row(ids({4, 4}));
    CHECK_FALSE(m.same_rows_as(other));
    CHECK(m.symmetric_difference(other) == std::vector<std::string>{"- root=2 ?a=5", "+ root=4 ?a=4"});
    MatchSet copy({"root", "?a"});
    copy.push_row(ids({3, 1}));
    copy.push_row(ids({2, 5}));
    CHECK(m.same_rows_as(copy));
  }

  TEST_CASE("triangle query against the direct loop") {
    testing::Rng rng(9);
    auto q = testing::triangle_query();
    for (int i = 0; i < 50; ++i) {
      auto db = testing::random_triangle_db(rng, 60, 12);
      TrieCache cache;
      auto m = eval(q, db, plan(q, db), cache);
      std::set<std::array<std::uint32_t, 3>> got;
      for (std::size_t r = 0; r < m.size(); ++r) got.insert({m.row(r)[0].value, m.row(r)[1].value, m.row(r)[2].value});
      CHECK(got == testing::triangle_oracle(db));
    }
  }

  TEST_CASE("random queries under random orderings agree with naive evaluation") {
    testing::Rng rng(21);
    for (int i = 0; i < 300; ++i) {
      auto r = testing::random_egraph(rng, 30 + rng() % 40, rng() % 10);
      auto db = egraph_to_database(r.egraph);
      auto q = testing::random_query(rng, db, 3 + rng() % 3);
      auto expected = naive_cq_eval(q, db);
      TrieCache cache;
      auto planned = eval(q, db, plan(q, db), cache);
      auto shuffled = eval(q, db, testing::random_ordering(rng, q), cache);
      INFO(q.to_string());
      CHECK(testing::rows_of(planned) == testing::rows_of(expected));
      CHECK(testing::rows_of(shuffled) == testing::rows_of(expected));
    }
  }

  TEST_CASE("explicit tries") {
    auto eg = gen_fgn(4);
    auto db = egraph_to_database(eg);
    auto q = compile(parse_pattern("(f ?a (g ?a))"));
    auto ordering = plan(q, db);
    auto layouts = required_permutations(q, ordering);
    std::vector<std::shared_ptr<const Trie>> tries;
    for (std::size_t a = 0; a < q.body.size(); ++a) {
      tries.push_back(std::make_shared<const Trie>(build_trie(db.relation(q.body[a].symbol), layouts[a])));
    }
    auto m = eval(q, ordering, tries);
    m.normalize();
    CHECK(m.size() == 4);
    TrieCache cache;
    CHECK(m.same_rows_as(eval(q, db, ordering, cache)));

    auto missing = tries;
    missing[1] = nullptr;
    CHECK_THROWS_AS(eval(q, ordering, missing), MissingTrie);
    auto wrong = tries;
    wrong[0] = std::make_shared<const Trie>(build_trie(db.relation("f"), TrieLayout::identity(3)));
    if (layouts[0] != TrieLayout::identity(3)) CHECK_THROWS_AS(eval(q, ordering, wrong), MissingTrie);
    CHECK_THROWS_AS(eval(q, VariableOrdering{{{0}}}, tries), InvalidOrdering);
  }

  TEST_CASE("arity mismatch between query and relation") {
    auto eg = gen_fgn(2);
    auto db = egraph_to_database(eg);
    auto q = make_query({"x"}, {{"f", {"x", "y"}}});
    TrieCache cache;
    CHECK_THROWS_AS(eval(q, db, VariableOrdering{{{0}, {1}}}, cache), ArityError);
  }

  TEST_CASE("repeated variable filters a scan") {
    EGraph eg;
    auto a = eg.add("a");
    auto b = eg.add("b");
    auto faa = eg.add("f", {a, a});
    eg.add("f", {a, b});
    auto fbb = eg.add("f", {b, b});
    eg.rebuild();
    auto db = egraph_to_database(eg);
    auto m = eval_nonnested(parse_pattern("(f ?x ?x)"), db);
    m.normalize();
    REQUIRE(m.size() == 2);
    CHECK(m.row(0)[0] == faa);
    CHECK(m.row(1)[0] == fbb);
    auto all = eval_nonnested(parse_pattern("?z"), db);
    CHECK(all.size() == eg.num_classes());
    CHECK(all.head() == std::vector<std::string>{"root", "?z"});
    CHECK(eval_nonnested(parse_pattern("(k ?x)"), db).empty());
    CHECK_THROWS_AS(eval_nonnested(parse_pattern("(f ?x)"), db), ArityError);
  }

  TEST_CASE("scan path agrees with the compiled query") {
    testing::Rng rng(17);
    int checked = 0;
    while (checked < 500) {
      auto r = testing::random_egraph(rng, 20 + rng() % 80, rng() % 15);
      auto p = testing::random_pattern(rng, 1, 1 + rng() % 3);
      if (classify(p) != PatternShape::NonNested) continue;
      RelationalMatcher matcher(r.egraph);
      auto fast = matcher.match(p);
      auto slow = matcher.match(p, MatchOptions{Engine::GenericJoin, std::nullopt, false});
      fast.normalize();
      slow.normalize();
      INFO(p.to_string());
      CHECK(fast.same_rows_as(slow));
      ++checked;
    }
  }

  TEST_CASE("counters on the f-g family") {
    auto eg = gen_fgn(8);
    auto m = ematch(parse_pattern("(f ?a (g ?a))"), eg);
    CHECK(m.size() == 8);
    CHECK(m.counters.leaves_emitted == 8);
    CHECK(m.counters.values_enumerated > 0);
    CHECK(m.counters.intersection_steps >= m.counters.values_enumerated);
    auto em = ematch(parse_pattern("(f ?a (g ?a))"), eg, MatchOptions{Engine::Backtracking, std::nullopt});
    CHECK(em.counters.candidates == 8 + 8 * 8);
  }

  TEST_CASE("explicit ordering through the matcher") {
    auto eg = gen_fgn(4);
    RelationalMatcher matcher(eg);
    auto p = parse_pattern("(f ?a (g ?b))");
    auto planned = matcher.match(p);
    auto forced = matcher.match(p, MatchOptions{Engine::GenericJoin, "x1,?b,?a,root"});
    planned.normalize();
    forced.normalize();
    CHECK(planned.size() == 16);
    CHECK(planned.same_rows_as(forced));
    CHECK_THROWS_AS(matcher.match(p, MatchOptions{Engine::GenericJoin, "x1,?b"}), InvalidOrdering);
    CHECK_THROWS_AS(matcher.match(p, MatchOptions{Engine::Backtracking, "x1,?b,?a,root"}), Error);
  }
}
