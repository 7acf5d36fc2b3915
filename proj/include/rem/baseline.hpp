#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rem/database.hpp"
#include "rem/egraph.hpp"
#include "rem/generic_join.hpp"
#include "rem/pattern.hpp"
#include "rem/query.hpp"

namespace rem {

/**
 * Backtracking match of `p` against class `c`, extending every partial
 * substitution in `S` (keys are "?name"). A variable either binds to `c` or
 * must already equal it; an App unions over the class's e-nodes with that
 * symbol, matching children left to right. `candidates`, if given, counts
 * e-nodes visited. Requires a rebuilt e-graph.
 */
auto bt_match(const Pattern &p, EClassId c, const std::vector<Substitution> &S, const EGraph &egraph,
              std::uint64_t *candidates = nullptr) -> std::vector<Substitution>;

/// Matches of `p` rooted at every canonical class, with head match_head(p).
/// counters.candidates counts e-nodes visited. Throws DirtyEGraph.
auto bt_ematch_all(const Pattern &p, const EGraph &egraph) -> MatchSet;

/// Per-pattern bt_ematch_all results joined on shared variables, with the
/// head of compile_multi (roots first, then variables).
auto bt_ematch_multi(std::span<const Pattern> patterns, const EGraph &egraph) -> MatchSet;

/// Default cap on tuple choices visited by naive_cq_eval.
inline constexpr std::uint64_t kNaiveAssignmentCap = 10'000'000;

/// Direct evaluation of the query semantics by nested loops: picks one tuple
/// per atom in body order, keeps the choices that agree on shared variables,
/// and projects to the head. Throws SearchSpaceTooLarge once more than `cap`
/// tuple choices have been visited.
auto naive_cq_eval(const ConjunctiveQuery &q, const Database &db, std::uint64_t cap = kNaiveAssignmentCap)
    -> MatchSet;

}  // namespace rem
