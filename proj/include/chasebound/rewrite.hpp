#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chasebound/query.hpp"
#include "chasebound/rule.hpp"

namespace chasebound {

// A single-piece unifier of a query with one rule: each atom of the piece is
// sent to a head atom of a fresh copy of the rule. The term partition is the
// most general one induced by that mapping.
struct PieceUnifier {
    std::size_t rule = 0;  // index into the ruleset
    std::vector<std::pair<std::uint32_t, std::uint32_t>> mapping;  // (query atom, head atom), by query atom
    std::vector<std::uint32_t> piece;                              // sorted query atom indices
    // Classes over query terms and renamed rule terms, each sorted, classes
    // ordered by first element. For display and tests.
    std::vector<std::vector<Term>> classes;
};

// All single-piece unifiers of q with rules[rule], ordered by seed atom,
// then head atom choices.
std::vector<PieceUnifier> piece_unifiers(const ConjunctiveQuery& q, const Ruleset& rules,
                                         std::size_t rule);
std::vector<PieceUnifier> piece_unifiers(const ConjunctiveQuery& q, const Ruleset& rules);

// Rewriting of q by an aggregation of unifiers with pairwise disjoint pieces,
// each using its own rule copy. Empty when the joined partition is invalid.
std::optional<ConjunctiveQuery> rewrite_with(const ConjunctiveQuery& q, const Ruleset& rules,
                                             std::span<const PieceUnifier> unifiers);

// True iff some homomorphism from q1 to q2 maps q1's answer tuple onto q2's
// position-wise. Throws std::invalid_argument on different answer arities.
bool cq_subsumes(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2);
bool cq_equivalent(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2);

struct RewriteOptions {
    std::size_t max_steps = 8;
    std::size_t max_cq_atoms = 16;
    std::size_t max_ucq_size = 5000;
    std::size_t max_aggregations_per_step = 100000;
    // Build one greedy maximal aggregation per unifier instead of all of
    // them. Incomplete; used to grow witnesses quickly.
    bool maximal_aggregation_only = false;
};

struct RewritingState {
    UnionOfQueries ucq;
    UnionOfQueries frontier;  // CQs added by the last step
    std::size_t steps = 0;
    std::size_t productive_steps = 0;
    bool saturated = false;
    bool budget_exhausted = false;
    std::string budget_reason;
    std::vector<std::size_t> sizes;  // |ucq| initially and after each step
};

RewritingState initial_state(const ConjunctiveQuery& q);

// One breadth-first step over every frontier CQ, followed by subsumption
// pruning against the whole UCQ.
void aggregate_step(RewritingState& state, const Ruleset& rules, const RewriteOptions& options = {});

// Steps until saturation, the step budget, or another budget runs out.
RewritingState rewrite(const ConjunctiveQuery& q, const Ruleset& rules, const RewriteOptions& options = {});

// One full-atomic query per distinct datalog head of DF(rules).
UnionOfQueries hd_queries(const Ruleset& rules);
// body(s) with the frontier as answer tuple, one per rule.
UnionOfQueries body_queries(const Ruleset& rules);

struct KEstimate {
    bool saturated = false;
    std::size_t k = 0;  // max productive steps over the seed queries
    UnionOfQueries seeds;
    std::vector<std::vector<std::size_t>> growth;  // per seed: UCQ sizes per step
    std::string budget_reason;
};

KEstimate estimate_kAF(const Ruleset& rules, const RewriteOptions& options = {});
KEstimate estimate_kFO(const Ruleset& rules, const RewriteOptions& options = {});

}  // namespace chasebound
