#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "chasebound/instance.hpp"
#include "chasebound/query.hpp"
#include "chasebound/rule.hpp"
#include "chasebound/substitution.hpp"

namespace chasebound {

enum class ChaseVariant { Oblivious, SemiOblivious, Skolem };

std::string to_string(ChaseVariant v);
// Accepts o / so / skolem and the long names.
std::optional<ChaseVariant> parse_variant(const std::string& text);

struct Trigger {
    std::size_t rule = 0;  // index into the ruleset
    Substitution hom;      // body variables -> terms
    Substitution frontier_hom;
};

struct TriggerRecord {
    std::size_t round = 0;
    Trigger trigger;
    std::vector<Atom> produced;  // atoms this firing added
};

struct ChaseOptions {
    ChaseVariant variant = ChaseVariant::Oblivious;
    std::size_t fuel = 50;
    // Run one extra round past the fuel to decide `terminated` when the last
    // fuelled round was productive.
    bool probe = true;
    bool record_log = false;
    // Resource caps. Hitting one stops the run with terminated=false.
    std::size_t max_atoms = 200000;
    std::size_t max_triggers_per_round = 1000000;
};

struct ChaseResult {
    Instance atoms;
    std::unordered_map<Atom, std::size_t> rank;
    // Existential and frontier depth of generated terms; terms of the input
    // instance are absent and have depth 0.
    std::unordered_map<Term, std::size_t> depth;
    std::unordered_map<Term, std::size_t> frontier_depth;
    // Round at which each generated term first appears.
    std::unordered_map<Term, std::size_t> born;
    bool terminated = false;
    // Set when a resource cap stopped the run before the fuel ran out.
    bool budget_exhausted = false;
    // Last productive round (0 when nothing was derived). Meaningful as the
    // chase rank only when `terminated`.
    std::size_t chase_rank = 0;
    std::size_t rounds = 0;  // rounds computed, probe excluded
    std::vector<std::size_t> round_end;  // atoms.size() after each round; round_end[0] = |I|
    std::vector<TriggerRecord> log;
    std::size_t triggers_fired = 0;

    std::size_t rank_of(const Atom& a) const;
    std::size_t depth_of(Term t) const;
    std::size_t frontier_depth_of(Term t) const;
    // Atoms of rank <= k.
    Instance at_round(std::size_t k) const;
    // Terms generated by the chase, in creation order.
    std::vector<Term> generated_terms() const;
};

// All triggers of `rules` on `instance`, ordered by rule index and then by
// the images of the body variables, compared by position in adom(instance).
std::vector<Trigger> enumerate_triggers(const Instance& instance, const Ruleset& rules);

ChaseResult run_chase(const Instance& instance, const Ruleset& rules, const ChaseOptions& options);

inline ChaseResult run_chase(const Instance& instance, const Ruleset& rules, ChaseVariant variant,
                             std::size_t fuel) {
    ChaseOptions o;
    o.variant = variant;
    o.fuel = fuel;
    return run_chase(instance, rules, o);
}

struct CertainAnswers {
    std::vector<AnswerTuple> answers;
    bool complete = false;
};

CertainAnswers certain_answers(const ConjunctiveQuery& q, const Instance& instance,
                               const Ruleset& rules, std::size_t fuel,
                               ChaseVariant variant = ChaseVariant::SemiOblivious);

// Replaces each existential z of rule s by f^s_z(frontier) (frontier in
// body first-occurrence order). Function symbols key on the source rule id,
// so the result names terms exactly like the semi-oblivious nulls.
Ruleset skolemize(const Ruleset& rules);

struct EmbeddingExtension {
    Substitution map;  // defined on adom of the source chase
    ChaseResult source;
    ChaseResult target;
    std::size_t checked_atoms = 0;
    std::size_t checked_terms = 0;
};

// Extends an embedding phi: I -> I2 to the i-th round of the chase of both
// sides, mapping z_(s,pi) to z_(s,phi'.pi) (frontier keyed for the
// semi-oblivious chase), then checks that the result is an embedding and
// preserves existential depth (oblivious) or frontier depth (semi-oblivious).
// Throws InternalInvariantError when a check fails.
EmbeddingExtension extend_embedding(const Instance& source, const Instance& target,
                                    const Substitution& phi, const Ruleset& rules,
                                    ChaseVariant variant, std::size_t rounds);

}  // namespace chasebound
