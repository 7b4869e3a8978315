#pragma once

#include <span>
#include <utility>
#include <vector>

#include "chasebound/instance.hpp"
#include "chasebound/rule.hpp"
#include "chasebound/substitution.hpp"

namespace chasebound {

// FE part B -> H_F of each rule with a nonempty H_F, and one single-head
// datalog rule B -> a per head atom a without existential variables.
struct DecompositionResult {
    Ruleset fe_rules;
    Ruleset datalog_rules;
    std::vector<std::size_t> fe_origin;       // source rule index per FE rule
    std::vector<std::size_t> datalog_origin;  // source rule index per datalog rule

    // Per source rule: its FE rule, then its datalog rules.
    Ruleset combined() const;
};

DecompositionResult df_decompose(const Ruleset& rules);

// All facts over `predicates` built on the constant a plus `extra_constants`.
// Without extra constants this is one fact p(a,...,a) per predicate.
Instance critical_instance(std::span<const Predicate> predicates,
                           std::span<const Term> extra_constants = {});
// Critical instance for the vocabulary and constants of a ruleset.
Instance critical_instance(const Ruleset& rules);

// B -> p_s(fr) and p_s(fr) -> H for each rule s. The fresh predicate is named
// p_<label>, suffixed when that name is already taken.
Ruleset psi_transform(const Ruleset& rules);

struct Encoded {
    Ruleset rules;
    Instance instance;
};

// Adds a trailing position to every atom (predicate p becomes p_plus). In
// instances the new position holds a fresh instance variable; in rule bodies a
// fresh universal variable; in heads a fresh existential variable, so every
// output rule is fully existential.
Encoded fe_encode(const Ruleset& rules, const Instance& instance);
Ruleset fe_encode(const Ruleset& rules);
Instance fe_encode(const Instance& instance);
// Drops the trailing position. Throws std::invalid_argument when some
// predicate is not a _plus predicate.
Instance fe_decode(const Instance& instance);

struct Frozen {
    Instance instance;
    Substitution bijection;  // variable or null -> fresh constant
};

// Replaces each non-constant term by a distinct constant absent from the
// instance: variable X becomes c_X, a null becomes c_n<k>.
Frozen freeze(const Instance& instance);

}  // namespace chasebound
