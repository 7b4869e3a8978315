#pragma once

#include <span>
#include <string>
#include <vector>

#include "chasebound/atom.hpp"
#include "chasebound/instance.hpp"

namespace chasebound {

// Atom set plus ordered answer tuple. Repeated answer variables encode which
// answer positions are identified; a rewriting may also place a constant in
// an answer position.
struct ConjunctiveQuery {
    std::vector<Atom> atoms;
    std::vector<Term> answers;

    bool is_boolean() const { return answers.empty(); }
    // Single atom whose arguments are all answer variables.
    bool is_full_atomic() const;
    // Answer variables appear in the atoms.
    bool is_well_formed() const;
};

using UnionOfQueries = std::vector<ConjunctiveQuery>;
using AnswerTuple = std::vector<Term>;

// Tuples of constants (h(answers) for homomorphisms h into `instance`),
// sorted by constant names. A Boolean query that holds yields one empty tuple.
std::vector<AnswerTuple> evaluate(const ConjunctiveQuery& q, const Instance& instance);
std::vector<AnswerTuple> evaluate(std::span<const ConjunctiveQuery> ucq, const Instance& instance);

bool answer_tuple_less(const AnswerTuple& a, const AnswerTuple& b);

std::string to_string(const ConjunctiveQuery& q);

}  // namespace chasebound
