#include "chasebound/query.hpp"

#include <algorithm>
#include <unordered_set>

#include "chasebound/homomorphism.hpp"

namespace chasebound {

bool ConjunctiveQuery::is_full_atomic() const {
    if (atoms.size() != 1) return false;
    for (auto t : atoms[0].args)
        if (!t.is_variable() || std::find(answers.begin(), answers.end(), t) == answers.end())
            return false;
    return true;
}

bool ConjunctiveQuery::is_well_formed() const {
    std::unordered_set<Term> terms;
    for (const auto& a : atoms)
        for (auto t : a.args) terms.insert(t);
    for (auto t : answers)
        if (!t.is_constant() && !terms.count(t)) return false;
    return true;
}

bool answer_tuple_less(const AnswerTuple& a, const AnswerTuple& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](Term x, Term y) { return to_string(x) < to_string(y); });
}

namespace {

void sort_unique(std::vector<AnswerTuple>& tuples) {
    std::sort(tuples.begin(), tuples.end(), answer_tuple_less);
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
}

void collect(const ConjunctiveQuery& q, const Instance& instance, std::vector<AnswerTuple>& out) {
    for_each_homomorphism(q.atoms, instance, {}, [&](const Substitution& h) {
        AnswerTuple tuple;
        tuple.reserve(q.answers.size());
        for (auto t : q.answers) {
            Term image = h.apply(t);
            if (!image.is_constant()) return true;
            tuple.push_back(image);
        }
        out.push_back(std::move(tuple));
        // A Boolean query needs one witness only.
        return !q.answers.empty();
    });
}

}  // namespace

std::vector<AnswerTuple> evaluate(const ConjunctiveQuery& q, const Instance& instance) {
    std::vector<AnswerTuple> out;
    collect(q, instance, out);
    sort_unique(out);
    return out;
}

std::vector<AnswerTuple> evaluate(std::span<const ConjunctiveQuery> ucq, const Instance& instance) {
    std::vector<AnswerTuple> out;
    for (const auto& q : ucq) collect(q, instance, out);
    sort_unique(out);
    return out;
}

std::string to_string(const ConjunctiveQuery& q) {
    std::string out = "?";
    if (!q.answers.empty()) {
        out += "(";
        for (std::size_t i = 0; i < q.answers.size(); ++i) {
            if (i) out += ",";
            out += to_string(q.answers[i]);
        }
        out += ")";
    }
    out += " :- ";
    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
        if (i) out += ", ";
        out += to_string(q.atoms[i]);
    }
    return out;
}

}  // namespace chasebound
