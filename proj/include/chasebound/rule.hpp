#pragma once

#include <span>
#include <string>
#include <vector>

#include "chasebound/atom.hpp"
#include "chasebound/term.hpp"

namespace chasebound {

// Existential rule body -> exists(existentials) head. Frontier and
// existential sets are derived at construction and never edited afterwards.
class Rule {
public:
    Rule() = default;
    // Assigns a fresh RuleId; `label` is the display name.
    Rule(std::string label, std::vector<Atom> body, std::vector<Atom> head);

    RuleId id() const { return id_; }
    const std::string& label() const { return label_; }
    const std::vector<Atom>& body() const { return body_; }
    const std::vector<Atom>& head() const { return head_; }

    // Body variables that occur in the head, in first-occurrence order in the body.
    const std::vector<Term>& frontier() const { return frontier_; }
    // Head variables absent from the body, in first-occurrence order in the head.
    const std::vector<Term>& existentials() const { return existentials_; }
    // Body variables in first-occurrence order.
    const std::vector<Term>& body_variables() const { return body_vars_; }

    bool is_existential(Term v) const;
    bool is_frontier(Term v) const;
    bool is_datalog() const { return existentials_.empty(); }
    // Every head atom has at least one existential variable.
    bool is_fully_existential() const;

private:
    RuleId id_ = 0;
    std::string label_;
    std::vector<Atom> body_;
    std::vector<Atom> head_;
    std::vector<Term> frontier_;
    std::vector<Term> existentials_;
    std::vector<Term> body_vars_;
};

struct Ruleset {
    std::vector<Rule> rules;

    std::size_t size() const { return rules.size(); }
    bool empty() const { return rules.empty(); }
    const Rule& operator[](std::size_t i) const { return rules[i]; }
    auto begin() const { return rules.begin(); }
    auto end() const { return rules.end(); }
};

// Predicates occurring in the ruleset, sorted by name.
std::vector<Predicate> predicates_of(const Ruleset& rules);
// Constants occurring in the ruleset, sorted by name.
std::vector<Term> constants_of(const Ruleset& rules);
// Variables of the atoms (recursing into function terms), first-occurrence order.
std::vector<Term> variables_of(std::span<const Atom> atoms);

std::size_t max_body_size(const Ruleset& rules);

std::string to_string(const Rule& r);

}  // namespace chasebound
