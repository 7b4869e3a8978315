#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "chasebound/chase.hpp"
#include "chasebound/instance.hpp"
#include "chasebound/query.hpp"
#include "chasebound/rule.hpp"

// Deliberately naive reference implementations, sharing no search or
// naming code with the library.
namespace oracle {

struct Fact {
    std::string pred;
    std::vector<std::string> args;
    auto operator<=>(const Fact&) const = default;
};

std::string text(const Fact& f);

// Canonical text of a library term: nulls render their provenance
// recursively as z<var>[<rule>|<binding>], Skolem terms as f<var>[<rule>|<args>].
std::string canonical(chasebound::Term t);
Fact canonical(const chasebound::Atom& a);

struct RefChase {
    std::map<Fact, std::size_t> rank;
    std::map<std::string, std::size_t> depth;
    std::map<std::string, std::size_t> frontier_depth;
    bool terminated = false;
    std::size_t chase_rank = 0;
};

// Breadth-first chase by brute force: every round re-enumerates every body
// match against the whole current set. `semi` keys nulls on the frontier.
RefChase reference_chase(const chasebound::Instance& instance, const chasebound::Ruleset& rules, bool semi,
                         std::size_t fuel);

// All maps vars -> adom(target) by exhaustive enumeration; constants fixed.
std::vector<std::map<std::string, std::string>> brute_force_homs(const std::vector<Fact>& source,
                                                                  const std::set<Fact>& target);

std::set<std::vector<std::string>> reference_answers(const chasebound::ConjunctiveQuery& q,
                                                     const std::set<Fact>& facts);

std::set<Fact> facts_of(const chasebound::Instance& inst);
std::set<Fact> facts_at(const RefChase& c, std::size_t round);

// Number of isomorphism classes of ground instances with 1..max_atoms atoms
// over the given (name, arity) list, by brute force over a constant pool.
std::size_t count_iso_classes(const std::vector<std::pair<std::string, std::size_t>>& preds,
                              std::size_t max_atoms);

}  // namespace oracle
