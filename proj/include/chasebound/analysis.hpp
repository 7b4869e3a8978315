#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chasebound/chase.hpp"
#include "chasebound/instance.hpp"
#include "chasebound/rewrite.hpp"
#include "chasebound/rule.hpp"

namespace chasebound {

enum class Status { Yes, No, Unknown };
std::string to_string(Status s);

struct Witness {
    Instance instance;
    std::optional<Atom> fact;  // a fact of rank `rank` in the chase of `instance`
    std::size_t rank = 0;
};

struct Verdict {
    std::string check;
    std::optional<ChaseVariant> variant;
    Status status = Status::Unknown;
    std::string rationale;
    std::string qualifier;
    std::optional<std::size_t> k;
    std::optional<std::size_t> chase_rank;
    std::optional<std::size_t> depth_bound;
    std::optional<std::size_t> bound;
    std::optional<std::size_t> fuel;
    std::optional<std::uint64_t> instances_examined;
    std::optional<std::uint64_t> ceiling;
    std::optional<std::uint64_t> estimate;
    std::optional<std::string> budget;
    std::optional<Witness> witness;
    std::vector<Verdict> components;
};

struct RulesetStats {
    std::size_t b = 0;  // max body size
    std::map<std::string, std::size_t> arities;
    bool is_datalog = true;
    bool is_fe = true;
    bool is_linear = true;
    bool is_guarded = true;
    // Standard position graph: special edges from frontier positions only.
    bool weakly_acyclic = true;
    // Special edges from every body-variable position; implies termination
    // of the oblivious chase.
    bool richly_acyclic = true;
};

RulesetStats detect_classes(const Ruleset& rules);

// Chase of the critical instance. Terminated: Yes with the rank. Otherwise
// Yes when the ruleset is weakly acyclic (so, skolem) or richly acyclic (o),
// else Unknown.
Verdict ct_check(const Ruleset& rules, ChaseVariant variant, std::size_t fuel);

// o: last round of the critical-instance chase that introduced a term;
// so/skolem: max frontier depth in that chase. Empty when it does not
// terminate within fuel.
std::optional<std::size_t> depth_bound(const Ruleset& rules, ChaseVariant variant, std::size_t fuel);

struct EnumerationOptions {
    std::uint64_t ceiling = 1000000;
};

// Ground instances over `predicates` with at most max_atoms atoms, one per
// isomorphism class, ordered by size then canonical form. Constants in
// `fixed` keep their identity; other constants are named a, b, c, ...
// The empty instance is produced only for max_atoms = 0.
// Throws InfeasibleError when the class count (estimated or actual)
// exceeds the ceiling.
std::vector<Instance> enumerate_instances(std::span<const Predicate> predicates, std::size_t max_atoms,
                                          std::span<const Term> fixed = {},
                                          const EnumerationOptions& options = {});

struct KBoundedOptions {
    std::uint64_t ceiling = 1000000;
    std::size_t jobs = 1;
};

// Exhaustive check over ground instances of size <= b^(k+1) on the body
// predicates. Throws InfeasibleError past the ceiling.
Verdict k_bounded(const Ruleset& rules, std::size_t k, ChaseVariant variant,
                  const KBoundedOptions& options = {});

// Fully existential rulesets under the oblivious chase: critical instance
// only. Throws std::invalid_argument on other rulesets.
Verdict k_bounded_fe_oblivious(const Ruleset& rules, std::size_t k);

struct ClassifyOptions {
    std::size_t fuel = 50;
    RewriteOptions rewrite;
    KBoundedOptions kbounded;
    std::size_t max_k = 4;
};

Verdict classify_boundedness(const Ruleset& rules, ChaseVariant variant, const ClassifyOptions& options = {});

}  // namespace chasebound
