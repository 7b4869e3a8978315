#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "chasebound/atom.hpp"
#include "chasebound/instance.hpp"
#include "chasebound/substitution.hpp"

namespace chasebound {

struct MatchOptions {
    // false: constants may be moved too (embedding search).
    bool fix_constants = true;
    // Optional per-source-atom window [first, last) of admissible target
    // indices. Empty span means no restriction.
    std::span<const std::pair<std::uint32_t, std::uint32_t>> windows;
};

// Lazy backtracking enumeration of substitutions mapping `source` into
// `target` and extending `seed`. The next source atom to match is always the
// one with the fewest candidates under the current bindings (ties broken by
// source position), so the order of results is deterministic.
//
// Single consumer. `source` and `target` must outlive the search.
class HomomorphismSearch {
public:
    HomomorphismSearch(std::span<const Atom> source, const Instance& target,
                       Substitution seed = {}, MatchOptions options = {});

    std::optional<Substitution> next();

private:
    struct Frame {
        std::size_t atom;
        std::vector<std::uint32_t> candidates;
        std::size_t cursor = 0;
        std::vector<Term> bound;  // terms bound by the current candidate
    };

    bool choose_and_push();
    bool try_candidate(Frame& frame, std::uint32_t target_index);
    void undo(Frame& frame);
    std::span<const std::uint32_t> candidate_list(std::size_t atom) const;

    std::span<const Atom> source_;
    const Instance& target_;
    Substitution current_;
    MatchOptions options_;
    std::vector<Frame> stack_;
    std::vector<bool> matched_;
    bool started_ = false;
    bool done_ = false;
};

// Calls `visit` for every homomorphism until it returns false.
void for_each_homomorphism(std::span<const Atom> source, const Instance& target,
                           const Substitution& seed,
                           const std::function<bool(const Substitution&)>& visit,
                           MatchOptions options = {});

std::vector<Substitution> find_homomorphisms(std::span<const Atom> source, const Instance& target,
                                             const Substitution& seed = {});

std::optional<Substitution> first_homomorphism(std::span<const Atom> source,
                                               const Instance& target,
                                               const Substitution& seed = {});

// Substitutions over adom(source), constants included, mapping source into target.
std::vector<Substitution> find_embeddings(std::span<const Atom> source, const Instance& target);

bool is_homomorphism(const Substitution& s, std::span<const Atom> source, const Instance& target);

}  // namespace chasebound
