#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "chasebound/atom.hpp"

namespace chasebound {

// A finite set of atoms in insertion order, indexed by predicate and by
// (predicate, position, term) for homomorphism search.
class Instance {
public:
    Instance() = default;
    Instance(std::initializer_list<Atom> atoms);
    explicit Instance(std::span<const Atom> atoms);

    // Returns true when the atom was not already present.
    bool insert(Atom a);

    bool contains(const Atom& a) const { return set_.count(a) != 0; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    const Atom& operator[](std::size_t i) const { return atoms_[i]; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    auto begin() const { return atoms_.begin(); }
    auto end() const { return atoms_.end(); }

    std::span<const std::uint32_t> with_predicate(Predicate p) const;
    std::span<const std::uint32_t> with_term_at(Predicate p, std::size_t pos, Term t) const;

    // Active domain in first-occurrence order.
    const std::vector<Term>& adom() const { return adom_; }
    bool has_term(Term t) const { return adom_set_.count(t) != 0; }

    // Predicates in first-occurrence order.
    std::vector<Predicate> predicates() const;

    bool is_ground() const;

    // Set equality, ignoring insertion order.
    bool same_atoms(const Instance& other) const;

private:
    static std::uint64_t position_key(Predicate p, std::size_t pos, Term t) {
        return (std::uint64_t{p.id()} << 40) | (std::uint64_t{pos & 0xff} << 32) | t.raw();
    }

    std::vector<Atom> atoms_;
    std::unordered_set<Atom> set_;
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> by_pred_;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_position_;
    std::vector<Term> adom_;
    std::unordered_set<Term> adom_set_;
};

std::string to_string(const Instance& instance);

}  // namespace chasebound
