#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chasebound/atom.hpp"
#include "chasebound/term.hpp"

namespace chasebound {

// Finite map from terms to terms, identity elsewhere. Kept sorted by key so
// two substitutions with the same bindings are equal and hash alike.
class Substitution {
public:
    Substitution() = default;
    explicit Substitution(Binding bindings);

    std::optional<Term> get(Term from) const;
    Term apply(Term t) const;
    Atom apply(const Atom& a) const;

    // Adds from->to. Returns false (and leaves the map unchanged) when `from`
    // is already bound to a different term.
    bool bind(Term from, Term to);
    void unbind(Term from);

    bool contains(Term from) const { return get(from).has_value(); }
    std::size_t size() const { return bindings_.size(); }
    bool empty() const { return bindings_.empty(); }

    const Binding& bindings() const { return bindings_; }

    // Restriction to the given domain terms (kept in sorted order).
    Substitution restricted_to(std::span<const Term> domain) const;

    // this ∘ other: first other, then this.
    Substitution compose_after(const Substitution& other) const;

    friend bool operator==(const Substitution&, const Substitution&) = default;

private:
    Binding bindings_;
};

// Rewrites each atom argument-wise; result keeps first-occurrence order and
// drops duplicates.
std::vector<Atom> apply_substitution(const Substitution& s, std::span<const Atom> atoms);

std::string to_string(const Substitution& s);

}  // namespace chasebound
