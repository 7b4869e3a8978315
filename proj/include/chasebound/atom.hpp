#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "chasebound/term.hpp"

namespace chasebound {

class Predicate {
public:
    constexpr Predicate() = default;
    explicit constexpr Predicate(std::uint32_t id) : id_(id) {}

    constexpr std::uint32_t id() const { return id_; }
    const std::string& name() const;
    std::size_t arity() const;

    friend constexpr bool operator==(Predicate, Predicate) = default;
    friend constexpr auto operator<=>(Predicate, Predicate) = default;

private:
    std::uint32_t id_ = 0;
};

// Interns a name/arity pair. The same name with two arities gives two
// distinct predicates; parsers reject that within one source.
Predicate predicate(std::string_view name, std::size_t arity);

struct Atom {
    Predicate pred;
    std::vector<Term> args;

    Atom() = default;
    Atom(Predicate p, std::vector<Term> a) : pred(p), args(std::move(a)) {}

    friend bool operator==(const Atom&, const Atom&) = default;
};

// Total order on atoms by predicate id then argument ids. Only used where an
// arbitrary but fixed order suffices.
bool atom_id_less(const Atom& a, const Atom& b);

std::string to_string(const Atom& a);

}  // namespace chasebound

template <>
struct std::hash<chasebound::Atom> {
    std::size_t operator()(const chasebound::Atom& a) const noexcept {
        std::size_t h = a.pred.id() * 0x9e3779b97f4a7c15ull;
        for (auto t : a.args) h = (h ^ t.raw()) * 0x100000001b3ull + (h >> 29);
        return h;
    }
};
