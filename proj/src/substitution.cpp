#include "chasebound/substitution.hpp"

#include <algorithm>
#include <unordered_set>

namespace chasebound {
namespace {

auto key_less = [](const std::pair<Term, Term>& a, Term k) { return a.first < k; };

}  // namespace

Substitution::Substitution(Binding bindings) : bindings_(std::move(bindings)) {
    std::sort(bindings_.begin(), bindings_.end());
    bindings_.erase(std::unique(bindings_.begin(), bindings_.end()), bindings_.end());
}

std::optional<Term> Substitution::get(Term from) const {
    auto it = std::lower_bound(bindings_.begin(), bindings_.end(), from, key_less);
    if (it != bindings_.end() && it->first == from) return it->second;
    return std::nullopt;
}

Term Substitution::apply(Term t) const {
    if (auto direct = get(t)) return *direct;
    if (t.is_function()) {
        const auto& f = function_info(t);
        std::vector<Term> args;
        args.reserve(f.args.size());
        bool changed = false;
        for (auto a : f.args) {
            args.push_back(apply(a));
            changed |= args.back() != a;
        }
        return changed ? function_term(f.symbol, args) : t;
    }
    return t;
}

Atom Substitution::apply(const Atom& a) const {
    Atom out;
    out.pred = a.pred;
    out.args.reserve(a.args.size());
    for (auto t : a.args) out.args.push_back(apply(t));
    return out;
}

bool Substitution::bind(Term from, Term to) {
    auto it = std::lower_bound(bindings_.begin(), bindings_.end(), from, key_less);
    if (it != bindings_.end() && it->first == from) return it->second == to;
    bindings_.insert(it, {from, to});
    return true;
}

void Substitution::unbind(Term from) {
    auto it = std::lower_bound(bindings_.begin(), bindings_.end(), from, key_less);
    if (it != bindings_.end() && it->first == from) bindings_.erase(it);
}

Substitution Substitution::restricted_to(std::span<const Term> domain) const {
    Substitution out;
    for (auto t : domain)
        if (auto v = get(t)) out.bind(t, *v);
    return out;
}

Substitution Substitution::compose_after(const Substitution& other) const {
    Substitution out;
    for (const auto& [k, v] : other.bindings_) out.bind(k, apply(v));
    for (const auto& [k, v] : bindings_)
        if (!other.contains(k)) out.bind(k, v);
    return out;
}

std::vector<Atom> apply_substitution(const Substitution& s, std::span<const Atom> atoms) {
    std::vector<Atom> out;
    std::unordered_set<Atom> seen;
    for (const auto& a : atoms) {
        Atom b = s.apply(a);
        if (seen.insert(b).second) out.push_back(std::move(b));
    }
    return out;
}

std::string to_string(const Substitution& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& [k, v] : s.bindings()) {
        if (!first) out += ", ";
        first = false;
        out += to_string(k) + "->" + to_string(v);
    }
    return out + "}";
}

}  // namespace chasebound
