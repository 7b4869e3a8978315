#include "chasebound/instance.hpp"

namespace chasebound {

Instance::Instance(std::initializer_list<Atom> atoms) {
    for (const auto& a : atoms) insert(a);
}

Instance::Instance(std::span<const Atom> atoms) {
    for (const auto& a : atoms) insert(a);
}

bool Instance::insert(Atom a) {
    if (!set_.insert(a).second) return false;
    auto index = static_cast<std::uint32_t>(atoms_.size());
    by_pred_[a.pred.id()].push_back(index);
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        by_position_[position_key(a.pred, i, a.args[i])].push_back(index);
        if (adom_set_.insert(a.args[i]).second) adom_.push_back(a.args[i]);
    }
    atoms_.push_back(std::move(a));
    return true;
}

std::span<const std::uint32_t> Instance::with_predicate(Predicate p) const {
    auto it = by_pred_.find(p.id());
    if (it == by_pred_.end()) return {};
    return it->second;
}

std::span<const std::uint32_t> Instance::with_term_at(Predicate p, std::size_t pos, Term t) const {
    auto it = by_position_.find(position_key(p, pos, t));
    if (it == by_position_.end()) return {};
    return it->second;
}

std::vector<Predicate> Instance::predicates() const {
    std::vector<Predicate> out;
    std::unordered_set<std::uint32_t> seen;
    for (const auto& a : atoms_)
        if (seen.insert(a.pred.id()).second) out.push_back(a.pred);
    return out;
}

bool Instance::is_ground() const {
    for (auto t : adom_)
        if (!t.is_constant()) return false;
    return true;
}

bool Instance::same_atoms(const Instance& other) const {
    if (size() != other.size()) return false;
    for (const auto& a : atoms_)
        if (!other.contains(a)) return false;
    return true;
}

std::string to_string(const Instance& instance) {
    std::string out = "{";
    for (std::size_t i = 0; i < instance.size(); ++i) {
        if (i) out += ", ";
        out += to_string(instance[i]);
    }
    return out + "}";
}

}  // namespace chasebound
