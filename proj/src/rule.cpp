#include "chasebound/rule.hpp"

#include <algorithm>
#include <unordered_set>

namespace chasebound {
namespace {

void collect_variables(Term t, std::vector<Term>& out, std::unordered_set<Term>& seen) {
    if (t.is_variable()) {
        if (seen.insert(t).second) out.push_back(t);
    } else if (t.is_function()) {
        for (auto a : function_info(t).args) collect_variables(a, out, seen);
    }
}

}  // namespace

std::vector<Term> variables_of(std::span<const Atom> atoms) {
    std::vector<Term> out;
    std::unordered_set<Term> seen;
    for (const auto& a : atoms)
        for (auto t : a.args) collect_variables(t, out, seen);
    return out;
}

Rule::Rule(std::string label, std::vector<Atom> body, std::vector<Atom> head)
    : id_(next_rule_id()), label_(std::move(label)), body_(std::move(body)), head_(std::move(head)) {
    set_rule_label(id_, label_);
    body_vars_ = variables_of(body_);
    auto head_vars = variables_of(head_);
    std::unordered_set<Term> in_body(body_vars_.begin(), body_vars_.end());
    std::unordered_set<Term> in_head(head_vars.begin(), head_vars.end());
    for (auto v : body_vars_)
        if (in_head.count(v)) frontier_.push_back(v);
    for (auto v : head_vars)
        if (!in_body.count(v)) existentials_.push_back(v);
}

bool Rule::is_existential(Term v) const {
    return std::find(existentials_.begin(), existentials_.end(), v) != existentials_.end();
}

bool Rule::is_frontier(Term v) const {
    return std::find(frontier_.begin(), frontier_.end(), v) != frontier_.end();
}

bool Rule::is_fully_existential() const {
    for (const auto& a : head_) {
        auto vars = variables_of(std::span<const Atom>(&a, 1));
        if (std::none_of(vars.begin(), vars.end(), [&](Term v) { return is_existential(v); }))
            return false;
    }
    return true;
}

std::vector<Predicate> predicates_of(const Ruleset& rules) {
    std::vector<Predicate> out;
    std::unordered_set<std::uint32_t> seen;
    for (const auto& r : rules) {
        for (const auto& a : r.body())
            if (seen.insert(a.pred.id()).second) out.push_back(a.pred);
        for (const auto& a : r.head())
            if (seen.insert(a.pred.id()).second) out.push_back(a.pred);
    }
    std::sort(out.begin(), out.end(),
              [](Predicate a, Predicate b) { return a.name() < b.name(); });
    return out;
}

std::vector<Term> constants_of(const Ruleset& rules) {
    std::vector<Term> out;
    std::unordered_set<Term> seen;
    auto visit = [&](const std::vector<Atom>& atoms) {
        for (const auto& a : atoms)
            for (auto t : a.args)
                if (t.is_constant() && seen.insert(t).second) out.push_back(t);
    };
    for (const auto& r : rules) {
        visit(r.body());
        visit(r.head());
    }
    std::sort(out.begin(), out.end(),
              [](Term a, Term b) { return term_name(a) < term_name(b); });
    return out;
}

std::size_t max_body_size(const Ruleset& rules) {
    std::size_t b = 0;
    for (const auto& r : rules) b = std::max(b, r.body().size());
    return b;
}

std::string to_string(const Rule& r) {
    std::string out;
    for (std::size_t i = 0; i < r.body().size(); ++i) {
        if (i) out += ", ";
        out += to_string(r.body()[i]);
    }
    out += " -> ";
    for (std::size_t i = 0; i < r.head().size(); ++i) {
        if (i) out += ", ";
        out += to_string(r.head()[i]);
    }
    return out;
}

}  // namespace chasebound
