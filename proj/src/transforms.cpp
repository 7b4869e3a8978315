#include "chasebound/transforms.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace chasebound {
namespace {

const std::string kPlus = "_plus";

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Variable named `base`, `base` followed by a counter when taken.
Term fresh_variable(const std::string& base, std::size_t& counter,
                    const std::unordered_set<Term>& taken) {
    while (true) {
        Term v = variable(base + std::to_string(++counter));
        if (!taken.count(v)) return v;
    }
}

}  // namespace

Ruleset DecompositionResult::combined() const {
    Ruleset out;
    std::size_t f = 0, d = 0;
    std::size_t sources = 0;
    for (auto o : fe_origin) sources = std::max(sources, o + 1);
    for (auto o : datalog_origin) sources = std::max(sources, o + 1);
    for (std::size_t s = 0; s < sources; ++s) {
        while (f < fe_origin.size() && fe_origin[f] == s) out.rules.push_back(fe_rules[f++]);
        while (d < datalog_origin.size() && datalog_origin[d] == s) out.rules.push_back(datalog_rules[d++]);
    }
    return out;
}

DecompositionResult df_decompose(const Ruleset& rules) {
    DecompositionResult out;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const Rule& r = rules[i];
        std::vector<Atom> fe_head;
        std::vector<Atom> datalog_heads;
        for (const auto& a : r.head()) {
            bool existential = std::any_of(a.args.begin(), a.args.end(),
                                           [&](Term t) { return r.is_existential(t); });
            (existential ? fe_head : datalog_heads).push_back(a);
        }
        if (!fe_head.empty()) {
            std::string label = datalog_heads.empty() ? r.label() : r.label() + "_fe";
            out.fe_rules.rules.emplace_back(label, r.body(), std::move(fe_head));
            out.fe_origin.push_back(i);
        }
        for (std::size_t k = 0; k < datalog_heads.size(); ++k) {
            std::string label = r.head().size() == 1 ? r.label() : r.label() + "_d" + std::to_string(k + 1);
            out.datalog_rules.rules.emplace_back(label, r.body(), std::vector<Atom>{datalog_heads[k]});
            out.datalog_origin.push_back(i);
        }
    }
    return out;
}

Instance critical_instance(std::span<const Predicate> predicates, std::span<const Term> extra_constants) {
    std::vector<Term> domain{constant("a")};
    for (auto c : extra_constants)
        if (std::find(domain.begin(), domain.end(), c) == domain.end()) domain.push_back(c);
    Instance out;
    for (auto p : predicates) {
        const std::size_t n = p.arity();
        std::vector<std::size_t> digits(n, 0);
        while (true) {
            std::vector<Term> args(n);
            for (std::size_t i = 0; i < n; ++i) args[i] = domain[digits[i]];
            out.insert(Atom(p, std::move(args)));
            std::size_t i = n;
            while (i > 0 && ++digits[i - 1] == domain.size()) digits[--i] = 0;
            if (i == 0) break;
        }
    }
    return out;
}

Instance critical_instance(const Ruleset& rules) {
    auto preds = predicates_of(rules);
    auto consts = constants_of(rules);
    return critical_instance(preds, consts);
}

Ruleset psi_transform(const Ruleset& rules) {
    auto vocabulary = predicates_of(rules);
    std::unordered_set<std::string> taken;
    for (auto p : vocabulary) taken.insert(p.name());
    Ruleset out;
    for (const auto& r : rules) {
        const std::size_t arity = r.frontier().size();
        std::string base = "p_" + r.label();
        std::string name = base;
        for (std::size_t k = 2;; ++k) {
            if (!taken.count(name)) break;
            name = base + "_" + std::to_string(k);
        }
        taken.insert(name);
        Atom link(predicate(name, arity), r.frontier());
        out.rules.emplace_back(r.label() + "_in", r.body(), std::vector<Atom>{link});
        out.rules.emplace_back(r.label() + "_out", std::vector<Atom>{link}, r.head());
    }
    return out;
}

namespace {

Predicate plus_predicate(Predicate p) {
    if (ends_with(p.name(), kPlus))
        throw std::invalid_argument("fe_encode: predicate '" + p.name() + "' is already encoded");
    return predicate(p.name() + kPlus, p.arity() + 1);
}

}  // namespace

Ruleset fe_encode(const Ruleset& rules) {
    Ruleset out;
    for (const auto& r : rules) {
        std::unordered_set<Term> taken(r.body_variables().begin(), r.body_variables().end());
        for (auto v : r.existentials()) taken.insert(v);
        std::size_t counter = 0;
        auto extend = [&](const std::vector<Atom>& atoms) {
            std::vector<Atom> res;
            for (const auto& a : atoms) {
                auto args = a.args;
                args.push_back(fresh_variable("Z", counter, taken));
                res.emplace_back(plus_predicate(a.pred), std::move(args));
            }
            return res;
        };
        auto body = extend(r.body());
        auto head = extend(r.head());
        out.rules.emplace_back(r.label(), std::move(body), std::move(head));
    }
    return out;
}

Instance fe_encode(const Instance& instance) {
    std::unordered_set<Term> taken(instance.adom().begin(), instance.adom().end());
    std::size_t counter = 0;
    Instance out;
    for (const auto& a : instance) {
        auto args = a.args;
        args.push_back(fresh_variable("Z", counter, taken));
        out.insert(Atom(plus_predicate(a.pred), std::move(args)));
    }
    return out;
}

Encoded fe_encode(const Ruleset& rules, const Instance& instance) {
    return {fe_encode(rules), fe_encode(instance)};
}

Instance fe_decode(const Instance& instance) {
    Instance out;
    for (const auto& a : instance) {
        const std::string& name = a.pred.name();
        if (!ends_with(name, kPlus) || a.args.empty())
            throw std::invalid_argument("fe_decode: predicate '" + name + "' is not an encoded predicate");
        std::vector<Term> args(a.args.begin(), a.args.end() - 1);
        Predicate pred = predicate(name.substr(0, name.size() - kPlus.size()), args.size());
        out.insert(Atom(pred, std::move(args)));
    }
    return out;
}

Frozen freeze(const Instance& instance) {
    std::unordered_set<Term> taken(instance.adom().begin(), instance.adom().end());
    Frozen out;
    for (auto t : instance.adom()) {
        if (t.is_constant()) continue;
        std::string base = t.is_variable() ? "c_" + term_name(t) : "c_n" + std::to_string(t.index());
        Term c = constant(base);
        for (std::size_t k = 2; taken.count(c); ++k) c = constant(base + "_" + std::to_string(k));
        taken.insert(c);
        out.bijection.bind(t, c);
    }
    for (const auto& a : instance) out.instance.insert(out.bijection.apply(a));
    return out;
}

}  // namespace chasebound
