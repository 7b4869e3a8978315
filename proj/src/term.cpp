#include "chasebound/atom.hpp"
#include "chasebound/errors.hpp"
#include "chasebound/term.hpp"

#include <atomic>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace chasebound {
namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return (h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

struct ProvenanceHash {
    std::size_t operator()(const NullProvenance& p) const {
        std::size_t h = mix(static_cast<std::size_t>(p.scheme), p.rule);
        h = mix(h, p.variable.raw());
        for (const auto& [k, v] : p.binding) h = mix(mix(h, k.raw()), v.raw());
        return h;
    }
};

struct FunctionHash {
    std::size_t operator()(const FunctionTerm& f) const {
        std::size_t h = mix(f.symbol.rule, f.symbol.variable.raw());
        for (auto t : f.args) h = mix(h, t.raw());
        return h;
    }
};

struct PredicateInfo {
    std::string name;
    std::size_t arity;
};

// Process-wide interning tables. Element storage is a deque so references
// handed out stay valid while other threads intern.
class TermStore {
public:
    static TermStore& get() {
        static TermStore store;
        return store;
    }

    Term intern_name(TermKind kind, std::string_view name) {
        auto& table = kind == TermKind::Constant ? constants_ : variables_;
        {
            std::shared_lock lock(mutex_);
            auto it = table.ids.find(std::string(name));
            if (it != table.ids.end()) return Term(kind, it->second);
        }
        std::unique_lock lock(mutex_);
        auto [it, inserted] = table.ids.emplace(std::string(name), table.names.size());
        if (inserted) table.names.emplace_back(name);
        return Term(kind, it->second);
    }

    Term intern_null(const NullProvenance& p) {
        {
            std::shared_lock lock(mutex_);
            auto it = null_ids_.find(p);
            if (it != null_ids_.end()) return Term(TermKind::Null, it->second);
        }
        std::unique_lock lock(mutex_);
        auto [it, inserted] = null_ids_.emplace(p, static_cast<std::uint32_t>(nulls_.size()));
        if (inserted) nulls_.push_back(p);
        return Term(TermKind::Null, it->second);
    }

    bool lookup_null(const NullProvenance& p, Term& out) {
        std::shared_lock lock(mutex_);
        auto it = null_ids_.find(p);
        if (it == null_ids_.end()) return false;
        out = Term(TermKind::Null, it->second);
        return true;
    }

    Term intern_function(FunctionTerm f) {
        {
            std::shared_lock lock(mutex_);
            auto it = function_ids_.find(f);
            if (it != function_ids_.end()) return Term(TermKind::Function, it->second);
        }
        std::unique_lock lock(mutex_);
        auto [it, inserted] =
            function_ids_.emplace(f, static_cast<std::uint32_t>(functions_.size()));
        if (inserted) functions_.push_back(std::move(f));
        return Term(TermKind::Function, it->second);
    }

    const std::string& name(Term t) {
        std::shared_lock lock(mutex_);
        if (t.is_constant()) return constants_.names.at(t.index());
        if (t.is_variable()) return variables_.names.at(t.index());
        throw std::invalid_argument("term_name: not a constant or variable");
    }

    const NullProvenance& provenance(Term t) {
        std::shared_lock lock(mutex_);
        if (!t.is_null()) throw std::invalid_argument("null_provenance: not a null");
        return nulls_.at(t.index());
    }

    const FunctionTerm& function(Term t) {
        std::shared_lock lock(mutex_);
        if (!t.is_function()) throw std::invalid_argument("function_info: not a function term");
        return functions_.at(t.index());
    }

    Predicate intern_predicate(std::string_view name, std::size_t arity) {
        std::string key = std::string(name) + '/' + std::to_string(arity);
        {
            std::shared_lock lock(mutex_);
            auto it = predicate_ids_.find(key);
            if (it != predicate_ids_.end()) return Predicate(it->second);
        }
        std::unique_lock lock(mutex_);
        auto [it, inserted] = predicate_ids_.emplace(std::move(key), static_cast<std::uint32_t>(predicates_.size()));
        if (inserted) predicates_.push_back({std::string(name), arity});
        return Predicate(it->second);
    }

    const PredicateInfo& predicate_info(Predicate p) {
        std::shared_lock lock(mutex_);
        return predicates_.at(p.id());
    }

    void set_label(RuleId id, std::string label) {
        std::unique_lock lock(mutex_);
        labels_[id] = std::move(label);
    }

    std::string label(RuleId id) {
        std::shared_lock lock(mutex_);
        auto it = labels_.find(id);
        return it == labels_.end() ? "rule" + std::to_string(id) : it->second;
    }

    std::size_t generated_count() {
        std::shared_lock lock(mutex_);
        return nulls_.size() + functions_.size();
    }

    std::atomic<RuleId> next_rule{0};

private:
    struct NameTable {
        std::unordered_map<std::string, std::uint32_t> ids;
        std::deque<std::string> names;
    };

    std::shared_mutex mutex_;
    NameTable constants_;
    NameTable variables_;
    std::unordered_map<NullProvenance, std::uint32_t, ProvenanceHash> null_ids_;
    std::deque<NullProvenance> nulls_;
    std::unordered_map<FunctionTerm, std::uint32_t, FunctionHash> function_ids_;
    std::deque<FunctionTerm> functions_;
    std::unordered_map<std::string, std::uint32_t> predicate_ids_;
    std::deque<PredicateInfo> predicates_;
    std::unordered_map<RuleId, std::string> labels_;
};

}  // namespace

Term constant(std::string_view name) { return TermStore::get().intern_name(TermKind::Constant, name); }
Term variable(std::string_view name) { return TermStore::get().intern_name(TermKind::Variable, name); }
Term null_term(const NullProvenance& p) { return TermStore::get().intern_null(p); }
bool find_null(const NullProvenance& p, Term& out) { return TermStore::get().lookup_null(p, out); }

Term function_term(const FunctionSymbol& symbol, std::span<const Term> args) {
    return TermStore::get().intern_function({symbol, std::vector<Term>(args.begin(), args.end())});
}

const std::string& term_name(Term t) { return TermStore::get().name(t); }
const NullProvenance& null_provenance(Term t) { return TermStore::get().provenance(t); }
const FunctionTerm& function_info(Term t) { return TermStore::get().function(t); }

RuleId next_rule_id() { return TermStore::get().next_rule.fetch_add(1); }
void set_rule_label(RuleId id, std::string label) { TermStore::get().set_label(id, std::move(label)); }
std::string rule_label(RuleId id) { return TermStore::get().label(id); }
std::size_t interned_term_count() { return TermStore::get().generated_count(); }

std::string to_string(Term t) {
    switch (t.kind()) {
        case TermKind::Constant:
        case TermKind::Variable:
            return term_name(t);
        case TermKind::Null:
            return "z#" + std::to_string(t.index());
        case TermKind::Function: {
            const auto& f = function_info(t);
            std::string out = "f_" + rule_label(f.symbol.rule) + "_" + term_name(f.symbol.variable) + "(";
            for (std::size_t i = 0; i < f.args.size(); ++i) {
                if (i) out += ",";
                out += to_string(f.args[i]);
            }
            return out + ")";
        }
    }
    return "?";
}

Predicate predicate(std::string_view name, std::size_t arity) {
    return TermStore::get().intern_predicate(name, arity);
}

const std::string& Predicate::name() const { return TermStore::get().predicate_info(*this).name; }
std::size_t Predicate::arity() const { return TermStore::get().predicate_info(*this).arity; }

bool atom_id_less(const Atom& a, const Atom& b) {
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.args < b.args;
}

std::string to_string(const Atom& a) {
    std::string out = a.pred.name() + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ",";
        out += to_string(a.args[i]);
    }
    return out + ")";
}

}  // namespace chasebound
