#include "chasebound/rewrite.hpp"

#include <algorithm>
#include <optional>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "chasebound/homomorphism.hpp"
#include "chasebound/transforms.hpp"

namespace chasebound {
namespace {

using Mapping = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

struct RuleCopy {
    std::vector<Atom> head;
    std::vector<Atom> body;
    std::unordered_set<Term> existentials;
    std::unordered_set<Term> frontier;
};

Term renamed(Term v, std::size_t slot) {
    return variable("_r" + std::to_string(slot) + "_" + term_name(v));
}

class CopyCache {
public:
    explicit CopyCache(const Ruleset& rules) : rules_(rules) {}

    const RuleCopy& get(std::size_t rule, std::size_t slot) {
        auto key = std::make_pair(rule, slot);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const Rule& r = rules_[rule];
        Substitution s;
        for (auto v : r.body_variables()) s.bind(v, renamed(v, slot));
        for (auto v : r.existentials()) s.bind(v, renamed(v, slot));
        RuleCopy copy;
        for (const auto& a : r.head()) copy.head.push_back(s.apply(a));
        for (const auto& a : r.body()) copy.body.push_back(s.apply(a));
        for (auto v : r.existentials()) copy.existentials.insert(s.apply(v));
        for (auto v : r.frontier()) copy.frontier.insert(s.apply(v));
        return cache_.emplace(key, std::move(copy)).first->second;
    }

private:
    const Ruleset& rules_;
    std::map<std::pair<std::size_t, std::size_t>, RuleCopy> cache_;
};

class UnionFind {
public:
    Term find(Term t) {
        auto it = parent_.find(t);
        if (it == parent_.end()) {
            parent_.emplace(t, t);
            order_.push_back(t);
            return t;
        }
        if (it->second == t) return t;
        Term root = find(it->second);
        parent_[t] = root;
        return root;
    }
    void unite(Term a, Term b) {
        Term ra = find(a), rb = find(b);
        if (ra != rb) parent_[rb] = ra;
    }
    const std::vector<Term>& terms() const { return order_; }

private:
    std::unordered_map<Term, Term> parent_;
    std::vector<Term> order_;
};

struct Member {
    std::size_t rule;
    std::size_t slot;
    const Mapping* mapping;
};

struct QueryContext {
    const ConjunctiveQuery& q;
    std::unordered_set<Term> answer_vars;
    std::unordered_map<Term, std::size_t> answer_pos;
    std::unordered_map<Term, std::size_t> first_occurrence;

    explicit QueryContext(const ConjunctiveQuery& query) : q(query) {
        for (std::size_t i = 0; i < q.answers.size(); ++i) {
            if (!q.answers[i].is_variable()) continue;
            answer_vars.insert(q.answers[i]);
            answer_pos.emplace(q.answers[i], i);
        }
        std::size_t n = 0;
        for (const auto& a : q.atoms)
            for (auto t : a.args) first_occurrence.emplace(t, n++);
    }
};

// Most general partition for the members' atom mappings, plus the classes
// holding an existential variable. Returns false when some class is invalid.
struct Partition {
    UnionFind uf;
    std::unordered_set<Term> existentials;
    std::unordered_set<Term> frontier;
    std::unordered_set<Term> existential_roots;
};

bool build_partition(const QueryContext& ctx, CopyCache& copies, std::span<const Member> members,
                     Partition& part) {
    for (const auto& m : members) {
        const RuleCopy& copy = copies.get(m.rule, m.slot);
        part.existentials.insert(copy.existentials.begin(), copy.existentials.end());
        part.frontier.insert(copy.frontier.begin(), copy.frontier.end());
        for (auto [qi, hi] : *m.mapping) {
            const Atom& qa = ctx.q.atoms[qi];
            const Atom& ha = copy.head[hi];
            if (qa.pred != ha.pred) return false;
            for (std::size_t k = 0; k < qa.args.size(); ++k) part.uf.unite(qa.args[k], ha.args[k]);
        }
    }
    std::unordered_map<Term, std::size_t> constants, exist;
    std::unordered_set<Term> tainted;  // roots holding a constant, frontier or answer variable
    for (auto t : part.uf.terms()) {
        Term r = part.uf.find(t);
        if (t.is_constant()) {
            if (++constants[r] > 1) return false;
            tainted.insert(r);
        } else if (part.existentials.count(t)) {
            if (++exist[r] > 1) return false;
        } else if (part.frontier.count(t) || ctx.answer_vars.count(t)) {
            tainted.insert(r);
        }
    }
    for (const auto& [r, n] : exist) {
        if (tainted.count(r)) return false;
        part.existential_roots.insert(r);
    }
    return true;
}

// First query atom outside `covered` holding a variable unified with an
// existential, or npos.
std::size_t first_separated(const QueryContext& ctx, Partition& part,
                            const std::vector<bool>& covered) {
    for (std::size_t j = 0; j < ctx.q.atoms.size(); ++j) {
        if (covered[j]) continue;
        for (auto t : ctx.q.atoms[j].args) {
            if (t.is_constant()) continue;
            // Terms never unified are their own singleton classes.
            Term r = part.uf.find(t);
            if (part.existential_roots.count(r)) return j;
        }
    }
    return std::string::npos;
}

std::vector<std::vector<Term>> classes_of(Partition& part) {
    std::map<Term, std::vector<Term>> by_root;
    for (auto t : part.uf.terms()) by_root[part.uf.find(t)].push_back(t);
    std::vector<std::vector<Term>> out;
    for (auto& [r, members] : by_root) {
        std::sort(members.begin(), members.end(),
                  [](Term a, Term b) { return to_string(a) < to_string(b); });
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return to_string(a[0]) < to_string(b[0]); });
    return out;
}

void extend_piece(const QueryContext& ctx, CopyCache& copies, std::size_t rule, Mapping mapping,
                  std::vector<bool> covered, std::set<Mapping>& seen, std::vector<PieceUnifier>& out) {
    Partition part;
    Member m{rule, 0, &mapping};
    if (!build_partition(ctx, copies, std::span<const Member>(&m, 1), part)) return;
    std::size_t j = first_separated(ctx, part, covered);
    if (j == std::string::npos) {
        Mapping key = mapping;
        std::sort(key.begin(), key.end());
        if (!seen.insert(key).second) return;
        PieceUnifier u;
        u.rule = rule;
        u.mapping = key;
        for (auto [qi, hi] : key) u.piece.push_back(qi);
        u.classes = classes_of(part);
        out.push_back(std::move(u));
        return;
    }
    const RuleCopy& copy = copies.get(rule, 0);
    covered[j] = true;
    for (std::size_t h = 0; h < copy.head.size(); ++h) {
        if (copy.head[h].pred != ctx.q.atoms[j].pred) continue;
        Mapping next = mapping;
        next.emplace_back(static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(h));
        extend_piece(ctx, copies, rule, std::move(next), covered, seen, out);
    }
}

std::vector<PieceUnifier> unifiers_for(const QueryContext& ctx, CopyCache& copies, const Ruleset& rules,
                                       std::size_t rule) {
    std::vector<PieceUnifier> out;
    std::set<Mapping> seen;
    const RuleCopy& copy = copies.get(rule, 0);
    (void)rules;
    for (std::size_t i = 0; i < ctx.q.atoms.size(); ++i) {
        for (std::size_t h = 0; h < copy.head.size(); ++h) {
            if (copy.head[h].pred != ctx.q.atoms[i].pred) continue;
            std::vector<bool> covered(ctx.q.atoms.size(), false);
            covered[i] = true;
            extend_piece(ctx, copies, rule,
                         Mapping{{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(h)}},
                         std::move(covered), seen, out);
        }
    }
    return out;
}

// Renames non-answer variables to X1, X2, ... in first-occurrence order.
ConjunctiveQuery normalize(ConjunctiveQuery q) {
    std::unordered_set<std::string> taken;
    for (auto t : q.answers)
        if (t.is_variable()) taken.insert(term_name(t));
    std::unordered_set<Term> answer_set(q.answers.begin(), q.answers.end());
    Substitution s;
    std::size_t counter = 0;
    for (const auto& a : q.atoms) {
        for (auto t : a.args) {
            if (!t.is_variable() || answer_set.count(t) || s.contains(t)) continue;
            std::string name;
            do name = "X" + std::to_string(++counter);
            while (taken.count(name));
            s.bind(t, variable(name));
        }
    }
    ConjunctiveQuery out;
    out.atoms = apply_substitution(s, q.atoms);
    out.answers = std::move(q.answers);
    return out;
}

std::optional<ConjunctiveQuery> rewrite_members(const QueryContext& ctx, CopyCache& copies,
                                                std::span<const Member> members) {
    Partition part;
    if (!build_partition(ctx, copies, members, part)) return std::nullopt;
    std::vector<bool> covered(ctx.q.atoms.size(), false);
    for (const auto& m : members)
        for (auto [qi, hi] : *m.mapping) {
            if (covered[qi]) return std::nullopt;
            covered[qi] = true;
        }
    if (first_separated(ctx, part, covered) != std::string::npos) return std::nullopt;

    // Representative: constant, then answer variable, then query variable,
    // then rule variable.
    auto priority = [&](Term t) -> std::pair<int, std::size_t> {
        if (t.is_constant()) return {0, 0};
        if (auto it = ctx.answer_pos.find(t); it != ctx.answer_pos.end()) return {1, it->second};
        if (auto it = ctx.first_occurrence.find(t); it != ctx.first_occurrence.end()) return {2, it->second};
        return {3, t.raw()};
    };
    std::unordered_map<Term, Term> rep;
    for (auto t : part.uf.terms()) {
        Term r = part.uf.find(t);
        auto it = rep.find(r);
        if (it == rep.end() || priority(t) < priority(it->second)) rep[r] = t;
    }
    Substitution s;
    for (auto t : part.uf.terms()) {
        Term r = rep.at(part.uf.find(t));
        if (r != t) s.bind(t, r);
    }

    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < ctx.q.atoms.size(); ++i)
        if (!covered[i]) atoms.push_back(ctx.q.atoms[i]);
    for (const auto& m : members) {
        const RuleCopy& copy = copies.get(m.rule, m.slot);
        atoms.insert(atoms.end(), copy.body.begin(), copy.body.end());
    }
    ConjunctiveQuery out;
    out.atoms = apply_substitution(s, atoms);
    for (auto t : ctx.q.answers) out.answers.push_back(s.apply(t));
    return normalize(std::move(out));
}

}  // namespace

std::vector<PieceUnifier> piece_unifiers(const ConjunctiveQuery& q, const Ruleset& rules, std::size_t rule) {
    QueryContext ctx(q);
    CopyCache copies(rules);
    return unifiers_for(ctx, copies, rules, rule);
}

std::vector<PieceUnifier> piece_unifiers(const ConjunctiveQuery& q, const Ruleset& rules) {
    QueryContext ctx(q);
    CopyCache copies(rules);
    std::vector<PieceUnifier> out;
    for (std::size_t r = 0; r < rules.size(); ++r) {
        auto us = unifiers_for(ctx, copies, rules, r);
        out.insert(out.end(), std::make_move_iterator(us.begin()), std::make_move_iterator(us.end()));
    }
    return out;
}

std::optional<ConjunctiveQuery> rewrite_with(const ConjunctiveQuery& q, const Ruleset& rules,
                                             std::span<const PieceUnifier> unifiers) {
    QueryContext ctx(q);
    CopyCache copies(rules);
    std::vector<Member> members;
    for (std::size_t i = 0; i < unifiers.size(); ++i)
        members.push_back({unifiers[i].rule, i, &unifiers[i].mapping});
    return rewrite_members(ctx, copies, members);
}

bool cq_subsumes(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2) {
    if (q1.answers.size() != q2.answers.size())
        throw std::invalid_argument("cq_subsumes: answer arities differ");
    Substitution seed;
    for (std::size_t i = 0; i < q1.answers.size(); ++i) {
        Term a = q1.answers[i], b = q2.answers[i];
        if (a.is_constant()) {
            if (a != b) return false;
        } else if (!seed.bind(a, b)) {
            return false;
        }
    }
    Instance target(std::span<const Atom>(q2.atoms));
    return first_homomorphism(q1.atoms, target, seed).has_value();
}

bool cq_equivalent(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2) {
    return cq_subsumes(q1, q2) && cq_subsumes(q2, q1);
}

RewritingState initial_state(const ConjunctiveQuery& q) {
    RewritingState s;
    s.ucq.push_back(q);
    s.frontier.push_back(q);
    s.sizes.push_back(1);
    return s;
}

void aggregate_step(RewritingState& state, const Ruleset& rules, const RewriteOptions& options) {
    if (state.saturated || state.budget_exhausted) return;
    std::vector<ConjunctiveQuery> candidates;
    std::size_t aggregations = 0;
    auto exhaust = [&](const std::string& why) {
        if (!state.budget_exhausted) state.budget_reason = why;
        state.budget_exhausted = true;
    };

    for (const auto& q : state.frontier) {
        if (state.budget_exhausted) break;
        QueryContext ctx(q);
        CopyCache copies(rules);
        std::vector<PieceUnifier> units;
        for (std::size_t r = 0; r < rules.size(); ++r) {
            auto us = unifiers_for(ctx, copies, rules, r);
            units.insert(units.end(), std::make_move_iterator(us.begin()), std::make_move_iterator(us.end()));
        }
        std::vector<Member> chosen;
        std::vector<bool> covered(q.atoms.size(), false);
        // Aggregations of unifiers with pairwise disjoint pieces. A partition
        // that is invalid stays invalid under further joins, so prune there.
        auto dfs = [&](auto&& self, std::size_t start) -> void {
            for (std::size_t i = start; i < units.size() && !state.budget_exhausted; ++i) {
                const auto& u = units[i];
                if (std::any_of(u.piece.begin(), u.piece.end(), [&](auto a) { return covered[a]; }))
                    continue;
                if (++aggregations > options.max_aggregations_per_step) {
                    exhaust("more than " + std::to_string(options.max_aggregations_per_step) +
                            " aggregated unifiers in one step");
                    return;
                }
                chosen.push_back({u.rule, chosen.size(), &u.mapping});
                auto result = rewrite_members(ctx, copies, chosen);
                if (result && result->atoms.size() > options.max_cq_atoms) {
                    exhaust("rewriting with " + std::to_string(result->atoms.size()) +
                            " atoms exceeds the limit of " + std::to_string(options.max_cq_atoms));
                    return;
                }
                if (result) {
                    for (auto a : u.piece) covered[a] = true;
                    candidates.push_back(std::move(*result));
                    self(self, i + 1);
                    for (auto a : u.piece) covered[a] = false;
                }
                chosen.pop_back();
            }
        };
        // Greedy variant: from each unifier, absorb every later compatible one
        // in order, then wrap around.
        auto greedy = [&](std::size_t start) {
            chosen.clear();
            std::fill(covered.begin(), covered.end(), false);
            std::optional<ConjunctiveQuery> last;
            for (std::size_t n = 0; n < units.size(); ++n) {
                const auto& u = units[(start + n) % units.size()];
                if (std::any_of(u.piece.begin(), u.piece.end(), [&](auto a) { return covered[a]; }))
                    continue;
                chosen.push_back({u.rule, chosen.size(), &u.mapping});
                auto result = rewrite_members(ctx, copies, chosen);
                if (!result || result->atoms.size() > options.max_cq_atoms) {
                    chosen.pop_back();
                    continue;
                }
                for (auto a : u.piece) covered[a] = true;
                last = std::move(result);
            }
            if (last) candidates.push_back(std::move(*last));
        };
        if (options.maximal_aggregation_only) {
            for (std::size_t s = 0; s < units.size(); ++s) greedy(s);
        } else {
            dfs(dfs, 0);
        }
    }

    std::vector<bool> fresh(state.ucq.size(), false);
    for (auto& c : candidates) {
        if (c.atoms.size() > options.max_cq_atoms) {
            exhaust("rewriting with " + std::to_string(c.atoms.size()) + " atoms exceeds the limit of " +
                    std::to_string(options.max_cq_atoms));
            continue;
        }
        bool subsumed = std::any_of(state.ucq.begin(), state.ucq.end(),
                                    [&](const ConjunctiveQuery& u) { return cq_subsumes(u, c); });
        if (subsumed) continue;
        std::size_t w = 0;
        for (std::size_t i = 0; i < state.ucq.size(); ++i) {
            if (cq_subsumes(c, state.ucq[i])) continue;
            if (w != i) {
                state.ucq[w] = std::move(state.ucq[i]);
                fresh[w] = fresh[i];
            }
            ++w;
        }
        state.ucq.resize(w);
        fresh.resize(w);
        state.ucq.push_back(std::move(c));
        fresh.push_back(true);
        if (state.ucq.size() > options.max_ucq_size) {
            exhaust("UCQ exceeds " + std::to_string(options.max_ucq_size) + " queries");
            break;
        }
    }
    state.frontier.clear();
    for (std::size_t i = 0; i < state.ucq.size(); ++i)
        if (fresh[i]) state.frontier.push_back(state.ucq[i]);
    ++state.steps;
    if (!state.frontier.empty()) ++state.productive_steps;
    state.sizes.push_back(state.ucq.size());
    state.saturated = state.frontier.empty() && !state.budget_exhausted;
}

RewritingState rewrite(const ConjunctiveQuery& q, const Ruleset& rules, const RewriteOptions& options) {
    auto state = initial_state(q);
    while (!state.saturated && !state.budget_exhausted && state.steps < options.max_steps)
        aggregate_step(state, rules, options);
    if (!state.saturated && !state.budget_exhausted) {
        state.budget_exhausted = true;
        state.budget_reason = "step budget of " + std::to_string(options.max_steps) + " exhausted";
    }
    return state;
}

UnionOfQueries hd_queries(const Ruleset& rules) {
    auto df = df_decompose(rules);
    UnionOfQueries out;
    for (const auto& r : df.datalog_rules) {
        const Atom& head = r.head().front();
        std::unordered_map<Term, Term> names;
        ConjunctiveQuery q;
        std::vector<Term> args;
        for (std::size_t i = 0; i < head.args.size(); ++i) {
            Term t = head.args[i];
            Term v;
            if (t.is_variable() && names.count(t)) {
                v = names[t];
            } else {
                v = variable("X" + std::to_string(i + 1));
                if (t.is_variable()) names.emplace(t, v);
            }
            args.push_back(v);
        }
        q.atoms.emplace_back(head.pred, args);
        q.answers = args;
        bool duplicate = std::any_of(out.begin(), out.end(), [&](const ConjunctiveQuery& o) {
            return o.answers.size() == q.answers.size() && cq_equivalent(o, q);
        });
        if (!duplicate) out.push_back(std::move(q));
    }
    return out;
}

UnionOfQueries body_queries(const Ruleset& rules) {
    UnionOfQueries out;
    for (const auto& r : rules) {
        ConjunctiveQuery q;
        q.atoms = r.body();
        q.answers = r.frontier();
        out.push_back(std::move(q));
    }
    return out;
}

namespace {

KEstimate estimate(const UnionOfQueries& seeds, const Ruleset& rules, const RewriteOptions& options) {
    KEstimate out;
    out.seeds = seeds;
    out.saturated = true;
    for (const auto& q : seeds) {
        auto state = rewrite(q, rules, options);
        out.growth.push_back(state.sizes);
        if (!state.saturated) {
            if (out.saturated) out.budget_reason = state.budget_reason;
            out.saturated = false;
        }
        out.k = std::max(out.k, state.productive_steps);
    }
    return out;
}

}  // namespace

KEstimate estimate_kAF(const Ruleset& rules, const RewriteOptions& options) {
    return estimate(hd_queries(rules), rules, options);
}

KEstimate estimate_kFO(const Ruleset& rules, const RewriteOptions& options) {
    return estimate(body_queries(rules), rules, options);
}

}  // namespace chasebound
