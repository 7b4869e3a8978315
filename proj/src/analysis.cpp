#include "chasebound/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "chasebound/errors.hpp"
#include "chasebound/transforms.hpp"

namespace chasebound {

std::string to_string(Status s) {
    switch (s) {
        case Status::Yes: return "yes";
        case Status::No: return "no";
        case Status::Unknown: return "unknown";
    }
    return "unknown";
}

namespace {

// Position graph over (predicate, index). Returns true when no cycle goes
// through a special edge.
bool acyclic(const Ruleset& rules, bool special_from_all_body_variables) {
    std::map<std::pair<std::uint32_t, std::size_t>, std::size_t> ids;
    auto id = [&](Predicate p, std::size_t i) {
        return ids.emplace(std::make_pair(p.id(), i), ids.size()).first->second;
    };
    struct Edge {
        std::size_t from, to;
        bool special;
    };
    std::vector<Edge> edges;
    for (const auto& r : rules) {
        std::vector<std::pair<Term, std::size_t>> body_positions;
        for (const auto& a : r.body())
            for (std::size_t i = 0; i < a.args.size(); ++i)
                if (a.args[i].is_variable()) body_positions.emplace_back(a.args[i], id(a.pred, i));
        for (const auto& h : r.head()) {
            for (std::size_t j = 0; j < h.args.size(); ++j) {
                Term t = h.args[j];
                std::size_t to = id(h.pred, j);
                for (const auto& [v, from] : body_positions) {
                    if (r.is_frontier(v) && v == t) edges.push_back({from, to, false});
                    bool source_ok = special_from_all_body_variables || r.is_frontier(v);
                    if (source_ok && r.is_existential(t)) edges.push_back({from, to, true});
                }
            }
        }
    }
    // Tarjan SCC.
    const std::size_t n = ids.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : edges) adj[e.from].push_back(e.to);
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    int counter = 0, comps = 0;
    std::function<void(std::size_t)> strong = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (auto w : adj[v]) {
            if (index[w] < 0) {
                strong(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            while (true) {
                auto w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp[w] = comps;
                if (w == v) break;
            }
            ++comps;
        }
    };
    for (std::size_t v = 0; v < n; ++v)
        if (index[v] < 0) strong(v);
    for (const auto& e : edges)
        if (e.special && comp[e.from] == comp[e.to]) return false;
    return true;
}

}  // namespace

RulesetStats detect_classes(const Ruleset& rules) {
    RulesetStats s;
    s.b = max_body_size(rules);
    for (auto p : predicates_of(rules)) s.arities.emplace(p.name(), p.arity());
    for (const auto& r : rules) {
        s.is_datalog = s.is_datalog && r.is_datalog();
        s.is_fe = s.is_fe && r.is_fully_existential();
        s.is_linear = s.is_linear && r.body().size() == 1;
        bool guarded = r.body_variables().empty();
        for (const auto& a : r.body()) {
            bool all = std::all_of(r.body_variables().begin(), r.body_variables().end(), [&](Term v) {
                return std::find(a.args.begin(), a.args.end(), v) != a.args.end();
            });
            guarded = guarded || all;
        }
        s.is_guarded = s.is_guarded && guarded;
    }
    s.weakly_acyclic = acyclic(rules, false);
    s.richly_acyclic = acyclic(rules, true);
    return s;
}

Verdict ct_check(const Ruleset& rules, ChaseVariant variant, std::size_t fuel) {
    Verdict v;
    v.check = "ct";
    v.variant = variant;
    v.fuel = fuel;
    auto result = run_chase(critical_instance(rules), rules, variant, fuel);
    if (result.terminated) {
        v.status = Status::Yes;
        v.chase_rank = result.chase_rank;
        v.rationale = "chase of the critical instance terminates";
        return v;
    }
    auto stats = detect_classes(rules);
    if (variant == ChaseVariant::Oblivious ? stats.richly_acyclic : stats.weakly_acyclic) {
        v.status = Status::Yes;
        v.rationale = variant == ChaseVariant::Oblivious ? "richly acyclic" : "weakly acyclic";
        return v;
    }
    v.status = Status::Unknown;
    v.rationale = result.budget_exhausted ? "chase of the critical instance exceeds the atom budget"
                                          : "chase of the critical instance exceeds the fuel";
    v.budget = result.budget_exhausted ? "atoms>" + std::to_string(ChaseOptions{}.max_atoms)
                                       : "fuel=" + std::to_string(fuel);
    return v;
}

std::optional<std::size_t> depth_bound(const Ruleset& rules, ChaseVariant variant, std::size_t fuel) {
    auto result = run_chase(critical_instance(rules), rules, variant, fuel);
    if (!result.terminated) return std::nullopt;
    std::size_t k = 0;
    if (variant == ChaseVariant::Oblivious) {
        for (const auto& [t, r] : result.born) k = std::max(k, r);
    } else {
        for (const auto& [t, d] : result.frontier_depth) k = std::max(k, d);
    }
    return k;
}

namespace {

using Code = std::vector<std::uint32_t>;

struct CodeHash {
    std::size_t operator()(const Code& c) const {
        std::size_t h = c.size();
        for (auto x : c) h = (h ^ x) * 0x100000001b3ull + (h >> 29);
        return h;
    }
};

// Lexicographically least sorted atom sequence over all relabelings of the
// fresh constants (codes >= fixed). Atoms are [pred, args...].
class Canonicalizer {
public:
    explicit Canonicalizer(std::uint32_t fixed) : fixed_(fixed) {}

    Code operator()(const std::vector<Code>& atoms) {
        atoms_ = &atoms;
        best_.clear();
        have_best_ = false;
        std::vector<bool> used(atoms.size(), false);
        std::unordered_map<std::uint32_t, std::uint32_t> label;
        Code seq;
        search(used, label, fixed_, seq, 0);
        return best_;
    }

private:
    Code code_of(const Code& atom, const std::unordered_map<std::uint32_t, std::uint32_t>& label,
                 std::uint32_t next) const {
        Code c(atom.size());
        c[0] = atom[0];
        std::unordered_map<std::uint32_t, std::uint32_t> provisional;
        for (std::size_t i = 1; i < atom.size(); ++i) {
            auto t = atom[i];
            if (t < fixed_) {
                c[i] = t;
            } else if (auto it = label.find(t); it != label.end()) {
                c[i] = it->second;
            } else {
                auto [pit, inserted] = provisional.emplace(t, next);
                if (inserted) ++next;
                c[i] = pit->second;
            }
        }
        return c;
    }

    void search(std::vector<bool>& used, std::unordered_map<std::uint32_t, std::uint32_t>& label,
                std::uint32_t next, Code& seq, std::size_t placed) {
        const auto& atoms = *atoms_;
        if (have_best_) {
            // Prune when the prefix is already larger than the best sequence.
            auto cmp = std::lexicographical_compare_three_way(seq.begin(), seq.end(), best_.begin(),
                                                             best_.begin() + seq.size());
            if (cmp > 0) return;
        }
        if (placed == atoms.size()) {
            if (!have_best_ || seq < best_) {
                best_ = seq;
                have_best_ = true;
            }
            return;
        }
        Code min_code;
        std::vector<std::size_t> ties;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (used[i]) continue;
            Code c = code_of(atoms[i], label, next);
            if (ties.empty() || c < min_code) {
                min_code = std::move(c);
                ties.assign(1, i);
            } else if (c == min_code) {
                ties.push_back(i);
            }
        }
        for (auto i : ties) {
            std::vector<std::uint32_t> added;
            std::uint32_t n = next;
            for (std::size_t j = 1; j < atoms[i].size(); ++j) {
                auto t = atoms[i][j];
                if (t >= fixed_ && !label.count(t)) {
                    label.emplace(t, n++);
                    added.push_back(t);
                }
            }
            used[i] = true;
            std::size_t old = seq.size();
            seq.insert(seq.end(), min_code.begin(), min_code.end());
            search(used, label, n, seq, placed + 1);
            seq.resize(old);
            used[i] = false;
            for (auto t : added) label.erase(t);
        }
    }

    std::uint32_t fixed_;
    const std::vector<Code>* atoms_ = nullptr;
    Code best_;
    bool have_best_ = false;
};

std::string fresh_name(std::size_t i) {
    std::string s;
    ++i;
    while (i > 0) {
        --i;
        s.insert(s.begin(), static_cast<char>('a' + i % 26));
        i /= 26;
    }
    return s;
}

// log of the binomial coefficient.
double log_choose(double n, double k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

}  // namespace

std::vector<Instance> enumerate_instances(std::span<const Predicate> predicates, std::size_t max_atoms,
                                          std::span<const Term> fixed, const EnumerationOptions& options) {
    std::vector<Predicate> preds(predicates.begin(), predicates.end());
    std::sort(preds.begin(), preds.end(), [](Predicate a, Predicate b) { return a.name() < b.name(); });
    preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
    std::vector<Term> consts(fixed.begin(), fixed.end());
    std::sort(consts.begin(), consts.end(), [](Term a, Term b) { return term_name(a) < term_name(b); });
    consts.erase(std::unique(consts.begin(), consts.end()), consts.end());
    const auto F = static_cast<std::uint32_t>(consts.size());

    if (max_atoms == 0) return {Instance{}};
    if (preds.empty()) return {};

    // Lower bound on the number of classes of the largest size: labeled
    // instances over a domain of D terms divided by the D! relabelings.
    std::size_t max_arity = 0;
    for (auto p : preds) max_arity = std::max(max_arity, p.arity());
    {
        const double fresh = static_cast<double>(max_atoms * max_arity);
        double atoms_available = 0;
        for (auto p : preds) atoms_available += std::pow(F + fresh, static_cast<double>(p.arity()));
        double log_est = log_choose(atoms_available, static_cast<double>(max_atoms)) - std::lgamma(fresh + 1);
        if (log_est > std::log(static_cast<double>(options.ceiling)))
            throw InfeasibleError(log_est > 60 ? std::numeric_limits<std::uint64_t>::max()
                                               : static_cast<std::uint64_t>(std::exp(log_est)),
                                  options.ceiling);
    }

    Canonicalizer canon(F);
    auto decode = [&](const Code& key) {
        std::vector<Code> atoms;
        std::size_t i = 0;
        while (i < key.size()) {
            auto p = preds[key[i]];
            atoms.emplace_back(key.begin() + i, key.begin() + i + 1 + p.arity());
            i += 1 + p.arity();
        }
        return atoms;
    };

    std::vector<Code> level{Code{}};
    std::vector<std::vector<Code>> levels;
    std::uint64_t total = 0;
    for (std::size_t size = 1; size <= max_atoms; ++size) {
        std::unordered_set<Code, CodeHash> seen;
        std::vector<Code> next;
        for (const auto& key : level) {
            auto atoms = decode(key);
            std::uint32_t labels = F;
            for (const auto& a : atoms)
                for (std::size_t j = 1; j < a.size(); ++j) labels = std::max(labels, a[j] + 1);
            std::set<Code> present(atoms.begin(), atoms.end());
            for (std::uint32_t p = 0; p < preds.size(); ++p) {
                const std::size_t ar = preds[p].arity();
                Code atom(1 + ar, 0);
                atom[0] = p;
                // Arguments range over existing terms and new labels taken in order.
                std::function<void(std::size_t, std::uint32_t)> fill = [&](std::size_t j, std::uint32_t top) {
                    if (j > ar) {
                        if (present.count(atom)) return;
                        auto extended = atoms;
                        extended.push_back(atom);
                        Code c = canon(extended);
                        if (seen.insert(c).second) {
                            next.push_back(std::move(c));
                            if (total + next.size() > options.ceiling)
                                throw InfeasibleError(total + next.size(), options.ceiling);
                        }
                        return;
                    }
                    for (std::uint32_t t = 0; t <= top; ++t) {
                        atom[j] = t;
                        fill(j + 1, t == top ? top + 1 : top);
                    }
                };
                fill(1, labels);
            }
        }
        std::sort(next.begin(), next.end());
        // Extrapolate the remaining levels from the growth ratio so far.
        if (size >= 2 && size < max_atoms && !level.empty()) {
            double ratio = static_cast<double>(next.size()) / static_cast<double>(level.size());
            double projected = static_cast<double>(total + next.size());
            double current = static_cast<double>(next.size());
            for (std::size_t s = size + 1; s <= max_atoms; ++s) {
                current *= ratio;
                projected += current;
            }
            if (projected > static_cast<double>(options.ceiling))
                throw InfeasibleError(projected >= 1.8e19 ? std::numeric_limits<std::uint64_t>::max()
                                                          : static_cast<std::uint64_t>(projected),
                                      options.ceiling);
        }
        total += next.size();
        levels.push_back(next);
        level = std::move(next);
    }

    std::vector<Term> fresh_terms;
    std::unordered_set<std::string> fixed_names;
    for (auto c : consts) fixed_names.insert(term_name(c));
    std::size_t name_counter = 0;
    auto term_for = [&](std::uint32_t code) {
        if (code < F) return consts[code];
        while (fresh_terms.size() <= code - F) {
            std::string name;
            do name = fresh_name(name_counter++);
            while (fixed_names.count(name));
            fresh_terms.push_back(constant(name));
        }
        return fresh_terms[code - F];
    };

    std::vector<Instance> out;
    for (const auto& lvl : levels) {
        for (const auto& key : lvl) {
            Instance inst;
            for (const auto& a : decode(key)) {
                std::vector<Term> args;
                for (std::size_t j = 1; j < a.size(); ++j) args.push_back(term_for(a[j]));
                inst.insert(Atom(preds[a[0]], std::move(args)));
            }
            out.push_back(std::move(inst));
        }
    }
    return out;
}

namespace {

std::vector<Predicate> body_predicates(const Ruleset& rules) {
    std::vector<Predicate> out;
    for (const auto& r : rules)
        for (const auto& a : r.body())
            if (std::find(out.begin(), out.end(), a.pred) == out.end()) out.push_back(a.pred);
    return out;
}

// Chase round k+1 is productive on `instance`.
bool exceeds(const Instance& instance, const Ruleset& rules, std::size_t k, ChaseVariant variant) {
    ChaseOptions o;
    o.variant = variant;
    o.fuel = k;
    o.probe = true;
    return !run_chase(instance, rules, o).terminated;
}

Witness make_witness(const Instance& instance, const Ruleset& rules, std::size_t k, ChaseVariant variant) {
    ChaseOptions o;
    o.variant = variant;
    o.fuel = k + 1;
    o.probe = false;
    auto result = run_chase(instance, rules, o);
    Witness w;
    w.instance = instance;
    w.rank = k + 1;
    for (const auto& a : result.atoms)
        if (result.rank_of(a) == k + 1) {
            w.fact = a;
            break;
        }
    return w;
}

std::uint64_t power(std::uint64_t b, std::size_t e) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) {
        if (b != 0 && r > std::numeric_limits<std::uint64_t>::max() / b) return std::numeric_limits<std::uint64_t>::max();
        r *= b;
    }
    return r;
}

}  // namespace

Verdict k_bounded(const Ruleset& rules, std::size_t k, ChaseVariant variant, const KBoundedOptions& options) {
    Verdict v;
    v.check = "k-bounded";
    v.variant = variant;
    v.k = k;
    const std::uint64_t size = power(max_body_size(rules), k + 1);
    if (size > 64) throw InfeasibleError(std::numeric_limits<std::uint64_t>::max(), options.ceiling);
    auto preds = body_predicates(rules);
    auto consts = constants_of(rules);
    EnumerationOptions eo;
    eo.ceiling = options.ceiling;
    std::vector<Instance> instances{Instance{}};
    if (size > 0) {
        auto more = enumerate_instances(preds, static_cast<std::size_t>(size), consts, eo);
        instances.insert(instances.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }

    std::atomic<std::size_t> first_failure{instances.size()};
    auto worker = [&](std::size_t start, std::size_t stride) {
        for (std::size_t i = start; i < instances.size(); i += stride) {
            if (i >= first_failure.load()) return;
            if (exceeds(instances[i], rules, k, variant)) {
                std::size_t cur = first_failure.load();
                while (i < cur && !first_failure.compare_exchange_weak(cur, i)) {}
                return;
            }
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, options.jobs);
    if (jobs == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> threads;
        for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(worker, j, jobs);
        for (auto& t : threads) t.join();
    }
    const std::size_t fail = first_failure.load();
    // Instances examined up to the decision, independent of scheduling.
    v.instances_examined = fail < instances.size() ? fail + 1 : instances.size();
    if (fail < instances.size()) {
        v.status = Status::No;
        v.rationale = "instance whose chase is productive at round k+1";
        v.witness = make_witness(instances[fail], rules, k, variant);
    } else {
        v.status = Status::Yes;
        v.rationale = "every instance of size at most b^(k+1) is saturated within k rounds";
    }
    return v;
}

Verdict k_bounded_fe_oblivious(const Ruleset& rules, std::size_t k) {
    for (const auto& r : rules)
        if (!r.is_fully_existential())
            throw std::invalid_argument("k_bounded_fe_oblivious: rule '" + r.label() +
                                        "' is not fully existential; use k_bounded");
    Verdict v;
    v.check = "k-bounded";
    v.variant = ChaseVariant::Oblivious;
    v.k = k;
    v.instances_examined = 1;
    auto critical = critical_instance(rules);
    if (exceeds(critical, rules, k, ChaseVariant::Oblivious)) {
        v.status = Status::No;
        v.rationale = "critical instance chase is productive at round k+1";
        v.witness = make_witness(critical, rules, k, ChaseVariant::Oblivious);
    } else {
        v.status = Status::Yes;
        v.rationale = "critical instance chase is saturated within k rounds";
    }
    return v;
}

namespace {

// Frozen CQs met while rewriting the datalog-head and rule-body queries;
// their chases grow with the rewriting depth, so they make cheap witnesses.
// Frozen rewritings of the head and body queries, smallest first.
std::vector<Instance> rewriting_candidates(const Ruleset& rules, const ClassifyOptions& options) {
    UnionOfQueries seeds = hd_queries(rules);
    for (auto& q : body_queries(rules)) seeds.push_back(std::move(q));
    RewriteOptions ro = options.rewrite;
    ro.max_steps = options.max_k + 2;
    ro.max_cq_atoms = std::max<std::size_t>(ro.max_cq_atoms, 64);
    ro.maximal_aggregation_only = true;
    std::vector<Instance> candidates;
    std::set<std::string> seen;
    for (const auto& seed : seeds) {
        auto state = initial_state(seed);
        auto collect = [&] {
            for (const auto& q : state.ucq) {
                Instance inst(std::span<const Atom>(q.atoms));
                auto frozen = freeze(inst).instance;
                auto key = to_string(frozen);
                if (seen.insert(key).second) candidates.push_back(std::move(frozen));
            }
        };
        collect();
        while (!state.saturated && !state.budget_exhausted && state.steps < ro.max_steps) {
            aggregate_step(state, rules, ro);
            collect();
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Instance& a, const Instance& b) { return a.size() < b.size(); });
    return candidates;
}

// First candidate whose chase is productive at round k+1. Candidates whose
// chase already stopped are marked dead.
const Instance* productive_candidate(const std::vector<Instance>& candidates, std::vector<bool>& dead,
                                     const Ruleset& rules, ChaseVariant variant, std::size_t k) {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (dead[i]) continue;
        ChaseOptions o;
        o.variant = variant;
        o.fuel = k + 1;
        o.probe = false;
        auto result = run_chase(candidates[i], rules, o);
        if (result.budget_exhausted) continue;
        if (result.chase_rank == k + 1) return &candidates[i];
        if (result.terminated) dead[i] = true;
    }
    return nullptr;
}

}  // namespace

Verdict classify_boundedness(const Ruleset& rules, ChaseVariant variant, const ClassifyOptions& options) {
    Verdict v;
    v.check = "classify";
    v.variant = variant;
    auto stats = detect_classes(rules);
    Verdict ct = ct_check(rules, variant, options.fuel);
    v.components.push_back(ct);
    std::optional<std::size_t> kd;
    if (ct.status == Status::Yes) kd = depth_bound(rules, variant, options.fuel);

    if (variant == ChaseVariant::Oblivious && stats.is_fe) {
        v.status = ct.status;
        v.rationale = "fully existential rules: bounded iff the oblivious chase terminates";
        if (ct.status == Status::Yes && kd) {
            v.depth_bound = *kd;
            v.bound = *kd;
        }
        return v;
    }

    const bool oblivious = variant == ChaseVariant::Oblivious;
    KEstimate est = oblivious ? estimate_kAF(rules, options.rewrite) : estimate_kFO(rules, options.rewrite);
    Verdict kv;
    kv.check = oblivious ? "kAF" : "kFO";
    kv.status = est.saturated ? Status::Yes : Status::Unknown;
    if (est.saturated) {
        kv.k = est.k;
        kv.rationale = "breadth-first rewriting saturates";
    } else {
        kv.rationale = "breadth-first rewriting did not saturate";
        kv.budget = est.budget_reason;
    }
    v.components.push_back(kv);

    if (ct.status == Status::Yes && est.saturated && kd) {
        v.status = Status::Yes;
        v.depth_bound = *kd;
        v.k = est.k;
        v.bound = *kd * (est.k + 1) + est.k;
        v.rationale = oblivious ? "terminating and FO-rewritable on full-atomic queries"
                                : "terminating and FO-rewritable on rule-body queries";
        return v;
    }

    auto candidates = rewriting_candidates(rules, options);
    std::vector<bool> dead(candidates.size(), false);
    for (std::size_t k = 0; k <= options.max_k; ++k) {
        if (const Instance* hit = productive_candidate(candidates, dead, rules, variant, k)) {
            Verdict kb;
            kb.check = "k-bounded";
            kb.variant = variant;
            kb.k = k;
            kb.status = Status::No;
            kb.rationale = "frozen rewriting is productive at round k+1";
            kb.witness = make_witness(*hit, rules, k, variant);
            v.components.push_back(std::move(kb));
            continue;
        }
        try {
            Verdict kb = k_bounded(rules, k, variant, options.kbounded);
            Status s = kb.status;
            v.components.push_back(std::move(kb));
            if (s == Status::Yes) {
                v.status = Status::Yes;
                v.k = k;
                v.bound = k;
                v.rationale = "k-bounded";
                return v;
            }
        } catch (const InfeasibleError& e) {
            Verdict kb;
            kb.check = "k-bounded";
            kb.variant = variant;
            kb.k = k;
            kb.status = Status::Unknown;
            kb.rationale = "instance enumeration infeasible";
            kb.ceiling = e.ceiling();
            kb.estimate = e.estimate();
            v.components.push_back(std::move(kb));
            v.status = Status::Unknown;
            v.rationale = "no bound found within the budgets";
            return v;
        }
    }
    v.status = Status::No;
    v.qualifier = "no-up-to-" + std::to_string(options.max_k);
    v.rationale = "not k-bounded for any k up to " + std::to_string(options.max_k);
    return v;
}

}  // namespace chasebound
