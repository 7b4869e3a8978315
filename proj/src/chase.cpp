#include "chasebound/chase.hpp"

#include <algorithm>
#include <unordered_set>

#include "chasebound/errors.hpp"
#include "chasebound/homomorphism.hpp"

namespace chasebound {
namespace {

struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
        std::size_t h = v.size();
        for (auto x : v) h = (h ^ x) * 0x100000001b3ull + (h >> 31);
        return h;
    }
};

class Engine {
public:
    Engine(const Instance& instance, const Ruleset& rules, const ChaseOptions& options)
        : rules_(rules), options_(options) {
        semi_oblivious_ = options.variant == ChaseVariant::SemiOblivious;
        for (const auto& a : instance) {
            result_.atoms.insert(a);
            result_.rank.emplace(a, 0);
        }
        result_.round_end.push_back(result_.atoms.size());
        extend_ordinals();
    }

    ChaseResult run() {
        std::size_t round = 1;
        bool terminated = false;
        for (; round <= options_.fuel; ++round) {
            if (!step(round, true)) {
                terminated = true;
                break;
            }
            if (exhausted_) break;
        }
        if (exhausted_) {
            result_.rounds = result_.round_end.size() - 1;
            result_.budget_exhausted = true;
        } else if (!terminated) {
            terminated = options_.probe ? !step(round, false) : false;
            if (exhausted_) {
                terminated = false;
                result_.budget_exhausted = true;
            }
            result_.rounds = round - 1;
        } else {
            result_.rounds = round;
        }
        result_.terminated = terminated;
        return std::move(result_);
    }

private:
    void extend_ordinals() {
        const auto& adom = result_.atoms.adom();
        for (std::size_t i = ordinal_.size(); i < adom.size(); ++i)
            ordinal_.emplace(adom[i], static_cast<std::uint32_t>(i));
    }

    std::vector<std::uint32_t> sort_key(const Rule& rule, const Substitution& hom) const {
        std::vector<std::uint32_t> key;
        key.reserve(rule.body_variables().size());
        for (auto v : rule.body_variables()) key.push_back(ordinal_.at(hom.apply(v)));
        return key;
    }

    // Triggers using at least one atom added in the previous round.
    std::vector<Trigger> collect(std::size_t round) {
        const std::size_t delta = result_.round_end.size() >= 2
                                      ? result_.round_end[result_.round_end.size() - 2]
                                      : 0;
        const std::size_t n = result_.atoms.size();
        const std::size_t first = round == 1 ? 0 : delta;
        struct Keyed {
            std::vector<std::uint32_t> key;
            Trigger trigger;
        };
        std::vector<Trigger> out;
        for (std::size_t r = 0; r < rules_.size(); ++r) {
            const Rule& rule = rules_[r];
            std::vector<Keyed> found;
            auto record = [&](const Substitution& h) {
                if (out.size() + found.size() >= options_.max_triggers_per_round) {
                    exhausted_ = true;
                    return false;
                }
                Keyed k;
                k.key = sort_key(rule, h);
                k.trigger.rule = r;
                k.trigger.hom = h;
                k.trigger.frontier_hom = h.restricted_to(rule.frontier());
                found.push_back(std::move(k));
                return true;
            };
            const auto& body = rule.body();
            if (body.empty()) {
                if (round == 1) record(Substitution{});
            } else if (first < n) {
                std::vector<std::pair<std::uint32_t, std::uint32_t>> windows(body.size());
                for (std::size_t j = 0; j < body.size(); ++j) {
                    for (std::size_t k = 0; k < body.size(); ++k) {
                        if (k < j) windows[k] = {0, static_cast<std::uint32_t>(first)};
                        else if (k == j) windows[k] = {static_cast<std::uint32_t>(first), static_cast<std::uint32_t>(n)};
                        else windows[k] = {0, static_cast<std::uint32_t>(n)};
                    }
                    if (j > 0 && first == 0) break;
                    MatchOptions mo;
                    mo.windows = windows;
                    for_each_homomorphism(body, result_.atoms, {}, record, mo);
                    if (exhausted_) return {};
                }
            }
            std::sort(found.begin(), found.end(),
                      [](const Keyed& a, const Keyed& b) { return a.key < b.key; });
            for (auto& k : found) out.push_back(std::move(k.trigger));
        }
        return out;
    }

    std::vector<std::uint32_t> consumption_key(const Trigger& t) const {
        std::vector<std::uint32_t> key{static_cast<std::uint32_t>(t.rule)};
        const auto& b = semi_oblivious_ ? t.frontier_hom.bindings() : t.hom.bindings();
        for (const auto& [k, v] : b) {
            key.push_back(k.raw());
            key.push_back(v.raw());
        }
        return key;
    }

    std::size_t max_depth(const std::vector<Term>& vars, const Substitution& hom,
                          const std::unordered_map<Term, std::size_t>& depths) const {
        std::size_t d = 0;
        for (auto v : vars) {
            auto it = depths.find(hom.apply(v));
            if (it != depths.end()) d = std::max(d, it->second);
        }
        return d;
    }

    Substitution instantiate(const Rule& rule, const Trigger& t) const {
        Substitution s = t.hom;
        for (auto z : rule.existentials()) {
            NullProvenance p;
            p.scheme = semi_oblivious_ ? NullScheme::SemiOblivious : NullScheme::Oblivious;
            p.rule = rule.id();
            p.variable = z;
            p.binding = semi_oblivious_ ? t.frontier_hom.bindings() : t.hom.bindings();
            s.bind(z, null_term(p));
        }
        return s;
    }

    // Computes round `round`. With commit=false only reports whether the
    // round would add an atom, leaving the result untouched.
    bool step(std::size_t round, bool commit) {
        auto triggers = collect(round);
        if (exhausted_) return true;
        std::vector<Atom> added;
        std::unordered_set<Atom> added_set;
        std::unordered_map<Term, std::size_t> new_depth, new_frdepth;
        std::vector<Term> new_terms;
        std::vector<TriggerRecord> log;
        std::size_t fired = 0;

        for (auto& t : triggers) {
            const Rule& rule = rules_[t.rule];
            auto key = consumption_key(t);
            auto seen = consumed_.find(key);
            if (seen != consumed_.end() && seen->second < round) continue;
            if (seen == consumed_.end() && commit) consumed_.emplace(key, round);
            ++fired;
            Substitution s = instantiate(rule, t);
            const std::size_t d = 1 + max_depth(rule.body_variables(), t.hom, result_.depth);
            const std::size_t fd = 1 + max_depth(rule.frontier(), t.hom, result_.frontier_depth);
            TriggerRecord rec;
            for (const auto& h : rule.head()) {
                Atom a = s.apply(h);
                for (auto term : a.args) {
                    if (term.is_constant() || result_.atoms.has_term(term)) continue;
                    auto [it, inserted] = new_depth.emplace(term, d);
                    if (inserted) {
                        new_terms.push_back(term);
                        new_frdepth.emplace(term, fd);
                    } else {
                        it->second = std::min(it->second, d);
                        auto& f = new_frdepth[term];
                        f = std::min(f, fd);
                    }
                }
                if (result_.atoms.contains(a) || added_set.count(a)) continue;
                if (!commit) return true;
                added_set.insert(a);
                added.push_back(a);
                if (result_.atoms.size() + added.size() > options_.max_atoms) {
                    // Abandon the round; the run stops here.
                    exhausted_ = true;
                    return true;
                }
                if (options_.record_log) rec.produced.push_back(std::move(a));
            }
            if (options_.record_log) {
                rec.round = round;
                rec.trigger = std::move(t);
                log.push_back(std::move(rec));
            }
        }
        if (!commit) return false;

        result_.triggers_fired += fired;
        for (auto& rec : log) result_.log.push_back(std::move(rec));
        for (auto term : new_terms) {
            result_.depth.emplace(term, new_depth[term]);
            result_.frontier_depth.emplace(term, new_frdepth[term]);
            result_.born.emplace(term, round);
        }
        for (auto& a : added) {
            result_.rank.emplace(a, round);
            result_.atoms.insert(std::move(a));
        }
        result_.round_end.push_back(result_.atoms.size());
        extend_ordinals();
        if (!added.empty()) result_.chase_rank = round;
        if (result_.atoms.size() > options_.max_atoms) exhausted_ = true;
        return !added.empty();
    }

    const Ruleset& rules_;
    ChaseOptions options_;
    bool semi_oblivious_ = false;
    ChaseResult result_;
    bool exhausted_ = false;
    std::unordered_map<Term, std::uint32_t> ordinal_;
    std::unordered_map<std::vector<std::uint32_t>, std::size_t, KeyHash> consumed_;
};

}  // namespace

std::string to_string(ChaseVariant v) {
    switch (v) {
        case ChaseVariant::Oblivious: return "o";
        case ChaseVariant::SemiOblivious: return "so";
        case ChaseVariant::Skolem: return "skolem";
    }
    return "?";
}

std::optional<ChaseVariant> parse_variant(const std::string& text) {
    if (text == "o" || text == "oblivious") return ChaseVariant::Oblivious;
    if (text == "so" || text == "semi-oblivious") return ChaseVariant::SemiOblivious;
    if (text == "skolem") return ChaseVariant::Skolem;
    return std::nullopt;
}

std::size_t ChaseResult::rank_of(const Atom& a) const {
    auto it = rank.find(a);
    if (it == rank.end()) throw std::out_of_range("rank_of: atom not in chase result");
    return it->second;
}

std::size_t ChaseResult::depth_of(Term t) const {
    auto it = depth.find(t);
    return it == depth.end() ? 0 : it->second;
}

std::size_t ChaseResult::frontier_depth_of(Term t) const {
    auto it = frontier_depth.find(t);
    return it == frontier_depth.end() ? 0 : it->second;
}

Instance ChaseResult::at_round(std::size_t k) const {
    std::size_t end = k < round_end.size() ? round_end[k] : atoms.size();
    return Instance(std::span<const Atom>(atoms.atoms().data(), end));
}

std::vector<Term> ChaseResult::generated_terms() const {
    std::vector<Term> out;
    for (auto t : atoms.adom())
        if (born.count(t)) out.push_back(t);
    return out;
}

std::vector<Trigger> enumerate_triggers(const Instance& instance, const Ruleset& rules) {
    std::unordered_map<Term, std::uint32_t> ordinal;
    for (std::size_t i = 0; i < instance.adom().size(); ++i)
        ordinal.emplace(instance.adom()[i], static_cast<std::uint32_t>(i));
    std::vector<Trigger> out;
    for (std::size_t r = 0; r < rules.size(); ++r) {
        const Rule& rule = rules[r];
        std::vector<std::pair<std::vector<std::uint32_t>, Substitution>> found;
        for_each_homomorphism(rule.body(), instance, {}, [&](const Substitution& h) {
            std::vector<std::uint32_t> key;
            for (auto v : rule.body_variables()) key.push_back(ordinal.at(h.apply(v)));
            found.emplace_back(std::move(key), h);
            return true;
        });
        std::sort(found.begin(), found.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [key, h] : found) {
            Trigger t;
            t.rule = r;
            t.frontier_hom = h.restricted_to(rule.frontier());
            t.hom = std::move(h);
            out.push_back(std::move(t));
        }
    }
    return out;
}

ChaseResult run_chase(const Instance& instance, const Ruleset& rules, const ChaseOptions& options) {
    if (options.variant == ChaseVariant::Skolem) {
        Ruleset skolem = skolemize(rules);
        ChaseOptions o = options;
        o.variant = ChaseVariant::Oblivious;
        return Engine(instance, skolem, o).run();
    }
    return Engine(instance, rules, options).run();
}

CertainAnswers certain_answers(const ConjunctiveQuery& q, const Instance& instance,
                               const Ruleset& rules, std::size_t fuel, ChaseVariant variant) {
    auto result = run_chase(instance, rules, variant, fuel);
    return {evaluate(q, result.atoms), result.terminated};
}

Ruleset skolemize(const Ruleset& rules) {
    Ruleset out;
    for (const auto& r : rules) {
        Substitution s;
        for (auto z : r.existentials())
            s.bind(z, function_term(FunctionSymbol{r.id(), z}, r.frontier()));
        std::vector<Atom> head;
        for (const auto& a : r.head()) head.push_back(s.apply(a));
        out.rules.emplace_back(r.label(), r.body(), std::move(head));
    }
    return out;
}

EmbeddingExtension extend_embedding(const Instance& source, const Instance& target,
                                    const Substitution& phi, const Ruleset& rules,
                                    ChaseVariant variant, std::size_t rounds) {
    for (const auto& a : source)
        if (!target.contains(phi.apply(a)))
            throw std::invalid_argument("extend_embedding: phi does not embed the source instance");

    ChaseOptions options;
    options.variant = variant;
    options.fuel = rounds;
    options.probe = false;
    EmbeddingExtension ext;
    ext.source = run_chase(source, rules, options);
    ext.target = run_chase(target, rules, options);
    ext.map = phi;
    if (ext.source.budget_exhausted || ext.target.budget_exhausted)
        throw std::runtime_error("extend_embedding: chase exceeds the resource budget");

    auto fail = [](const std::string& what) {
        throw InternalInvariantError("extend_embedding: " + what);
    };

    for (auto t : ext.source.generated_terms()) {
        Term image;
        if (t.is_null()) {
            NullProvenance p = null_provenance(t);
            for (auto& [k, v] : p.binding) v = ext.map.apply(v);
            if (!find_null(p, image)) fail("no image for null " + to_string(t));
        } else if (t.is_function()) {
            image = ext.map.apply(t);
        } else {
            fail("unexpected generated term " + to_string(t));
        }
        if (!ext.target.atoms.has_term(image))
            fail("image of " + to_string(t) + " absent from the target chase");
        ext.map.bind(t, image);
    }

    const bool frontier = variant != ChaseVariant::Oblivious;
    for (auto t : ext.source.atoms.adom()) {
        Term image = ext.map.apply(t);
        std::size_t ds = frontier ? ext.source.frontier_depth_of(t) : ext.source.depth_of(t);
        std::size_t dt = frontier ? ext.target.frontier_depth_of(image) : ext.target.depth_of(image);
        if (ds != dt)
            fail("depth of " + to_string(t) + " is " + std::to_string(ds) + " but its image has " +
                 std::to_string(dt));
        ++ext.checked_terms;
    }
    for (const auto& a : ext.source.atoms) {
        if (!ext.target.atoms.contains(ext.map.apply(a)))
            fail("atom " + to_string(a) + " has no image in the target chase");
        ++ext.checked_atoms;
    }
    return ext;
}

}  // namespace chasebound
