#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "chasebound/syntax.hpp"

namespace oracle {

using namespace chasebound;

std::string text(const Fact& f) {
    std::string s = f.pred + "(";
    for (std::size_t i = 0; i < f.args.size(); ++i) s += (i ? "," : "") + f.args[i];
    return s + ")";
}

std::string canonical(Term t) {
    if (t.is_null()) {
        const auto& p = null_provenance(t);
        std::string s = "z" + to_string(p.variable) + "[" + rule_label(p.rule) + "|";
        std::map<std::string, std::string> sorted;
        for (const auto& [k, v] : p.binding) sorted[to_string(k)] = canonical(v);
        for (const auto& [k, v] : sorted) s += k + "=" + v + ";";
        return s + "]";
    }
    if (t.is_function()) {
        const auto& f = function_info(t);
        std::string s = "f" + to_string(f.symbol.variable) + "[" + rule_label(f.symbol.rule) + "|";
        for (auto a : f.args) s += canonical(a) + ";";
        return s + "]";
    }
    return to_string(t);
}

Fact canonical(const Atom& a) {
    Fact f{a.pred.name(), {}};
    for (auto t : a.args) f.args.push_back(canonical(t));
    return f;
}

namespace {

bool is_var(const std::string& s) { return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_'); }

struct RefRule {
    std::string label;
    std::vector<Fact> body, head;
    std::vector<std::string> body_vars, frontier, existentials;
};

RefRule convert(const Rule& r) {
    RefRule out;
    out.label = r.label();
    for (const auto& a : r.body()) out.body.push_back(canonical(a));
    for (const auto& a : r.head()) out.head.push_back(canonical(a));
    std::set<std::string> bv;
    for (const auto& f : out.body)
        for (const auto& x : f.args)
            if (is_var(x) && bv.insert(x).second) out.body_vars.push_back(x);
    std::set<std::string> seen;
    for (const auto& f : out.head)
        for (const auto& x : f.args)
            if (is_var(x) && seen.insert(x).second) (bv.count(x) ? out.frontier : out.existentials).push_back(x);
    return out;
}

void match(const std::vector<Fact>& body, std::size_t i, const std::set<Fact>& target,
           std::map<std::string, std::string>& h, std::vector<std::map<std::string, std::string>>& out) {
    if (i == body.size()) {
        out.push_back(h);
        return;
    }
    for (const auto& f : target) {
        if (f.pred != body[i].pred || f.args.size() != body[i].args.size()) continue;
        std::vector<std::string> added;
        bool ok = true;
        for (std::size_t k = 0; k < f.args.size() && ok; ++k) {
            const auto& x = body[i].args[k];
            if (!is_var(x)) {
                ok = x == f.args[k];
            } else if (auto it = h.find(x); it != h.end()) {
                ok = it->second == f.args[k];
            } else {
                h[x] = f.args[k];
                added.push_back(x);
            }
        }
        if (ok) match(body, i + 1, target, h, out);
        for (const auto& x : added) h.erase(x);
    }
}

}  // namespace

std::vector<std::map<std::string, std::string>> brute_force_homs(const std::vector<Fact>& source,
                                                                  const std::set<Fact>& target) {
    std::vector<std::string> vars;
    for (const auto& f : source)
        for (const auto& x : f.args)
            if (is_var(x) && std::find(vars.begin(), vars.end(), x) == vars.end()) vars.push_back(x);
    std::set<std::string> adom;
    for (const auto& f : target)
        for (const auto& x : f.args) adom.insert(x);
    std::vector<std::string> dom(adom.begin(), adom.end());
    std::vector<std::map<std::string, std::string>> out;
    if (dom.empty() && !vars.empty()) return out;
    std::vector<std::size_t> idx(vars.size(), 0);
    while (true) {
        std::map<std::string, std::string> h;
        for (std::size_t i = 0; i < vars.size(); ++i) h[vars[i]] = dom[idx[i]];
        bool ok = true;
        for (const auto& f : source) {
            Fact g{f.pred, {}};
            for (const auto& x : f.args) g.args.push_back(is_var(x) ? h[x] : x);
            if (!target.count(g)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(h);
        std::size_t k = 0;
        while (k < vars.size() && ++idx[k] == dom.size()) idx[k++] = 0;
        if (k == vars.size()) break;
    }
    return out;
}

RefChase reference_chase(const Instance& instance, const Ruleset& rules, bool semi, std::size_t fuel) {
    std::vector<RefRule> rs;
    for (const auto& r : rules) rs.push_back(convert(r));
    RefChase c;
    std::set<Fact> current;
    for (const auto& a : instance) {
        auto f = canonical(a);
        current.insert(f);
        c.rank.emplace(f, 0);
    }
    std::set<std::string> fired;
    auto depth_of = [&](const std::map<std::string, std::size_t>& m, const std::string& t) -> std::size_t {
        auto it = m.find(t);
        return it == m.end() ? 0 : it->second;
    };
    for (std::size_t round = 1; round <= fuel + 1; ++round) {
        std::set<Fact> added;
        std::map<std::string, std::size_t> new_depth, new_fr;
        std::set<std::string> fired_now;
        for (const auto& r : rs) {
            std::vector<std::map<std::string, std::string>> homs;
            std::map<std::string, std::string> h;
            match(r.body, 0, current, h, homs);
            for (const auto& hom : homs) {
                const auto& keyvars = semi ? r.frontier : r.body_vars;
                std::vector<std::string> sorted_keys(keyvars.begin(), keyvars.end());
                std::sort(sorted_keys.begin(), sorted_keys.end());
                std::string key;
                for (const auto& v : sorted_keys) key += v + "=" + hom.at(v) + ";";
                const std::string trig = r.label + "|" + key;
                if (fired.count(trig)) continue;
                fired_now.insert(trig);
                std::size_t d = 0, fd = 0;
                for (const auto& v : r.body_vars) d = std::max(d, depth_of(c.depth, hom.at(v)));
                for (const auto& v : r.frontier) fd = std::max(fd, depth_of(c.frontier_depth, hom.at(v)));
                std::map<std::string, std::string> full = hom;
                for (const auto& z : r.existentials) {
                    std::string name = "z" + z + "[" + r.label + "|" + key + "]";
                    full[z] = name;
                    // The trigger key is fresh, so the null is too.
                    auto [it, ins] = new_depth.emplace(name, d + 1);
                    if (!ins) it->second = std::min(it->second, d + 1);
                    new_fr.emplace(name, fd + 1);
                }
                for (const auto& a : r.head) {
                    Fact g{a.pred, {}};
                    for (const auto& x : a.args) g.args.push_back(is_var(x) ? full.at(x) : x);
                    if (!current.count(g)) added.insert(g);
                }
            }
        }
        if (added.empty()) {
            c.terminated = true;
            break;
        }
        if (round == fuel + 1) break;  // probe round was productive
        for (const auto& t : fired_now) fired.insert(t);
        for (const auto& [t, d] : new_depth) c.depth.emplace(t, d);
        for (const auto& [t, d] : new_fr) c.frontier_depth.emplace(t, d);
        for (const auto& f : added) {
            current.insert(f);
            c.rank.emplace(f, round);
        }
        c.chase_rank = round;
    }
    return c;
}

std::set<std::vector<std::string>> reference_answers(const ConjunctiveQuery& q, const std::set<Fact>& facts) {
    std::vector<Fact> body;
    for (const auto& a : q.atoms) body.push_back(canonical(a));
    std::set<std::vector<std::string>> out;
    for (const auto& h : brute_force_homs(body, facts)) {
        std::vector<std::string> tuple;
        bool ground = true;
        for (auto t : q.answers) {
            std::string s = canonical(t);
            if (is_var(s)) s = h.at(s);
            if (s.rfind("z", 0) == 0 && s.find('[') != std::string::npos) ground = false;
            if (s.rfind("f", 0) == 0 && s.find('[') != std::string::npos) ground = false;
            tuple.push_back(s);
        }
        if (ground) out.insert(tuple);
    }
    return out;
}

std::set<Fact> facts_of(const Instance& inst) {
    std::set<Fact> out;
    for (const auto& a : inst) out.insert(canonical(a));
    return out;
}

std::set<Fact> facts_at(const RefChase& c, std::size_t round) {
    std::set<Fact> out;
    for (const auto& [f, r] : c.rank)
        if (r <= round) out.insert(f);
    return out;
}

std::size_t count_iso_classes(const std::vector<std::pair<std::string, std::size_t>>& preds, std::size_t max_atoms) {
    std::size_t max_arity = 0;
    for (const auto& p : preds) max_arity = std::max(max_arity, p.second);
    const std::size_t pool = max_atoms * max_arity;
    // All ground facts over the pool.
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> facts;
    for (std::size_t p = 0; p < preds.size(); ++p) {
        std::vector<std::size_t> idx(preds[p].second, 0);
        while (true) {
            facts.emplace_back(p, idx);
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == pool) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }
    std::vector<std::size_t> perm(pool);
    std::set<std::vector<std::pair<std::size_t, std::vector<std::size_t>>>> classes;
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (!chosen.empty()) {
            std::vector<std::pair<std::size_t, std::vector<std::size_t>>> best;
            std::iota(perm.begin(), perm.end(), 0);
            bool first = true;
            do {
                std::vector<std::pair<std::size_t, std::vector<std::size_t>>> img;
                for (auto i : chosen) {
                    auto f = facts[i];
                    for (auto& x : f.second) x = perm[x];
                    img.push_back(std::move(f));
                }
                std::sort(img.begin(), img.end());
                if (first || img < best) best = std::move(img);
                first = false;
            } while (std::next_permutation(perm.begin(), perm.end()));
            classes.insert(std::move(best));
        }
        if (chosen.size() == max_atoms) return;
        for (std::size_t i = start; i < facts.size(); ++i) {
            chosen.push_back(i);
            rec(i + 1);
            chosen.pop_back();
        }
    };
    rec(0);
    return classes.size();
}

}  // namespace oracle
