#include "chasebound/repro.hpp"

#include <stdexcept>

#include "chasebound/syntax.hpp"
#include "chasebound/transforms.hpp"

namespace chasebound {

namespace {

struct Files {
    std::string dir;
    Ruleset rules(const std::string& name) const { return parse_ruleset(read_file(dir + "/" + name)); }
    Instance instance(const std::string& name) const { return parse_instance(read_file(dir + "/" + name)); }
    ConjunctiveQuery query(const std::string& name) const { return parse_query(read_file(dir + "/" + name)); }
};

Json chase_check(const Instance& inst, const Ruleset& rules, ChaseVariant variant, std::size_t fuel,
                 bool provenance, bool atoms = true) {
    ChaseOptions o;
    o.variant = variant;
    o.fuel = fuel;
    auto result = run_chase(inst, rules, o);
    ChaseReportOptions ro;
    ro.provenance = provenance;
    Json j = chase_json(result, rules, o, ro);
    if (!atoms) j.erase("atoms");
    return j;
}

Json rules_json(const Ruleset& rules) {
    Json out = Json::array();
    for (const auto& r : rules) out.push_back(print_rule(r));
    return out;
}

Json ex1(const Files& f) {
    auto rules = f.rules("ex1.erl");
    auto inst = f.instance("ex1_instance.erl");
    std::vector<Json> checks;
    checks.push_back(chase_check(inst, rules, ChaseVariant::Oblivious, 5, true));
    checks.push_back(chase_check(inst, rules, ChaseVariant::SemiOblivious, 10, true));
    checks.push_back(chase_check(inst, rules, ChaseVariant::Skolem, 10, true));
    Json sk;
    sk["check"] = "transform";
    sk["op"] = "skolem";
    sk["rules"] = rules_json(skolemize(rules));
    checks.push_back(std::move(sk));
    checks.push_back(verdict_json(ct_check(rules, ChaseVariant::Oblivious, 50)));
    checks.push_back(verdict_json(ct_check(rules, ChaseVariant::SemiOblivious, 50)));
    return make_report(checks);
}

Json ex2(const Files& f) {
    auto s1 = f.rules("ex2_sigma1.erl");
    auto s2 = f.rules("ex2_sigma2.erl");
    auto both = f.rules("ex2_both.erl");
    std::vector<Json> checks;
    checks.push_back(verdict_json(k_bounded(s2, 1, ChaseVariant::Oblivious)));
    checks.push_back(verdict_json(k_bounded(s1, 1, ChaseVariant::Oblivious)));
    checks.push_back(verdict_json(k_bounded(both, 1, ChaseVariant::Oblivious)));
    checks.push_back(chase_check(f.instance("ex2_chain.erl"), s1, ChaseVariant::Oblivious, 50, false));
    checks.push_back(verdict_json(classify_boundedness(s2, ChaseVariant::Oblivious)));
    checks.push_back(verdict_json(classify_boundedness(s1, ChaseVariant::Oblivious)));
    return make_report(checks);
}

Json frdepth(const Files& f) {
    auto rules = f.rules("frdepth.erl");
    auto inst = f.instance("frdepth_instance.erl");
    std::vector<Json> checks;
    checks.push_back(chase_check(inst, rules, ChaseVariant::SemiOblivious, 50, true));
    checks.push_back(chase_check(inst, rules, ChaseVariant::Oblivious, 5, true));
    Verdict d;
    d.check = "depth";
    d.variant = ChaseVariant::SemiOblivious;
    d.fuel = 50;
    if (auto kd = depth_bound(rules, ChaseVariant::SemiOblivious, 50)) {
        d.status = Status::Yes;
        d.depth_bound = *kd;
    }
    checks.push_back(verdict_json(d));
    return make_report(checks);
}

Json prop4(const Files& f) {
    auto rules = f.rules("prop4.erl");
    auto q = f.query("prop4_query.q");
    std::vector<Json> checks;
    checks.push_back(k_estimate_json(estimate_kAF(rules), "kAF"));
    RewriteOptions ro;
    ro.max_steps = 3;
    auto state = rewrite(q, rules, ro);
    Json r = rewriting_json(state);
    bool antichain = true;
    for (std::size_t i = 0; i < state.ucq.size(); ++i)
        for (std::size_t j = 0; j < state.ucq.size(); ++j)
            if (i != j && cq_subsumes(state.ucq[i], state.ucq[j])) antichain = false;
    r["antichain"] = antichain;
    checks.push_back(std::move(r));
    return make_report(checks);
}

Json df_footnote(const Files& f) {
    auto rules = f.rules("df_footnote.erl");
    auto inst = f.instance("ex1_instance.erl");
    auto df = df_decompose(rules).combined();
    std::vector<Json> checks;
    checks.push_back(chase_check(inst, rules, ChaseVariant::SemiOblivious, 50, false, false));
    Json t;
    t["check"] = "transform";
    t["op"] = "df";
    t["rules"] = rules_json(df);
    checks.push_back(std::move(t));
    checks.push_back(chase_check(inst, df, ChaseVariant::SemiOblivious, 50, true));
    return make_report(checks);
}

Json so_embedding(const Files& f) {
    auto rules = f.rules("so_embedding.erl");
    auto small = f.instance("so_embedding_small.erl");
    auto large = f.instance("so_embedding_large.erl");
    std::vector<Json> checks;
    for (auto variant : {ChaseVariant::SemiOblivious, ChaseVariant::Oblivious}) {
        auto ext = extend_embedding(small, large, Substitution{}, rules, variant, 2);
        TermPrinter sp, tp;
        Json j;
        j["check"] = "embedding";
        j["variant"] = to_string(variant);
        j["rounds"] = 2;
        j["checked_atoms"] = ext.checked_atoms;
        j["checked_terms"] = ext.checked_terms;
        Json terms = Json::array();
        for (auto t : ext.source.generated_terms()) {
            Term image = ext.map.apply(t);
            Json e;
            e["term"] = sp(t);
            e["image"] = tp(image);
            e["depth"] = ext.source.depth_of(t);
            e["image_depth"] = ext.target.depth_of(image);
            e["frontier_depth"] = ext.source.frontier_depth_of(t);
            e["image_frontier_depth"] = ext.target.frontier_depth_of(image);
            terms.push_back(std::move(e));
        }
        j["terms"] = std::move(terms);
        checks.push_back(std::move(j));
    }
    return make_report(checks);
}

}  // namespace

std::vector<std::string> repro_ids() { return {"ex1", "ex2", "frdepth", "prop4", "df-footnote", "so-embedding"}; }

Json run_repro(const std::string& id, const std::string& data_dir) {
    Files f{data_dir};
    if (id == "ex1") return ex1(f);
    if (id == "ex2") return ex2(f);
    if (id == "frdepth") return frdepth(f);
    if (id == "prop4") return prop4(f);
    if (id == "df-footnote") return df_footnote(f);
    if (id == "so-embedding") return so_embedding(f);
    throw std::invalid_argument("unknown repro id '" + id + "'");
}

}  // namespace chasebound
