#include "chasebound/report.hpp"

#include <algorithm>

#include "chasebound/syntax.hpp"

namespace chasebound {

namespace {

Json atoms_json(const Instance& inst, TermPrinter& printer) {
    Json out = Json::array();
    for (const auto& a : inst) out.push_back(printer.atom(a));
    return out;
}

Json binding_json(const Binding& b, TermPrinter& printer) {
    Json out = Json::object();
    for (const auto& [k, v] : b) out[to_string(k)] = printer(v);
    return out;
}

}  // namespace

Json verdict_json(const Verdict& v) {
    Json j;
    j["check"] = v.check;
    if (v.variant) j["variant"] = to_string(*v.variant);
    if (v.k) j["k"] = *v.k;
    j["verdict"] = to_string(v.status);
    if (!v.qualifier.empty()) j["qualifier"] = v.qualifier;
    if (!v.rationale.empty()) j["rationale"] = v.rationale;
    if (v.chase_rank) j["chase_rank"] = *v.chase_rank;
    if (v.bound) j["bound"] = *v.bound;
    if (v.depth_bound) j["depth_bound"] = *v.depth_bound;
    if (v.instances_examined) j["instances_examined"] = *v.instances_examined;
    if (v.fuel) j["fuel"] = *v.fuel;
    if (v.ceiling) j["ceiling"] = *v.ceiling;
    if (v.estimate) j["estimate"] = *v.estimate;
    if (v.budget) j["budget"] = *v.budget;
    if (v.witness) {
        TermPrinter printer;
        Json w;
        w["instance"] = atoms_json(v.witness->instance, printer);
        if (v.witness->fact) w["fact"] = printer.atom(*v.witness->fact);
        w["fact_of_rank"] = v.witness->rank;
        j["witness"] = std::move(w);
    }
    if (!v.components.empty()) {
        Json c = Json::array();
        for (const auto& sub : v.components) c.push_back(verdict_json(sub));
        j["components"] = std::move(c);
    }
    return j;
}

Json chase_json(const ChaseResult& result, const Ruleset& rules, const ChaseOptions& options,
                const ChaseReportOptions& report) {
    TermPrinter printer;
    Json j;
    j["check"] = "chase";
    j["variant"] = to_string(options.variant);
    j["fuel"] = options.fuel;
    j["terminated"] = result.terminated;
    if (result.terminated) j["chase_rank"] = result.chase_rank;
    j["rounds"] = result.rounds;
    if (result.budget_exhausted) j["budget"] = "atoms>" + std::to_string(options.max_atoms);
    j["round_sizes"] = result.round_end;
    j["triggers_fired"] = result.triggers_fired;
    Json atoms = Json::array();
    for (const auto& a : result.atoms) {
        Json f;
        f["fact"] = printer.atom(a);
        f["rank"] = result.rank_of(a);
        atoms.push_back(std::move(f));
    }
    j["atoms"] = std::move(atoms);
    if (report.provenance) {
        Json terms = Json::array();
        for (auto t : result.generated_terms()) {
            Json e;
            e["term"] = printer(t);
            e["born"] = result.born.count(t) ? result.born.at(t) : 0;
            e["depth"] = result.depth_of(t);
            e["frontier_depth"] = result.frontier_depth_of(t);
            if (t.is_null()) {
                const auto& p = null_provenance(t);
                e["rule"] = rule_label(p.rule);
                e["variable"] = to_string(p.variable);
                e["key"] = binding_json(p.binding, printer);
            } else if (t.is_function()) {
                const auto& f = function_info(t);
                e["rule"] = rule_label(f.symbol.rule);
                e["variable"] = to_string(f.symbol.variable);
                Json args = Json::array();
                for (auto a : f.args) args.push_back(printer(a));
                e["key"] = std::move(args);
            }
            terms.push_back(std::move(e));
        }
        j["terms"] = std::move(terms);
    }
    if (report.trace) {
        Json log = Json::array();
        for (const auto& rec : result.log) {
            Json e;
            e["round"] = rec.round;
            e["rule"] = rules[rec.trigger.rule].label();
            e["hom"] = binding_json(rec.trigger.hom.bindings(), printer);
            Json produced = Json::array();
            for (const auto& a : rec.produced) produced.push_back(printer.atom(a));
            e["produced"] = std::move(produced);
            log.push_back(std::move(e));
        }
        j["trace"] = std::move(log);
    }
    return j;
}

Json rewriting_json(const RewritingState& state) {
    Json j;
    j["check"] = "rewrite";
    j["steps"] = state.steps;
    j["productive_steps"] = state.productive_steps;
    j["saturated"] = state.saturated;
    if (state.budget_exhausted) j["budget"] = state.budget_reason;
    j["sizes"] = state.sizes;
    Json ucq = Json::array();
    for (const auto& q : state.ucq) ucq.push_back(print_query(q));
    j["ucq"] = std::move(ucq);
    return j;
}

Json k_estimate_json(const KEstimate& e, const std::string& check) {
    Json j;
    j["check"] = check;
    j["verdict"] = e.saturated ? "yes" : "unknown";
    if (e.saturated) j["k"] = e.k;
    Json seeds = Json::array();
    for (const auto& q : e.seeds) seeds.push_back(print_query(q));
    j["seeds"] = std::move(seeds);
    if (!e.saturated) j["budget"] = e.budget_reason;
    j["growth"] = e.growth;
    return j;
}

Json make_report(std::span<const Json> checks) {
    Json j;
    j["tool_version"] = tool_version;
    Json list = Json::array();
    for (const auto& c : checks) list.push_back(c);
    j["checks"] = std::move(list);
    return j;
}

std::string emit_report(std::span<const Json> checks) { return make_report(checks).dump(2) + "\n"; }

std::string emit_report(std::span<const Verdict> verdicts) {
    std::vector<Json> checks;
    for (const auto& v : verdicts) checks.push_back(verdict_json(v));
    return emit_report(std::span<const Json>(checks));
}

namespace {

void render(const Json& j, const std::string& indent, std::string& out) {
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            out += indent + key + ":\n";
            render(value, indent + "  ", out);
        } else if (value.is_array() && !value.empty() && value.front().is_object()) {
            out += indent + key + ":\n";
            for (const auto& item : value) {
                out += indent + "  -\n";
                render(item, indent + "    ", out);
            }
        } else if (value.is_array()) {
            out += indent + key + ":";
            for (const auto& item : value) out += " " + (item.is_string() ? item.get<std::string>() : item.dump());
            out += "\n";
        } else {
            out += indent + key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
        }
    }
}

}  // namespace

std::string human_report(const Json& report) {
    std::string out;
    render(report, "", out);
    return out;
}

}  // namespace chasebound
