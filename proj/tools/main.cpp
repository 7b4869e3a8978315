#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "chasebound/analysis.hpp"
#include "chasebound/errors.hpp"
#include "chasebound/report.hpp"
#include "chasebound/repro.hpp"
#include "chasebound/syntax.hpp"
#include "chasebound/transforms.hpp"

using namespace chasebound;

namespace {

enum Exit : int {
    kYes = 0,
    kNo = 1,
    kUnknown = 2,
    kUsage = 64,
    kDataError = 65,
    kNoInput = 66,
    kSoftware = 70,
};

int exit_for(Status s) {
    switch (s) {
        case Status::Yes: return kYes;
        case Status::No: return kNo;
        case Status::Unknown: return kUnknown;
    }
    return kSoftware;
}

// Raised for missing files so they map to their own exit code.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read '" + path + "'");
    return read_file(path);
}

struct ParseFailure : std::runtime_error {
    ParseFailure(const std::string& path, const ParseError& e)
        : std::runtime_error(path + ":" + e.what()) {}
};

template <class F>
auto parse_file(const std::string& path, F parse) {
    auto text = load(path);
    try {
        return parse(text);
    } catch (const ParseError& e) {
        throw ParseFailure(path, e);
    }
}

Ruleset load_rules(const std::string& path) {
    return parse_file(path, [](const std::string& t) { return parse_ruleset(t); });
}
Instance load_instance(const std::string& path) {
    return parse_file(path, [](const std::string& t) { return parse_instance(t); });
}
ConjunctiveQuery load_query(const std::string& path) {
    return parse_file(path, [](const std::string& t) { return parse_query(t); });
}

struct Output {
    bool human = false;
    void emit(const Json& report) const {
        std::cout << (human ? human_report(report) : report.dump(2) + "\n");
    }
    void emit_checks(const std::vector<Json>& checks) const { emit(make_report(checks)); }
};

ChaseVariant variant_of(const std::string& text) {
    auto v = parse_variant(text);
    if (!v) throw CLI::ValidationError("--variant", "expected o, so or skolem");
    return *v;
}

Verdict infeasible_verdict(const std::string& check, ChaseVariant variant, std::size_t k, const InfeasibleError& e) {
    Verdict v;
    v.check = check;
    v.variant = variant;
    v.k = k;
    v.status = Status::Unknown;
    v.rationale = "instance enumeration infeasible";
    v.estimate = e.estimate();
    v.ceiling = e.ceiling();
    v.budget = "ceiling=" + std::to_string(e.ceiling());
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chasebound: chase engines and boundedness analyses for existential rules"};
    app.require_subcommand(1);
    app.fallthrough();
    Output out;
    app.add_flag("--human", out.human, "plain-text report instead of JSON");
    app.add_flag("--json", [&](std::int64_t) { out.human = false; }, "JSON report (default)");

    std::string variant_text = "o";
    std::size_t fuel = 50;
    std::string rules_path, instance_path, query_path;
    auto add_variant = [&](CLI::App* sub, const std::string& choices) {
        sub->add_option("--variant", variant_text, "chase variant: " + choices)->capture_default_str();
    };
    auto add_fuel = [&](CLI::App* sub, const std::string& what) {
        sub->add_option("--fuel", fuel, what)->capture_default_str();
    };

    int code = kYes;

    // chase
    auto* chase = app.add_subcommand("chase", "run a breadth-first chase");
    add_variant(chase, "o|so|skolem");
    add_fuel(chase, "maximum number of rounds");
    bool trace = false, provenance = false;
    chase->add_flag("--trace", trace, "include the trigger log");
    chase->add_flag("--provenance", provenance, "include per-term depths and null keys");
    chase->add_option("rules", rules_path, "ruleset file")->required();
    chase->add_option("instance", instance_path, "instance file")->required();
    chase->callback([&] {
        ChaseOptions o;
        o.variant = variant_of(variant_text);
        o.fuel = fuel;
        o.record_log = trace;
        auto rules = load_rules(rules_path);
        auto result = run_chase(load_instance(instance_path), rules, o);
        ChaseReportOptions ro;
        ro.trace = trace;
        ro.provenance = provenance;
        out.emit_checks({chase_json(result, rules, o, ro)});
        code = result.terminated ? kYes : kUnknown;
    });

    // transform
    auto* transform = app.add_subcommand("transform", "apply a ruleset or instance transformation");
    std::string op;
    transform->add_option("--op", op, "df|psi|skolem|critical|fe-encode|fe-decode|freeze")
        ->required()
        ->check(CLI::IsMember({"df", "psi", "skolem", "critical", "fe-encode", "fe-decode", "freeze"}));
    std::vector<std::string> transform_inputs;
    transform->add_option("inputs", transform_inputs, "ruleset file, then instance file where the op needs one")
        ->required();
    transform->callback([&] {
        auto need = [&](std::size_t n) {
            if (transform_inputs.size() != n)
                throw CLI::ValidationError("inputs", "--op " + op + " takes " + std::to_string(n) + " file(s)");
        };
        std::optional<Ruleset> rules;
        std::optional<Instance> instance;
        if (op == "df") {
            need(1);
            rules = df_decompose(load_rules(transform_inputs[0])).combined();
        } else if (op == "psi") {
            need(1);
            rules = psi_transform(load_rules(transform_inputs[0]));
        } else if (op == "skolem") {
            need(1);
            rules = skolemize(load_rules(transform_inputs[0]));
        } else if (op == "critical") {
            need(1);
            instance = critical_instance(load_rules(transform_inputs[0]));
        } else if (op == "fe-encode") {
            if (transform_inputs.size() == 2) {
                auto enc = fe_encode(load_rules(transform_inputs[0]), load_instance(transform_inputs[1]));
                rules = std::move(enc.rules);
                instance = std::move(enc.instance);
            } else {
                need(1);
                rules = fe_encode(load_rules(transform_inputs[0]));
            }
        } else if (op == "fe-decode") {
            need(1);
            instance = fe_decode(load_instance(transform_inputs[0]));
        } else if (op == "freeze") {
            need(1);
            instance = freeze(load_instance(transform_inputs[0])).instance;
        }
        if (out.human) {
            if (rules) std::cout << print_ruleset(*rules);
            if (instance) std::cout << print_instance(*instance);
            return;
        }
        Json j;
        j["check"] = "transform";
        j["op"] = op;
        if (rules) {
            Json list = Json::array();
            for (const auto& r : *rules) list.push_back(print_rule(r));
            j["rules"] = std::move(list);
        }
        if (instance) {
            TermPrinter printer;
            Json list = Json::array();
            for (const auto& a : *instance) list.push_back(printer.atom(a));
            j["instance"] = std::move(list);
        }
        out.emit_checks({j});
    });

    // rewrite
    auto* rewrite_cmd = app.add_subcommand("rewrite", "breadth-first piece-unifier rewriting");
    std::size_t steps = RewriteOptions{}.max_steps;
    bool kaf = false, kfo = false;
    rewrite_cmd->add_option("--fuel", steps, "maximum rewriting steps")->capture_default_str();
    auto* kaf_flag = rewrite_cmd->add_flag("--kaf", kaf, "estimate k over full-atomic head queries");
    rewrite_cmd->add_flag("--kfo", kfo, "estimate k over rule-body queries")->excludes(kaf_flag);
    std::vector<std::string> rewrite_inputs;
    rewrite_cmd->add_option("inputs", rewrite_inputs, "ruleset file, then query file unless --kaf/--kfo")
        ->required();
    rewrite_cmd->callback([&] {
        RewriteOptions ro;
        ro.max_steps = steps;
        if (kaf || kfo) {
            if (rewrite_inputs.size() != 1) throw CLI::ValidationError("inputs", "--kaf/--kfo take one ruleset file");
            auto rules = load_rules(rewrite_inputs[0]);
            auto e = kaf ? estimate_kAF(rules, ro) : estimate_kFO(rules, ro);
            out.emit_checks({k_estimate_json(e, kaf ? "kAF" : "kFO")});
            code = e.saturated ? kYes : kUnknown;
            return;
        }
        if (rewrite_inputs.size() != 2) throw CLI::ValidationError("inputs", "expected a ruleset and a query file");
        auto rules = load_rules(rewrite_inputs[0]);
        auto state = rewrite(load_query(rewrite_inputs[1]), rules, ro);
        out.emit_checks({rewriting_json(state)});
        code = state.saturated ? kYes : kUnknown;
    });

    // ct
    auto* ct = app.add_subcommand("ct", "chase termination via the critical instance");
    add_variant(ct, "o|so|skolem");
    add_fuel(ct, "maximum number of rounds");
    ct->add_option("rules", rules_path, "ruleset file")->required();
    ct->callback([&] {
        auto v = ct_check(load_rules(rules_path), variant_of(variant_text), fuel);
        out.emit_checks({verdict_json(v)});
        code = exit_for(v.status);
    });

    // check-kbounded
    auto* kb = app.add_subcommand("check-kbounded", "decide k-boundedness by instance enumeration");
    std::size_t k = 1, jobs = 1;
    std::uint64_t ceiling = KBoundedOptions{}.ceiling;
    kb->add_option("--k", k, "round bound")->capture_default_str();
    add_variant(kb, "o|so|skolem");
    kb->add_option("--jobs", jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    kb->add_option("--ceiling", ceiling, "maximum isomorphism classes to enumerate")->capture_default_str();
    kb->add_option("rules", rules_path, "ruleset file")->required();
    kb->callback([&] {
        auto variant = variant_of(variant_text);
        auto rules = load_rules(rules_path);
        Verdict v;
        try {
            v = k_bounded(rules, k, variant, {ceiling, jobs});
        } catch (const InfeasibleError& e) {
            v = infeasible_verdict("k-bounded", variant, k, e);
        }
        out.emit_checks({verdict_json(v)});
        code = exit_for(v.status);
    });

    // classify
    auto* classify = app.add_subcommand("classify", "boundedness classification");
    std::size_t max_k = ClassifyOptions{}.max_k;
    add_variant(classify, "o|so|skolem");
    add_fuel(classify, "chase fuel for the termination check");
    classify->add_option("--max-k", max_k, "largest k tried for k-boundedness")->capture_default_str();
    classify->add_option("--jobs", jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    classify->add_option("--ceiling", ceiling, "maximum isomorphism classes to enumerate")->capture_default_str();
    classify->add_option("rules", rules_path, "ruleset file")->required();
    classify->callback([&] {
        ClassifyOptions o;
        o.fuel = fuel;
        o.max_k = max_k;
        o.kbounded = {ceiling, jobs};
        auto v = classify_boundedness(load_rules(rules_path), variant_of(variant_text), o);
        out.emit_checks({verdict_json(v)});
        code = exit_for(v.status);
    });

    // depth
    auto* depth = app.add_subcommand("depth", "depth bound of the critical-instance chase");
    add_variant(depth, "o|so|skolem");
    add_fuel(depth, "maximum number of rounds");
    depth->add_option("rules", rules_path, "ruleset file")->required();
    depth->callback([&] {
        auto variant = variant_of(variant_text);
        Verdict v;
        v.check = "depth";
        v.variant = variant;
        v.fuel = fuel;
        if (auto kd = depth_bound(load_rules(rules_path), variant, fuel)) {
            v.status = Status::Yes;
            v.depth_bound = *kd;
            v.rationale = "chase of the critical instance terminates";
        } else {
            v.rationale = "chase of the critical instance exceeds the fuel";
        }
        out.emit_checks({verdict_json(v)});
        code = exit_for(v.status);
    });

    // repro
    auto* repro = app.add_subcommand("repro", "rerun a scripted example and diff it against its golden report");
    std::string repro_id, data_dir = CHASEBOUND_DATA_DIR;
    bool update = false;
    repro->add_option("id", repro_id, "scenario id")->required()->check(CLI::IsMember(repro_ids()));
    repro->add_option("--data", data_dir, "directory holding the example files and golden/")->capture_default_str();
    repro->add_flag("--update", update, "rewrite the golden report instead of comparing");
    repro->callback([&] {
        auto report = run_repro(repro_id, data_dir);
        const std::string text = report.dump(2) + "\n";
        const std::string golden = data_dir + "/golden/" + repro_id + ".json";
        if (update) {
            std::ofstream(golden) << text;
        } else {
            std::ifstream in(golden);
            if (!in) throw InputError("missing golden report '" + golden + "'");
            std::string expected((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            if (expected != text) {
                std::cerr << "repro " << repro_id << ": output differs from " << golden << "\n";
                code = kNo;
            } else {
                std::cerr << "repro " << repro_id << ": golden match\n";
            }
        }
        out.emit(report);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    } catch (const ParseFailure& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kDataError;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNoInput;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kUnknown;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kSoftware;
    }
    return code;
}
