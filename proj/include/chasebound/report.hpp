#pragma once

#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "chasebound/analysis.hpp"
#include "chasebound/chase.hpp"
#include "chasebound/rewrite.hpp"

namespace chasebound {

inline constexpr const char* tool_version = "0.1.0";

using Json = nlohmann::ordered_json;

Json verdict_json(const Verdict& v);

struct ChaseReportOptions {
    bool provenance = false;  // per-term table with depths and null keys
    bool trace = false;       // trigger log; needs a run with record_log
};

Json chase_json(const ChaseResult& result, const Ruleset& rules, const ChaseOptions& options,
                const ChaseReportOptions& report = {});

Json rewriting_json(const RewritingState& state);
Json k_estimate_json(const KEstimate& e, const std::string& check);

// {"tool_version", "checks": [...]}
Json make_report(std::span<const Json> checks);
std::string emit_report(std::span<const Json> checks);
std::string emit_report(std::span<const Verdict> verdicts);

// Indented plain-text rendering of a report.
std::string human_report(const Json& report);

}  // namespace chasebound
