#include "fabsafe/render.hpp"

#include <cctype>
#include <sstream>

#include <json.hpp>

namespace fabsafe {

namespace {

using nlohmann::json;

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) return value;
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

json fmea_row_to_json(const FmeaRow& row) {
    json r{{"step", row.process_step_ref},
           {"service", row.service_ref},
           {"failure_mode", row.failure_mode_ref},
           {"severity", row.severity},
           {"base_occurrence", row.base_occurrence},
           {"effective_occurrence", row.effective_occurrence},
           {"detection", row.detection},
           {"rpn", row.rpn}};
    if (row.applied_coverage) {
        r["applied_coverage"] =
            json{{"provider", json{{"equipment", row.applied_coverage->provider.equipment_id},
                                   {"service", row.applied_coverage->provider.service_id}}},
                 {"mode", std::string(to_token(row.applied_coverage->mode))}};
    }
    return r;
}

json fmea_report_to_json(const FmeaReport& report) {
    json rows = json::array();
    for (const auto& row : report.rows) rows.push_back(fmea_row_to_json(row));
    return json{{"process", report.process_ref}, {"recipe", report.recipe_ref},
                {"rows", std::move(rows)},       {"max_rpn", report.max_rpn},
                {"sum_rpn", report.sum_rpn},     {"warnings", report.warnings}};
}

json risk_report_to_json(const RiskAssessmentReport& report) {
    json rows = json::array();
    for (const auto& row : report.rows) {
        json r{{"hazard", row.hazard_ref},
               {"hazard_type", row.hazard_type},
               {"severity", std::string(to_token(row.severity))},
               {"frequency", std::string(to_token(row.frequency))},
               {"avoidance", std::string(to_token(row.avoidance))},
               {"required_performance_level", std::string(to_token(row.required_pl))},
               {"covered", row.covered}};
        if (row.covering_function_ref) r["covering_function"] = *row.covering_function_ref;
        if (row.covering_function_pl) {
            r["covering_function_performance_level"] =
                std::string(to_token(*row.covering_function_pl));
        }
        if (!row.reason.empty()) r["reason"] = row.reason;
        rows.push_back(std::move(r));
    }
    return json{{"process", report.process_ref},
                {"recipe", report.recipe_ref},
                {"model_digest", report.model_digest},
                {"rows", std::move(rows)},
                {"verdict", std::string(to_token(report.verdict))},
                {"uncovered_hazards", report.uncovered_hazards},
                {"approval_state", std::string(to_token(report.approval_state))}};
}

template <typename Enum, typename Parser>
Enum enum_from(const json& j, Parser parser) {
    auto value = parser(j.get<std::string>());
    if (!value) throw std::runtime_error("bad report token '" + j.get<std::string>() + "'");
    return *value;
}

std::string upper_token(std::string_view token) {
    std::string out(token);
    for (char& c : out) c = static_cast<char>(::toupper(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view token) {
    if (token == "table-text") return ReportFormat::table_text;
    if (token == "csv") return ReportFormat::csv;
    if (token == "structured") return ReportFormat::structured;
    return std::nullopt;
}

RenderedReport render_fmea(const FmeaReport& report, ReportFormat format) {
    RenderedReport rendered;
    rendered.format = format;
    std::ostringstream out;
    switch (format) {
        case ReportFormat::table_text: {
            out << "step | service | failure mode | Sev | Occ | Det | RPN\n";
            for (const auto& row : report.rows) {
                out << row.process_step_ref << " | " << row.service_ref << " | "
                    << row.failure_mode_ref << " | " << row.severity << " | "
                    << row.effective_occurrence << " | " << row.detection << " | " << row.rpn
                    << "\n";
            }
            out << "max RPN: " << report.max_rpn << "\n";
            for (const auto& warning : report.warnings) {
                out << "warning: " << warning << "\n";
            }
            break;
        }
        case ReportFormat::csv: {
            out << "step,service,failure_mode,severity,occurrence,detection,rpn\n";
            for (const auto& row : report.rows) {
                out << csv_field(row.process_step_ref) << ',' << csv_field(row.service_ref)
                    << ',' << csv_field(row.failure_mode_ref) << ',' << row.severity << ','
                    << row.effective_occurrence << ',' << row.detection << ',' << row.rpn
                    << "\n";
            }
            break;
        }
        case ReportFormat::structured:
            out << fmea_report_to_json(report).dump(2) << "\n";
            break;
    }
    rendered.content = out.str();
    return rendered;
}

RenderedReport render_risk(const RiskAssessmentReport& report, ReportFormat format) {
    RenderedReport rendered;
    rendered.format = format;
    std::ostringstream out;
    switch (format) {
        case ReportFormat::table_text: {
            out << "hazard | type | S | F | P | PLr | safety function | PL | covered\n";
            for (const auto& row : report.rows) {
                out << row.hazard_ref << " | " << row.hazard_type << " | "
                    << upper_token(to_token(row.severity)) << " | "
                    << upper_token(to_token(row.frequency)) << " | "
                    << upper_token(to_token(row.avoidance)) << " | " << to_token(row.required_pl)
                    << " | " << (row.covering_function_ref ? *row.covering_function_ref : "-")
                    << " | "
                    << (row.covering_function_pl
                            ? std::string(to_token(*row.covering_function_pl))
                            : "-")
                    << " | " << (row.covered ? "yes" : std::string("no (") + row.reason + ")")
                    << "\n";
            }
            out << "verdict: " << to_token(report.verdict) << "\n";
            if (!report.uncovered_hazards.empty()) {
                out << "uncovered:";
                for (const auto& id : report.uncovered_hazards) out << " " << id;
                out << "\n";
            }
            break;
        }
        case ReportFormat::csv: {
            out << "hazard,hazard_type,severity,frequency,avoidance,required_pl,"
                   "covering_function,covering_pl,covered,reason\n";
            for (const auto& row : report.rows) {
                out << csv_field(row.hazard_ref) << ',' << csv_field(row.hazard_type) << ','
                    << upper_token(to_token(row.severity)) << ','
                    << upper_token(to_token(row.frequency)) << ','
                    << upper_token(to_token(row.avoidance)) << ',' << to_token(row.required_pl)
                    << ','
                    << csv_field(row.covering_function_ref ? *row.covering_function_ref : "")
                    << ','
                    << (row.covering_function_pl ? std::string(to_token(*row.covering_function_pl))
                                                 : "")
                    << ',' << (row.covered ? "yes" : "no") << ',' << csv_field(row.reason)
                    << "\n";
            }
            break;
        }
        case ReportFormat::structured:
            out << risk_report_to_json(report).dump(2) << "\n";
            break;
    }
    rendered.content = out.str();
    return rendered;
}

std::string render_match(const MatchResult& result) {
    std::ostringstream out;
    for (const auto& match : result.assignment) {
        out << match.recipe_step_ref << " -> " << match.process_step_ref << "\n";
    }
    for (const auto& extra : result.extra_process_steps) {
        out << "extra: " << extra << "\n";
    }
    out << (result.feasible ? "feasible" : "infeasible") << "\n";
    return out.str();
}

std::string render_capability(const CapabilityResult& result) {
    std::ostringstream out;
    if (result.witness) {
        for (const auto& step : result.witness->steps) {
            out << (step.recipe_step_ref ? *step.recipe_step_ref : step.id) << " -> "
                << step.equipment_service_ref.text() << "\n";
        }
    }
    out << (result.capable ? "capable" : "not capable") << "\n";
    return out.str();
}

std::string render_comparison(const std::vector<FmeaReport>& ranked) {
    std::ostringstream out;
    out << "rank | process | max RPN | sum RPN\n";
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        out << (i + 1) << " | " << ranked[i].process_ref << " | " << ranked[i].max_rpn << " | "
            << ranked[i].sum_rpn << "\n";
    }
    return out.str();
}

FmeaReport parse_fmea_report(const std::string& content) {
    json doc = json::parse(content);
    FmeaReport report;
    report.process_ref = doc.at("process").get<std::string>();
    report.recipe_ref = doc.at("recipe").get<std::string>();
    report.max_rpn = doc.at("max_rpn").get<int>();
    report.sum_rpn = doc.at("sum_rpn").get<int>();
    report.warnings = doc.at("warnings").get<std::vector<std::string>>();
    for (const json& r : doc.at("rows")) {
        FmeaRow row;
        row.process_step_ref = r.at("step").get<std::string>();
        row.service_ref = r.at("service").get<std::string>();
        row.failure_mode_ref = r.at("failure_mode").get<std::string>();
        row.severity = r.at("severity").get<int>();
        row.base_occurrence = r.at("base_occurrence").get<int>();
        row.effective_occurrence = r.at("effective_occurrence").get<int>();
        row.detection = r.at("detection").get<int>();
        row.rpn = r.at("rpn").get<int>();
        if (r.contains("applied_coverage")) {
            const json& c = r.at("applied_coverage");
            AppliedCoverage applied;
            applied.provider.equipment_id = c.at("provider").at("equipment").get<std::string>();
            applied.provider.service_id = c.at("provider").at("service").get<std::string>();
            applied.mode = enum_from<CoverageMode>(c.at("mode"), parse_coverage_mode);
            row.applied_coverage = applied;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

RiskAssessmentReport parse_risk_report(const std::string& content) {
    json doc = json::parse(content);
    RiskAssessmentReport report;
    report.process_ref = doc.at("process").get<std::string>();
    report.recipe_ref = doc.at("recipe").get<std::string>();
    report.model_digest = doc.at("model_digest").get<std::string>();
    report.uncovered_hazards = doc.at("uncovered_hazards").get<std::vector<std::string>>();
    report.verdict = doc.at("verdict").get<std::string>() == "fulfilled" ? Verdict::fulfilled
                                                                         : Verdict::unfulfilled;
    report.approval_state = doc.at("approval_state").get<std::string>() == "approved"
                                ? ApprovalState::approved
                                : ApprovalState::pending;
    for (const json& r : doc.at("rows")) {
        HazardAssessmentRow row;
        row.hazard_ref = r.at("hazard").get<std::string>();
        row.hazard_type = r.at("hazard_type").get<std::string>();
        row.severity = enum_from<HazardSeverity>(r.at("severity"), parse_hazard_severity);
        row.frequency = enum_from<TaskFrequency>(r.at("frequency"), parse_task_frequency);
        row.avoidance = enum_from<HazardAvoidance>(r.at("avoidance"), parse_hazard_avoidance);
        row.required_pl = enum_from<PerformanceLevel>(r.at("required_performance_level"),
                                                      parse_performance_level);
        row.covered = r.at("covered").get<bool>();
        if (r.contains("covering_function")) {
            row.covering_function_ref = r.at("covering_function").get<std::string>();
        }
        if (r.contains("covering_function_performance_level")) {
            row.covering_function_pl = enum_from<PerformanceLevel>(
                r.at("covering_function_performance_level"), parse_performance_level);
        }
        if (r.contains("reason")) row.reason = r.at("reason").get<std::string>();
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace fabsafe
