#include "fabsafe/risk.hpp"

#include <algorithm>
#include <array>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fabsafe/model_io.hpp"
#include "fabsafe/sha256.hpp"

namespace fabsafe {

std::string_view to_token(Verdict v) {
    return v == Verdict::fulfilled ? "fulfilled" : "unfulfilled";
}

std::string_view to_token(ApprovalState s) {
    return s == ApprovalState::pending ? "pending" : "approved";
}

PerformanceLevel required_performance_level(HazardSeverity severity, TaskFrequency frequency,
                                            HazardAvoidance avoidance) {
    static constexpr std::array<PerformanceLevel, 8> graph = {
        PerformanceLevel::a, PerformanceLevel::b,  // S1 F1 P1, S1 F1 P2
        PerformanceLevel::b, PerformanceLevel::c,  // S1 F2 P1, S1 F2 P2
        PerformanceLevel::c, PerformanceLevel::d,  // S2 F1 P1, S2 F1 P2
        PerformanceLevel::d, PerformanceLevel::e,  // S2 F2 P1, S2 F2 P2
    };
    std::size_t index = (severity == HazardSeverity::s2 ? 4u : 0u) +
                        (frequency == TaskFrequency::f2 ? 2u : 0u) +
                        (avoidance == HazardAvoidance::p2 ? 1u : 0u);
    return graph[index];
}

std::vector<const SafetyFunction*> applicable_safety_functions(const Hazard& hazard,
                                                               const Process& process,
                                                               const ModelRepository& repository) {
    std::set<std::string> process_equipment;
    for (const auto& step : process.steps) {
        process_equipment.insert(step.equipment_service_ref.equipment_id);
    }

    std::optional<PerformanceLevel> minimum_pl;
    if (const Recipe* recipe = repository.find_recipe(process.recipe_ref)) {
        if (recipe->safety_requirement) {
            minimum_pl = recipe->safety_requirement->minimum_performance_level;
        }
    }

    std::vector<const SafetyFunction*> applicable;
    for (const auto& equipment : repository.equipment) {
        if (!process_equipment.count(equipment.id)) continue;
        for (const auto& sf : equipment.safety_functions) {
            if (minimum_pl && sf.performance_level < *minimum_pl) continue;
            const auto& types = sf.covered_hazard_types;
            if (std::find(types.begin(), types.end(), hazard.hazard_type) == types.end()) {
                continue;
            }
            const auto& zones = sf.constraint.allowed_zones;
            if (std::find(zones.begin(), zones.end(), hazard.zone) == zones.end()) continue;
            const auto& tasks = sf.constraint.applicable_task_refs;
            if (!tasks.empty() &&
                std::find(tasks.begin(), tasks.end(), hazard.interaction_task_ref) ==
                    tasks.end()) {
                continue;
            }
            if (hazard.speed && sf.constraint.max_hazard_speed &&
                hazard.speed->value > sf.constraint.max_hazard_speed->value) {
                continue;
            }
            applicable.push_back(&sf);
        }
    }
    std::sort(applicable.begin(), applicable.end(),
              [](const SafetyFunction* a, const SafetyFunction* b) { return a->id < b->id; });
    return applicable;
}

RiskAssessmentReport assess_process(const Recipe& recipe, const Process& process,
                                    const ModelRepository& repository) {
    RiskAssessmentReport report;
    report.process_ref = process.id;
    report.recipe_ref = recipe.id;
    report.model_digest = model_digest(repository);
    report.approval_state = ApprovalState::pending;

    for (const auto& hazard : process.hazards) {
        const InteractionTask* task = process.find_task(hazard.interaction_task_ref);
        if (!task) {
            throw ModelError("hazard '" + hazard.id + "' references task '" +
                             hazard.interaction_task_ref + "' outside process '" + process.id +
                             "'");
        }
        HazardAssessmentRow row;
        row.hazard_ref = hazard.id;
        row.hazard_type = hazard.hazard_type.path();
        row.severity = hazard.severity;
        row.frequency = task->frequency;
        row.avoidance = hazard.avoidance;
        row.required_pl = required_performance_level(hazard.severity, task->frequency,
                                                     hazard.avoidance);

        auto applicable = applicable_safety_functions(hazard, process, repository);
        const SafetyFunction* covering = nullptr;
        for (const SafetyFunction* sf : applicable) {
            if (sf->performance_level < row.required_pl) continue;
            if (!covering || sf->performance_level < covering->performance_level) covering = sf;
        }
        if (covering) {
            row.covered = true;
            row.covering_function_ref = covering->id;
            row.covering_function_pl = covering->performance_level;
        } else {
            row.covered = false;
            if (applicable.empty()) {
                row.reason = "no applicable safety function";
            } else {
                const SafetyFunction* best = applicable.front();
                for (const SafetyFunction* sf : applicable) {
                    if (sf->performance_level > best->performance_level) best = sf;
                }
                row.reason = "required performance level " +
                             std::string(to_token(row.required_pl)) +
                             " exceeds best applicable performance level " +
                             std::string(to_token(best->performance_level)) + " ('" + best->id +
                             "')";
            }
            report.uncovered_hazards.push_back(hazard.id);
        }
        report.rows.push_back(std::move(row));
    }

    std::sort(report.rows.begin(), report.rows.end(),
              [](const HazardAssessmentRow& a, const HazardAssessmentRow& b) {
                  return a.hazard_ref < b.hazard_ref;
              });
    std::sort(report.uncovered_hazards.begin(), report.uncovered_hazards.end());
    report.verdict =
        report.uncovered_hazards.empty() ? Verdict::fulfilled : Verdict::unfulfilled;
    return report;
}

std::string report_digest(const RiskAssessmentReport& report) {
    nlohmann::json doc;
    doc["process"] = report.process_ref;
    doc["recipe"] = report.recipe_ref;
    doc["model_digest"] = report.model_digest;
    doc["verdict"] = std::string(to_token(report.verdict));
    doc["uncovered_hazards"] = report.uncovered_hazards;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json r{{"hazard", row.hazard_ref},
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
    doc["rows"] = std::move(rows);
    return sha256_hex(doc.dump());
}

ProcessApproval approve(RiskAssessmentReport& report, const ModelRepository& repository,
                        const std::string& approver_id,
                        std::chrono::system_clock::time_point timestamp) {
    if (report.verdict != Verdict::fulfilled) {
        std::string list;
        for (const auto& id : report.uncovered_hazards) {
            if (!list.empty()) list += ", ";
            list += id;
        }
        throw ApprovalRefusedError(report.uncovered_hazards,
                                   "approval refused: uncovered hazards: " + list);
    }
    if (model_digest(repository) != report.model_digest) {
        throw StaleReportError(
            "stale report: the model changed since the assessment was produced");
    }
    ProcessApproval approval;
    approval.report_digest = report_digest(report);
    approval.approver_id = approver_id;
    approval.timestamp = timestamp;
    report.approval_state = ApprovalState::approved;
    return approval;
}

std::string format_timestamp_utc(std::chrono::system_clock::time_point tp) {
    std::time_t time = std::chrono::system_clock::to_time_t(tp);
    std::tm utc{};
    gmtime_r(&time, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

void append_audit_record(const std::filesystem::path& audit_log, const ProcessApproval& approval,
                         const std::string& process_ref) {
    std::ofstream out(audit_log, std::ios::app);
    if (!out) {
        throw std::runtime_error("cannot open audit log '" + audit_log.string() + "'");
    }
    out << format_timestamp_utc(approval.timestamp) << " approver=" << approval.approver_id
        << " process=" << process_ref << " digest=sha256:" << approval.report_digest
        << " verdict=fulfilled\n";
}

}  // namespace fabsafe
