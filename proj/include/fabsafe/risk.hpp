#pragma once

// Hazard risk assessment and the approval gate. Every hazard gets a required
// performance level from the (severity, frequency, avoidance) risk graph and
// is checked against the safety functions of the equipment running in the
// process. Approval is a recorded manual act that binds an approver to the
// digest of a fulfilled report; it is refused for unfulfilled reports and for
// reports whose underlying model has changed since assessment.

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fabsafe/model.hpp"

namespace fabsafe {

class ApprovalRefusedError : public std::runtime_error {
public:
    ApprovalRefusedError(std::vector<std::string> uncovered, const std::string& message)
        : std::runtime_error(message), uncovered_(std::move(uncovered)) {}
    const std::vector<std::string>& uncovered_hazards() const { return uncovered_; }

private:
    std::vector<std::string> uncovered_;
};

class StaleReportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Risk graph per the machinery-safety standard: S1/S2 severity, F1/F2 task
// frequency, P1/P2 avoidance possibility.
//
//   S1: F1P1 -> a, F1P2 -> b, F2P1 -> b, F2P2 -> c
//   S2: F1P1 -> c, F1P2 -> d, F2P1 -> d, F2P2 -> e
PerformanceLevel required_performance_level(HazardSeverity severity, TaskFrequency frequency,
                                            HazardAvoidance avoidance);

// Safety functions of equipment instantiated in the process that cover the
// hazard's type, zone, task and speed, and clear the recipe's minimum
// performance level when one is declared. Sorted by function id.
std::vector<const SafetyFunction*> applicable_safety_functions(const Hazard& hazard,
                                                               const Process& process,
                                                               const ModelRepository& repository);

struct HazardAssessmentRow {
    std::string hazard_ref;
    std::string hazard_type;  // path, for rendering
    HazardSeverity severity = HazardSeverity::s1;
    TaskFrequency frequency = TaskFrequency::f1;
    HazardAvoidance avoidance = HazardAvoidance::p1;
    PerformanceLevel required_pl = PerformanceLevel::a;
    std::optional<std::string> covering_function_ref;  // smallest sufficient PL
    std::optional<PerformanceLevel> covering_function_pl;
    bool covered = false;
    std::string reason;  // set when uncovered

    friend bool operator==(const HazardAssessmentRow&, const HazardAssessmentRow&) = default;
};

enum class Verdict { fulfilled, unfulfilled };
enum class ApprovalState { pending, approved };

std::string_view to_token(Verdict v);
std::string_view to_token(ApprovalState s);

struct RiskAssessmentReport {
    std::string process_ref;
    std::string recipe_ref;
    std::string model_digest;  // canonical-model digest at assessment time
    std::vector<HazardAssessmentRow> rows;
    Verdict verdict = Verdict::fulfilled;
    std::vector<std::string> uncovered_hazards;
    ApprovalState approval_state = ApprovalState::pending;

    friend bool operator==(const RiskAssessmentReport&, const RiskAssessmentReport&) = default;
};

RiskAssessmentReport assess_process(const Recipe& recipe, const Process& process,
                                    const ModelRepository& repository);

struct ProcessApproval {
    std::string report_digest;
    std::string approver_id;
    std::chrono::system_clock::time_point timestamp;
};

// Digest of the report content (approval state excluded, so the digest is
// stable across the pending -> approved transition).
std::string report_digest(const RiskAssessmentReport& report);

// The repository is needed to detect a model changed since assessment.
ProcessApproval approve(RiskAssessmentReport& report, const ModelRepository& repository,
                        const std::string& approver_id,
                        std::chrono::system_clock::time_point timestamp);

std::string format_timestamp_utc(std::chrono::system_clock::time_point tp);

// One line per approval: timestamp, approver, process, report digest, verdict.
void append_audit_record(const std::filesystem::path& audit_log, const ProcessApproval& approval,
                         const std::string& process_ref);

}  // namespace fabsafe
