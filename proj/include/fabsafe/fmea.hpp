#pragma once

// Process-FMEA generation. Severity comes from the recipe step that a process
// step implements, base occurrence from the equipment service, and detection
// or decreased occurrence from quality-measure coverages whose provider runs
// in the same process. RPN = severity x effective occurrence x detection,
// each factor on the 1..5 scale.

#include <optional>
#include <string>
#include <vector>

#include "fabsafe/model.hpp"

namespace fabsafe {

enum class FmeaMode { strict, lenient };

// Raised in strict mode when a mapped step carries an equipment failure mode
// the recipe never rated.
class UnratedFailureModeError : public std::runtime_error {
public:
    UnratedFailureModeError(std::string failure_mode, const std::string& message)
        : std::runtime_error(message), failure_mode_(std::move(failure_mode)) {}
    const std::string& failure_mode() const { return failure_mode_; }

private:
    std::string failure_mode_;
};

class InfeasibleMatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AppliedCoverage {
    EquipmentServiceKey provider;
    CoverageMode mode = CoverageMode::downstream_step;

    friend bool operator==(const AppliedCoverage&, const AppliedCoverage&) = default;
};

struct FmeaRow {
    std::string process_step_ref;
    std::string service_ref;  // abstract service of the step, for rendering
    std::string failure_mode_ref;
    int severity = 5;
    int base_occurrence = 1;
    int effective_occurrence = 1;
    int detection = 5;
    int rpn = 0;
    std::optional<AppliedCoverage> applied_coverage;

    friend bool operator==(const FmeaRow&, const FmeaRow&) = default;
};

struct FmeaReport {
    std::string process_ref;
    std::string recipe_ref;
    std::vector<FmeaRow> rows;  // sorted by (process step order, failure mode id)
    int max_rpn = 0;
    int sum_rpn = 0;
    std::vector<std::string> warnings;

    friend bool operator==(const FmeaReport&, const FmeaReport&) = default;
};

// Coverages targeting the given failure mode whose provider service is
// instantiated in the process: downstream-step coverages need a provider step
// at a position >= the covered step, inline-supervision ones anywhere.
// Sorted by provider, deduplicated.
std::vector<QualityMeasureCoverage> active_coverages(const ProcessStep& process_step,
                                                     const std::string& failure_mode_ref,
                                                     const Process& process,
                                                     const ModelRepository& repository);

struct EffectiveFactors {
    int effective_occurrence = 1;
    int detection = 5;
    std::optional<AppliedCoverage> applied_coverage;

    friend bool operator==(const EffectiveFactors&, const EffectiveFactors&) = default;
};

// Independent minima across active coverages: occurrence and detection are
// minimized separately; applied_coverage names the detection minimizer.
EffectiveFactors effective_factors(const ProcessStep& process_step,
                                   const std::string& failure_mode_ref, const Process& process,
                                   const ModelRepository& repository);

FmeaReport build_fmea(const Recipe& recipe, const Process& process,
                      const ModelRepository& repository, FmeaMode mode = FmeaMode::lenient);

// Ascending by (max RPN, sum RPN, process id). All reports must share one recipe.
std::vector<FmeaReport> compare_processes(std::vector<FmeaReport> reports);

}  // namespace fabsafe
