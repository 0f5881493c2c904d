#include "fabsafe/fmea.hpp"

#include <algorithm>
#include <tuple>

#include "fabsafe/matching.hpp"

namespace fabsafe {

namespace {

bool provider_active(const QualityMeasureCoverage& coverage, std::size_t covered_position,
                     const Process& process) {
    for (std::size_t j = 0; j < process.steps.size(); ++j) {
        if (process.steps[j].equipment_service_ref != coverage.provider) continue;
        if (coverage.mode == CoverageMode::inline_supervision) return true;
        if (j >= covered_position) return true;
    }
    return false;
}

}  // namespace

std::vector<QualityMeasureCoverage> active_coverages(const ProcessStep& process_step,
                                                     const std::string& failure_mode_ref,
                                                     const Process& process,
                                                     const ModelRepository& repository) {
    auto position = process.step_position(process_step.id);
    if (!position) {
        throw ModelError("process step '" + process_step.id + "' does not belong to process '" +
                         process.id + "'");
    }
    std::vector<QualityMeasureCoverage> active;
    for (const auto& equipment : repository.equipment) {
        for (const auto& es : equipment.services) {
            for (const auto& coverage : es.quality_coverages) {
                if (coverage.covered_failure_mode_ref != failure_mode_ref) continue;
                if (!provider_active(coverage, *position, process)) continue;
                active.push_back(coverage);
            }
        }
    }
    auto key = [](const QualityMeasureCoverage& c) {
        return std::make_tuple(c.provider, c.mode, c.detection, c.decreased_occurrence);
    };
    std::sort(active.begin(), active.end(),
              [&](const auto& a, const auto& b) { return key(a) < key(b); });
    active.erase(std::unique(active.begin(), active.end()), active.end());
    return active;
}

EffectiveFactors effective_factors(const ProcessStep& process_step,
                                   const std::string& failure_mode_ref, const Process& process,
                                   const ModelRepository& repository) {
    const EquipmentService* es =
        repository.find_equipment_service(process_step.equipment_service_ref);
    if (!es) {
        throw ModelError("equipment service '" + process_step.equipment_service_ref.text() +
                         "' does not resolve");
    }
    const EquipmentFailureMode* efm = es->find_failure_mode(failure_mode_ref);
    if (!efm) {
        throw ModelError("equipment service '" + process_step.equipment_service_ref.text() +
                         "' declares no failure mode '" + failure_mode_ref + "'");
    }

    EffectiveFactors factors;
    factors.effective_occurrence = efm->occurrence;
    factors.detection = 5;  // uncovered failure modes count as nearly undetectable

    for (const auto& coverage :
         active_coverages(process_step, failure_mode_ref, process, repository)) {
        if (coverage.decreased_occurrence) {
            factors.effective_occurrence =
                std::min(factors.effective_occurrence, *coverage.decreased_occurrence);
        }
        if (coverage.detection < factors.detection ||
            (coverage.detection == factors.detection && !factors.applied_coverage)) {
            factors.detection = coverage.detection;
            factors.applied_coverage = AppliedCoverage{coverage.provider, coverage.mode};
        }
    }
    return factors;
}

FmeaReport build_fmea(const Recipe& recipe, const Process& process,
                      const ModelRepository& repository, FmeaMode mode) {
    MatchResult match = match_recipe(recipe, process, repository);
    if (!match.feasible) {
        std::string detail = match.diagnostics.empty() ? "" : ": " + match.diagnostics.front();
        throw InfeasibleMatchError("process '" + process.id + "' does not implement recipe '" +
                                   recipe.id + "'" + detail);
    }

    FmeaReport report;
    report.process_ref = process.id;
    report.recipe_ref = recipe.id;

    for (const auto& step_match : match.assignment) {
        const RecipeStep* recipe_step = recipe.find_step(step_match.recipe_step_ref);
        const ProcessStep* process_step = process.find_step(step_match.process_step_ref);
        const EquipmentService* es =
            repository.find_equipment_service(process_step->equipment_service_ref);
        for (const auto& efm : es->failure_modes) {
            int severity = 0;
            auto severity_it = recipe_step->failure_mode_severities.find(efm.failure_mode_ref);
            if (severity_it != recipe_step->failure_mode_severities.end()) {
                severity = severity_it->second;
            } else if (mode == FmeaMode::strict) {
                throw UnratedFailureModeError(
                    efm.failure_mode_ref,
                    "failure mode '" + efm.failure_mode_ref + "' of step '" + process_step->id +
                        "' has no severity rating in recipe step '" + recipe_step->id + "'");
            } else {
                severity = 5;
                report.warnings.push_back("step '" + process_step->id + "': failure mode '" +
                                          efm.failure_mode_ref +
                                          "' has no severity rating in recipe step '" +
                                          recipe_step->id + "'; assuming severity 5");
            }

            EffectiveFactors factors =
                effective_factors(*process_step, efm.failure_mode_ref, process, repository);
            FmeaRow row;
            row.process_step_ref = process_step->id;
            row.service_ref = es->service_ref;
            row.failure_mode_ref = efm.failure_mode_ref;
            row.severity = severity;
            row.base_occurrence = efm.occurrence;
            row.effective_occurrence = factors.effective_occurrence;
            row.detection = factors.detection;
            row.rpn = row.severity * row.effective_occurrence * row.detection;
            row.applied_coverage = factors.applied_coverage;
            report.rows.push_back(std::move(row));
        }
    }

    // Extra steps contribute no rows; surface their failure modes as warnings.
    for (const auto& extra_id : match.extra_process_steps) {
        const ProcessStep* step = process.find_step(extra_id);
        const EquipmentService* es =
            repository.find_equipment_service(step->equipment_service_ref);
        for (const auto& efm : es->failure_modes) {
            report.warnings.push_back("extra step '" + extra_id + "': failure mode '" +
                                      efm.failure_mode_ref +
                                      "' is not evaluated (step is not mapped to a recipe step)");
        }
    }

    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [&](const FmeaRow& a, const FmeaRow& b) {
                         return std::make_tuple(*process.step_position(a.process_step_ref),
                                                a.failure_mode_ref) <
                                std::make_tuple(*process.step_position(b.process_step_ref),
                                                b.failure_mode_ref);
                     });
    for (const auto& row : report.rows) {
        report.max_rpn = std::max(report.max_rpn, row.rpn);
        report.sum_rpn += row.rpn;
    }
    return report;
}

std::vector<FmeaReport> compare_processes(std::vector<FmeaReport> reports) {
    if (reports.empty()) return reports;
    for (const auto& report : reports) {
        if (report.recipe_ref != reports.front().recipe_ref) {
            throw ModelError("cannot compare processes for different recipes ('" +
                             reports.front().recipe_ref + "' vs '" + report.recipe_ref + "')");
        }
    }
    std::sort(reports.begin(), reports.end(), [](const FmeaReport& a, const FmeaReport& b) {
        return std::tie(a.max_rpn, a.sum_rpn, a.process_ref) <
               std::tie(b.max_rpn, b.sum_rpn, b.process_ref);
    });
    return reports;
}

}  // namespace fabsafe
