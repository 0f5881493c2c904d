#include "fabsafe/matching.hpp"

#include <algorithm>

namespace fabsafe {

namespace {

bool requirement_in_constraint(const PropertyRequirement& requirement,
                               const PropertyConstraint& constraint) {
    if (const auto* value = std::get_if<double>(&requirement)) {
        const auto* interval = std::get_if<Interval>(&constraint);
        return interval && interval->contains(*value);
    }
    if (const auto* iv = std::get_if<Interval>(&requirement)) {
        const auto* interval = std::get_if<Interval>(&constraint);
        return interval && interval->contains(*iv);
    }
    const auto* set = std::get_if<ValueSet>(&constraint);
    return set && std::binary_search(set->begin(), set->end(),
                                     std::get<std::string>(requirement));
}

bool value_in_requirement(const PropertyValue& value, const PropertyRequirement& requirement) {
    if (const auto* num = std::get_if<double>(&value)) {
        if (const auto* exact = std::get_if<double>(&requirement)) return *num == *exact;
        if (const auto* interval = std::get_if<Interval>(&requirement)) {
            return interval->contains(*num);
        }
        return false;
    }
    const auto* text = std::get_if<std::string>(&requirement);
    return text && *text == std::get<std::string>(value);
}

PropertyValue synthesized_value(const PropertyRequirement& requirement) {
    if (const auto* value = std::get_if<double>(&requirement)) return *value;
    if (const auto* interval = std::get_if<Interval>(&requirement)) {
        return (interval->lo + interval->hi) / 2.0;
    }
    return std::get<std::string>(requirement);
}

int occurrence_sum(const EquipmentService& es) {
    int sum = 0;
    for (const auto& fm : es.failure_modes) sum += fm.occurrence;
    return sum;
}

}  // namespace

StepMatch step_matches(const RecipeStep& recipe_step, const EquipmentService& equipment_service,
                       const std::map<std::string, PropertyValue>& property_values,
                       const ModelRepository& repository) {
    StepMatch match;
    match.recipe_step_ref = recipe_step.id;
    if (recipe_step.service_ref != equipment_service.service_ref) {
        match.satisfied = false;
        match.reason = "service mismatch";
        return match;
    }
    const ServiceDeclaration* service = repository.find_service(recipe_step.service_ref);
    if (!service) {
        throw ModelError("service '" + recipe_step.service_ref + "' does not resolve");
    }

    bool all_satisfied = true;
    for (const auto& [prop_id, requirement] : recipe_step.property_assignments) {
        if (!service->find_property(prop_id)) {
            throw ModelError("property '" + prop_id + "' is unknown to service '" +
                             service->id + "'");
        }
        PropertyMatch result;
        std::vector<std::string> reasons;

        auto constraint_it = equipment_service.property_constraints.find(prop_id);
        const PropertyConstraint* constraint =
            constraint_it == equipment_service.property_constraints.end()
                ? nullptr
                : &constraint_it->second;
        if (constraint && !requirement_in_constraint(requirement, *constraint)) {
            reasons.push_back("assignment " + describe(requirement) +
                              " not contained in constraint " + describe(*constraint));
        }
        auto value_it = property_values.find(prop_id);
        if (value_it == property_values.end()) {
            reasons.push_back("no concrete value for required property");
        } else {
            if (!value_in_requirement(value_it->second, requirement)) {
                reasons.push_back("value " + describe(value_it->second) +
                                  " outside assignment " + describe(requirement));
            }
            if (constraint && !value_in_constraint(value_it->second, *constraint)) {
                reasons.push_back("value " + describe(value_it->second) +
                                  " outside constraint " + describe(*constraint));
            }
        }

        result.satisfied = reasons.empty();
        for (std::size_t i = 0; i < reasons.size(); ++i) {
            if (i) result.reason += "; ";
            result.reason += reasons[i];
        }
        all_satisfied = all_satisfied && result.satisfied;
        match.per_property.emplace(prop_id, std::move(result));
    }
    match.satisfied = all_satisfied;
    if (!match.satisfied) match.reason = "property constraints not satisfied";
    return match;
}

MatchResult match_recipe(const Recipe& recipe, const Process& process,
                         const ModelRepository& repository) {
    if (process.recipe_ref != recipe.id) {
        throw ModelError("process '" + process.id + "' implements recipe '" +
                         process.recipe_ref + "', not '" + recipe.id + "'");
    }
    MatchResult result;
    std::vector<bool> mapped(process.steps.size(), false);
    std::size_t cursor = 0;
    for (const auto& recipe_step : recipe.steps) {
        bool found = false;
        for (std::size_t j = cursor; j < process.steps.size(); ++j) {
            const ProcessStep& process_step = process.steps[j];
            const EquipmentService* es =
                repository.find_equipment_service(process_step.equipment_service_ref);
            if (!es) {
                throw ModelError("equipment service '" +
                                 process_step.equipment_service_ref.text() +
                                 "' does not resolve");
            }
            StepMatch match =
                step_matches(recipe_step, *es, process_step.property_values, repository);
            if (!match.satisfied) continue;
            match.process_step_ref = process_step.id;
            result.assignment.push_back(std::move(match));
            mapped[j] = true;
            cursor = j + 1;
            found = true;
            break;
        }
        if (!found) {
            result.feasible = false;
            result.assignment.clear();
            result.diagnostics.push_back(
                "recipe step '" + recipe_step.id +
                "' cannot be matched by any remaining process step in order");
            return result;
        }
    }
    result.feasible = true;
    for (std::size_t j = 0; j < process.steps.size(); ++j) {
        if (!mapped[j]) result.extra_process_steps.push_back(process.steps[j].id);
    }
    return result;
}

CapabilityResult can_manufacture(const Recipe& recipe, const ModelRepository& repository) {
    CapabilityResult result;
    result.capable = true;

    Process witness;
    witness.id = recipe.id + "-witness";
    witness.recipe_ref = recipe.id;

    for (const auto& recipe_step : recipe.steps) {
        std::map<std::string, PropertyValue> values;
        for (const auto& [prop_id, requirement] : recipe_step.property_assignments) {
            values.emplace(prop_id, synthesized_value(requirement));
        }

        struct Candidate {
            int occurrence_sum;
            EquipmentServiceKey key;
        };
        std::optional<Candidate> best;
        for (const auto& equipment : repository.equipment) {
            for (const auto& es : equipment.services) {
                StepMatch match = step_matches(recipe_step, es, values, repository);
                if (!match.satisfied) continue;
                Candidate candidate{occurrence_sum(es), {equipment.id, es.id}};
                if (!best || std::tie(candidate.occurrence_sum, candidate.key) <
                                 std::tie(best->occurrence_sum, best->key)) {
                    best = candidate;
                }
            }
        }
        if (!best) {
            result.capable = false;
            result.diagnostics.push_back("no equipment service matches recipe step '" +
                                         recipe_step.id + "' (service '" +
                                         recipe_step.service_ref + "')");
            continue;
        }
        ProcessStep step;
        step.id = recipe_step.id + "-impl";
        step.equipment_service_ref = best->key;
        step.property_values = std::move(values);
        step.recipe_step_ref = recipe_step.id;
        witness.steps.push_back(std::move(step));
    }

    if (result.capable) result.witness = std::move(witness);
    return result;
}

}  // namespace fabsafe
