#pragma once

// Recipe/process matching. A process implements a recipe when the recipe
// steps embed into the process steps as an order-preserving subsequence with
// every mapped pair satisfied: same abstract service, recipe assignments
// inside the equipment constraints, and concrete values inside both. Extra
// process steps may appear anywhere.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fabsafe/model.hpp"

namespace fabsafe {

struct PropertyMatch {
    bool satisfied = true;
    std::string reason;

    friend bool operator==(const PropertyMatch&, const PropertyMatch&) = default;
};

struct StepMatch {
    std::string recipe_step_ref;
    std::string process_step_ref;  // empty when matched against a bare equipment service
    bool satisfied = false;
    std::string reason;  // top-level diagnosis, e.g. "service mismatch"
    std::map<std::string, PropertyMatch> per_property;

    friend bool operator==(const StepMatch&, const StepMatch&) = default;
};

struct MatchResult {
    bool feasible = false;
    std::vector<StepMatch> assignment;             // one per recipe step when feasible
    std::vector<std::string> extra_process_steps;  // unmapped steps, in process order
    std::vector<std::string> diagnostics;

    friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

// Throws ModelError when an assigned property id is unknown to the recipe
// step's service (an inconsistency validate would have reported).
StepMatch step_matches(const RecipeStep& recipe_step, const EquipmentService& equipment_service,
                       const std::map<std::string, PropertyValue>& property_values,
                       const ModelRepository& repository);

// Greedy leftmost embedding; for fixed pair predicates this finds an
// embedding whenever one exists, and it is the lexicographically earliest.
MatchResult match_recipe(const Recipe& recipe, const Process& process,
                         const ModelRepository& repository);

struct CapabilityResult {
    bool capable = false;
    std::optional<Process> witness;  // skeleton: no interaction tasks, no hazards
    std::vector<std::string> diagnostics;
};

// Per step, candidates use the recipe's own assignments as concrete values
// (midpoint of intervals); the witness picks the candidate with the lowest
// summed failure-mode occurrence, ties broken by equipment id then service id.
CapabilityResult can_manufacture(const Recipe& recipe, const ModelRepository& repository);

}  // namespace fabsafe
