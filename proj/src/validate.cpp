#include "fabsafe/validate.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>

namespace fabsafe {

namespace {

template <typename T, typename KeyFn>
void sort_by(std::vector<T>& items, KeyFn key) {
    std::stable_sort(items.begin(), items.end(),
                     [&](const T& a, const T& b) { return key(a) < key(b); });
}

void sort_unique(std::vector<std::string>& values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
}

bool valid_id(const std::string& id) {
    if (id.empty()) return false;
    return id.find_first_of(" \t\r\n") == std::string::npos;
}

class Checker {
public:
    explicit Checker(const ModelRepository& repo) : repo_(repo) {}

    std::vector<Violation> run() {
        check_services();
        check_recipes();
        check_equipment();
        check_processes();
        check_taxonomy();
        check_zones();
        check_speed_units();
        std::sort(violations_.begin(), violations_.end());
        violations_.erase(std::unique(violations_.begin(), violations_.end()), violations_.end());
        return std::move(violations_);
    }

private:
    void add(const std::string& element, const std::string& rule, const std::string& message) {
        violations_.push_back({element, rule, message});
    }

    void check_id(const std::string& id, const std::string& element) {
        if (!valid_id(id)) {
            add(element, "id.format", "id must be non-empty and contain no whitespace");
        }
    }

    template <typename Collection, typename KeyFn>
    void check_unique(const Collection& items, KeyFn key, const std::string& rule,
                      const std::string& what) {
        std::set<std::string> seen;
        for (const auto& item : items) {
            std::string k = key(item);
            if (!seen.insert(k).second) {
                add(k, rule, "duplicate " + what + " '" + k + "'");
            }
        }
    }

    static std::string range_message(const char* factor, int value) {
        std::ostringstream os;
        os << factor << " out of range 1..5: got " << value;
        return os.str();
    }

    void check_scale(int value, const char* factor, const std::string& element,
                     const std::string& rule, const std::string& context) {
        if (value < 1 || value > 5) {
            add(element, rule, range_message(factor, value) + context);
        }
    }

    // ---- services ----

    void check_services() {
        check_unique(repo_.services, [](const ServiceDeclaration& s) { return s.id; },
                     "id.duplicate", "service id");
        std::set<std::string> failure_mode_ids;
        for (const auto& service : repo_.services) {
            check_id(service.id, service.id);
            std::set<std::string> prop_ids, prop_names, fm_names;
            for (const auto& prop : service.properties) {
                check_id(prop.id, service.id + "/" + prop.id);
                if (!prop_ids.insert(prop.id).second) {
                    add(service.id, "service.property_ids",
                        "duplicate property id '" + prop.id + "'");
                }
                if (!prop_names.insert(prop.name).second) {
                    add(service.id, "service.property_names",
                        "duplicate property name '" + prop.name + "'");
                }
                if (prop.kind == PropertyKind::numeric && prop.unit.empty()) {
                    add(prop.id, "property.unit_missing",
                        "numeric property '" + prop.id + "' declares no unit");
                }
                if (prop.global_bounds) check_bounds(*prop.global_bounds, prop, service.id);
            }
            for (const auto& fm : service.failure_modes) {
                check_id(fm.id, fm.id);
                if (!failure_mode_ids.insert(fm.id).second) {
                    add(fm.id, "failure_mode.id_duplicate",
                        "failure mode id '" + fm.id + "' declared more than once in the repository");
                }
                if (!fm_names.insert(fm.name).second) {
                    add(service.id, "service.failure_mode_names",
                        "duplicate failure mode name '" + fm.name + "'");
                }
            }
        }
    }

    void check_bounds(const PropertyConstraint& bounds, const ServicePropertyDeclaration& prop,
                      const std::string& service_id) {
        const std::string element = service_id + "/" + prop.id;
        if (const auto* interval = std::get_if<Interval>(&bounds)) {
            if (!interval->valid()) {
                add(element, "interval.invalid",
                    "interval bounds " + describe(bounds) + " have lo > hi");
            }
            if (prop.kind != PropertyKind::numeric) {
                add(element, "property.bounds_kind",
                    "interval bounds on non-numeric property '" + prop.id + "'");
            }
        } else {
            const auto& set = std::get<ValueSet>(bounds);
            if (set.empty()) {
                add(element, "bounds.empty", "allowed-value set for '" + prop.id + "' is empty");
            }
            if (prop.kind != PropertyKind::enumerated) {
                add(element, "property.bounds_kind",
                    "allowed-value set on non-enumerated property '" + prop.id + "'");
            }
        }
    }

    // ---- recipes ----

    void check_recipes() {
        check_unique(repo_.recipes, [](const Recipe& r) { return r.id; }, "id.duplicate",
                     "recipe id");
        for (const auto& recipe : repo_.recipes) {
            check_id(recipe.id, recipe.id);
            if (recipe.steps.empty()) {
                add(recipe.id, "recipe.steps_empty", "recipe has no steps");
            }
            check_unique(recipe.steps, [](const RecipeStep& s) { return s.id; },
                         "recipe.step_ids", "recipe step id");
            for (const auto& step : recipe.steps) {
                check_recipe_step(step, recipe);
            }
        }
    }

    void check_recipe_step(const RecipeStep& step, const Recipe& recipe) {
        check_id(step.id, recipe.id + "/" + step.id);
        const ServiceDeclaration* service = repo_.find_service(step.service_ref);
        if (!service) {
            add(step.id, "ref.service",
                "recipe step references unknown service '" + step.service_ref + "'");
            return;
        }
        for (const auto& [prop_id, requirement] : step.property_assignments) {
            const auto* prop = service->find_property(prop_id);
            if (!prop) {
                add(step.id, "property.unknown",
                    "assigned property '" + prop_id + "' does not belong to service '" +
                        service->id + "'");
                continue;
            }
            check_requirement_kind(requirement, *prop, step.id);
            if (prop->global_bounds) {
                check_requirement_within_bounds(requirement, *prop, step.id);
            }
        }
        for (const auto& [fm_id, severity] : step.failure_mode_severities) {
            if (!service->find_failure_mode(fm_id)) {
                add(step.id, "failure_mode.unknown",
                    "rated failure mode '" + fm_id + "' does not belong to service '" +
                        service->id + "'");
            }
            check_scale(severity, "severity", step.id, "range.severity",
                        " (failure mode '" + fm_id + "')");
        }
    }

    void check_requirement_kind(const PropertyRequirement& requirement,
                                const ServicePropertyDeclaration& prop,
                                const std::string& element) {
        bool numeric_requirement = !std::holds_alternative<std::string>(requirement);
        bool numeric_property = prop.kind == PropertyKind::numeric;
        if (numeric_requirement != numeric_property) {
            add(element, "property.kind_mismatch",
                "assignment " + describe(requirement) + " does not match the " +
                    std::string(to_token(prop.kind)) + " kind of property '" + prop.id + "'");
            return;
        }
        if (const auto* interval = std::get_if<Interval>(&requirement)) {
            if (!interval->valid()) {
                add(element, "interval.invalid",
                    "assignment interval " + describe(requirement) + " has lo > hi");
            }
        }
    }

    void check_requirement_within_bounds(const PropertyRequirement& requirement,
                                         const ServicePropertyDeclaration& prop,
                                         const std::string& element) {
        const auto& bounds = *prop.global_bounds;
        bool inside = true;
        if (const auto* value = std::get_if<double>(&requirement)) {
            const auto* interval = std::get_if<Interval>(&bounds);
            inside = interval && interval->contains(*value);
        } else if (const auto* iv = std::get_if<Interval>(&requirement)) {
            const auto* interval = std::get_if<Interval>(&bounds);
            inside = interval && interval->contains(*iv);
        } else {
            const auto* set = std::get_if<ValueSet>(&bounds);
            const auto& text = std::get<std::string>(requirement);
            inside = set && std::binary_search(set->begin(), set->end(), text);
        }
        if (!inside) {
            add(element, "property.outside_global_bounds",
                "assignment " + describe(requirement) + " for '" + prop.id +
                    "' lies outside global bounds " + describe(bounds));
        }
    }

    // ---- equipment ----

    void check_equipment() {
        check_unique(repo_.equipment, [](const Equipment& e) { return e.id; }, "id.duplicate",
                     "equipment id");
        std::set<std::string> function_ids;
        for (const auto& equipment : repo_.equipment) {
            check_id(equipment.id, equipment.id);
            check_unique(equipment.services, [](const EquipmentService& s) { return s.id; },
                         "equipment.service_ids", "equipment service id");
            for (const auto& es : equipment.services) {
                check_equipment_service(es, equipment);
            }
            for (const auto& sf : equipment.safety_functions) {
                if (!function_ids.insert(sf.id).second) {
                    add(sf.id, "id.duplicate", "duplicate safety function id '" + sf.id + "'");
                }
                check_safety_function(sf, equipment);
            }
        }
    }

    void check_equipment_service(const EquipmentService& es, const Equipment& equipment) {
        const std::string element = equipment.id + "/" + es.id;
        check_id(es.id, element);
        const ServiceDeclaration* service = repo_.find_service(es.service_ref);
        if (!service) {
            add(element, "ref.service",
                "equipment service references unknown service '" + es.service_ref + "'");
        }
        for (const auto& [prop_id, constraint] : es.property_constraints) {
            const auto* prop = service ? service->find_property(prop_id) : nullptr;
            if (service && !prop) {
                add(element, "property.unknown",
                    "constrained property '" + prop_id + "' does not belong to service '" +
                        service->id + "'");
                continue;
            }
            if (const auto* interval = std::get_if<Interval>(&constraint)) {
                if (!interval->valid()) {
                    add(element, "interval.invalid",
                        "constraint " + describe(constraint) + " for '" + prop_id +
                            "' has lo > hi");
                }
                if (prop && prop->kind != PropertyKind::numeric) {
                    add(element, "property.kind_mismatch",
                        "interval constraint on non-numeric property '" + prop_id + "'");
                }
            } else {
                if (std::get<ValueSet>(constraint).empty()) {
                    add(element, "bounds.empty",
                        "allowed-value set for '" + prop_id + "' is empty");
                }
                if (prop && prop->kind != PropertyKind::enumerated) {
                    add(element, "property.kind_mismatch",
                        "allowed-value set constraint on non-enumerated property '" + prop_id +
                            "'");
                }
            }
        }
        check_unique(es.failure_modes,
                     [](const EquipmentFailureMode& fm) { return fm.failure_mode_ref; },
                     "equipment.failure_mode_duplicate", "failure mode rating for");
        for (const auto& efm : es.failure_modes) {
            const FailureModeDeclaration* declaration = repo_.find_failure_mode(efm.failure_mode_ref);
            if (!declaration) {
                add(element, "ref.failure_mode",
                    "unknown failure mode '" + efm.failure_mode_ref + "'");
            } else if (service && declaration->service_ref != service->id) {
                add(element, "failure_mode.foreign",
                    "failure mode '" + efm.failure_mode_ref + "' belongs to service '" +
                        declaration->service_ref + "', not to implemented service '" +
                        service->id + "'");
            }
            check_scale(efm.occurrence, "occurrence", element, "range.occurrence",
                        " (failure mode '" + efm.failure_mode_ref + "')");
        }
        for (const auto& coverage : es.quality_coverages) {
            if (!repo_.find_equipment_service(coverage.provider)) {
                add(element, "ref.equipment_service",
                    "coverage provider '" + coverage.provider.text() + "' does not resolve");
            }
            if (!repo_.find_failure_mode(coverage.covered_failure_mode_ref)) {
                add(element, "ref.failure_mode",
                    "coverage targets unknown failure mode '" +
                        coverage.covered_failure_mode_ref + "'");
            }
            check_scale(coverage.detection, "detection", element, "range.detection",
                        " (coverage of '" + coverage.covered_failure_mode_ref + "')");
            if (coverage.decreased_occurrence) {
                check_scale(*coverage.decreased_occurrence, "decreased occurrence", element,
                            "range.occurrence",
                            " (coverage of '" + coverage.covered_failure_mode_ref + "')");
            }
        }
    }

    void check_safety_function(const SafetyFunction& sf, const Equipment& equipment) {
        check_id(sf.id, sf.id);
        if (sf.covered_hazard_types.empty()) {
            add(sf.id, "safety_function.no_hazard_types",
                "safety function covers no hazard types");
        }
        for (const auto& type : sf.covered_hazard_types) {
            if (!repo_.has_hazard_type(type)) {
                add(sf.id, "taxonomy.unknown",
                    "hazard type '" + type.path() + "' is not declared in the taxonomy");
            }
        }
        for (const auto& zone : sf.constraint.allowed_zones) {
            if (!valid_id(zone)) {
                add(sf.id, "id.format", "allowed zone id must be non-empty without whitespace");
            } else if (!repo_.has_zone(zone)) {
                add(sf.id, "ref.zone", "allowed zone '" + zone + "' is not declared");
            }
        }
        for (const auto& task_ref : sf.constraint.applicable_task_refs) {
            bool found = false;
            for (const auto& process : repo_.processes) {
                if (process.find_task(task_ref)) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                add(sf.id, "ref.task",
                    "applicable task '" + task_ref + "' is not declared by any process");
            }
        }
        (void)equipment;
    }

    // ---- processes ----

    void check_processes() {
        check_unique(repo_.processes, [](const Process& p) { return p.id; }, "id.duplicate",
                     "process id");
        for (const auto& process : repo_.processes) {
            check_id(process.id, process.id);
            const Recipe* recipe = repo_.find_recipe(process.recipe_ref);
            if (!recipe) {
                add(process.id, "ref.recipe",
                    "process references unknown recipe '" + process.recipe_ref + "'");
            }
            if (process.steps.empty()) {
                add(process.id, "process.steps_empty", "process has no steps");
            }
            check_unique(process.steps, [](const ProcessStep& s) { return s.id; },
                         "process.step_ids", "process step id");
            check_unique(process.interaction_tasks,
                         [](const InteractionTask& t) { return t.id; }, "process.task_ids",
                         "interaction task id");
            check_unique(process.hazards, [](const Hazard& h) { return h.id; },
                         "process.hazard_ids", "hazard id");

            std::set<std::string> mapped_refs;
            for (const auto& step : process.steps) {
                check_process_step(step, process, recipe);
                if (step.recipe_step_ref && !mapped_refs.insert(*step.recipe_step_ref).second) {
                    add(process.id, "process.recipe_step_refs",
                        "recipe step '" + *step.recipe_step_ref +
                            "' is mapped by more than one process step");
                }
            }
            for (const auto& task : process.interaction_tasks) {
                check_id(task.id, process.id + "/" + task.id);
            }
            for (const auto& hazard : process.hazards) {
                check_hazard(hazard, process);
            }
        }
    }

    void check_process_step(const ProcessStep& step, const Process& process,
                            const Recipe* recipe) {
        const std::string element = process.id + "/" + step.id;
        check_id(step.id, element);
        const EquipmentService* es = repo_.find_equipment_service(step.equipment_service_ref);
        if (!es) {
            add(element, "ref.equipment_service",
                "process step references unknown equipment service '" +
                    step.equipment_service_ref.text() + "'");
        }
        const ServiceDeclaration* service =
            es ? repo_.find_service(es->service_ref) : nullptr;
        for (const auto& [prop_id, value] : step.property_values) {
            const auto* prop = service ? service->find_property(prop_id) : nullptr;
            if (service && !prop) {
                add(element, "property.unknown",
                    "property '" + prop_id + "' does not belong to service '" + service->id +
                        "'");
                continue;
            }
            if (prop) {
                bool numeric_value = std::holds_alternative<double>(value);
                if (numeric_value != (prop->kind == PropertyKind::numeric)) {
                    add(element, "property.kind_mismatch",
                        "value " + describe(value) + " does not match the " +
                            std::string(to_token(prop->kind)) + " kind of property '" + prop_id +
                            "'");
                    continue;
                }
            }
            if (!es) continue;
            auto constraint_it = es->property_constraints.find(prop_id);
            if (constraint_it == es->property_constraints.end()) continue;
            if (!value_in_constraint(value, constraint_it->second)) {
                add(element, "property.outside_constraint",
                    "value " + describe(value) + " for property '" + prop_id +
                        "' lies outside equipment constraint " +
                        describe(constraint_it->second));
            }
        }
        if (step.recipe_step_ref) {
            if (recipe && !recipe->find_step(*step.recipe_step_ref)) {
                add(element, "ref.recipe_step",
                    "mapped recipe step '" + *step.recipe_step_ref +
                        "' does not belong to recipe '" + recipe->id + "'");
            }
        }
    }

    void check_hazard(const Hazard& hazard, const Process& process) {
        const std::string element = process.id + "/" + hazard.id;
        check_id(hazard.id, element);
        if (!process.find_task(hazard.interaction_task_ref)) {
            add(element, "ref.task",
                "hazard references task '" + hazard.interaction_task_ref +
                    "' which does not belong to process '" + process.id + "'");
        }
        if (!repo_.find_equipment(hazard.source_equipment_ref)) {
            add(element, "ref.equipment",
                "hazard references unknown equipment '" + hazard.source_equipment_ref + "'");
        }
        if (!hazard.hazard_type.valid()) {
            add(element, "taxonomy.format", "hazard type path is empty or has empty segments");
        } else if (!repo_.has_hazard_type(hazard.hazard_type)) {
            add(element, "taxonomy.unknown",
                "hazard type '" + hazard.hazard_type.path() +
                    "' is not declared in the taxonomy");
        }
        if (!repo_.has_zone(hazard.zone)) {
            add(element, "ref.zone", "hazard zone '" + hazard.zone + "' is not declared");
        }
    }

    // ---- taxonomy, zones, quantities ----

    void check_taxonomy() {
        check_unique(repo_.hazard_taxonomy, [](const HazardType& t) { return t.path(); },
                     "id.duplicate", "hazard type");
        for (const auto& type : repo_.hazard_taxonomy) {
            if (!type.valid()) {
                add(type.path(), "taxonomy.format",
                    "taxonomy path is empty or has empty segments");
            }
        }
    }

    void check_zones() {
        check_unique(repo_.zones, [](const Zone& z) { return z.id; }, "id.duplicate", "zone id");
        for (const auto& zone : repo_.zones) {
            check_id(zone.id, zone.id);
        }
    }

    // Speed comparisons are unit-blind, so one repository must stick to one unit.
    void check_speed_units() {
        std::set<std::string> units;
        for (const auto& process : repo_.processes) {
            for (const auto& hazard : process.hazards) {
                if (hazard.speed) units.insert(hazard.speed->unit);
            }
        }
        for (const auto& equipment : repo_.equipment) {
            for (const auto& sf : equipment.safety_functions) {
                if (sf.constraint.max_hazard_speed) {
                    units.insert(sf.constraint.max_hazard_speed->unit);
                }
            }
        }
        if (units.size() > 1) {
            std::string list;
            for (const auto& unit : units) {
                if (!list.empty()) list += ", ";
                list += "'" + unit + "'";
            }
            add("model", "quantity.unit_mixed", "speed quantities use mixed units: " + list);
        }
    }

    const ModelRepository& repo_;
    std::vector<Violation> violations_;
};

}  // namespace

void normalize(ModelRepository& repository) {
    sort_by(repository.services, [](const ServiceDeclaration& s) { return s.id; });
    sort_by(repository.recipes, [](const Recipe& r) { return r.id; });
    sort_by(repository.equipment, [](const Equipment& e) { return e.id; });
    sort_by(repository.processes, [](const Process& p) { return p.id; });
    sort_by(repository.hazard_taxonomy, [](const HazardType& t) { return t.segments; });
    sort_by(repository.zones, [](const Zone& z) { return z.id; });

    for (auto& service : repository.services) {
        sort_by(service.failure_modes, [](const FailureModeDeclaration& fm) { return fm.id; });
        for (auto& prop : service.properties) {
            if (prop.global_bounds) {
                if (auto* set = std::get_if<ValueSet>(&*prop.global_bounds)) sort_unique(*set);
            }
        }
    }
    for (auto& equipment : repository.equipment) {
        sort_by(equipment.services, [](const EquipmentService& s) { return s.id; });
        sort_by(equipment.safety_functions, [](const SafetyFunction& f) { return f.id; });
        for (auto& es : equipment.services) {
            sort_by(es.failure_modes,
                    [](const EquipmentFailureMode& fm) { return fm.failure_mode_ref; });
            sort_by(es.quality_coverages, [](const QualityMeasureCoverage& c) {
                return std::make_tuple(c.provider, c.covered_failure_mode_ref, c.mode,
                                       c.detection, c.decreased_occurrence);
            });
            for (auto& [_, constraint] : es.property_constraints) {
                if (auto* set = std::get_if<ValueSet>(&constraint)) sort_unique(*set);
            }
        }
        for (auto& sf : equipment.safety_functions) {
            sort_unique(sf.constraint.allowed_zones);
            sort_unique(sf.constraint.applicable_task_refs);
            std::sort(sf.covered_hazard_types.begin(), sf.covered_hazard_types.end());
            sf.covered_hazard_types.erase(
                std::unique(sf.covered_hazard_types.begin(), sf.covered_hazard_types.end()),
                sf.covered_hazard_types.end());
        }
    }
    for (auto& process : repository.processes) {
        sort_by(process.interaction_tasks, [](const InteractionTask& t) { return t.id; });
        sort_by(process.hazards, [](const Hazard& h) { return h.id; });
    }
}

std::vector<Violation> validate(const ModelRepository& repository) {
    return Checker(repository).run();
}

}  // namespace fabsafe
