#include "fabsafe/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fabsafe/sha256.hpp"
#include "fabsafe/validate.hpp"

namespace fabsafe {

namespace {

using nlohmann::json;

struct ParseContext {
    ParseMode mode;
    std::vector<std::string>* warnings;
};

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ParseError(path + ": " + message);
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& path, ParseContext& ctx) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (known) continue;
        if (ctx.mode == ParseMode::strict) {
            fail(path, "unknown key '" + it.key() + "'");
        }
        ctx.warnings->push_back(path + ": unknown key '" + it.key() + "' ignored");
    }
}

const json& require_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    return j;
}

const json* opt_member(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
}

const json& req_member(const json& obj, const char* key, const std::string& path) {
    const json* member = opt_member(obj, key);
    if (!member) fail(path, "missing required key '" + std::string(key) + "'");
    return *member;
}

std::string req_string(const json& obj, const char* key, const std::string& path) {
    const json& member = req_member(obj, key, path);
    if (!member.is_string()) fail(path + "." + key, "expected a string");
    return member.get<std::string>();
}

std::string opt_string(const json& obj, const char* key, const std::string& path) {
    const json* member = opt_member(obj, key);
    if (!member) return {};
    if (!member->is_string()) fail(path + "." + key, "expected a string");
    return member->get<std::string>();
}

int req_int(const json& obj, const char* key, const std::string& path) {
    const json& member = req_member(obj, key, path);
    if (!member.is_number_integer()) fail(path + "." + key, "expected an integer");
    return member.get<int>();
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

template <typename Fn>
void for_each_element(const json& obj, const char* key, const std::string& path, Fn fn) {
    const json* member = opt_member(obj, key);
    if (!member) return;
    if (!member->is_array()) fail(path + "." + key, "expected an array");
    std::size_t index = 0;
    for (const json& element : *member) {
        fn(element, path + "." + key + "[" + std::to_string(index) + "]");
        ++index;
    }
}

template <typename ParseValue>
auto parse_string_map(const json& obj, const char* key, const std::string& path,
                      ParseValue parse_value) {
    std::map<std::string, decltype(parse_value(json{}, std::string{}))> out;
    const json* member = opt_member(obj, key);
    if (!member) return out;
    if (!member->is_object()) fail(path + "." + key, "expected an object");
    for (auto it = member->begin(); it != member->end(); ++it) {
        out.emplace(it.key(), parse_value(it.value(), path + "." + key + "." + it.key()));
    }
    return out;
}

Interval parse_interval(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        fail(path, "expected a [lo, hi] interval");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

// Array of two numbers -> interval; array of strings -> allowed-value set.
PropertyConstraint parse_constraint(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an interval or an array of allowed values");
    bool all_strings = true;
    for (const json& element : j) {
        if (!element.is_string()) {
            all_strings = false;
            break;
        }
    }
    if (j.empty() || all_strings) {
        ValueSet set;
        for (const json& element : j) set.push_back(element.get<std::string>());
        return set;
    }
    return parse_interval(j, path);
}

PropertyRequirement parse_requirement(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    if (j.is_array()) return parse_interval(j, path);
    fail(path, "expected a number, a string, or a [lo, hi] interval");
}

PropertyValue parse_value(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    fail(path, "expected a number or a string");
}

Quantity parse_quantity(const json& j, const std::string& path, ParseContext& ctx) {
    require_object(j, path);
    check_keys(j, {"value", "unit"}, path, ctx);
    Quantity q;
    q.value = number_at(req_member(j, "value", path), path + ".value");
    q.unit = req_string(j, "unit", path);
    return q;
}

HazardType parse_hazard_type(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a hazard type path string");
    auto type = HazardType::from_path(j.get<std::string>());
    if (!type) fail(path, "hazard type path must have non-empty '/'-separated segments");
    return *type;
}

template <typename Enum, typename Parser>
Enum parse_enum(const json& j, const std::string& path, Parser parser, const char* expected) {
    if (!j.is_string()) fail(path, std::string("expected ") + expected);
    auto value = parser(j.get<std::string>());
    if (!value) fail(path, "'" + j.get<std::string>() + "' is not one of " + expected);
    return *value;
}

EquipmentServiceKey parse_equipment_service_key(const json& j, const std::string& path,
                                                ParseContext& ctx) {
    require_object(j, path);
    check_keys(j, {"equipment", "service"}, path, ctx);
    return {req_string(j, "equipment", path), req_string(j, "service", path)};
}

ServicePropertyDeclaration parse_property(const json& j, const std::string& path,
                                          ParseContext& ctx) {
    require_object(j, path);
    check_keys(j, {"id", "name", "kind", "unit", "global_bounds"}, path, ctx);
    ServicePropertyDeclaration prop;
    prop.id = req_string(j, "id", path);
    prop.name = req_string(j, "name", path);
    prop.kind = parse_enum<PropertyKind>(req_member(j, "kind", path), path + ".kind",
                                         parse_property_kind, "numeric|enumerated|text");
    prop.unit = opt_string(j, "unit", path);
    if (const json* bounds = opt_member(j, "global_bounds")) {
        prop.global_bounds = parse_constraint(*bounds, path + ".global_bounds");
    }
    return prop;
}

ServiceDeclaration parse_service(const json& j, const std::string& path, ParseContext& ctx) {
    require_object(j, path);
    check_keys(j, {"id", "name", "properties", "failure_modes"}, path, ctx);
    ServiceDeclaration service;
    service.id = req_string(j, "id", path);
    service.name = req_string(j, "name", path);
    for_each_element(j, "properties", path, [&](const json& e, const std::string& p) {
        service.properties.push_back(parse_property(e, p, ctx));
    });
    for_each_element(j, "failure_modes", path, [&](const json& e, const std::string& p) {
        require_object(e, p);
        check_keys(e, {"id", "name", "description"}, p, ctx);
        FailureModeDeclaration fm;
        fm.id = req_string(e, "id", p);
        fm.name = req_string(e, "name", p);
        fm.description = req_string(e, "description", p);
        fm.service_ref = service.id;
        service.failure_modes.push_back(std::move(fm));
    });
    return service;
}

RecipeStep parse_recipe_step(const json& j, const std::string& path, ParseContext& ctx) {
    require_object(j, path);
    check_keys(j, {"id", "service", "property_assignments", "failure_mode_severities"}, path, ctx);
    RecipeStep step;
    step.id = req_string(j, "id", path);
    step.service_ref = req_string(j, "service", path);
    step.property_assignments =
        parse_string_map(j, "property_assignments", path, parse_requirement);
    step.failure_mode_severities =
        parse_string_map(j, "failure_mode_severities", path, [](const json& e, const std::string& p) {
            if (!e.is_number_integer()) fail(p, "expected an integer severity");
            return e.get<int>();
        });
    return step;
}

Recipe parse_recipe(const json& j, const std::string& path, ParseContext& ctx) {
    require_object(j, path);
    check_keys(j, {"id", "name", "steps", "safety_requirement"}, path, ctx);
    Recipe recipe;
    recipe.id = req_string(j, "id", path);
    recipe.name = req_string(j, "name", path);
    for_each_element(j, "steps", path, [&](const json& e, const std::string& p) {
        recipe.steps.push_back(parse_recipe_step(e, p, ctx));
    });
    if (const json* req = opt_member(j, "safety_requirement")) {
        const std::string p = path + ".safety_requirement";
        require_object(*req, p);
        check_keys(*req, {"minimum_performance_level"}, p, ctx);
        ProcessSafetyRequirement psr;
        psr.minimum_performance_level =
            parse_enum<PerformanceLevel>(req_member(*req, "minimum_performance_level", p),
                                         p + ".minimum_performance_level",
                                         parse_performance_level, "a|b|c|d|e");
        recipe.safety_requirement = psr;
    }
    return recipe;
}

QualityMeasureCoverage parse_coverage(const json& j, const std::string& path, ParseContext& ctx) {
    require_object(j, path);
    check_keys(j, {"provider", "covered_failure_mode", "decreased_occurrence", "detection", "mode"},
               path, ctx);
    QualityMeasureCoverage coverage;
    coverage.provider =
        parse_equipment_service_key(req_member(j, "provider", path), path + ".provider", ctx);
    coverage.covered_failure_mode_ref = req_string(j, "covered_failure_mode", path);
    if (opt_member(j, "decreased_occurrence")) {
        coverage.decreased_occurrence = req_int(j, "decreased_occurrence", path);
    }
    coverage.detection = req_int(j, "detection", path);
    coverage.mode = parse_enum<CoverageMode>(req_member(j, "mode", path), path + ".mode",
                                             parse_coverage_mode,
                                             "downstream-step|inline-supervision");
    return coverage;
}

EquipmentService parse_equipment_service(const json& j, const std::string& path,
                                         ParseContext& ctx) {
    require_object(j, path);
    check_keys(j, {"id", "service", "property_constraints", "failure_modes", "quality_coverages"},
               path, ctx);
    EquipmentService es;
    es.id = req_string(j, "id", path);
    es.service_ref = req_string(j, "service", path);
    es.property_constraints = parse_string_map(j, "property_constraints", path, parse_constraint);
    for_each_element(j, "failure_modes", path, [&](const json& e, const std::string& p) {
        require_object(e, p);
        check_keys(e, {"failure_mode", "occurrence"}, p, ctx);
        EquipmentFailureMode efm;
        efm.failure_mode_ref = req_string(e, "failure_mode", p);
        efm.occurrence = req_int(e, "occurrence", p);
        es.failure_modes.push_back(std::move(efm));
    });
    for_each_element(j, "quality_coverages", path, [&](const json& e, const std::string& p) {
        es.quality_coverages.push_back(parse_coverage(e, p, ctx));
    });
    return es;
}

SafetyFunction parse_safety_function(const json& j, const std::string& path, ParseContext& ctx) {
    require_object(j, path);
    check_keys(j, {"id", "name", "performance_level", "covered_hazard_types", "constraint"}, path,
               ctx);
    SafetyFunction sf;
    sf.id = req_string(j, "id", path);
    sf.name = req_string(j, "name", path);
    sf.performance_level =
        parse_enum<PerformanceLevel>(req_member(j, "performance_level", path),
                                     path + ".performance_level", parse_performance_level,
                                     "a|b|c|d|e");
    for_each_element(j, "covered_hazard_types", path, [&](const json& e, const std::string& p) {
        sf.covered_hazard_types.push_back(parse_hazard_type(e, p));
    });
    const json& constraint = req_member(j, "constraint", path);
    const std::string cpath = path + ".constraint";
    require_object(constraint, cpath);
    check_keys(constraint, {"allowed_zones", "applicable_tasks", "max_hazard_speed"}, cpath, ctx);
    for_each_element(constraint, "allowed_zones", cpath, [&](const json& e, const std::string& p) {
        if (!e.is_string()) fail(p, "expected a zone id string");
        sf.constraint.allowed_zones.push_back(e.get<std::string>());
    });
    for_each_element(constraint, "applicable_tasks", cpath,
                     [&](const json& e, const std::string& p) {
                         if (!e.is_string()) fail(p, "expected a task id string");
                         sf.constraint.applicable_task_refs.push_back(e.get<std::string>());
                     });
    if (const json* speed = opt_member(constraint, "max_hazard_speed")) {
        sf.constraint.max_hazard_speed =
            parse_quantity(*speed, cpath + ".max_hazard_speed", ctx);
    }
    return sf;
}

Equipment parse_equipment(const json& j, const std::string& path, ParseContext& ctx) {
    require_object(j, path);
    check_keys(j, {"id", "name", "services", "safety_functions"}, path, ctx);
    Equipment equipment;
    equipment.id = req_string(j, "id", path);
    equipment.name = req_string(j, "name", path);
    for_each_element(j, "services", path, [&](const json& e, const std::string& p) {
        equipment.services.push_back(parse_equipment_service(e, p, ctx));
    });
    for_each_element(j, "safety_functions", path, [&](const json& e, const std::string& p) {
        equipment.safety_functions.push_back(parse_safety_function(e, p, ctx));
    });
    return equipment;
}

ProcessStep parse_process_step(const json& j, const std::string& path, ParseContext& ctx) {
    require_object(j, path);
    check_keys(j, {"id", "equipment_service", "property_values", "recipe_step"}, path, ctx);
    ProcessStep step;
    step.id = req_string(j, "id", path);
    step.equipment_service_ref = parse_equipment_service_key(
        req_member(j, "equipment_service", path), path + ".equipment_service", ctx);
    step.property_values = parse_string_map(j, "property_values", path, parse_value);
    if (opt_member(j, "recipe_step")) {
        step.recipe_step_ref = req_string(j, "recipe_step", path);
    }
    return step;
}

InteractionTask parse_task(const json& j, const std::string& path, ParseContext& ctx) {
    require_object(j, path);
    check_keys(j, {"id", "description", "frequency", "lifecycle_phase"}, path, ctx);
    InteractionTask task;
    task.id = req_string(j, "id", path);
    task.description = req_string(j, "description", path);
    task.frequency = parse_enum<TaskFrequency>(req_member(j, "frequency", path),
                                               path + ".frequency", parse_task_frequency,
                                               "f1|f2");
    task.lifecycle_phase =
        parse_enum<LifecyclePhase>(req_member(j, "lifecycle_phase", path),
                                   path + ".lifecycle_phase", parse_lifecycle_phase,
                                   "setup|production|maintenance");
    return task;
}

Hazard parse_hazard(const json& j, const std::string& path, ParseContext& ctx) {
    require_object(j, path);
    check_keys(j,
               {"id", "interaction_task", "source_equipment", "hazard_type", "severity",
                "avoidance", "zone", "speed"},
               path, ctx);
    Hazard hazard;
    hazard.id = req_string(j, "id", path);
    hazard.interaction_task_ref = req_string(j, "interaction_task", path);
    hazard.source_equipment_ref = req_string(j, "source_equipment", path);
    hazard.hazard_type = parse_hazard_type(req_member(j, "hazard_type", path), path + ".hazard_type");
    hazard.severity = parse_enum<HazardSeverity>(req_member(j, "severity", path),
                                                 path + ".severity", parse_hazard_severity,
                                                 "s1|s2");
    hazard.avoidance = parse_enum<HazardAvoidance>(req_member(j, "avoidance", path),
                                                   path + ".avoidance", parse_hazard_avoidance,
                                                   "p1|p2");
    hazard.zone = req_string(j, "zone", path);
    if (const json* speed = opt_member(j, "speed")) {
        hazard.speed = parse_quantity(*speed, path + ".speed", ctx);
    }
    return hazard;
}

Process parse_process(const json& j, const std::string& path, ParseContext& ctx) {
    require_object(j, path);
    check_keys(j, {"id", "recipe", "steps", "interaction_tasks", "hazards"}, path, ctx);
    Process process;
    process.id = req_string(j, "id", path);
    process.recipe_ref = req_string(j, "recipe", path);
    for_each_element(j, "steps", path, [&](const json& e, const std::string& p) {
        process.steps.push_back(parse_process_step(e, p, ctx));
    });
    for_each_element(j, "interaction_tasks", path, [&](const json& e, const std::string& p) {
        process.interaction_tasks.push_back(parse_task(e, p, ctx));
    });
    for_each_element(j, "hazards", path, [&](const json& e, const std::string& p) {
        process.hazards.push_back(parse_hazard(e, p, ctx));
    });
    return process;
}

ModelRepository parse_repository(const json& doc, ParseContext& ctx) {
    require_object(doc, "$");
    check_keys(doc,
               {"notes", "services", "recipes", "equipment", "processes", "hazard_taxonomy",
                "zones"},
               "$", ctx);
    ModelRepository repo;
    for_each_element(doc, "notes", "$", [&](const json& e, const std::string& p) {
        if (!e.is_string()) fail(p, "expected a string");
        repo.notes.push_back(e.get<std::string>());
    });
    for_each_element(doc, "services", "$", [&](const json& e, const std::string& p) {
        repo.services.push_back(parse_service(e, p, ctx));
    });
    for_each_element(doc, "recipes", "$", [&](const json& e, const std::string& p) {
        repo.recipes.push_back(parse_recipe(e, p, ctx));
    });
    for_each_element(doc, "equipment", "$", [&](const json& e, const std::string& p) {
        repo.equipment.push_back(parse_equipment(e, p, ctx));
    });
    for_each_element(doc, "processes", "$", [&](const json& e, const std::string& p) {
        repo.processes.push_back(parse_process(e, p, ctx));
    });
    if (opt_member(doc, "hazard_taxonomy")) {
        for_each_element(doc, "hazard_taxonomy", "$", [&](const json& e, const std::string& p) {
            require_object(e, p);
            check_keys(e, {"id"}, p, ctx);
            repo.hazard_taxonomy.push_back(
                parse_hazard_type(req_member(e, "id", p), p + ".id"));
        });
    } else {
        repo.hazard_taxonomy = default_hazard_taxonomy();
    }
    for_each_element(doc, "zones", "$", [&](const json& e, const std::string& p) {
        require_object(e, p);
        check_keys(e, {"id", "name"}, p, ctx);
        Zone zone;
        zone.id = req_string(e, "id", p);
        zone.name = opt_string(e, "name", p);
        repo.zones.push_back(std::move(zone));
    });
    return repo;
}

// ---- rendering ----

json render_constraint(const PropertyConstraint& constraint) {
    if (const auto* interval = std::get_if<Interval>(&constraint)) {
        return json::array({interval->lo, interval->hi});
    }
    json out = json::array();
    for (const auto& value : std::get<ValueSet>(constraint)) out.push_back(value);
    return out;
}

json render_requirement(const PropertyRequirement& requirement) {
    if (const auto* num = std::get_if<double>(&requirement)) return *num;
    if (const auto* interval = std::get_if<Interval>(&requirement)) {
        return json::array({interval->lo, interval->hi});
    }
    return std::get<std::string>(requirement);
}

json render_value(const PropertyValue& value) {
    if (const auto* num = std::get_if<double>(&value)) return *num;
    return std::get<std::string>(value);
}

json render_quantity(const Quantity& q) {
    return json{{"value", q.value}, {"unit", q.unit}};
}

json render_key(const EquipmentServiceKey& key) {
    return json{{"equipment", key.equipment_id}, {"service", key.service_id}};
}

json render_service(const ServiceDeclaration& service) {
    json properties = json::array();
    for (const auto& prop : service.properties) {
        json p{{"id", prop.id}, {"name", prop.name}, {"kind", std::string(to_token(prop.kind))}};
        if (!prop.unit.empty()) p["unit"] = prop.unit;
        if (prop.global_bounds) p["global_bounds"] = render_constraint(*prop.global_bounds);
        properties.push_back(std::move(p));
    }
    json failure_modes = json::array();
    for (const auto& fm : service.failure_modes) {
        failure_modes.push_back(
            json{{"id", fm.id}, {"name", fm.name}, {"description", fm.description}});
    }
    return json{{"id", service.id},
                {"name", service.name},
                {"properties", std::move(properties)},
                {"failure_modes", std::move(failure_modes)}};
}

json render_recipe(const Recipe& recipe) {
    json steps = json::array();
    for (const auto& step : recipe.steps) {
        json assignments = json::object();
        for (const auto& [prop_id, requirement] : step.property_assignments) {
            assignments[prop_id] = render_requirement(requirement);
        }
        json severities = json::object();
        for (const auto& [fm_id, severity] : step.failure_mode_severities) {
            severities[fm_id] = severity;
        }
        steps.push_back(json{{"id", step.id},
                             {"service", step.service_ref},
                             {"property_assignments", std::move(assignments)},
                             {"failure_mode_severities", std::move(severities)}});
    }
    json out{{"id", recipe.id}, {"name", recipe.name}, {"steps", std::move(steps)}};
    if (recipe.safety_requirement) {
        out["safety_requirement"] = json{
            {"minimum_performance_level",
             std::string(to_token(recipe.safety_requirement->minimum_performance_level))}};
    }
    return out;
}

json render_equipment(const Equipment& equipment) {
    json services = json::array();
    for (const auto& es : equipment.services) {
        json constraints = json::object();
        for (const auto& [prop_id, constraint] : es.property_constraints) {
            constraints[prop_id] = render_constraint(constraint);
        }
        json failure_modes = json::array();
        for (const auto& efm : es.failure_modes) {
            failure_modes.push_back(
                json{{"failure_mode", efm.failure_mode_ref}, {"occurrence", efm.occurrence}});
        }
        json coverages = json::array();
        for (const auto& coverage : es.quality_coverages) {
            json c{{"provider", render_key(coverage.provider)},
                   {"covered_failure_mode", coverage.covered_failure_mode_ref},
                   {"detection", coverage.detection},
                   {"mode", std::string(to_token(coverage.mode))}};
            if (coverage.decreased_occurrence) {
                c["decreased_occurrence"] = *coverage.decreased_occurrence;
            }
            coverages.push_back(std::move(c));
        }
        services.push_back(json{{"id", es.id},
                                {"service", es.service_ref},
                                {"property_constraints", std::move(constraints)},
                                {"failure_modes", std::move(failure_modes)},
                                {"quality_coverages", std::move(coverages)}});
    }
    json functions = json::array();
    for (const auto& sf : equipment.safety_functions) {
        json types = json::array();
        for (const auto& type : sf.covered_hazard_types) types.push_back(type.path());
        json constraint{{"allowed_zones", sf.constraint.allowed_zones}};
        if (!sf.constraint.applicable_task_refs.empty()) {
            constraint["applicable_tasks"] = sf.constraint.applicable_task_refs;
        }
        if (sf.constraint.max_hazard_speed) {
            constraint["max_hazard_speed"] = render_quantity(*sf.constraint.max_hazard_speed);
        }
        functions.push_back(json{{"id", sf.id},
                                 {"name", sf.name},
                                 {"performance_level", std::string(to_token(sf.performance_level))},
                                 {"covered_hazard_types", std::move(types)},
                                 {"constraint", std::move(constraint)}});
    }
    return json{{"id", equipment.id},
                {"name", equipment.name},
                {"services", std::move(services)},
                {"safety_functions", std::move(functions)}};
}

json render_process(const Process& process) {
    json steps = json::array();
    for (const auto& step : process.steps) {
        json values = json::object();
        for (const auto& [prop_id, value] : step.property_values) {
            values[prop_id] = render_value(value);
        }
        json s{{"id", step.id},
               {"equipment_service", render_key(step.equipment_service_ref)},
               {"property_values", std::move(values)}};
        if (step.recipe_step_ref) s["recipe_step"] = *step.recipe_step_ref;
        steps.push_back(std::move(s));
    }
    json tasks = json::array();
    for (const auto& task : process.interaction_tasks) {
        tasks.push_back(json{{"id", task.id},
                             {"description", task.description},
                             {"frequency", std::string(to_token(task.frequency))},
                             {"lifecycle_phase", std::string(to_token(task.lifecycle_phase))}});
    }
    json hazards = json::array();
    for (const auto& hazard : process.hazards) {
        json h{{"id", hazard.id},
               {"interaction_task", hazard.interaction_task_ref},
               {"source_equipment", hazard.source_equipment_ref},
               {"hazard_type", hazard.hazard_type.path()},
               {"severity", std::string(to_token(hazard.severity))},
               {"avoidance", std::string(to_token(hazard.avoidance))},
               {"zone", hazard.zone}};
        if (hazard.speed) h["speed"] = render_quantity(*hazard.speed);
        hazards.push_back(std::move(h));
    }
    return json{{"id", process.id},
                {"recipe", process.recipe_ref},
                {"steps", std::move(steps)},
                {"interaction_tasks", std::move(tasks)},
                {"hazards", std::move(hazards)}};
}

}  // namespace

LoadResult parse_model(const std::string& document, ParseMode mode) {
    LoadResult result;
    ParseContext ctx{mode, &result.warnings};
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("syntax error: ") + e.what());
    }
    ModelRepository repo = parse_repository(doc, ctx);
    normalize(repo);
    result.violations = validate(repo);
    if (result.violations.empty()) {
        result.repository = std::move(repo);
    }
    return result;
}

LoadResult parse_model_file(const std::filesystem::path& path, ParseMode mode) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open model file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str(), mode);
}

std::string render_model(const ModelRepository& repository) {
    json doc;
    if (!repository.notes.empty()) doc["notes"] = repository.notes;
    json services = json::array();
    for (const auto& service : repository.services) services.push_back(render_service(service));
    json recipes = json::array();
    for (const auto& recipe : repository.recipes) recipes.push_back(render_recipe(recipe));
    json equipment = json::array();
    for (const auto& eq : repository.equipment) equipment.push_back(render_equipment(eq));
    json processes = json::array();
    for (const auto& process : repository.processes) processes.push_back(render_process(process));
    json taxonomy = json::array();
    for (const auto& type : repository.hazard_taxonomy) {
        taxonomy.push_back(json{{"id", type.path()}});
    }
    json zones = json::array();
    for (const auto& zone : repository.zones) {
        json z{{"id", zone.id}};
        if (!zone.name.empty()) z["name"] = zone.name;
        zones.push_back(std::move(z));
    }
    doc["services"] = std::move(services);
    doc["recipes"] = std::move(recipes);
    doc["equipment"] = std::move(equipment);
    doc["processes"] = std::move(processes);
    doc["hazard_taxonomy"] = std::move(taxonomy);
    doc["zones"] = std::move(zones);
    return doc.dump(2) + "\n";
}

std::string model_digest(const ModelRepository& repository) {
    return sha256_hex(render_model(repository));
}

}  // namespace fabsafe
