#include "fabsafe/model.hpp"

#include <algorithm>
#include <sstream>

namespace fabsafe {

namespace {

std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

template <typename Collection>
auto* find_by_id(Collection& items, std::string_view id) {
    for (auto& item : items) {
        if (item.id == id) return &item;
    }
    using Element = decltype(&items.front());
    return static_cast<Element>(nullptr);
}

}  // namespace

std::string_view to_token(PropertyKind k) {
    switch (k) {
        case PropertyKind::numeric: return "numeric";
        case PropertyKind::enumerated: return "enumerated";
        case PropertyKind::text: return "text";
    }
    return "numeric";
}

std::string_view to_token(PerformanceLevel pl) {
    switch (pl) {
        case PerformanceLevel::a: return "a";
        case PerformanceLevel::b: return "b";
        case PerformanceLevel::c: return "c";
        case PerformanceLevel::d: return "d";
        case PerformanceLevel::e: return "e";
    }
    return "a";
}

std::string_view to_token(CoverageMode m) {
    return m == CoverageMode::downstream_step ? "downstream-step" : "inline-supervision";
}

std::string_view to_token(TaskFrequency f) {
    return f == TaskFrequency::f1 ? "f1" : "f2";
}

std::string_view to_token(LifecyclePhase p) {
    switch (p) {
        case LifecyclePhase::setup: return "setup";
        case LifecyclePhase::production: return "production";
        case LifecyclePhase::maintenance: return "maintenance";
    }
    return "production";
}

std::string_view to_token(HazardSeverity s) {
    return s == HazardSeverity::s1 ? "s1" : "s2";
}

std::string_view to_token(HazardAvoidance a) {
    return a == HazardAvoidance::p1 ? "p1" : "p2";
}

std::optional<PropertyKind> parse_property_kind(std::string_view token) {
    if (token == "numeric") return PropertyKind::numeric;
    if (token == "enumerated") return PropertyKind::enumerated;
    if (token == "text") return PropertyKind::text;
    return std::nullopt;
}

std::optional<PerformanceLevel> parse_performance_level(std::string_view token) {
    if (token == "a") return PerformanceLevel::a;
    if (token == "b") return PerformanceLevel::b;
    if (token == "c") return PerformanceLevel::c;
    if (token == "d") return PerformanceLevel::d;
    if (token == "e") return PerformanceLevel::e;
    return std::nullopt;
}

std::optional<CoverageMode> parse_coverage_mode(std::string_view token) {
    if (token == "downstream-step") return CoverageMode::downstream_step;
    if (token == "inline-supervision") return CoverageMode::inline_supervision;
    return std::nullopt;
}

std::optional<TaskFrequency> parse_task_frequency(std::string_view token) {
    if (token == "f1") return TaskFrequency::f1;
    if (token == "f2") return TaskFrequency::f2;
    return std::nullopt;
}

std::optional<LifecyclePhase> parse_lifecycle_phase(std::string_view token) {
    if (token == "setup") return LifecyclePhase::setup;
    if (token == "production") return LifecyclePhase::production;
    if (token == "maintenance") return LifecyclePhase::maintenance;
    return std::nullopt;
}

std::optional<HazardSeverity> parse_hazard_severity(std::string_view token) {
    if (token == "s1") return HazardSeverity::s1;
    if (token == "s2") return HazardSeverity::s2;
    return std::nullopt;
}

std::optional<HazardAvoidance> parse_hazard_avoidance(std::string_view token) {
    if (token == "p1") return HazardAvoidance::p1;
    if (token == "p2") return HazardAvoidance::p2;
    return std::nullopt;
}

std::string describe(const PropertyValue& v) {
    if (const auto* num = std::get_if<double>(&v)) return format_number(*num);
    return "\"" + std::get<std::string>(v) + "\"";
}

std::string describe(const PropertyRequirement& r) {
    if (const auto* num = std::get_if<double>(&r)) return format_number(*num);
    if (const auto* iv = std::get_if<Interval>(&r)) {
        return "[" + format_number(iv->lo) + ", " + format_number(iv->hi) + "]";
    }
    return "\"" + std::get<std::string>(r) + "\"";
}

std::string describe(const PropertyConstraint& c) {
    if (const auto* iv = std::get_if<Interval>(&c)) {
        return "[" + format_number(iv->lo) + ", " + format_number(iv->hi) + "]";
    }
    const auto& set = std::get<ValueSet>(c);
    std::string out = "{";
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i) out += ", ";
        out += "\"" + set[i] + "\"";
    }
    return out + "}";
}

bool value_in_constraint(const PropertyValue& value, const PropertyConstraint& constraint) {
    if (const auto* num = std::get_if<double>(&value)) {
        const auto* interval = std::get_if<Interval>(&constraint);
        return interval && interval->contains(*num);
    }
    const auto* set = std::get_if<ValueSet>(&constraint);
    return set && std::binary_search(set->begin(), set->end(), std::get<std::string>(value));
}

std::string HazardType::path() const {
    std::string out;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (i) out += "/";
        out += segments[i];
    }
    return out;
}

bool HazardType::valid() const {
    if (segments.empty()) return false;
    return std::none_of(segments.begin(), segments.end(),
                        [](const std::string& s) { return s.empty(); });
}

std::optional<HazardType> HazardType::from_path(std::string_view path) {
    HazardType type;
    std::size_t start = 0;
    while (start <= path.size()) {
        std::size_t slash = path.find('/', start);
        if (slash == std::string_view::npos) {
            type.segments.emplace_back(path.substr(start));
            break;
        }
        type.segments.emplace_back(path.substr(start, slash - start));
        start = slash + 1;
    }
    if (!type.valid()) return std::nullopt;
    return type;
}

const ServicePropertyDeclaration* ServiceDeclaration::find_property(std::string_view property_id) const {
    return find_by_id(properties, property_id);
}

const FailureModeDeclaration* ServiceDeclaration::find_failure_mode(std::string_view failure_mode_id) const {
    return find_by_id(failure_modes, failure_mode_id);
}

const RecipeStep* Recipe::find_step(std::string_view step_id) const {
    return find_by_id(steps, step_id);
}

const EquipmentFailureMode* EquipmentService::find_failure_mode(std::string_view failure_mode_id) const {
    for (const auto& fm : failure_modes) {
        if (fm.failure_mode_ref == failure_mode_id) return &fm;
    }
    return nullptr;
}

const EquipmentService* Equipment::find_service(std::string_view service_id) const {
    return find_by_id(services, service_id);
}

const ProcessStep* Process::find_step(std::string_view step_id) const {
    return find_by_id(steps, step_id);
}

const InteractionTask* Process::find_task(std::string_view task_id) const {
    return find_by_id(interaction_tasks, task_id);
}

std::optional<std::size_t> Process::step_position(std::string_view step_id) const {
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (steps[i].id == step_id) return i;
    }
    return std::nullopt;
}

const ServiceDeclaration* ModelRepository::find_service(std::string_view id) const {
    return find_by_id(services, id);
}

const Recipe* ModelRepository::find_recipe(std::string_view id) const {
    return find_by_id(recipes, id);
}

const Equipment* ModelRepository::find_equipment(std::string_view id) const {
    return find_by_id(equipment, id);
}

const Process* ModelRepository::find_process(std::string_view id) const {
    return find_by_id(processes, id);
}

const EquipmentService* ModelRepository::find_equipment_service(const EquipmentServiceKey& key) const {
    const Equipment* eq = find_equipment(key.equipment_id);
    if (!eq) return nullptr;
    return eq->find_service(key.service_id);
}

const FailureModeDeclaration* ModelRepository::find_failure_mode(std::string_view id) const {
    for (const auto& service : services) {
        if (const auto* fm = service.find_failure_mode(id)) return fm;
    }
    return nullptr;
}

bool ModelRepository::has_zone(std::string_view zone_id) const {
    return find_by_id(zones, zone_id) != nullptr;
}

bool ModelRepository::has_hazard_type(const HazardType& type) const {
    return std::find(hazard_taxonomy.begin(), hazard_taxonomy.end(), type) != hazard_taxonomy.end();
}

std::vector<HazardType> default_hazard_taxonomy() {
    return {
        {{"mechanical", "shearing"}},
        {{"mechanical", "squeezing"}},
        {{"mechanical", "bruising"}},
        {{"mechanical", "crushing"}},
    };
}

}  // namespace fabsafe
