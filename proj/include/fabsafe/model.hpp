#pragma once

// Core domain model: abstract service declarations, product recipes,
// production equipment with quality coverages and safety functions, and
// concrete processes with interaction tasks and hazards. A ModelRepository
// holds one snapshot of all declarations; after successful validation it is
// treated as immutable and may be read concurrently.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

namespace fabsafe {

// Thrown when evaluation hits a reference or precondition that a validated
// repository cannot contain (dangling id, mismatched recipe/process pair).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class PropertyKind { numeric, enumerated, text };
enum class PerformanceLevel { a, b, c, d, e };  // total order, e most demanding
enum class CoverageMode { downstream_step, inline_supervision };
enum class TaskFrequency { f1, f2 };  // f2 = high frequent, f1 = low frequent
enum class LifecyclePhase { setup, production, maintenance };
enum class HazardSeverity { s1, s2 };
enum class HazardAvoidance { p1, p2 };

// Lowercase wire tokens ("numeric", "d", "f2", ...) used by the model format.
std::string_view to_token(PropertyKind k);
std::string_view to_token(PerformanceLevel pl);
std::string_view to_token(CoverageMode m);
std::string_view to_token(TaskFrequency f);
std::string_view to_token(LifecyclePhase p);
std::string_view to_token(HazardSeverity s);
std::string_view to_token(HazardAvoidance a);

std::optional<PropertyKind> parse_property_kind(std::string_view token);
std::optional<PerformanceLevel> parse_performance_level(std::string_view token);
std::optional<CoverageMode> parse_coverage_mode(std::string_view token);
std::optional<TaskFrequency> parse_task_frequency(std::string_view token);
std::optional<LifecyclePhase> parse_lifecycle_phase(std::string_view token);
std::optional<HazardSeverity> parse_hazard_severity(std::string_view token);
std::optional<HazardAvoidance> parse_hazard_avoidance(std::string_view token);

// Closed numeric interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool valid() const { return lo <= hi; }
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

// Canonical form: sorted, duplicates removed.
using ValueSet = std::vector<std::string>;

using PropertyValue = std::variant<double, std::string>;
using PropertyRequirement = std::variant<double, Interval, std::string>;
using PropertyConstraint = std::variant<Interval, ValueSet>;

std::string describe(const PropertyValue& v);
std::string describe(const PropertyRequirement& r);
std::string describe(const PropertyConstraint& c);

// Membership of a concrete value in an equipment constraint. Numeric values
// belong in intervals, text values in allowed-value sets; a type mismatch is
// simply "not contained".
bool value_in_constraint(const PropertyValue& value, const PropertyConstraint& constraint);

struct Quantity {
    double value = 0.0;
    std::string unit;

    friend bool operator==(const Quantity&, const Quantity&) = default;
};

// Slash-separated taxonomy path, e.g. "mechanical/shearing".
struct HazardType {
    std::vector<std::string> segments;

    std::string path() const;
    bool valid() const;
    static std::optional<HazardType> from_path(std::string_view path);

    friend bool operator==(const HazardType&, const HazardType&) = default;
    friend bool operator<(const HazardType& a, const HazardType& b) { return a.segments < b.segments; }
};

struct ServicePropertyDeclaration {
    std::string id;
    std::string name;
    PropertyKind kind = PropertyKind::numeric;
    std::string unit;  // required for numeric properties
    std::optional<PropertyConstraint> global_bounds;

    friend bool operator==(const ServicePropertyDeclaration&, const ServicePropertyDeclaration&) = default;
};

struct FailureModeDeclaration {
    std::string id;  // unique across the whole repository
    std::string name;
    std::string description;
    std::string service_ref;  // owning service, filled in while loading

    friend bool operator==(const FailureModeDeclaration&, const FailureModeDeclaration&) = default;
};

struct ServiceDeclaration {
    std::string id;
    std::string name;
    std::vector<ServicePropertyDeclaration> properties;  // declaration order
    std::vector<FailureModeDeclaration> failure_modes;

    const ServicePropertyDeclaration* find_property(std::string_view property_id) const;
    const FailureModeDeclaration* find_failure_mode(std::string_view failure_mode_id) const;

    friend bool operator==(const ServiceDeclaration&, const ServiceDeclaration&) = default;
};

struct RecipeStep {
    std::string id;
    std::string service_ref;
    std::map<std::string, PropertyRequirement> property_assignments;
    std::map<std::string, int> failure_mode_severities;  // failure mode id -> 1..5

    friend bool operator==(const RecipeStep&, const RecipeStep&) = default;
};

struct ProcessSafetyRequirement {
    PerformanceLevel minimum_performance_level = PerformanceLevel::a;

    friend bool operator==(const ProcessSafetyRequirement&, const ProcessSafetyRequirement&) = default;
};

struct Recipe {
    std::string id;
    std::string name;
    std::vector<RecipeStep> steps;  // production order
    std::optional<ProcessSafetyRequirement> safety_requirement;

    const RecipeStep* find_step(std::string_view step_id) const;

    friend bool operator==(const Recipe&, const Recipe&) = default;
};

// Qualified reference to a service of a concrete equipment. Equipment-service
// ids are only unique within their equipment, so references carry both parts.
struct EquipmentServiceKey {
    std::string equipment_id;
    std::string service_id;

    std::string text() const { return equipment_id + "/" + service_id; }

    friend bool operator==(const EquipmentServiceKey&, const EquipmentServiceKey&) = default;
    friend bool operator<(const EquipmentServiceKey& a, const EquipmentServiceKey& b) {
        return std::tie(a.equipment_id, a.service_id) < std::tie(b.equipment_id, b.service_id);
    }
};

struct EquipmentFailureMode {
    std::string failure_mode_ref;
    int occurrence = 1;  // 1..5

    friend bool operator==(const EquipmentFailureMode&, const EquipmentFailureMode&) = default;
};

struct QualityMeasureCoverage {
    EquipmentServiceKey provider;
    std::string covered_failure_mode_ref;
    std::optional<int> decreased_occurrence;  // 1..5; clamped against the base at evaluation time
    int detection = 5;                        // 1..5
    CoverageMode mode = CoverageMode::downstream_step;

    friend bool operator==(const QualityMeasureCoverage&, const QualityMeasureCoverage&) = default;
};

struct EquipmentService {
    std::string id;  // unique within its equipment
    std::string service_ref;
    std::map<std::string, PropertyConstraint> property_constraints;
    std::vector<EquipmentFailureMode> failure_modes;
    std::vector<QualityMeasureCoverage> quality_coverages;

    const EquipmentFailureMode* find_failure_mode(std::string_view failure_mode_id) const;

    friend bool operator==(const EquipmentService&, const EquipmentService&) = default;
};

struct SafetyConstraint {
    std::vector<std::string> allowed_zones;         // named zones, no geometry
    std::vector<std::string> applicable_task_refs;  // empty = applies to all tasks
    std::optional<Quantity> max_hazard_speed;

    friend bool operator==(const SafetyConstraint&, const SafetyConstraint&) = default;
};

struct SafetyFunction {
    std::string id;  // unique across the repository; reports reference it bare
    std::string name;
    PerformanceLevel performance_level = PerformanceLevel::a;
    std::vector<HazardType> covered_hazard_types;
    SafetyConstraint constraint;

    friend bool operator==(const SafetyFunction&, const SafetyFunction&) = default;
};

struct Equipment {
    std::string id;
    std::string name;
    std::vector<EquipmentService> services;
    std::vector<SafetyFunction> safety_functions;

    const EquipmentService* find_service(std::string_view service_id) const;

    friend bool operator==(const Equipment&, const Equipment&) = default;
};

struct InteractionTask {
    std::string id;  // unique within its process
    std::string description;
    TaskFrequency frequency = TaskFrequency::f1;
    LifecyclePhase lifecycle_phase = LifecyclePhase::production;

    friend bool operator==(const InteractionTask&, const InteractionTask&) = default;
};

struct Hazard {
    std::string id;  // unique within its process
    std::string interaction_task_ref;
    std::string source_equipment_ref;
    HazardType hazard_type;
    HazardSeverity severity = HazardSeverity::s1;
    HazardAvoidance avoidance = HazardAvoidance::p1;
    std::string zone;
    std::optional<Quantity> speed;

    friend bool operator==(const Hazard&, const Hazard&) = default;
};

struct ProcessStep {
    std::string id;  // unique within its process
    EquipmentServiceKey equipment_service_ref;
    std::map<std::string, PropertyValue> property_values;
    std::optional<std::string> recipe_step_ref;  // absent for additional steps

    friend bool operator==(const ProcessStep&, const ProcessStep&) = default;
};

struct Process {
    std::string id;
    std::string recipe_ref;
    std::vector<ProcessStep> steps;  // execution order
    std::vector<InteractionTask> interaction_tasks;
    std::vector<Hazard> hazards;

    const ProcessStep* find_step(std::string_view step_id) const;
    const InteractionTask* find_task(std::string_view task_id) const;
    std::optional<std::size_t> step_position(std::string_view step_id) const;

    friend bool operator==(const Process&, const Process&) = default;
};

struct Zone {
    std::string id;
    std::string name;

    friend bool operator==(const Zone&, const Zone&) = default;
};

struct ModelRepository {
    std::vector<std::string> notes;  // free-text documentation carried with the model
    std::vector<ServiceDeclaration> services;
    std::vector<Recipe> recipes;
    std::vector<Equipment> equipment;
    std::vector<Process> processes;
    std::vector<HazardType> hazard_taxonomy;
    std::vector<Zone> zones;

    const ServiceDeclaration* find_service(std::string_view id) const;
    const Recipe* find_recipe(std::string_view id) const;
    const Equipment* find_equipment(std::string_view id) const;
    const Process* find_process(std::string_view id) const;
    const EquipmentService* find_equipment_service(const EquipmentServiceKey& key) const;
    // Failure mode ids are repository-unique; looks across all services.
    const FailureModeDeclaration* find_failure_mode(std::string_view id) const;
    bool has_zone(std::string_view zone_id) const;
    bool has_hazard_type(const HazardType& type) const;

    friend bool operator==(const ModelRepository&, const ModelRepository&) = default;
};

// Taxonomy used when a model document declares none.
std::vector<HazardType> default_hazard_taxonomy();

struct Violation {
    std::string element;  // id of the offending element
    std::string rule;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
    friend bool operator<(const Violation& a, const Violation& b) {
        return std::tie(a.element, a.rule, a.message) < std::tie(b.element, b.rule, b.message);
    }
};

}  // namespace fabsafe
