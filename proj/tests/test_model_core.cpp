#include <doctest.h>

#include <algorithm>

#include <json.hpp>

#include "fabsafe/fmea.hpp"
#include "fabsafe/model_io.hpp"
#include "fabsafe/render.hpp"
#include "fabsafe/risk.hpp"
#include "fabsafe/sha256.hpp"
#include "fabsafe/validate.hpp"
#include "generators.hpp"
#include "test_support.hpp"

using namespace fabsafe;
using test_support::fixture_path;
using test_support::load_fixture;
using test_support::read_file;

namespace {

bool has_violation(const std::vector<Violation>& violations, const std::string& rule,
                   const std::string& fragment = "") {
    for (const auto& v : violations) {
        if (v.rule == rule && v.message.find(fragment) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("minimal document yields one element per collection") {
    auto result = parse_model_file(fixture_path("minimal.json"), ParseMode::strict);
    REQUIRE(result.ok());
    const ModelRepository& repo = *result.repository;
    CHECK(repo.services.size() == 1);
    CHECK(repo.recipes.size() == 1);
    CHECK(repo.equipment.size() == 1);
    CHECK(repo.processes.size() == 1);
    CHECK(repo.hazard_taxonomy.size() == 1);
    CHECK(repo.zones.size() == 1);
}

TEST_CASE("case-study document parses into the expected shape") {
    ModelRepository repo = load_fixture("case_study.json");
    REQUIRE(repo.recipes.size() == 1);
    CHECK(repo.recipes[0].steps.size() == 6);
    REQUIRE(repo.processes.size() == 2);
    CHECK(repo.processes[0].steps.size() == 7);
    CHECK(repo.processes[1].steps.size() == 7);
    CHECK(repo.equipment.size() == 5);
    CHECK(repo.services.size() == 4);
}

TEST_CASE("severity outside 1..5 is rejected") {
    std::string text = read_file(fixture_path("case_study.json"));
    nlohmann::json doc = nlohmann::json::parse(text);
    doc["recipes"][0]["steps"][0]["failure_mode_severities"]["fm-convey-shock"] = 6;
    auto result = parse_model(doc.dump());
    CHECK_FALSE(result.ok());
    CHECK(has_violation(result.violations, "range.severity", "out of range 1..5"));
}

TEST_CASE("validate reports a process value outside the equipment constraint") {
    nlohmann::json doc = nlohmann::json::parse(read_file(fixture_path("case_study.json")));
    doc["processes"][0]["steps"][0]["property_values"]["prop-speed"] = 900;  // constraint [50,800]
    auto result = parse_model(doc.dump());
    CHECK_FALSE(result.ok());
    CHECK(has_violation(result.violations, "property.outside_constraint", "prop-speed"));
    // exactly one violation for this defect
    CHECK(result.violations.size() == 1);
}

TEST_CASE("equipment failure mode of a foreign service is a violation") {
    nlohmann::json doc = nlohmann::json::parse(read_file(fixture_path("case_study.json")));
    // belt conveyor rating a pick-and-place failure mode
    doc["equipment"][0]["services"][0]["failure_modes"].push_back(
        {{"failure_mode", "fm-pp-crimping"}, {"occurrence", 2}});
    auto result = parse_model(doc.dump());
    CHECK_FALSE(result.ok());
    CHECK(has_violation(result.violations, "failure_mode.foreign", "fm-pp-crimping"));
    CHECK(result.violations.size() == 1);
}

TEST_CASE("dangling references are violations") {
    nlohmann::json doc = nlohmann::json::parse(read_file(fixture_path("minimal.json")));
    doc["processes"][0]["steps"][0]["equipment_service"]["service"] = "nope";
    doc["recipes"][0]["steps"][0]["service"] = "svc-missing";
    auto result = parse_model(doc.dump());
    CHECK_FALSE(result.ok());
    CHECK(has_violation(result.violations, "ref.equipment_service"));
    CHECK(has_violation(result.violations, "ref.service", "svc-missing"));
}

TEST_CASE("ids must be non-empty and whitespace-free") {
    nlohmann::json doc = nlohmann::json::parse(read_file(fixture_path("minimal.json")));
    doc["zones"].push_back({{"id", "zone with space"}});
    auto result = parse_model(doc.dump());
    CHECK_FALSE(result.ok());
    CHECK(has_violation(result.violations, "id.format"));
}

TEST_CASE("assorted structural violations are reported with their rules") {
    nlohmann::json base = nlohmann::json::parse(read_file(fixture_path("case_study.json")));

    SUBCASE("inverted interval") {
        nlohmann::json doc = base;
        doc["equipment"][0]["services"][0]["property_constraints"]["prop-speed"] = {800, 50};
        auto result = parse_model(doc.dump());
        CHECK_FALSE(result.ok());
        CHECK(has_violation(result.violations, "interval.invalid"));
    }

    SUBCASE("empty allowed-value set") {
        nlohmann::json doc = base;
        doc["equipment"][1]["services"][1]["property_constraints"]["prop-grease-type"] =
            nlohmann::json::array();
        auto result = parse_model(doc.dump());
        CHECK_FALSE(result.ok());
        CHECK(has_violation(result.violations, "bounds.empty"));
    }

    SUBCASE("duplicate top-level id") {
        nlohmann::json doc = base;
        doc["zones"].push_back({{"id", "zone-loading"}});
        auto result = parse_model(doc.dump());
        CHECK_FALSE(result.ok());
        CHECK(has_violation(result.violations, "id.duplicate", "zone-loading"));
    }

    SUBCASE("mixed speed units") {
        nlohmann::json doc = base;
        doc["processes"][0]["hazards"][0]["speed"]["unit"] = "m/s";
        auto result = parse_model(doc.dump());
        CHECK_FALSE(result.ok());
        CHECK(has_violation(result.violations, "quantity.unit_mixed", "m/s"));
    }

    SUBCASE("undeclared hazard type") {
        nlohmann::json doc = base;
        doc["processes"][0]["hazards"][0]["hazard_type"] = "thermal/burn";
        auto result = parse_model(doc.dump());
        CHECK_FALSE(result.ok());
        CHECK(has_violation(result.violations, "taxonomy.unknown", "thermal/burn"));
    }

    SUBCASE("assignment outside global bounds") {
        nlohmann::json doc = base;
        doc["recipes"][0]["steps"][0]["property_assignments"]["prop-speed"] = {100, 2500};
        auto result = parse_model(doc.dump());
        CHECK_FALSE(result.ok());
        CHECK(has_violation(result.violations, "property.outside_global_bounds", "prop-speed"));
    }

    SUBCASE("assignment kind mismatch") {
        nlohmann::json doc = base;
        doc["recipes"][0]["steps"][3]["property_assignments"]["prop-grease-type"] = 7;
        auto result = parse_model(doc.dump());
        CHECK_FALSE(result.ok());
        CHECK(has_violation(result.violations, "property.kind_mismatch"));
    }

    SUBCASE("duplicate occurrence rating for one failure mode") {
        nlohmann::json doc = base;
        doc["equipment"][0]["services"][0]["failure_modes"].push_back(
            {{"failure_mode", "fm-convey-shock"}, {"occurrence", 3}});
        auto result = parse_model(doc.dump());
        CHECK_FALSE(result.ok());
        CHECK(has_violation(result.violations, "equipment.failure_mode_duplicate"));
    }

    SUBCASE("hazard task must belong to the hazard's process") {
        nlohmann::json doc = base;
        doc["processes"][0]["hazards"][2]["interaction_task"] = "t-unknown";
        auto result = parse_model(doc.dump());
        CHECK_FALSE(result.ok());
        CHECK(has_violation(result.violations, "ref.task", "t-unknown"));
    }
}

TEST_CASE("unknown keys: rejected in strict mode, warned in lenient mode") {
    nlohmann::json doc = nlohmann::json::parse(read_file(fixture_path("minimal.json")));
    doc["services"][0]["vendor"] = "acme";
    CHECK_THROWS_AS(parse_model(doc.dump(), ParseMode::strict), ParseError);
    auto lenient = parse_model(doc.dump(), ParseMode::lenient);
    REQUIRE(lenient.ok());
    REQUIRE(lenient.warnings.size() == 1);
    CHECK(lenient.warnings[0].find("vendor") != std::string::npos);
}

TEST_CASE("JSON syntax errors are position-annotated parse errors") {
    try {
        parse_model("{ \"services\": [ }");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        std::string what = e.what();
        CHECK(what.find("syntax error") != std::string::npos);
    }
}

TEST_CASE("hazard taxonomy defaults apply only when the key is absent") {
    auto with_key = parse_model(R"({"hazard_taxonomy": []})");
    REQUIRE(with_key.ok());
    CHECK(with_key.repository->hazard_taxonomy.empty());

    auto without_key = parse_model("{}");
    REQUIRE(without_key.ok());
    CHECK(without_key.repository->hazard_taxonomy.size() == 4);
    CHECK(without_key.repository->has_hazard_type(*HazardType::from_path("mechanical/shearing")));
}

TEST_CASE("round-trip: parse(render(r)) == r for every fixture") {
    for (const char* name : {"minimal.json", "case_study.json", "inline_supervision.json"}) {
        CAPTURE(name);
        ModelRepository repo = load_fixture(name);
        std::string canonical = render_model(repo);
        auto reparsed = parse_model(canonical, ParseMode::strict);
        REQUIRE(reparsed.ok());
        CHECK(*reparsed.repository == repo);
        CHECK(render_model(*reparsed.repository) == canonical);
    }
}

TEST_CASE("empty repository renders with empty collections and round-trips") {
    ModelRepository empty;
    std::string canonical = render_model(empty);
    CHECK(canonical.find("\"services\": []") != std::string::npos);
    auto reparsed = parse_model(canonical, ParseMode::strict);
    REQUIRE(reparsed.ok());
    CHECK(*reparsed.repository == empty);
}

TEST_CASE("validation and reports are independent of document collection order") {
    nlohmann::json doc = nlohmann::json::parse(read_file(fixture_path("case_study.json")));
    nlohmann::json shuffled = doc;
    for (const char* key : {"services", "recipes", "equipment", "processes", "zones",
                            "hazard_taxonomy"}) {
        auto& arr = shuffled[key];
        std::reverse(arr.begin(), arr.end());
    }
    std::reverse(shuffled["equipment"][0]["services"].begin(),
                 shuffled["equipment"][0]["services"].end());

    auto original = parse_model(doc.dump());
    auto permuted = parse_model(shuffled.dump());
    REQUIRE(original.ok());
    REQUIRE(permuted.ok());
    CHECK(*original.repository == *permuted.repository);
    CHECK(render_model(*original.repository) == render_model(*permuted.repository));

    const Recipe* recipe = original.repository->find_recipe("R");
    const Process* process = original.repository->find_process("P");
    FmeaReport a = build_fmea(*recipe, *process, *original.repository);
    FmeaReport b = build_fmea(*permuted.repository->find_recipe("R"),
                              *permuted.repository->find_process("P"), *permuted.repository);
    CHECK(render_fmea(a, ReportFormat::structured).content ==
          render_fmea(b, ReportFormat::structured).content);

    RiskAssessmentReport ra = assess_process(*recipe, *process, *original.repository);
    RiskAssessmentReport rb =
        assess_process(*permuted.repository->find_recipe("R"),
                       *permuted.repository->find_process("P"), *permuted.repository);
    CHECK(render_risk(ra, ReportFormat::structured).content ==
          render_risk(rb, ReportFormat::structured).content);
}

TEST_CASE("every scale value in a validated repository lies in 1..5") {
    for (const char* name : {"case_study.json", "inline_supervision.json"}) {
        ModelRepository repo = load_fixture(name);
        auto in_scale = [](int v) { return v >= 1 && v <= 5; };
        for (const auto& recipe : repo.recipes) {
            for (const auto& step : recipe.steps) {
                for (const auto& [fm, severity] : step.failure_mode_severities) {
                    CHECK(in_scale(severity));
                }
            }
        }
        for (const auto& equipment : repo.equipment) {
            for (const auto& es : equipment.services) {
                for (const auto& fm : es.failure_modes) CHECK(in_scale(fm.occurrence));
                for (const auto& coverage : es.quality_coverages) {
                    CHECK(in_scale(coverage.detection));
                    if (coverage.decreased_occurrence) {
                        CHECK(in_scale(*coverage.decreased_occurrence));
                    }
                }
            }
        }
    }
}

TEST_CASE("round-trip holds on randomly generated repositories") {
    std::mt19937 rng(31337);
    for (int i = 0; i < 150; ++i) {
        ModelRepository repo;
        switch (i % 3) {
            case 0: repo = testgen::random_matching_instance(rng).repo; break;
            case 1: repo = testgen::random_fmea_model(rng).repo; break;
            default: repo = testgen::random_risk_model(rng).repo; break;
        }
        std::string canonical = render_model(repo);
        auto reparsed = parse_model(canonical, ParseMode::strict);
        REQUIRE(reparsed.ok());
        CHECK(*reparsed.repository == repo);
    }
}

TEST_CASE("sha256 matches known vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    // spans the two-block padding path
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}
