#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fabsafe/cli.hpp"
#include "fabsafe/fmea.hpp"
#include "fabsafe/model_io.hpp"
#include "fabsafe/render.hpp"
#include "test_support.hpp"

using namespace fabsafe;
using test_support::fixture_path;
using test_support::load_fixture;
using test_support::read_file;

namespace {

struct CliRun {
    int exit_code = 0;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliRun result;
    result.exit_code = run_cli(args, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "fabsafe_cli_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = temp_dir() / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    return path.string();
}

bool contains_line(const std::string& text, const std::string& line) {
    std::istringstream in(text);
    for (std::string current; std::getline(in, current);) {
        if (current == line) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("render_model emits canonical, reparseable documents") {
    ModelRepository repo = load_fixture("case_study.json");
    std::string first = render_model(repo);
    std::string second = render_model(repo);
    CHECK(first == second);
    auto reparsed = parse_model(first, ParseMode::strict);
    REQUIRE(reparsed.ok());
    CHECK(*reparsed.repository == repo);
}

TEST_CASE("render_fmea: table rows match the documented scores") {
    ModelRepository repo = load_fixture("case_study.json");
    FmeaReport report = build_fmea(*repo.find_recipe("R"), *repo.find_process("P"), repo);
    std::string table = render_fmea(report, ReportFormat::table_text).content;
    CHECK(contains_line(table, "p1 | svc-convey | fm-convey-misplacement | 4 | 2 | 1 | 8"));
    CHECK(contains_line(table, "p1 | svc-convey | fm-convey-shock | 5 | 1 | 1 | 5"));
    CHECK(contains_line(table, "max RPN: 100"));
}

TEST_CASE("render_fmea: empty report is header plus footer") {
    FmeaReport empty;
    std::string table = render_fmea(empty, ReportFormat::table_text).content;
    CHECK(table == "step | service | failure mode | Sev | Occ | Det | RPN\nmax RPN: 0\n");
}

TEST_CASE("render_fmea: csv parses back to identical row values") {
    ModelRepository repo = load_fixture("case_study.json");
    FmeaReport report = build_fmea(*repo.find_recipe("R"), *repo.find_process("P"), repo);
    std::string csv = render_fmea(report, ReportFormat::csv).content;

    std::istringstream in(csv);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "step,service,failure_mode,severity,occurrence,detection,rpn");
    std::size_t index = 0;
    for (std::string line; std::getline(in, line); ++index) {
        REQUIRE(index < report.rows.size());
        const FmeaRow& row = report.rows[index];
        std::ostringstream expected;
        expected << row.process_step_ref << ',' << row.service_ref << ','
                 << row.failure_mode_ref << ',' << row.severity << ','
                 << row.effective_occurrence << ',' << row.detection << ',' << row.rpn;
        CHECK(line == expected.str());
    }
    CHECK(index == report.rows.size());
}

TEST_CASE("render_fmea: structured output round-trips to the same report") {
    ModelRepository repo = load_fixture("case_study.json");
    FmeaReport report = build_fmea(*repo.find_recipe("R"), *repo.find_process("P"), repo);
    std::string content = render_fmea(report, ReportFormat::structured).content;
    CHECK(parse_fmea_report(content) == report);
}

TEST_CASE("all renderings carry the same numeric values") {
    ModelRepository repo = load_fixture("case_study.json");
    FmeaReport report = build_fmea(*repo.find_recipe("R"), *repo.find_process("Pprime"), repo);
    std::string table = render_fmea(report, ReportFormat::table_text).content;
    std::string csv = render_fmea(report, ReportFormat::csv).content;
    for (const auto& row : report.rows) {
        std::ostringstream tail;
        tail << row.severity << " | " << row.effective_occurrence << " | " << row.detection
             << " | " << row.rpn;
        CHECK(table.find(row.process_step_ref + " | " + row.service_ref + " | " +
                         row.failure_mode_ref + " | " + tail.str()) != std::string::npos);
        std::ostringstream csv_tail;
        csv_tail << row.severity << ',' << row.effective_occurrence << ',' << row.detection
                 << ',' << row.rpn;
        CHECK(csv.find(row.process_step_ref + "," + row.service_ref + "," +
                       row.failure_mode_ref + "," + csv_tail.str()) != std::string::npos);
    }
}

TEST_CASE("cli: validate") {
    CliRun ok = run({"validate", fixture_path("case_study.json")});
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("model valid") != std::string::npos);

    // a violation drives exit code 2
    nlohmann::json doc = nlohmann::json::parse(read_file(fixture_path("case_study.json")));
    doc["recipes"][0]["steps"][0]["failure_mode_severities"]["fm-convey-shock"] = 6;
    std::string bad = write_temp("invalid_severity.json", doc.dump());
    CliRun invalid = run({"validate", bad});
    CHECK(invalid.exit_code == 2);
    CHECK(invalid.err.find("out of range 1..5") != std::string::npos);

    // strict mode rejects unknown keys
    nlohmann::json extra = nlohmann::json::parse(read_file(fixture_path("minimal.json")));
    extra["services"][0]["vendor"] = "acme";
    std::string unknown = write_temp("unknown_key.json", extra.dump());
    CHECK(run({"validate", unknown, "--mode", "strict"}).exit_code == 1);
    CliRun lenient = run({"validate", unknown});
    CHECK(lenient.exit_code == 0);
    CHECK(lenient.err.find("unknown key") != std::string::npos);
}

TEST_CASE("cli: usage and I/O errors exit 1") {
    CHECK(run({"frobnicate"}).exit_code == 1);
    CHECK(run({"validate"}).exit_code == 1);
    CHECK(run({"validate", "/nonexistent/model.json"}).exit_code == 1);
    CHECK(run({"fmea", fixture_path("case_study.json"), "--recipe", "R", "--process", "P",
               "--format", "yaml"})
              .exit_code == 1);
    CHECK(run({"fmea", fixture_path("case_study.json"), "--recipe", "nope", "--process", "P"})
              .exit_code == 1);
    CHECK(run({"assess", fixture_path("case_study.json"), "--recipe", "R", "--process",
               "nope"})
              .exit_code == 1);
}

TEST_CASE("cli: match") {
    CliRun feasible =
        run({"match", fixture_path("case_study.json"), "--recipe", "R", "--process", "P"});
    CHECK(feasible.exit_code == 0);
    CHECK(contains_line(feasible.out, "r1 -> p1"));
    CHECK(contains_line(feasible.out, "extra: p6a"));
    CHECK(contains_line(feasible.out, "feasible"));

    nlohmann::json doc = nlohmann::json::parse(read_file(fixture_path("case_study.json")));
    std::swap(doc["processes"][0]["steps"][0], doc["processes"][0]["steps"][1]);
    std::string swapped = write_temp("swapped.json", doc.dump());
    CliRun infeasible = run({"match", swapped, "--recipe", "R", "--process", "P"});
    CHECK(infeasible.exit_code == 3);
    CHECK(infeasible.err.find("r4") != std::string::npos);
}

TEST_CASE("cli: fmea formats and strict mode") {
    std::string model = fixture_path("case_study.json");
    CliRun table = run({"fmea", model, "--recipe", "R", "--process", "P"});
    CHECK(table.exit_code == 0);
    CHECK(contains_line(table.out, "p1 | svc-convey | fm-convey-misplacement | 4 | 2 | 1 | 8"));

    CliRun csv = run({"fmea", model, "--recipe", "R", "--process", "P", "--format", "csv"});
    CHECK(csv.exit_code == 0);
    CHECK(csv.out.rfind("step,service,", 0) == 0);

    CliRun structured =
        run({"fmea", model, "--recipe", "R", "--process", "P", "--format", "structured"});
    CHECK(structured.exit_code == 0);
    CHECK(parse_fmea_report(structured.out).max_rpn == 100);

    // strict mode surfaces unrated failure modes as a model-completeness error
    nlohmann::json doc = nlohmann::json::parse(read_file(fixture_path("case_study.json")));
    doc["recipes"][0]["steps"][0]["failure_mode_severities"].erase("fm-convey-shock");
    std::string unrated = write_temp("unrated.json", doc.dump());
    CliRun strict =
        run({"fmea", unrated, "--recipe", "R", "--process", "P", "--mode", "strict"});
    CHECK(strict.exit_code == 2);
    CHECK(strict.err.find("fm-convey-shock") != std::string::npos);
    CHECK(run({"fmea", unrated, "--recipe", "R", "--process", "P"}).exit_code == 0);
}

TEST_CASE("cli: compare ranks the improved process first") {
    CliRun result = run({"compare", fixture_path("case_study.json"), "--recipe", "R",
                         "--process", "P", "--process", "Pprime"});
    CHECK(result.exit_code == 0);
    CHECK(contains_line(result.out, "1 | Pprime | 20 | 113"));
    CHECK(contains_line(result.out, "2 | P | 100 | 289"));
}

TEST_CASE("cli: assess exit codes follow the verdict") {
    CliRun baseline =
        run({"assess", fixture_path("case_study.json"), "--recipe", "R", "--process", "P"});
    CHECK(baseline.exit_code == 3);
    CHECK(baseline.err.find("h1") != std::string::npos);
    CHECK(baseline.err.find("h3") != std::string::npos);
    CHECK(baseline.out.find("verdict: unfulfilled") != std::string::npos);

    CliRun improved = run(
        {"assess", fixture_path("case_study.json"), "--recipe", "R", "--process", "Pprime"});
    CHECK(improved.exit_code == 0);
    CHECK(improved.out.find("verdict: fulfilled") != std::string::npos);
}

TEST_CASE("cli: approve writes an audit record only when fulfilled") {
    auto audit = temp_dir() / "audit.log";
    std::filesystem::remove(audit);

    CliRun refused = run({"approve", fixture_path("case_study.json"), "--recipe", "R",
                          "--process", "P", "--approver", "safety-eng-1", "--audit-log",
                          audit.string()});
    CHECK(refused.exit_code == 3);
    CHECK(refused.err.find("uncovered hazards") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(audit));

    CliRun approved = run({"approve", fixture_path("case_study.json"), "--recipe", "R",
                           "--process", "Pprime", "--approver", "safety-eng-1", "--audit-log",
                           audit.string()});
    CHECK(approved.exit_code == 0);
    CHECK(approved.out.find("approved by safety-eng-1") != std::string::npos);
    CHECK(approved.out.find("report digest: sha256:") != std::string::npos);
    REQUIRE(std::filesystem::exists(audit));
    std::string record = read_file(audit.string());
    CHECK(record.find("approver=safety-eng-1") != std::string::npos);
    CHECK(record.find("process=Pprime") != std::string::npos);
    CHECK(record.find("digest=sha256:") != std::string::npos);
    CHECK(record.find("verdict=fulfilled") != std::string::npos);
    std::filesystem::remove(audit);
}

TEST_CASE("cli: capability") {
    CliRun capable = run({"capability", fixture_path("case_study.json"), "--recipe", "R"});
    CHECK(capable.exit_code == 0);
    CHECK(contains_line(capable.out, "r1 -> belt-conveyor/es-convey"));
    CHECK(contains_line(capable.out, "capable"));
}

TEST_CASE("cli: repeated invocations produce byte-identical stdout") {
    std::string model = fixture_path("case_study.json");
    auto audit = (temp_dir() / "determinism_audit.log").string();
    std::vector<std::vector<std::string>> commands = {
        {"validate", model},
        {"match", model, "--recipe", "R", "--process", "P"},
        {"fmea", model, "--recipe", "R", "--process", "P"},
        {"fmea", model, "--recipe", "R", "--process", "P", "--format", "csv"},
        {"fmea", model, "--recipe", "R", "--process", "P", "--format", "structured"},
        {"compare", model, "--recipe", "R", "--process", "P", "--process", "Pprime"},
        {"assess", model, "--recipe", "R", "--process", "P"},
        {"assess", model, "--recipe", "R", "--process", "Pprime"},
        {"approve", model, "--recipe", "R", "--process", "Pprime", "--approver", "eng",
         "--audit-log", audit},
        {"capability", model, "--recipe", "R"},
    };
    for (const auto& command : commands) {
        CAPTURE(command.front());
        CliRun first = run(command);
        CliRun second = run(command);
        CHECK(first.exit_code == second.exit_code);
        CHECK(first.out == second.out);
    }
    std::filesystem::remove(audit);
}
