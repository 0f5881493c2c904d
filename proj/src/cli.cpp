#include "fabsafe/cli.hpp"

#include <chrono>
#include <ostream>

#include <CLI11.hpp>

#include "fabsafe/fmea.hpp"
#include "fabsafe/matching.hpp"
#include "fabsafe/model_io.hpp"
#include "fabsafe/render.hpp"
#include "fabsafe/risk.hpp"
#include "fabsafe/validate.hpp"

namespace fabsafe {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolations = 2;
constexpr int kExitUnfulfilled = 3;

// Loads and validates; on failure prints diagnostics and fills exit_code.
std::optional<ModelRepository> load_model(const std::string& path, ParseMode mode,
                                          std::ostream& err, int& exit_code) {
    LoadResult load;
    try {
        load = parse_model_file(path, mode);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        exit_code = kExitUsage;
        return std::nullopt;
    }
    for (const auto& warning : load.warnings) {
        err << "warning: " << warning << "\n";
    }
    if (!load.ok()) {
        for (const auto& v : load.violations) {
            err << "[" << v.rule << "] " << v.element << ": " << v.message << "\n";
        }
        err << load.violations.size() << " violation(s)\n";
        exit_code = kExitViolations;
        return std::nullopt;
    }
    return std::move(load.repository);
}

const Recipe* need_recipe(const ModelRepository& repo, const std::string& id, std::ostream& err) {
    const Recipe* recipe = repo.find_recipe(id);
    if (!recipe) err << "error: unknown recipe '" << id << "'\n";
    return recipe;
}

const Process* need_process(const ModelRepository& repo, const std::string& id,
                            std::ostream& err) {
    const Process* process = repo.find_process(id);
    if (!process) err << "error: unknown process '" << id << "'\n";
    return process;
}

ParseMode to_parse_mode(const std::string& mode) {
    return mode == "strict" ? ParseMode::strict : ParseMode::lenient;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Model-driven process FMEA and machine-safety assessment for "
                 "reconfigurable production systems",
                 "fabsafe"};
    app.require_subcommand(1);

    std::string model_path;
    std::string recipe_id;
    std::string process_id;
    std::vector<std::string> process_ids;
    std::string mode = "lenient";
    std::string format = "table-text";
    std::string approver;
    std::string audit_log = "fabsafe_audit.log";

    auto add_model = [&](CLI::App* cmd) {
        cmd->add_option("model", model_path, "model document (JSON)")->required();
    };
    auto add_recipe = [&](CLI::App* cmd) {
        cmd->add_option("--recipe", recipe_id, "recipe id")->required();
    };
    auto add_process = [&](CLI::App* cmd) {
        cmd->add_option("--process", process_id, "process id")->required();
    };
    auto add_mode = [&](CLI::App* cmd) {
        cmd->add_option("--mode", mode, "strict|lenient (default lenient)")
            ->check(CLI::IsMember({"strict", "lenient"}));
    };

    CLI::App* validate_cmd = app.add_subcommand("validate", "check a model document");
    add_model(validate_cmd);
    add_mode(validate_cmd);

    CLI::App* match_cmd = app.add_subcommand("match", "match a recipe against a process");
    add_model(match_cmd);
    add_recipe(match_cmd);
    add_process(match_cmd);

    CLI::App* fmea_cmd = app.add_subcommand("fmea", "generate the process-FMEA");
    add_model(fmea_cmd);
    add_recipe(fmea_cmd);
    add_process(fmea_cmd);
    add_mode(fmea_cmd);
    fmea_cmd->add_option("--format", format, "table-text|csv|structured")
        ->check(CLI::IsMember({"table-text", "csv", "structured"}));

    CLI::App* compare_cmd = app.add_subcommand("compare", "rank processes by RPN");
    add_model(compare_cmd);
    add_recipe(compare_cmd);
    compare_cmd->add_option("--process", process_ids, "process id (repeatable)")->required();

    CLI::App* assess_cmd = app.add_subcommand("assess", "run the risk assessment");
    add_model(assess_cmd);
    add_recipe(assess_cmd);
    add_process(assess_cmd);

    CLI::App* approve_cmd =
        app.add_subcommand("approve", "assess and record a safety approval");
    add_model(approve_cmd);
    add_recipe(approve_cmd);
    add_process(approve_cmd);
    approve_cmd->add_option("--approver", approver, "approver id")->required();
    approve_cmd->add_option("--audit-log", audit_log, "audit log path");

    CLI::App* capability_cmd =
        app.add_subcommand("capability", "check whether the factory can implement a recipe");
    add_model(capability_cmd);
    add_recipe(capability_cmd);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    int exit_code = kExitOk;
    auto repo = load_model(model_path, to_parse_mode(mode), err, exit_code);
    if (!repo) return exit_code;

    try {
        if (*validate_cmd) {
            out << "model valid (services: " << repo->services.size()
                << ", recipes: " << repo->recipes.size()
                << ", equipment: " << repo->equipment.size()
                << ", processes: " << repo->processes.size() << ")\n";
            return kExitOk;
        }

        if (*capability_cmd) {
            const Recipe* recipe = need_recipe(*repo, recipe_id, err);
            if (!recipe) return kExitUsage;
            CapabilityResult result = can_manufacture(*recipe, *repo);
            out << render_capability(result);
            if (!result.capable) {
                for (const auto& d : result.diagnostics) err << d << "\n";
                return kExitUnfulfilled;
            }
            return kExitOk;
        }

        if (*compare_cmd) {
            const Recipe* recipe = need_recipe(*repo, recipe_id, err);
            if (!recipe) return kExitUsage;
            std::vector<FmeaReport> reports;
            for (const auto& id : process_ids) {
                const Process* process = need_process(*repo, id, err);
                if (!process) return kExitUsage;
                reports.push_back(build_fmea(*recipe, *process, *repo, FmeaMode::lenient));
            }
            out << render_comparison(compare_processes(std::move(reports)));
            return kExitOk;
        }

        const Recipe* recipe = nullptr;
        const Process* process = nullptr;
        if (*match_cmd || *fmea_cmd || *assess_cmd || *approve_cmd) {
            recipe = need_recipe(*repo, recipe_id, err);
            if (!recipe) return kExitUsage;
            process = need_process(*repo, process_id, err);
            if (!process) return kExitUsage;
        }

        if (*match_cmd) {
            MatchResult result = match_recipe(*recipe, *process, *repo);
            out << render_match(result);
            if (!result.feasible) {
                for (const auto& d : result.diagnostics) err << d << "\n";
                return kExitUnfulfilled;
            }
            return kExitOk;
        }

        if (*fmea_cmd) {
            FmeaMode fmea_mode = mode == "strict" ? FmeaMode::strict : FmeaMode::lenient;
            FmeaReport report = build_fmea(*recipe, *process, *repo, fmea_mode);
            out << render_fmea(report, *parse_report_format(format)).content;
            return kExitOk;
        }

        if (*assess_cmd) {
            RiskAssessmentReport report = assess_process(*recipe, *process, *repo);
            out << render_risk(report, ReportFormat::table_text).content;
            if (report.verdict != Verdict::fulfilled) {
                err << "safety requirements unfulfilled; uncovered hazards:";
                for (const auto& id : report.uncovered_hazards) err << " " << id;
                err << "\n";
                return kExitUnfulfilled;
            }
            return kExitOk;
        }

        if (*approve_cmd) {
            RiskAssessmentReport report = assess_process(*recipe, *process, *repo);
            ProcessApproval approval =
                approve(report, *repo, approver, std::chrono::system_clock::now());
            append_audit_record(audit_log, approval, report.process_ref);
            out << "process " << report.process_ref << " approved by " << approver << "\n";
            out << "report digest: sha256:" << approval.report_digest << "\n";
            return kExitOk;
        }
    } catch (const InfeasibleMatchError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUnfulfilled;
    } catch (const UnratedFailureModeError& e) {
        err << "error: " << e.what() << "\n";
        return kExitViolations;
    } catch (const ApprovalRefusedError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUnfulfilled;
    } catch (const StaleReportError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUnfulfilled;
    } catch (const ModelError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace fabsafe
