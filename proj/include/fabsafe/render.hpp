#pragma once

// Report rendering: plain-text tables for the terminal, CSV for spreadsheets,
// and a structured (JSON) form that parses back to the same report object.

#include <optional>
#include <string>

#include "fabsafe/fmea.hpp"
#include "fabsafe/matching.hpp"
#include "fabsafe/risk.hpp"

namespace fabsafe {

enum class ReportFormat { table_text, csv, structured };

std::optional<ReportFormat> parse_report_format(std::string_view token);

struct RenderedReport {
    ReportFormat format = ReportFormat::table_text;
    std::string content;
};

RenderedReport render_fmea(const FmeaReport& report, ReportFormat format);
RenderedReport render_risk(const RiskAssessmentReport& report, ReportFormat format);

std::string render_match(const MatchResult& result);
std::string render_capability(const CapabilityResult& result);
std::string render_comparison(const std::vector<FmeaReport>& ranked);

// Structured-format round-trips.
FmeaReport parse_fmea_report(const std::string& content);
RiskAssessmentReport parse_risk_report(const std::string& content);

}  // namespace fabsafe
