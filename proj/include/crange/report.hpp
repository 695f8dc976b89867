// SPDX-License-Identifier: Apache-2.0
//
// Text renderings of ReproReport and ComparisonSummary. Percentages carry one
// decimal, J values three; nothing time-dependent is emitted unless a
// timestamp is passed in.
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "crange/repro.hpp"
#include "crange/resmon.hpp"

namespace crange {

enum class Format { json, md, csv };
std::string_view to_string(Format f) noexcept;
Format format_from_string(std::string_view s);  // throws SchemaError

struct ReportOptions {
  bool show_set = true;
  bool show_multiset = true;
  std::optional<std::string> generated_at;
};

// "0.938" style fixed-point rendering shared by every format.
std::string fixed(double v, int decimals);

std::string render_json(const ReproReport& r, const ReportOptions& opt = {});
std::string render_markdown(const ReproReport& r, const ReportOptions& opt = {});
// Header "cwe,baseline,candidate,matched", one line per row.
std::string render_csv(const ReproReport& r);
// Header "tool,cwe,baseline,candidate,match_rate": one line per (tool, CWE)
// followed by the all-tool rows with tool "all".
std::string render_match_rate_csv(const ReproReport& r);

std::string emit_report(const ReproReport& r, Format f, const ReportOptions& opt = {});

// Reads what render_json wrote. Throws ParseError / SchemaError.
ReproReport report_from_json(std::string_view text);

std::string render_json(const ComparisonSummary& s, const ReportOptions& opt = {});
std::string render_markdown(const ComparisonSummary& s, const ReportOptions& opt = {});
// Header "instance_count,vm_mb,ct_mb,ratio" (memory).
std::string render_csv(const ComparisonSummary& s);

std::string emit_report(const ComparisonSummary& s, Format f, const ReportOptions& opt = {});

}  // namespace crange
