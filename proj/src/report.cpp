// SPDX-License-Identifier: Apache-2.0
#include "crange/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "crange/error.hpp"

namespace crange {

using ojson = nlohmann::ordered_json;

namespace {

std::string mark(bool matched) { return matched ? "✓" : "✗"; }

std::string mode_name(CountMode m) { return m == CountMode::presence ? "presence" : "multiset"; }

std::string ratio_text(double v) { return std::isinf(v) ? "inf" : fixed(v, 3); }

// Markdown table cells must not break the row.
std::string cell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|')
      out += "\\|";
    else
      out += c;
  }
  return out.empty() ? "-" : out;
}

ojson row_json(const Cwe& cwe, std::size_t baseline, std::size_t candidate, bool matched) {
  ojson j;
  j["cwe"] = cwe.str();
  j["baseline"] = baseline;
  j["candidate"] = candidate;
  j["matched"] = matched;
  j["match_rate"] = std::round(match_rate(baseline, candidate) * 10.0) / 10.0;
  return j;
}

template <class T>
T get_field(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw SchemaError(where + "." + key, "missing key");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError(where + "." + key, "wrong type");
  }
}

const nlohmann::json& get_array(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_array()) throw SchemaError(key, "expected a list");
  return obj.at(key);
}

}  // namespace

std::string_view to_string(Format f) noexcept {
  switch (f) {
    case Format::json: return "json";
    case Format::md: return "md";
    case Format::csv: return "csv";
  }
  return "?";
}

Format format_from_string(std::string_view s) {
  if (s == "json") return Format::json;
  if (s == "md" || s == "markdown") return Format::md;
  if (s == "csv") return Format::csv;
  throw SchemaError("format", "unsupported format '" + std::string(s) + "'");
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  // Avoid "-0.0" for tiny negative rounding noise.
  std::string s = buf;
  if (s.size() > 1 && s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string render_json(const ReproReport& r, const ReportOptions& opt) {
  ojson doc;
  doc["baseline_env"] = to_string(r.baseline_env);
  doc["candidate_env"] = to_string(r.candidate_env);
  doc["mode"] = mode_name(r.mode);
  if (opt.generated_at) doc["generated_at"] = *opt.generated_at;
  doc["j_set"] = r.j_set;
  doc["j_multiset"] = r.j_multiset;

  doc["rows"] = ojson::array();
  for (const auto& row : r.rows) {
    doc["rows"].push_back(row_json(row.cwe, row.baseline, row.candidate, row.matched));
  }
  doc["tool_rows"] = ojson::array();
  for (const auto& row : r.tool_rows) {
    ojson j;
    j["tool"] = to_string(row.tool);
    j.update(row_json(row.cwe, row.baseline, row.candidate, row.matched));
    doc["tool_rows"].push_back(j);
  }
  doc["per_tool"] = ojson::array();
  for (const auto& t : r.per_tool) {
    ojson j;
    j["tool"] = to_string(t.tool);
    j["baseline"] = t.baseline;
    j["candidate"] = t.candidate;
    j["rows"] = t.rows;
    j["matched_rows"] = t.matched_rows;
    j["j_set"] = t.j_set;
    j["j_multiset"] = t.j_multiset;
    doc["per_tool"].push_back(j);
  }
  doc["items"] = ojson::array();
  for (const auto& item : r.items) {
    const auto& [tool, target, detector, location] = item.key;
    ojson j;
    j["tool"] = tool;
    j["target"] = target;
    j["detector_id"] = detector;
    j["location"] = location;
    j["cwe"] = item.cwe.str();
    j["baseline"] = item.baseline;
    j["candidate"] = item.candidate;
    j["matched"] = item.matched;
    doc["items"].push_back(j);
  }
  doc["notes"] = r.notes;
  return doc.dump(2) + "\n";
}

ReproReport report_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object()) throw SchemaError("report", "expected an object");

  ReproReport r;
  r.baseline_env = environment_from_string(get_field<std::string>(doc, "baseline_env", "report"));
  r.candidate_env = environment_from_string(get_field<std::string>(doc, "candidate_env", "report"));
  const auto mode = get_field<std::string>(doc, "mode", "report");
  if (mode != "presence" && mode != "multiset") throw SchemaError("mode", "unknown mode");
  r.mode = mode == "presence" ? CountMode::presence : CountMode::multiset;
  r.j_set = get_field<double>(doc, "j_set", "report");
  r.j_multiset = get_field<double>(doc, "j_multiset", "report");

  for (const auto& j : get_array(doc, "rows")) {
    r.rows.push_back({Cwe::parse(get_field<std::string>(j, "cwe", "rows")),
                      get_field<std::size_t>(j, "baseline", "rows"),
                      get_field<std::size_t>(j, "candidate", "rows"),
                      get_field<bool>(j, "matched", "rows")});
  }
  for (const auto& j : get_array(doc, "tool_rows")) {
    r.tool_rows.push_back({tool_from_string(get_field<std::string>(j, "tool", "tool_rows")),
                           Cwe::parse(get_field<std::string>(j, "cwe", "tool_rows")),
                           get_field<std::size_t>(j, "baseline", "tool_rows"),
                           get_field<std::size_t>(j, "candidate", "tool_rows"),
                           get_field<bool>(j, "matched", "tool_rows")});
  }
  for (const auto& j : get_array(doc, "per_tool")) {
    ToolSubtotal t;
    t.tool = tool_from_string(get_field<std::string>(j, "tool", "per_tool"));
    t.baseline = get_field<std::size_t>(j, "baseline", "per_tool");
    t.candidate = get_field<std::size_t>(j, "candidate", "per_tool");
    t.rows = get_field<std::size_t>(j, "rows", "per_tool");
    t.matched_rows = get_field<std::size_t>(j, "matched_rows", "per_tool");
    t.j_set = get_field<double>(j, "j_set", "per_tool");
    t.j_multiset = get_field<double>(j, "j_multiset", "per_tool");
    r.per_tool.push_back(t);
  }
  for (const auto& j : get_array(doc, "items")) {
    ItemRow item;
    item.key = {get_field<std::string>(j, "tool", "items"),
                get_field<std::string>(j, "target", "items"),
                get_field<std::string>(j, "detector_id", "items"),
                get_field<std::string>(j, "location", "items")};
    item.cwe = Cwe::parse(get_field<std::string>(j, "cwe", "items"));
    item.baseline = get_field<std::size_t>(j, "baseline", "items");
    item.candidate = get_field<std::size_t>(j, "candidate", "items");
    item.matched = get_field<bool>(j, "matched", "items");
    r.items.push_back(std::move(item));
  }
  for (const auto& n : get_array(doc, "notes")) {
    if (!n.is_string()) throw SchemaError("notes", "expected strings");
    r.notes.push_back(n.get<std::string>());
  }
  return r;
}

std::string render_markdown(const ReproReport& r, const ReportOptions& opt) {
  const std::string b(to_string(r.baseline_env));
  const std::string c(to_string(r.candidate_env));
  std::string out = "# Reproducibility: " + b + " vs " + c + "\n\n";
  if (opt.generated_at) out += "Generated: " + *opt.generated_at + "\n\n";
  if (r.mode == CountMode::presence) out += "Counts are distinct detections (presence mode).\n\n";

  out += "| CWE | " + b + " | " + c + " | match |\n";
  out += "|---|---:|---:|:---:|\n";
  for (const auto& row : r.rows) {
    out += "| " + row.cwe.bare() + " | " + std::to_string(row.baseline) + " | " +
           std::to_string(row.candidate) + " | " + mark(row.matched) + " |\n";
  }
  out += "\n";
  if (opt.show_set) out += "J (set): " + fixed(r.j_set, 3) + "\n";
  if (opt.show_multiset) out += "J (multiset): " + fixed(r.j_multiset, 3) + "\n";

  if (!r.per_tool.empty()) {
    out += "\n## Per tool\n\n";
    out += "| tool | " + b + " | " + c + " | rows matched |";
    if (opt.show_set) out += " J (set) |";
    if (opt.show_multiset) out += " J (multiset) |";
    out += "\n|---|---:|---:|---:|";
    if (opt.show_set) out += "---:|";
    if (opt.show_multiset) out += "---:|";
    out += "\n";
    for (const auto& t : r.per_tool) {
      out += "| " + std::string(to_string(t.tool)) + " | " + std::to_string(t.baseline) + " | " +
             std::to_string(t.candidate) + " | " + std::to_string(t.matched_rows) + "/" +
             std::to_string(t.rows) + " |";
      if (opt.show_set) out += " " + fixed(t.j_set, 3) + " |";
      if (opt.show_multiset) out += " " + fixed(t.j_multiset, 3) + " |";
      out += "\n";
    }
  }

  bool any_divergent = false;
  for (const auto& item : r.items) any_divergent = any_divergent || !item.matched;
  if (any_divergent) {
    out += "\n## Divergent detections\n\n";
    out += "| tool | detector | location | CWE | " + b + " | " + c + " | match rate |\n";
    out += "|---|---|---|---|---:|---:|---:|\n";
    for (const auto& item : r.items) {
      if (item.matched) continue;
      const auto& [tool, target, detector, location] = item.key;
      out += "| " + cell(tool) + " | " + cell(detector) + " | " + cell(location) + " | " +
             item.cwe.bare() + " | " + std::to_string(item.baseline) + " | " +
             std::to_string(item.candidate) + " | " +
             fixed(match_rate(item.baseline, item.candidate), 1) + "% |\n";
    }
  }

  if (!r.notes.empty()) {
    out += "\n## Notes\n\n";
    for (const auto& n : r.notes) out += "- " + n + "\n";
  }
  return out;
}

std::string render_csv(const ReproReport& r) {
  std::string out = "cwe,baseline,candidate,matched\n";
  for (const auto& row : r.rows) {
    out += row.cwe.bare() + "," + std::to_string(row.baseline) + "," +
           std::to_string(row.candidate) + "," + (row.matched ? "true" : "false") + "\n";
  }
  return out;
}

std::string render_match_rate_csv(const ReproReport& r) {
  std::string out = "tool,cwe,baseline,candidate,match_rate\n";
  for (const auto& row : r.tool_rows) {
    out += std::string(to_string(row.tool)) + "," + row.cwe.bare() + "," +
           std::to_string(row.baseline) + "," + std::to_string(row.candidate) + "," +
           fixed(match_rate(row.baseline, row.candidate), 1) + "\n";
  }
  auto all = r.rows;
  std::sort(all.begin(), all.end(), [](const CweRow& x, const CweRow& y) { return x.cwe < y.cwe; });
  for (const auto& row : all) {
    out += "all," + row.cwe.bare() + "," + std::to_string(row.baseline) + "," +
           std::to_string(row.candidate) + "," + fixed(match_rate(row.baseline, row.candidate), 1) +
           "\n";
  }
  return out;
}

std::string emit_report(const ReproReport& r, Format f, const ReportOptions& opt) {
  switch (f) {
    case Format::json: return render_json(r, opt);
    case Format::md: return render_markdown(r, opt);
    case Format::csv: return render_csv(r);
  }
  throw SchemaError("format", "unsupported format");
}

std::string render_json(const ComparisonSummary& s, const ReportOptions& opt) {
  auto num = [](double v) { return std::isinf(v) ? ojson(nullptr) : ojson(v); };
  auto fit = [](const LinearFit& f) {
    ojson j;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    return j;
  };
  ojson doc;
  if (opt.generated_at) doc["generated_at"] = *opt.generated_at;
  doc["points"] = ojson::array();
  for (const auto& p : s.points) {
    ojson j;
    j["instance_count"] = p.instance_count;
    j["vm_mb"] = p.vm_memory_mb;
    j["ct_mb"] = p.ct_memory_mb;
    j["memory_ratio"] = num(p.memory_ratio);
    j["storage_ratio"] = num(p.storage_ratio);
    j["cpu_ratio"] = num(p.cpu_ratio);
    doc["points"].push_back(j);
  }
  doc["fits"]["vm_memory"] = fit(s.vm_memory);
  doc["fits"]["ct_memory"] = fit(s.ct_memory);
  doc["fits"]["vm_storage"] = fit(s.vm_storage);
  doc["fits"]["ct_storage"] = fit(s.ct_storage);
  doc["fits"]["vm_cpu"] = fit(s.vm_cpu);
  doc["fits"]["ct_cpu"] = fit(s.ct_cpu);
  return doc.dump(2) + "\n";
}

std::string render_markdown(const ComparisonSummary& s, const ReportOptions& opt) {
  std::string out = "# Resource use: vm vs container\n\n";
  if (opt.generated_at) out += "Generated: " + *opt.generated_at + "\n\n";
  out += "| instances | vm MB | container MB | memory ratio | storage ratio | cpu ratio |\n";
  out += "|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& p : s.points) {
    out += "| " + std::to_string(p.instance_count) + " | " + fixed(p.vm_memory_mb, 1) + " | " +
           fixed(p.ct_memory_mb, 1) + " | " + ratio_text(p.memory_ratio) + " | " +
           ratio_text(p.storage_ratio) + " | " + ratio_text(p.cpu_ratio) + " |\n";
  }
  auto line = [](const char* name, const LinearFit& f) {
    return std::string("| ") + name + " | " + fixed(f.slope, 3) + " | " + fixed(f.intercept, 3) +
           " |\n";
  };
  out += "\n## Linear fits (per instance)\n\n| series | slope | intercept |\n|---|---:|---:|\n";
  out += line("vm memory MB", s.vm_memory);
  out += line("container memory MB", s.ct_memory);
  out += line("vm storage MB", s.vm_storage);
  out += line("container storage MB", s.ct_storage);
  out += line("vm cpu %", s.vm_cpu);
  out += line("container cpu %", s.ct_cpu);
  return out;
}

std::string render_csv(const ComparisonSummary& s) {
  std::string out = "instance_count,vm_mb,ct_mb,ratio\n";
  for (const auto& p : s.points) {
    out += std::to_string(p.instance_count) + "," + fixed(p.vm_memory_mb, 1) + "," +
           fixed(p.ct_memory_mb, 1) + "," + ratio_text(p.memory_ratio) + "\n";
  }
  return out;
}

std::string emit_report(const ComparisonSummary& s, Format f, const ReportOptions& opt) {
  switch (f) {
    case Format::json: return render_json(s, opt);
    case Format::md: return render_markdown(s, opt);
    case Format::csv: return render_csv(s);
  }
  throw SchemaError("format", "unsupported format");
}

}  // namespace crange
