// SPDX-License-Identifier: Apache-2.0
#include "crange/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <ostream>
#include <regex>
#include <sstream>

#include "crange/drivers.hpp"
#include "crange/error.hpp"
#include "crange/ingest.hpp"
#include "crange/provision.hpp"
#include "crange/repro.hpp"
#include "crange/report.hpp"
#include "crange/resmon.hpp"
#include "crange/scenario.hpp"

namespace crange::cli {

namespace {

class IoError : public Error {
public:
  using Error::Error;
};

// A failure already reported through diagnostics on stdout.
struct InvalidInput {};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path + "'");
  return buf.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << text;
  f.close();
  if (!f) throw IoError("cannot write '" + path + "'");
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message,
                  const nlohmann::ordered_json& extra = nlohmann::ordered_json::object()) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  j.update(extra);
  err << j.dump() << "\n";
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  static const std::regex range_re(R"(^(\d+)(?:\.\.(\d+))?$)");
  std::smatch m;
  if (!std::regex_match(text, m, range_re)) {
    throw SchemaError("instances", "expected <a>..<b> or <n>, got '" + text + "'");
  }
  const auto a = static_cast<std::size_t>(std::stoull(m[1]));
  const auto b = m[2].matched ? static_cast<std::size_t>(std::stoull(m[2])) : a;
  if (a > b) throw SchemaError("instances", "range start exceeds its end");
  return {a, b};
}

nlohmann::ordered_json diagnostics_json(const std::vector<Diagnostic>& diags) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& d : diags) {
    nlohmann::ordered_json j;
    j["severity"] = to_string(d.severity);
    j["step"] = d.step;
    j["subject"] = d.subject;
    j["field"] = d.field;
    j["message"] = d.message;
    arr.push_back(j);
  }
  return arr;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cyber range scenario, provisioning and reproducibility toolkit", "crange"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::function<int()> action;

  // validate
  std::string scenario_path;
  std::string validate_format = "text";
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", scenario_path, "Scenario YAML")->required();
  validate->add_option("--format", validate_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  validate->callback([&] {
    action = [&] {
      const Scenario s = parse_scenario(read_file(scenario_path));
      const auto diags = validate_scenario(s);
      if (validate_format == "json")
        out << diagnostics_json(diags).dump(2) << "\n";
      else
        out << format_diagnostics(diags);
      if (has_errors(diags)) throw InvalidInput{};
      return kOk;
    };
  });

  // provision
  std::string provision_backend = "mock";
  std::string provision_target = "container";
  std::string provision_out;
  bool export_plan = false;
  auto* provision = app.add_subcommand("provision", "Plan and build an environment");
  provision->add_option("scenario", scenario_path, "Scenario YAML")->required();
  provision->add_option("--backend", provision_backend, "mock or container-plan")
      ->check(CLI::IsMember({"mock", "container-plan"}));
  provision->add_option("--target", provision_target, "Instance backend to plan for")
      ->check(CLI::IsMember({"vm", "container"}));
  provision->add_flag("--export-plan", export_plan,
                      "Also print the image export command for each container node");
  provision->add_option("-o,--output", provision_out, "Output file (default stdout)");
  provision->callback([&] {
    action = [&] {
      const Scenario s = parse_scenario(read_file(scenario_path));
      const Backend target = backend_from_string(provision_target);
      const ProvisionPlan plan = plan_environment(s, target);
      std::string text;
      if (provision_backend == "container-plan") {
        CommandPlanDriver driver;
        execute_plan(plan, driver);
        text = driver.script();
      } else {
        MockDriver driver;
        const auto state = execute_plan(plan, driver);
        text = "# plan " + plan.environment_id + "\n" + format_plan(plan) + "# state\n";
        for (const auto& [id, status] : state) text += id + " " + std::string(to_string(status)) + "\n";
      }
      if (export_plan) {
        for (const Node& n : s.nodes) {
          if (n.backend != Backend::container) continue;
          text += export_command(image_export_plan(n), n.image) + "\n";
        }
      }
      write_output(provision_out, text, out);
      return kOk;
    };
  });

  // ingest
  std::string ingest_tool, ingest_env, ingest_report, ingest_out, cwe_map_path;
  auto* ingest = app.add_subcommand("ingest", "Normalize a scanner report to JSON lines");
  ingest->add_option("--tool", ingest_tool, "nmap, openvas, zap, nikto or msf")
      ->required()
      ->check(CLI::IsMember({"nmap", "openvas", "zap", "nikto", "nikto2", "msf"}));
  ingest->add_option("--env", ingest_env, "vm, container or real")
      ->required()
      ->check(CLI::IsMember({"vm", "container", "real"}));
  ingest->add_option("report", ingest_report, "Report file")->required();
  ingest->add_option("-o,--output", ingest_out, "Output JSONL (default stdout)");
  ingest->add_option("--cwe-map", cwe_map_path, "CWE map JSON (default: built-in)");
  ingest->callback([&] {
    action = [&] {
      std::optional<CweMap> custom;
      if (!cwe_map_path.empty()) custom = CweMap::from_json(read_file(cwe_map_path));
      const CweMap& map = custom ? *custom : CweMap::builtin();
      const FindingSet fs = parse_report(tool_from_string(ingest_tool), read_file(ingest_report),
                                         environment_from_string(ingest_env), map);
      write_output(ingest_out, write_jsonl(fs), out);
      return kOk;
    };
  });

  // compare
  std::string baseline_path, candidate_path, compare_mode = "both", compare_format = "md";
  std::string compare_out;
  bool match_rate_csv = false, with_target = false, timestamps = false;
  auto* compare = app.add_subcommand("compare", "Diff two finding sets");
  compare->add_option("--baseline", baseline_path, "Baseline JSONL")->required();
  compare->add_option("--candidate", candidate_path, "Candidate JSONL")->required();
  compare->add_option("--mode", compare_mode, "set, multiset or both")
      ->check(CLI::IsMember({"set", "multiset", "both"}));
  compare->add_option("--format", compare_format, "json, md or csv")
      ->check(CLI::IsMember({"json", "md", "csv"}));
  compare->add_flag("--match-rate", match_rate_csv, "Emit per-tool match-rate CSV");
  compare->add_flag("--with-target", with_target, "Include the target in finding identity");
  compare->add_flag("--timestamps", timestamps, "Stamp the report with the current time");
  compare->add_option("-o,--output", compare_out, "Output file (default stdout)");
  compare->callback([&] {
    action = [&] {
      const FindingSet a = read_jsonl(read_file(baseline_path), Environment::vm);
      const FindingSet b = read_jsonl(read_file(candidate_path), Environment::container);
      MatchPredicate phi;
      phi.use_target = with_target;
      if (compare_mode == "set") phi.mode = CountMode::presence;
      const ReproReport r = diff(a, b, phi);
      ReportOptions opt;
      opt.show_set = compare_mode != "multiset";
      opt.show_multiset = compare_mode != "set";
      if (timestamps) opt.generated_at = utc_now();
      const std::string text = match_rate_csv
                                   ? render_match_rate_csv(r)
                                   : emit_report(r, format_from_string(compare_format), opt);
      write_output(compare_out, text, out);
      return kOk;
    };
  });

  // monitor
  std::string profile_path, instances = "1..10", monitor_format = "csv", monitor_out;
  std::size_t step = 1;
  auto* monitor = app.add_subcommand("monitor", "Model resource use versus instance count");
  monitor->add_option("--profile", profile_path, "Profiles YAML (default: built-in)");
  monitor->add_option("--instances", instances, "Instance range <a>..<b>");
  monitor->add_option("--step", step, "Range step")->check(CLI::PositiveNumber);
  monitor->add_option("--format", monitor_format, "json, md or csv")
      ->check(CLI::IsMember({"json", "md", "csv"}));
  monitor->add_flag("--timestamps", timestamps, "Stamp the report with the current time");
  monitor->add_option("-o,--output", monitor_out, "Output file (default stdout)");
  monitor->callback([&] {
    action = [&] {
      const ProfileSet profiles =
          profile_path.empty() ? default_profiles() : parse_profiles(read_file(profile_path));
      const auto [first, last] = parse_range(instances);
      const auto summary = compare_backends(simulate_series(profiles.vm, first, last, step),
                                            simulate_series(profiles.container, first, last, step));
      ReportOptions opt;
      if (timestamps) opt.generated_at = utc_now();
      write_output(monitor_out, emit_report(summary, format_from_string(monitor_format), opt), out);
      return kOk;
    };
  });

  // report
  std::string report_input, report_format = "md", report_mode = "both", report_out;
  auto* report = app.add_subcommand("report", "Re-render a JSON comparison report");
  report->add_option("input", report_input, "Report JSON written by compare")->required();
  report->add_option("--format", report_format, "json, md or csv")
      ->check(CLI::IsMember({"json", "md", "csv"}));
  report->add_option("--mode", report_mode, "set, multiset or both")
      ->check(CLI::IsMember({"set", "multiset", "both"}));
  report->add_flag("--match-rate", match_rate_csv, "Emit per-tool match-rate CSV");
  report->add_flag("--timestamps", timestamps, "Stamp the report with the current time");
  report->add_option("-o,--output", report_out, "Output file (default stdout)");
  report->callback([&] {
    action = [&] {
      const ReproReport r = report_from_json(read_file(report_input));
      ReportOptions opt;
      opt.show_set = report_mode != "multiset";
      opt.show_multiset = report_mode != "set";
      if (timestamps) opt.generated_at = utc_now();
      const std::string text = match_rate_csv
                                   ? render_match_rate_csv(r)
                                   : emit_report(r, format_from_string(report_format), opt);
      write_output(report_out, text, out);
      return kOk;
    };
  });

  std::vector<const char*> argv{"crange"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    return kOperational;
  }

  try {
    return action ? action() : kOk;
  } catch (const InvalidInput&) {
    report_error(err, "invalid", "validation reported errors");
    return kInvalid;
  } catch (const ParseError& e) {
    report_error(err, "parse", e.what(), {{"line", e.line()}, {"column", e.column()}});
    return kInvalid;
  } catch (const SchemaError& e) {
    report_error(err, "schema", e.what(), {{"field", e.field()}});
    return kInvalid;
  } catch (const RollbackError& e) {
    report_error(err, "rollback", e.what(), {{"directive", e.directive_index()}});
    return kOperational;
  } catch (const ProvisionError& e) {
    report_error(err, "provision", e.what(), {{"directive", e.directive_index()}});
    return kOperational;
  } catch (const IoError& e) {
    report_error(err, "io", e.what());
    return kOperational;
  } catch (const PreconditionError& e) {
    report_error(err, "precondition", e.what());
    return kOperational;
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return kOperational;
  }
}

}  // namespace crange::cli
