// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "crange/driver.hpp"
#include "crange/scenario.hpp"

namespace crange {

enum class DirectiveKind { create_network, create_instance, apply_limits, start_service };
std::string_view to_string(DirectiveKind k) noexcept;

struct Directive {
  DirectiveKind kind = DirectiveKind::create_network;
  std::string subject;
  std::map<std::string, std::string> params;

  friend bool operator==(const Directive&, const Directive&) = default;
};

// Backend-neutral construction steps for one environment, in execution order:
// all networks first, then per node create_instance, apply_limits (when the
// node declares limits) and one start_service per declared service.
struct ProvisionPlan {
  std::string environment_id;
  std::vector<Directive> directives;

  friend bool operator==(const ProvisionPlan&, const ProvisionPlan&) = default;
};

// Throws PreconditionError when validate_scenario reports errors or a selected
// node has no image.
ProvisionPlan plan_environment(const Scenario& s, Backend backend);

// One line per directive: "<kind> <subject> key=value ...", keys sorted.
std::string format_plan(const ProvisionPlan& plan);

// The directories a container image export leaves out of the archive.
inline const std::set<std::string>& mandatory_export_exclusions() {
  static const std::set<std::string> paths = {"/boot", "/dev", "/mnt", "/proc", "/sys", "/tmp"};
  return paths;
}

struct FileSetSpec {
  std::string include_root = "/";
  std::set<std::string> exclude;

  // True when `path` (absolute) falls inside the exported file set.
  bool includes(std::string_view path) const;

  friend bool operator==(const FileSetSpec&, const FileSetSpec&) = default;
};

// Export file set for turning a VM filesystem into a container base image.
// Extra exclusions declared on the node are normalized and merged.
// Throws PreconditionError for vm-backed nodes, SchemaError for a relative
// extra exclusion.
FileSetSpec image_export_plan(const Node& node);

// Shell rendering of an export: tar of include_root minus the exclusions,
// piped into `docker import`.
std::string export_command(const FileSetSpec& spec, std::string_view image_name);

enum class Verdict { reproducible, excluded };
enum class ExclusionReason { ok, kernel_level, host_config, shared_resource_attack, physical };

std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(ExclusionReason r) noexcept;

struct Suitability {
  Verdict verdict = Verdict::reproducible;
  ExclusionReason reason = ExclusionReason::ok;
  std::string note;

  friend bool operator==(const Suitability&, const Suitability&) = default;
};

struct SuitabilityRule {
  std::string match;  // "category:<prefix>", "cwe:<id>" or "id:<prefix>"
  Suitability outcome;
};

struct SuitabilityRules {
  std::vector<SuitabilityRule> rules;
};

// Rules file (YAML, see docs/formats.md). Throws ParseError / SchemaError.
SuitabilityRules parse_suitability_rules(std::string_view yaml);
const SuitabilityRules& builtin_suitability_rules();

// First matching rule decides; no match means reproducible/ok.
// Throws SchemaError for an unrecognized vulnerability identifier.
Suitability container_suitability(const VulnRef& v, const SuitabilityRules& rules);

enum class InstanceStatus { created, running, stopped };
std::string_view to_string(InstanceStatus s) noexcept;

using EnvironmentState = std::map<std::string, InstanceStatus>;

// Applies directives in order, then starts every instance no start_service
// directive has started yet. On failure every created instance and network is
// torn down and ProvisionError (1-based directive index) is thrown; if the
// teardown itself fails, RollbackError is thrown instead.
EnvironmentState execute_plan(const ProvisionPlan& plan, Driver& driver);

}  // namespace crange
