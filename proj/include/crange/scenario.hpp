// SPDX-License-Identifier: Apache-2.0
//
// Declarative exercise scenarios: nodes placed on network segments, the
// vulnerabilities they carry, and the ordered attack steps an exercise walks
// through. Segment links are directed; a two-way link is declared on both
// segments.
#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "crange/resources.hpp"

namespace crange {

enum class Role { web_server, db_server, client, attacker, security_device };
enum class Action {
  scan,
  exploit,
  backdoor,
  pivot,
  privilege_escalation,
  credential_theft,
  exfiltration
};

std::string_view to_string(Role r) noexcept;
std::string_view to_string(Action a) noexcept;
Role role_from_string(std::string_view s);      // throws SchemaError
Action action_from_string(std::string_view s);  // throws SchemaError

struct ServiceSpec {
  std::string name;
  int port = 0;
  std::string protocol = "tcp";
  std::string version;

  friend bool operator==(const ServiceSpec&, const ServiceSpec&) = default;
};

// A vulnerability reference: CVE-YYYY-NNNN, OSVDB-N or MSF-<module path>.
// category and cwe are optional tags used by container suitability rules.
struct VulnRef {
  std::string id;
  std::string category;
  std::string cwe;

  friend bool operator==(const VulnRef&, const VulnRef&) = default;
};

bool is_recognized_vuln_id(std::string_view id) noexcept;

struct Node {
  std::string id;
  Role role = Role::client;
  std::string image;
  std::optional<Backend> backend;
  std::vector<ServiceSpec> services;
  std::vector<VulnRef> vulns;
  std::optional<ResourceCaps> limits;
  // Additional image-export exclusions for container nodes.
  std::vector<std::string> export_exclude;

  bool has_vuln(std::string_view id) const noexcept;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Segment {
  std::string id;
  std::set<std::string> members;
  std::set<std::string> links;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct AttackStep {
  int index = 0;
  std::string actor;
  std::string target;
  Action action = Action::scan;
  std::optional<VulnRef> requires_vuln;

  friend bool operator==(const AttackStep&, const AttackStep&) = default;
};

struct Scenario {
  std::string name;
  std::vector<Node> nodes;
  std::vector<Segment> segments;
  std::vector<AttackStep> steps;

  const Node* find_node(std::string_view id) const noexcept;
  const Segment* find_segment(std::string_view id) const noexcept;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class Severity { error, warning };
std::string_view to_string(Severity s) noexcept;

struct Diagnostic {
  Severity severity = Severity::error;
  int step = 0;  // 0 when the diagnostic is not about an attack step
  std::string subject;
  std::string field;  // document path, e.g. "steps[3].target"
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

// Parses a scenario document (YAML) and checks every structural invariant.
// Throws ParseError on malformed text and SchemaError on the first violation.
Scenario parse_scenario(std::string_view doc);

// Canonical YAML rendering; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

// Structural invariants only: ids, references, ports, identifiers, step
// numbering. Ordered like validate_scenario.
std::vector<Diagnostic> check_invariants(const Scenario& s);

// Invariants plus step feasibility (reachability, required vulnerabilities)
// and operational warnings. Ordered by (step, subject, message); empty iff
// the scenario is clean.
std::vector<Diagnostic> validate_scenario(const Scenario& s);

bool has_errors(const std::vector<Diagnostic>& diags) noexcept;

// One diagnostic per line: "<severity>: <subject>: <message>".
std::string format_diagnostics(const std::vector<Diagnostic>& diags);

// Shortest segment path from a segment holding `from` to one holding `to`,
// following directed links. Among equally short paths the lexicographically
// smallest sequence of segment ids wins. from == to yields the node's first
// segment (or an empty path for a node attached to no segment). Throws
// PreconditionError for unknown node ids.
std::optional<std::vector<std::string>> reachability(const Scenario& s, std::string_view from,
                                                     std::string_view to);

}  // namespace crange
