// SPDX-License-Identifier: Apache-2.0
#include "crange/provision.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <filesystem>

#include "crange/builtin_data.hpp"
#include "crange/error.hpp"
#include "shell_quote.hpp"

namespace crange {

namespace {

using detail::shell_word;

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string normalize_absolute(std::string_view raw) {
  std::string p = std::filesystem::path(raw).lexically_normal().generic_string();
  while (p.size() > 1 && p.back() == '/') p.pop_back();
  return p;
}

const std::string& param(const Directive& d, const std::string& key) {
  auto it = d.params.find(key);
  if (it == d.params.end()) throw PreconditionError("missing parameter '" + key + "'");
  return it->second;
}

long long_param(const Directive& d, const std::string& key) {
  const auto& text = param(d, key);
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw PreconditionError("parameter '" + key + "' is not an integer");
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::string bare_cwe(std::string_view s) {
  if (s.size() > 4 && (s.substr(0, 4) == "CWE-" || s.substr(0, 4) == "cwe-")) s.remove_prefix(4);
  return std::string(s);
}

}  // namespace

std::string_view to_string(DirectiveKind k) noexcept {
  switch (k) {
    case DirectiveKind::create_network: return "create_network";
    case DirectiveKind::create_instance: return "create_instance";
    case DirectiveKind::apply_limits: return "apply_limits";
    case DirectiveKind::start_service: return "start_service";
  }
  return "?";
}

std::string_view to_string(Verdict v) noexcept {
  return v == Verdict::reproducible ? "reproducible" : "excluded";
}

std::string_view to_string(ExclusionReason r) noexcept {
  switch (r) {
    case ExclusionReason::ok: return "ok";
    case ExclusionReason::kernel_level: return "kernel_level";
    case ExclusionReason::host_config: return "host_config";
    case ExclusionReason::shared_resource_attack: return "shared_resource_attack";
    case ExclusionReason::physical: return "physical";
  }
  return "?";
}

std::string_view to_string(InstanceStatus s) noexcept {
  switch (s) {
    case InstanceStatus::created: return "created";
    case InstanceStatus::running: return "running";
    case InstanceStatus::stopped: return "stopped";
  }
  return "?";
}

ProvisionPlan plan_environment(const Scenario& s, Backend backend) {
  const auto diags = validate_scenario(s);
  if (has_errors(diags)) {
    auto first = std::find_if(diags.begin(), diags.end(),
                              [](const Diagnostic& d) { return d.severity == Severity::error; });
    throw PreconditionError("scenario invalid: " + first->message);
  }

  ProvisionPlan plan;
  plan.environment_id = s.name + "-" + std::string(to_string(backend));

  for (const Segment& seg : s.segments) {
    // Containers join the host's own segment rather than a private bridge.
    plan.directives.push_back(
        {DirectiveKind::create_network,
         seg.id,
         {{"attach", backend == Backend::container ? "host-segment" : "bridged"}}});
  }

  for (const Node& n : s.nodes) {
    if (n.backend && *n.backend != backend) continue;
    if (n.image.empty()) throw PreconditionError("node '" + n.id + "' has an empty image reference");

    std::vector<std::string> networks;
    for (const Segment& seg : s.segments) {
      if (seg.members.count(n.id)) networks.push_back(seg.id);
    }
    Directive create{DirectiveKind::create_instance,
                     n.id,
                     {{"image", n.image},
                      {"backend", std::string(to_string(backend))},
                      {"networks", join(networks, ',')}}};
    if (n.limits) create.params["storage_mb"] = std::to_string(n.limits->storage_mb);
    plan.directives.push_back(std::move(create));

    if (n.limits) {
      plan.directives.push_back({DirectiveKind::apply_limits,
                                 n.id,
                                 {{"memory_mb", std::to_string(n.limits->memory_mb)},
                                  {"storage_mb", std::to_string(n.limits->storage_mb)},
                                  {"cpu_pct", std::to_string(n.limits->cpu_pct)}}});
    }
    for (const ServiceSpec& svc : n.services) {
      plan.directives.push_back({DirectiveKind::start_service,
                                 n.id,
                                 {{"service", svc.name},
                                  {"port", std::to_string(svc.port)},
                                  {"protocol", svc.protocol},
                                  {"version", svc.version}}});
    }
  }
  return plan;
}

std::string format_plan(const ProvisionPlan& plan) {
  std::string out;
  for (const auto& d : plan.directives) {
    out += to_string(d.kind);
    out += ' ';
    out += d.subject;
    for (const auto& [k, v] : d.params) {
      out += ' ';
      out += k;
      out += '=';
      out += shell_word(v);
    }
    out += '\n';
  }
  return out;
}

bool FileSetSpec::includes(std::string_view path) const {
  const std::string p = normalize_absolute(path);
  const std::string root = normalize_absolute(include_root);
  if (root != "/" && p != root && !starts_with(p, root + "/")) return false;
  for (const auto& ex : exclude) {
    if (p == ex || starts_with(p, ex + "/")) return false;
  }
  return true;
}

FileSetSpec image_export_plan(const Node& node) {
  if (node.backend != Backend::container) {
    throw PreconditionError("node '" + node.id + "' is not container-backed");
  }
  FileSetSpec spec;
  spec.exclude = mandatory_export_exclusions();
  for (const auto& extra : node.export_exclude) {
    if (extra.empty() || extra.front() != '/') {
      throw SchemaError("export_exclude", "'" + extra + "' is not an absolute path");
    }
    const auto p = normalize_absolute(extra);
    if (p == "/") throw SchemaError("export_exclude", "cannot exclude the export root");
    spec.exclude.insert(p);
  }
  return spec;
}

std::string export_command(const FileSetSpec& spec, std::string_view image_name) {
  std::string out = "tar --numeric-owner -C " + shell_word(spec.include_root) + " -cpf -";
  for (const auto& ex : spec.exclude) out += " --exclude=" + shell_word("." + ex);
  out += " . | docker import - " + shell_word(image_name);
  return out;
}

SuitabilityRules parse_suitability_rules(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, static_cast<std::size_t>(e.mark.line) + 1,
                     static_cast<std::size_t>(e.mark.column) + 1);
  }
  if (!root.IsMap() || !root["rules"] || !root["rules"].IsSequence()) {
    throw SchemaError("rules", "expected a top-level 'rules' list");
  }
  SuitabilityRules out;
  const auto rules = root["rules"];
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto r = rules[i];
    const std::string field = "rules[" + std::to_string(i) + "]";
    if (!r.IsMap()) throw SchemaError(field, "expected a mapping");
    auto str = [&](const char* key, bool required) -> std::string {
      if (!r[key]) {
        if (required) throw SchemaError(field + "." + key, "missing required key");
        return {};
      }
      if (!r[key].IsScalar()) throw SchemaError(field + "." + key, "expected a string");
      return r[key].Scalar();
    };

    SuitabilityRule rule;
    rule.match = str("match", true);
    if (!starts_with(rule.match, "category:") && !starts_with(rule.match, "cwe:") &&
        !starts_with(rule.match, "id:")) {
      throw SchemaError(field + ".match", "expected category:, cwe: or id: prefix");
    }
    const auto verdict = str("verdict", true);
    if (verdict == "reproducible")
      rule.outcome.verdict = Verdict::reproducible;
    else if (verdict == "excluded")
      rule.outcome.verdict = Verdict::excluded;
    else
      throw SchemaError(field + ".verdict", "unknown verdict '" + verdict + "'");

    const auto reason = str("reason", true);
    bool known = false;
    for (auto cand : {ExclusionReason::ok, ExclusionReason::kernel_level,
                      ExclusionReason::host_config, ExclusionReason::shared_resource_attack,
                      ExclusionReason::physical}) {
      if (to_string(cand) == reason) {
        rule.outcome.reason = cand;
        known = true;
      }
    }
    if (!known) throw SchemaError(field + ".reason", "unknown reason '" + reason + "'");
    if ((rule.outcome.verdict == Verdict::excluded) != (rule.outcome.reason != ExclusionReason::ok)) {
      throw SchemaError(field, "verdict 'excluded' requires a reason other than 'ok' and vice versa");
    }
    rule.outcome.note = str("note", false);
    out.rules.push_back(std::move(rule));
  }
  return out;
}

const SuitabilityRules& builtin_suitability_rules() {
  static const SuitabilityRules rules = parse_suitability_rules(builtin::suitability_rules_yaml());
  return rules;
}

Suitability container_suitability(const VulnRef& v, const SuitabilityRules& rules) {
  if (!is_recognized_vuln_id(v.id)) {
    throw SchemaError("vuln.id", "unrecognized vulnerability identifier '" + v.id + "'");
  }
  for (const auto& rule : rules.rules) {
    const std::string_view m = rule.match;
    bool hit = false;
    if (starts_with(m, "category:")) {
      const auto prefix = m.substr(9);
      hit = !v.category.empty() && starts_with(v.category, prefix);
    } else if (starts_with(m, "cwe:")) {
      hit = !v.cwe.empty() && bare_cwe(v.cwe) == bare_cwe(m.substr(4));
    } else if (starts_with(m, "id:")) {
      hit = starts_with(v.id, m.substr(3));
    }
    if (hit) return rule.outcome;
  }
  return {Verdict::reproducible, ExclusionReason::ok, "no exclusion rule matched"};
}

EnvironmentState execute_plan(const ProvisionPlan& plan, Driver& driver) {
  EnvironmentState state;
  std::vector<std::string> instances;
  std::vector<std::string> networks;
  std::map<std::string, std::size_t> created_at;

  auto rollback_and_throw = [&](std::size_t index, const std::string& cause) {
    std::vector<std::string> failures;
    for (auto it = instances.rbegin(); it != instances.rend(); ++it) {
      try {
        driver.destroy(*it);
      } catch (const DriverError& e) {
        failures.push_back("instance " + *it + ": " + e.what());
      }
    }
    for (auto it = networks.rbegin(); it != networks.rend(); ++it) {
      try {
        driver.remove_network(*it);
      } catch (const DriverError& e) {
        failures.push_back("network " + *it + ": " + e.what());
      }
    }
    if (!failures.empty()) throw RollbackError(index, cause, std::move(failures));
    throw ProvisionError(index, cause);
  };

  auto ensure_started = [&](const std::string& id) {
    auto it = state.find(id);
    if (it == state.end()) throw DriverError("instance '" + id + "' was never created");
    if (it->second != InstanceStatus::running) {
      driver.start(id);
      it->second = InstanceStatus::running;
    }
  };

  for (std::size_t i = 0; i < plan.directives.size(); ++i) {
    const Directive& d = plan.directives[i];
    const std::size_t index = i + 1;
    try {
      switch (d.kind) {
        case DirectiveKind::create_network:
          networks.push_back(d.subject);
          driver.create_network(d.subject, d.params);
          break;
        case DirectiveKind::create_instance: {
          InstanceSpec spec;
          spec.image = param(d, "image");
          spec.backend = backend_from_string(param(d, "backend"));
          spec.networks = split(param(d, "networks"), ',');
          if (d.params.count("storage_mb")) spec.storage_mb = long_param(d, "storage_mb");
          instances.push_back(d.subject);
          driver.create(d.subject, spec);
          state[d.subject] = InstanceStatus::created;
          created_at[d.subject] = index;
          break;
        }
        case DirectiveKind::apply_limits: {
          ResourceCaps caps;
          caps.memory_mb = long_param(d, "memory_mb");
          caps.storage_mb = long_param(d, "storage_mb");
          caps.cpu_pct = static_cast<int>(long_param(d, "cpu_pct"));
          check(caps);
          driver.apply_limits(d.subject, caps);
          break;
        }
        case DirectiveKind::start_service: {
          ServiceSpec svc;
          svc.name = param(d, "service");
          svc.port = static_cast<int>(long_param(d, "port"));
          svc.protocol = param(d, "protocol");
          svc.version = d.params.count("version") ? d.params.at("version") : std::string{};
          ensure_started(d.subject);
          driver.start_service(d.subject, svc);
          break;
        }
      }
    } catch (const Error& e) {
      rollback_and_throw(index, std::string(to_string(d.kind)) + " " + d.subject + ": " + e.what());
    }
  }

  // Instances without services are booted once every directive has run; a
  // failure here is attributed to the instance's create_instance directive.
  for (const auto& id : instances) {
    try {
      ensure_started(id);
    } catch (const Error& e) {
      rollback_and_throw(created_at[id], "start " + id + ": " + e.what());
    }
  }
  return state;
}

}  // namespace crange
