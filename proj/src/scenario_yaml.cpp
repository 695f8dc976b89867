// SPDX-License-Identifier: Apache-2.0
//
// YAML reading and writing for scenario documents. Unknown keys and unknown
// enum values are rejected.
#include <yaml-cpp/yaml.h>

#include <initializer_list>
#include <string>

#include "crange/error.hpp"
#include "crange/scenario.hpp"

namespace crange {

namespace {

void require_map(const YAML::Node& n, const std::string& field) {
  if (!n.IsMap()) throw SchemaError(field, "expected a mapping");
}

void reject_unknown_keys(const YAML::Node& n, const std::string& field,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) throw SchemaError(field + "." + key, "unknown key");
  }
}

std::string as_string(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) throw SchemaError(field, "expected a string");
  return n.Scalar();
}

std::string required_string(const YAML::Node& map, const char* key, const std::string& base) {
  const auto n = map[key];
  if (!n) throw SchemaError(base + "." + key, "missing required key");
  return as_string(n, base + "." + key);
}

std::string optional_string(const YAML::Node& map, const char* key, const std::string& base) {
  const auto n = map[key];
  if (!n || n.IsNull()) return {};
  return as_string(n, base + "." + key);
}

long as_long(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) throw SchemaError(field, "expected an integer");
  try {
    return n.as<long>();
  } catch (const YAML::Exception&) {
    throw SchemaError(field, "expected an integer, got '" + n.Scalar() + "'");
  }
}

long required_long(const YAML::Node& map, const char* key, const std::string& base) {
  const auto n = map[key];
  if (!n) throw SchemaError(base + "." + key, "missing required key");
  return as_long(n, base + "." + key);
}

YAML::Node optional_seq(const YAML::Node& map, const char* key, const std::string& base) {
  const auto n = map[key];
  if (n && !n.IsNull() && !n.IsSequence()) throw SchemaError(base + "." + key, "expected a list");
  return n;
}

template <typename Enum, typename Fn>
Enum as_enum(const YAML::Node& n, const std::string& field, Fn from_string) {
  const auto text = as_string(n, field);
  try {
    return from_string(text);
  } catch (const SchemaError& e) {
    throw SchemaError(field, e.reason());
  }
}

VulnRef parse_vuln(const YAML::Node& n, const std::string& field) {
  VulnRef v;
  if (n.IsScalar()) {
    v.id = n.Scalar();
    return v;
  }
  require_map(n, field);
  reject_unknown_keys(n, field, {"id", "category", "cwe"});
  v.id = required_string(n, "id", field);
  v.category = optional_string(n, "category", field);
  v.cwe = optional_string(n, "cwe", field);
  return v;
}

ServiceSpec parse_service(const YAML::Node& n, const std::string& field) {
  require_map(n, field);
  reject_unknown_keys(n, field, {"name", "port", "protocol", "version"});
  ServiceSpec svc;
  svc.name = required_string(n, "name", field);
  svc.port = static_cast<int>(required_long(n, "port", field));
  if (n["protocol"]) svc.protocol = as_string(n["protocol"], field + ".protocol");
  svc.version = optional_string(n, "version", field);
  return svc;
}

Node parse_node(const YAML::Node& n, const std::string& field) {
  require_map(n, field);
  reject_unknown_keys(n, field,
                      {"id", "role", "image", "backend", "services", "vulns", "limits",
                       "export_exclude"});
  Node node;
  node.id = required_string(n, "id", field);
  if (!n["role"]) throw SchemaError(field + ".role", "missing required key");
  node.role = as_enum<Role>(n["role"], field + ".role", role_from_string);
  node.image = optional_string(n, "image", field);
  if (n["backend"] && !n["backend"].IsNull()) {
    node.backend = as_enum<Backend>(n["backend"], field + ".backend", backend_from_string);
  }
  if (auto seq = optional_seq(n, "services", field)) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      node.services.push_back(
          parse_service(seq[i], field + ".services[" + std::to_string(i) + "]"));
    }
  }
  if (auto seq = optional_seq(n, "vulns", field)) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      node.vulns.push_back(parse_vuln(seq[i], field + ".vulns[" + std::to_string(i) + "]"));
    }
  }
  if (const auto lim = n["limits"]; lim && !lim.IsNull()) {
    const std::string lf = field + ".limits";
    require_map(lim, lf);
    reject_unknown_keys(lim, lf, {"memory_mb", "storage_mb", "cpu_pct"});
    ResourceCaps caps;
    caps.memory_mb = required_long(lim, "memory_mb", lf);
    caps.storage_mb = required_long(lim, "storage_mb", lf);
    caps.cpu_pct = static_cast<int>(required_long(lim, "cpu_pct", lf));
    node.limits = caps;
  }
  if (auto seq = optional_seq(n, "export_exclude", field)) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      node.export_exclude.push_back(
          as_string(seq[i], field + ".export_exclude[" + std::to_string(i) + "]"));
    }
  }
  return node;
}

std::set<std::string> parse_id_set(const YAML::Node& map, const char* key,
                                   const std::string& base) {
  std::set<std::string> out;
  if (auto seq = optional_seq(map, key, base)) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      out.insert(as_string(seq[i], base + "." + key + "[" + std::to_string(i) + "]"));
    }
  }
  return out;
}

Segment parse_segment(const YAML::Node& n, const std::string& field) {
  require_map(n, field);
  reject_unknown_keys(n, field, {"id", "members", "links"});
  Segment seg;
  seg.id = required_string(n, "id", field);
  seg.members = parse_id_set(n, "members", field);
  seg.links = parse_id_set(n, "links", field);
  return seg;
}

AttackStep parse_step(const YAML::Node& n, const std::string& field) {
  require_map(n, field);
  reject_unknown_keys(n, field, {"index", "actor", "target", "action", "requires_vuln"});
  AttackStep st;
  st.index = static_cast<int>(required_long(n, "index", field));
  st.actor = required_string(n, "actor", field);
  st.target = required_string(n, "target", field);
  if (!n["action"]) throw SchemaError(field + ".action", "missing required key");
  st.action = as_enum<Action>(n["action"], field + ".action", action_from_string);
  if (const auto rv = n["requires_vuln"]; rv && !rv.IsNull()) {
    st.requires_vuln = parse_vuln(rv, field + ".requires_vuln");
  }
  return st;
}

void emit_vuln(YAML::Emitter& out, const VulnRef& v) {
  if (v.category.empty() && v.cwe.empty()) {
    out << v.id;
    return;
  }
  out << YAML::Flow << YAML::BeginMap << YAML::Key << "id" << YAML::Value << v.id;
  if (!v.category.empty()) out << YAML::Key << "category" << YAML::Value << v.category;
  if (!v.cwe.empty()) out << YAML::Key << "cwe" << YAML::Value << v.cwe;
  out << YAML::EndMap;
}

void emit_string_list(YAML::Emitter& out, const char* key, const auto& items) {
  out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& s : items) out << s;
  out << YAML::EndSeq;
}

}  // namespace

Scenario parse_scenario(std::string_view doc) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(doc));
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, static_cast<std::size_t>(e.mark.line) + 1,
                     static_cast<std::size_t>(e.mark.column) + 1);
  }
  require_map(root, "$");
  reject_unknown_keys(root, "$", {"name", "nodes", "segments", "steps"});

  Scenario s;
  s.name = required_string(root, "name", "$");
  if (auto seq = optional_seq(root, "nodes", "$")) {
    for (std::size_t i = 0; i < seq.size(); ++i)
      s.nodes.push_back(parse_node(seq[i], "nodes[" + std::to_string(i) + "]"));
  }
  if (auto seq = optional_seq(root, "segments", "$")) {
    for (std::size_t i = 0; i < seq.size(); ++i)
      s.segments.push_back(parse_segment(seq[i], "segments[" + std::to_string(i) + "]"));
  }
  if (auto seq = optional_seq(root, "steps", "$")) {
    for (std::size_t i = 0; i < seq.size(); ++i)
      s.steps.push_back(parse_step(seq[i], "steps[" + std::to_string(i) + "]"));
  }

  for (const auto& d : check_invariants(s)) {
    if (d.severity == Severity::error) throw SchemaError(d.field, d.message);
  }
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << s.name;

  out << YAML::Key << "nodes" << YAML::Value << YAML::BeginSeq;
  for (const Node& n : s.nodes) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << n.id;
    out << YAML::Key << "role" << YAML::Value << std::string(to_string(n.role));
    if (!n.image.empty()) out << YAML::Key << "image" << YAML::Value << n.image;
    if (n.backend) out << YAML::Key << "backend" << YAML::Value << std::string(to_string(*n.backend));
    if (!n.services.empty()) {
      out << YAML::Key << "services" << YAML::Value << YAML::BeginSeq;
      for (const auto& svc : n.services) {
        out << YAML::Flow << YAML::BeginMap;
        out << YAML::Key << "name" << YAML::Value << svc.name;
        out << YAML::Key << "port" << YAML::Value << svc.port;
        out << YAML::Key << "protocol" << YAML::Value << svc.protocol;
        if (!svc.version.empty()) out << YAML::Key << "version" << YAML::Value << svc.version;
        out << YAML::EndMap;
      }
      out << YAML::EndSeq;
    }
    if (!n.vulns.empty()) {
      out << YAML::Key << "vulns" << YAML::Value << YAML::BeginSeq;
      for (const auto& v : n.vulns) emit_vuln(out, v);
      out << YAML::EndSeq;
    }
    if (n.limits) {
      out << YAML::Key << "limits" << YAML::Value << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "memory_mb" << YAML::Value << n.limits->memory_mb;
      out << YAML::Key << "storage_mb" << YAML::Value << n.limits->storage_mb;
      out << YAML::Key << "cpu_pct" << YAML::Value << n.limits->cpu_pct;
      out << YAML::EndMap;
    }
    if (!n.export_exclude.empty()) emit_string_list(out, "export_exclude", n.export_exclude);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "segments" << YAML::Value << YAML::BeginSeq;
  for (const Segment& seg : s.segments) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << seg.id;
    emit_string_list(out, "members", seg.members);
    emit_string_list(out, "links", seg.links);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "steps" << YAML::Value << YAML::BeginSeq;
  for (const AttackStep& st : s.steps) {
    out << YAML::BeginMap;
    out << YAML::Key << "index" << YAML::Value << st.index;
    out << YAML::Key << "actor" << YAML::Value << st.actor;
    out << YAML::Key << "target" << YAML::Value << st.target;
    out << YAML::Key << "action" << YAML::Value << std::string(to_string(st.action));
    if (st.requires_vuln) {
      out << YAML::Key << "requires_vuln" << YAML::Value;
      emit_vuln(out, *st.requires_vuln);
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace crange
