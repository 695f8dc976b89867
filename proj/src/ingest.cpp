// SPDX-License-Identifier: Apache-2.0
#include "crange/ingest.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>

#include <regex>
#include <set>
#include <sstream>
#include <vector>

#include "crange/builtin_data.hpp"
#include "crange/error.hpp"

namespace crange {

namespace pt = boost::property_tree;
using nlohmann::json;

namespace {

pt::ptree load_xml(std::string_view text) {
  std::istringstream in{std::string(text)};
  pt::ptree tree;
  try {
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(e.message(), e.line());
  }
  return tree;
}

std::string attr(const pt::ptree& node, const char* name) {
  return node.get<std::string>(std::string("<xmlattr>.") + name, "");
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// Scalar JSON value as text; numbers are accepted where tools emit strings.
std::string json_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_null()) return {};
  return v.dump();
}

std::string url_path(std::string_view uri) {
  std::string_view rest = uri;
  if (auto scheme = rest.find("://"); scheme != std::string_view::npos) {
    rest.remove_prefix(scheme + 3);
    const auto slash = rest.find('/');
    if (slash == std::string_view::npos) return "/";
    rest.remove_prefix(slash);
  }
  rest = rest.substr(0, rest.find_first_of("?#"));
  return rest.empty() ? "/" : std::string(rest);
}

std::string zap_risk(const std::string& code) {
  if (code == "0") return "Informational";
  if (code == "1") return "Low";
  if (code == "2") return "Medium";
  if (code == "3") return "High";
  return code;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

// One CSV record; quoted fields may contain commas and doubled quotes but
// not line breaks.
std::vector<std::string> split_csv(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      if (!cur.empty() || was_quoted) throw ParseError("unexpected quote", line_no, i + 1);
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      if (was_quoted) throw ParseError("text after closing quote", line_no, i + 1);
      cur += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line_no, line.size());
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

CweMap CweMap::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object()) throw SchemaError("cwe_map", "expected an object");
  CweMap m;
  for (const auto& [section, body] : doc.items()) {
    if (section != "exact" && section != "prefix") {
      throw SchemaError(section, "unknown key");
    }
    if (!body.is_object()) throw SchemaError(section, "expected an object");
    for (const auto& [id, cwe] : body.items()) {
      if (id.empty()) throw SchemaError(section, "empty detector id");
      const Cwe c = Cwe::parse(json_text(cwe));
      if (section == "exact")
        m.set_exact(id, c);
      else
        m.set_prefix(id, c);
    }
  }
  return m;
}

const CweMap& CweMap::builtin() {
  static const CweMap m = from_json(builtin::cwe_map_json());
  return m;
}

void CweMap::set_exact(std::string id, Cwe cwe) { exact_[std::move(id)] = cwe; }
void CweMap::set_prefix(std::string prefix, Cwe cwe) { prefix_[std::move(prefix)] = cwe; }

Cwe CweMap::lookup(std::string_view detector_id) const {
  if (auto it = exact_.find(detector_id); it != exact_.end()) return it->second;
  const Cwe* best = nullptr;
  std::size_t best_len = 0;
  for (const auto& [prefix, cwe] : prefix_) {
    if (prefix.size() >= best_len && detector_id.substr(0, prefix.size()) == prefix) {
      best = &cwe;
      best_len = prefix.size();
    }
  }
  return best ? *best : Cwe::noinfo();
}

bool CweMap::has_entry(std::string_view detector_id) const {
  if (exact_.count(detector_id)) return true;
  for (const auto& [prefix, cwe] : prefix_) {
    if (detector_id.substr(0, prefix.size()) == prefix) return true;
  }
  return false;
}

Cwe map_cve_to_cwe(std::string_view detector_id, const CweMap& m) { return m.lookup(detector_id); }

FindingSet parse_nmap(std::string_view xml, Environment env, const CweMap& m) {
  const auto tree = load_xml(xml);
  const auto root = tree.get_child_optional("nmaprun");
  if (!root) throw SchemaError("nmaprun", "missing nmaprun element");

  FindingSet fs(env);
  bool saw_host = false;
  for (const auto& [tag, host] : *root) {
    if (tag != "host") continue;
    saw_host = true;
    std::string target;
    for (const auto& [htag, child] : host) {
      if (htag == "address" && target.empty()) target = attr(child, "addr");
    }
    const auto ports = host.get_child_optional("ports");
    if (!ports) continue;
    for (const auto& [ptag, port] : *ports) {
      if (ptag != "port") continue;
      if (port.get<std::string>("state.<xmlattr>.state", "") != "open") continue;
      const std::string portid = attr(port, "portid");
      const std::string proto = attr(port, "protocol");
      if (portid.empty()) throw SchemaError("port.portid", "missing port number");

      std::string name, version;
      if (const auto svc = port.get_child_optional("service")) {
        name = attr(*svc, "product");
        if (name.empty()) name = attr(*svc, "name");
        version = attr(*svc, "version");
      }
      if (name.empty()) name = "unknown";
      Finding f;
      f.tool = Tool::nmap;
      f.environment = env;
      f.target = target;
      f.detector_id = "service:" + name + (version.empty() ? "" : "/" + version);
      f.cwe = m.lookup(f.detector_id);
      f.location = portid + "/" + (proto.empty() ? "tcp" : proto);
      fs.add(f);
    }
  }
  if (!saw_host) throw SchemaError("host", "report has no host element");

  const std::string elapsed = root->get<std::string>("runstats.finished.<xmlattr>.elapsed", "");
  if (!elapsed.empty()) fs.metadata["scan_duration_s"] = elapsed;
  return fs;
}

FindingSet parse_openvas(std::string_view xml, Environment env, const CweMap& m) {
  const auto tree = load_xml(xml);
  auto report = tree.get_child_optional("report");
  if (!report) throw SchemaError("report", "missing report element");
  // Exports from the manager nest the report body in a second <report>.
  if (auto inner = report->get_child_optional("report")) report = inner;

  FindingSet fs(env);
  const auto results = report->get_child_optional("results");
  if (!results) return fs;
  for (const auto& [tag, result] : *results) {
    if (tag != "result") continue;
    const auto nvt = result.get_child_optional("nvt");
    if (!nvt) throw SchemaError("result.nvt", "result without nvt element");

    std::string detector;
    const std::string cves = trim(nvt->get<std::string>("cve", ""));
    if (!cves.empty() && cves != "NOCVE") detector = trim(cves.substr(0, cves.find(',')));
    if (detector.empty()) detector = attr(*nvt, "oid");
    if (detector.empty()) throw SchemaError("result.nvt.oid", "result has neither CVE nor oid");

    Finding f;
    f.tool = Tool::openvas;
    f.environment = env;
    f.target = trim(result.get<std::string>("host", ""));
    f.detector_id = detector;
    f.cwe = m.lookup(detector);
    f.location = trim(result.get<std::string>("port", ""));
    const std::string threat = trim(result.get<std::string>("threat", ""));
    if (!threat.empty()) f.severity = threat;
    fs.add(f);
  }
  return fs;
}

FindingSet parse_zap(std::string_view text, Environment env, const CweMap& m) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object() || !doc.contains("site")) throw SchemaError("site", "missing site list");
  json sites = doc["site"];
  if (sites.is_object()) sites = json::array({sites});
  if (!sites.is_array()) throw SchemaError("site", "expected a list");

  FindingSet fs(env);
  for (std::size_t s = 0; s < sites.size(); ++s) {
    const json& site = sites[s];
    const std::string field = "site[" + std::to_string(s) + "]";
    if (!site.is_object()) throw SchemaError(field, "expected an object");
    if (!site.contains("alerts") || !site["alerts"].is_array()) {
      throw SchemaError(field + ".alerts", "missing alerts array");
    }
    const std::string target = site.contains("@host") ? json_text(site["@host"]) : "";

    const json& alerts = site["alerts"];
    for (std::size_t a = 0; a < alerts.size(); ++a) {
      const json& alert = alerts[a];
      const std::string afield = field + ".alerts[" + std::to_string(a) + "]";
      if (!alert.is_object() || !alert.contains("pluginid")) {
        throw SchemaError(afield + ".pluginid", "missing plugin id");
      }
      Finding f;
      f.tool = Tool::zap;
      f.environment = env;
      f.target = target;
      f.detector_id = "zap:" + json_text(alert["pluginid"]);
      const std::string cweid = alert.contains("cweid") ? json_text(alert["cweid"]) : "";
      if (cweid.empty() || cweid == "-1" || cweid == "0")
        f.cwe = m.lookup(f.detector_id);
      else
        f.cwe = Cwe::parse(cweid);
      if (alert.contains("riskcode")) f.severity = zap_risk(json_text(alert["riskcode"]));

      if (!alert.contains("instances") || !alert["instances"].is_array()) {
        throw SchemaError(afield + ".instances", "missing instances array");
      }
      for (const json& inst : alert["instances"]) {
        if (!inst.is_object() || !inst.contains("uri")) {
          throw SchemaError(afield + ".instances", "instance without uri");
        }
        f.location = url_path(json_text(inst["uri"]));
        fs.add(f);
      }
    }
  }
  return fs;
}

FindingSet parse_nikto(std::string_view csv, Environment env, const CweMap& m) {
  FindingSet fs(env);
  const auto lines = split_lines(csv);
  bool first = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line, i + 1);
    const bool header = first && !fields.empty() && trim(fields[0]) == "host";
    first = false;
    if (fields.size() != 4) {
      throw ParseError("expected 4 columns, found " + std::to_string(fields.size()), i + 1);
    }
    if (header) continue;

    std::string osvdb = trim(fields[2]);
    if (osvdb.rfind("OSVDB-", 0) == 0) osvdb.erase(0, 6);
    if (osvdb.empty() || osvdb.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("invalid OSVDB id '" + fields[2] + "'", i + 1);
    }
    Finding f;
    f.tool = Tool::nikto2;
    f.environment = env;
    f.target = trim(fields[0]);
    f.detector_id = "OSVDB-" + osvdb;
    f.cwe = m.lookup(f.detector_id);
    f.location = trim(fields[1]) + "/tcp";
    fs.add(f);
  }
  return fs;
}

FindingSet parse_msf_log(std::string_view log, Environment env, const CweMap& m) {
  static const std::regex line_re(R"(^\s*(\S+)\s+(SUCCESS|FAIL)\s*$)");
  FindingSet fs(env);
  const auto lines = split_lines(log);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string t = trim(lines[i]);
    if (t.empty() || t.front() == '#') continue;
    std::smatch match;
    if (!std::regex_match(t, match, line_re)) {
      throw ParseError("unrecognized run-log line '" + t + "'", i + 1);
    }
    if (match[2] != "SUCCESS") continue;
    Finding f;
    f.tool = Tool::msf;
    f.environment = env;
    f.detector_id = match[1];
    f.cwe = m.lookup(f.detector_id);
    fs.add(f);
  }
  return fs;
}

FindingSet parse_report(Tool tool, std::string_view text, Environment env, const CweMap& m) {
  switch (tool) {
    case Tool::openvas: return parse_openvas(text, env, m);
    case Tool::nmap: return parse_nmap(text, env, m);
    case Tool::zap: return parse_zap(text, env, m);
    case Tool::nikto2: return parse_nikto(text, env, m);
    case Tool::msf: return parse_msf_log(text, env, m);
  }
  throw PreconditionError("unknown tool");
}

std::string write_jsonl(const FindingSet& fs) {
  std::string out;
  for (const auto& [key, e] : fs.entries()) {
    nlohmann::ordered_json line;
    line["tool"] = to_string(key.tool);
    line["env"] = to_string(fs.environment());
    line["target"] = key.target;
    line["detector_id"] = key.detector_id;
    line["cwe"] = e.cwe.str();
    line["location"] = key.location;
    line["count"] = e.count;
    out += line.dump();
    out += '\n';
  }
  return out;
}

FindingSet read_jsonl(std::string_view text, Environment empty_env) {
  std::optional<FindingSet> fs;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const std::string where = "line " + std::to_string(i + 1);
    json obj;
    try {
      obj = json::parse(lines[i]);
    } catch (const json::parse_error& e) {
      throw ParseError(e.what(), i + 1);
    }
    if (!obj.is_object()) throw SchemaError(where, "expected an object");
    for (const auto& [k, v] : obj.items()) {
      static const std::set<std::string> known = {"tool",     "env",   "target",  "detector_id",
                                                  "cwe",      "location", "count", "severity"};
      if (!known.count(k)) throw SchemaError(where + "." + k, "unknown key");
    }
    auto str = [&](const char* k) -> std::string {
      if (!obj.contains(k)) throw SchemaError(where + "." + k, "missing required key");
      if (!obj[k].is_string()) throw SchemaError(where + "." + k, "expected a string");
      return obj[k].get<std::string>();
    };

    Finding f;
    try {
      f.tool = tool_from_string(str("tool"));
      f.environment = environment_from_string(str("env"));
      if (!obj.contains("cwe")) throw SchemaError("cwe", "missing required key");
      const json& cwe = obj["cwe"];
      if (cwe.is_number_integer())
        f.cwe = Cwe::id(cwe.get<int>());
      else if (cwe.is_string())
        f.cwe = Cwe::parse(cwe.get<std::string>());
      else
        throw SchemaError("cwe", "expected a string or integer");
    } catch (const SchemaError& e) {
      if (e.field().rfind("line ", 0) == 0) throw;
      throw SchemaError(where + "." + e.field(), e.reason());
    }
    f.target = str("target");
    f.detector_id = str("detector_id");
    f.location = str("location");
    if (f.detector_id.empty()) throw SchemaError(where + ".detector_id", "must not be empty");
    if (obj.contains("severity")) f.severity = str("severity");
    if (!obj.contains("count") || !obj["count"].is_number_unsigned() || obj["count"].get<long long>() < 1) {
      throw SchemaError(where + ".count", "expected an integer >= 1");
    }

    if (!fs) fs.emplace(f.environment);
    if (fs->environment() != f.environment) {
      throw SchemaError(where + ".env", "mixed environments in one file ('" +
                                             std::string(to_string(fs->environment())) + "' and '" +
                                             std::string(to_string(f.environment)) + "')");
    }
    fs->add(f, obj["count"].get<std::size_t>());
  }
  return fs ? std::move(*fs) : FindingSet(empty_env);
}

}  // namespace crange
