// SPDX-License-Identifier: Apache-2.0
#include "crange/scenario.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <regex>
#include <tuple>
#include <utility>

#include "crange/error.hpp"

namespace crange {

namespace {

constexpr std::array<std::string_view, 5> kRoleNames = {"web_server", "db_server", "client",
                                                        "attacker", "security_device"};
constexpr std::array<std::string_view, 7> kActionNames = {
    "scan", "exploit", "backdoor", "pivot", "privilege_escalation", "credential_theft",
    "exfiltration"};

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

std::string step_prefix(int index) { return "step " + std::to_string(index) + ": "; }

class DiagnosticSink {
public:
  void error(int step, std::string subject, std::string field, std::string message) {
    add(Severity::error, step, std::move(subject), std::move(field), std::move(message));
  }
  void warning(int step, std::string subject, std::string field, std::string message) {
    add(Severity::warning, step, std::move(subject), std::move(field), std::move(message));
  }

  std::vector<Diagnostic> sorted() && {
    std::stable_sort(diags_.begin(), diags_.end(), [](const Diagnostic& a, const Diagnostic& b) {
      return std::tie(a.step, a.subject, a.message, a.field) <
             std::tie(b.step, b.subject, b.message, b.field);
    });
    return std::move(diags_);
  }

private:
  void add(Severity sev, int step, std::string subject, std::string field, std::string message) {
    diags_.push_back({sev, step, std::move(subject), std::move(field), std::move(message)});
  }

  std::vector<Diagnostic> diags_;
};

void check_nodes(const Scenario& s, DiagnosticSink& out) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const Node& n = s.nodes[i];
    const std::string base = "nodes[" + std::to_string(i) + "]";
    if (n.id.empty()) {
      out.error(0, "", base + ".id", "node id must be non-empty");
    } else if (!seen.insert(n.id).second) {
      out.error(0, n.id, base + ".id", "duplicate node id " + quoted(n.id));
    }

    std::set<std::pair<int, std::string>> ports;
    for (std::size_t j = 0; j < n.services.size(); ++j) {
      const ServiceSpec& svc = n.services[j];
      const std::string field = base + ".services[" + std::to_string(j) + "]";
      if (svc.port < 1 || svc.port > 65535) {
        out.error(0, n.id, field + ".port",
                  "port " + std::to_string(svc.port) + " outside 1..65535");
      } else if (!ports.emplace(svc.port, svc.protocol).second) {
        out.error(0, n.id, field,
                  "duplicate service port " + std::to_string(svc.port) + "/" + svc.protocol);
      }
    }

    for (std::size_t j = 0; j < n.vulns.size(); ++j) {
      if (!is_recognized_vuln_id(n.vulns[j].id)) {
        out.error(0, n.id, base + ".vulns[" + std::to_string(j) + "].id",
                  "vulnerability " + quoted(n.vulns[j].id) +
                      " has no recognized scheme (CVE-, OSVDB-, MSF-)");
      }
    }

    if (n.limits) {
      try {
        check(*n.limits);
      } catch (const SchemaError& e) {
        out.error(0, n.id, base + "." + e.field(), e.reason());
      }
    }

    for (std::size_t j = 0; j < n.export_exclude.size(); ++j) {
      if (n.export_exclude[j].empty() || n.export_exclude[j].front() != '/') {
        out.error(0, n.id, base + ".export_exclude[" + std::to_string(j) + "]",
                  "export exclusion " + quoted(n.export_exclude[j]) + " must be an absolute path");
      }
    }
  }
}

void check_segments(const Scenario& s, DiagnosticSink& out) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < s.segments.size(); ++i) {
    const Segment& seg = s.segments[i];
    const std::string base = "segments[" + std::to_string(i) + "]";
    if (seg.id.empty()) {
      out.error(0, "", base + ".id", "segment id must be non-empty");
    } else if (!seen.insert(seg.id).second) {
      out.error(0, seg.id, base + ".id", "duplicate segment id " + quoted(seg.id));
    }
    if (seg.members.empty()) {
      out.error(0, seg.id, base + ".members", "segment " + quoted(seg.id) + " has no members");
    }
    for (const auto& m : seg.members) {
      if (!s.find_node(m)) {
        out.error(0, seg.id, base + ".members",
                  "segment " + quoted(seg.id) + " references unknown node " + quoted(m));
      }
    }
    for (const auto& l : seg.links) {
      if (!s.find_segment(l)) {
        out.error(0, seg.id, base + ".links",
                  "segment " + quoted(seg.id) + " links to unknown segment " + quoted(l));
      }
    }
  }
}

void check_steps(const Scenario& s, DiagnosticSink& out) {
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    const AttackStep& st = s.steps[i];
    const std::string base = "steps[" + std::to_string(i) + "]";
    const int expected = static_cast<int>(i) + 1;
    const std::string prefix = step_prefix(st.index);
    if (st.index != expected) {
      out.error(st.index, st.actor, base + ".index",
                prefix + "index out of sequence (expected " + std::to_string(expected) + ")");
    }
    if (!s.find_node(st.actor)) {
      out.error(st.index, st.actor, base + ".actor", prefix + "unknown actor " + quoted(st.actor));
    }
    if (!s.find_node(st.target)) {
      out.error(st.index, st.actor, base + ".target",
                prefix + "unknown target " + quoted(st.target));
    }
    if (st.actor == st.target && st.action != Action::privilege_escalation) {
      out.error(st.index, st.actor, base + ".target",
                prefix + "actor and target must differ for " + std::string(to_string(st.action)));
    }
    if (st.requires_vuln && !is_recognized_vuln_id(st.requires_vuln->id)) {
      out.error(st.index, st.actor, base + ".requires_vuln",
                prefix + "vulnerability " + quoted(st.requires_vuln->id) +
                    " has no recognized scheme (CVE-, OSVDB-, MSF-)");
    }
  }
}

void structural(const Scenario& s, DiagnosticSink& out) {
  check_nodes(s, out);
  check_segments(s, out);
  check_steps(s, out);
}

std::vector<std::string> segments_of(const Scenario& s, std::string_view node) {
  std::vector<std::string> out;
  for (const auto& seg : s.segments) {
    if (seg.members.count(std::string(node))) out.push_back(seg.id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::string_view to_string(Role r) noexcept { return kRoleNames[static_cast<std::size_t>(r)]; }

std::string_view to_string(Action a) noexcept {
  return kActionNames[static_cast<std::size_t>(a)];
}

std::string_view to_string(Severity s) noexcept {
  return s == Severity::error ? "error" : "warning";
}

Role role_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kRoleNames.size(); ++i) {
    if (kRoleNames[i] == s) return static_cast<Role>(i);
  }
  throw SchemaError("role", "unknown role " + quoted(s));
}

Action action_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kActionNames.size(); ++i) {
    if (kActionNames[i] == s) return static_cast<Action>(i);
  }
  throw SchemaError("action", "unknown action " + quoted(s));
}

bool is_recognized_vuln_id(std::string_view id) noexcept {
  static const std::regex cve(R"(CVE-\d{4}-\d{4,})");
  static const std::regex osvdb(R"(OSVDB-\d+)");
  static const std::regex msf(R"(MSF-[A-Za-z0-9_./-]+)");
  const std::string s(id);
  return std::regex_match(s, cve) || std::regex_match(s, osvdb) || std::regex_match(s, msf);
}

bool Node::has_vuln(std::string_view vid) const noexcept {
  return std::any_of(vulns.begin(), vulns.end(), [&](const VulnRef& v) { return v.id == vid; });
}

const Node* Scenario::find_node(std::string_view id) const noexcept {
  auto it = std::find_if(nodes.begin(), nodes.end(), [&](const Node& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

const Segment* Scenario::find_segment(std::string_view id) const noexcept {
  auto it =
      std::find_if(segments.begin(), segments.end(), [&](const Segment& g) { return g.id == id; });
  return it == segments.end() ? nullptr : &*it;
}

std::vector<Diagnostic> check_invariants(const Scenario& s) {
  DiagnosticSink out;
  structural(s, out);
  return std::move(out).sorted();
}

std::vector<Diagnostic> validate_scenario(const Scenario& s) {
  DiagnosticSink out;
  structural(s, out);

  for (const Node& n : s.nodes) {
    if (n.backend == Backend::container && !n.limits) {
      out.warning(0, n.id, "",
                  "container node without resource limits: shared-resource blast radius");
    }
    if (!n.id.empty() && segments_of(s, n.id).empty()) {
      out.warning(0, n.id, "", "node " + quoted(n.id) + " is not attached to any segment");
    }
  }

  for (const Segment& seg : s.segments) {
    for (const auto& l : seg.links) {
      const Segment* other = s.find_segment(l);
      if (other && !other->links.count(seg.id)) {
        out.warning(0, seg.id, "",
                    "segment link " + quoted(seg.id) + " -> " + quoted(l) + " has no reverse link");
      }
    }
  }

  for (const AttackStep& st : s.steps) {
    const Node* actor = s.find_node(st.actor);
    const Node* target = s.find_node(st.target);
    if (!actor || !target) continue;
    const std::string prefix = step_prefix(st.index);
    if (!reachability(s, st.actor, st.target)) {
      out.error(st.index, st.actor, "",
                prefix + "target " + quoted(st.target) + " unreachable from actor " +
                    quoted(st.actor));
    }
    if (st.requires_vuln && !target->has_vuln(st.requires_vuln->id)) {
      out.warning(st.index, st.target, "",
                  prefix + "required vulnerability absent on target (" + st.requires_vuln->id +
                      " not listed on " + st.target + ")");
    }
  }
  return std::move(out).sorted();
}

bool has_errors(const std::vector<Diagnostic>& diags) noexcept {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

std::string format_diagnostics(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    out += to_string(d.severity);
    out += ": ";
    out += d.subject.empty() ? "-" : d.subject;
    out += ": ";
    out += d.message;
    out += '\n';
  }
  return out;
}

std::optional<std::vector<std::string>> reachability(const Scenario& s, std::string_view from,
                                                     std::string_view to) {
  if (!s.find_node(from)) throw PreconditionError("unknown node " + quoted(from));
  if (!s.find_node(to)) throw PreconditionError("unknown node " + quoted(to));

  const auto sources = segments_of(s, from);
  if (from == to) {
    if (sources.empty()) return std::vector<std::string>{};
    return std::vector<std::string>{sources.front()};
  }
  const auto targets_vec = segments_of(s, to);
  const std::set<std::string> targets(targets_vec.begin(), targets_vec.end());
  if (sources.empty() || targets.empty()) return std::nullopt;

  // Breadth-first over segments. Sources enter in sorted order and links are
  // expanded in sorted order, so each layer is discovered in lexicographic
  // order of its paths and the first target found carries the smallest one.
  std::map<std::string, std::string> parent;
  std::deque<std::string> queue;
  auto path_to = [&](std::string seg) {
    std::vector<std::string> path{seg};
    while (parent.at(seg) != seg) {
      seg = parent.at(seg);
      path.push_back(seg);
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  for (const auto& src : sources) {
    parent.emplace(src, src);
    if (targets.count(src)) return path_to(src);
    queue.push_back(src);
  }
  while (!queue.empty()) {
    const std::string cur = queue.front();
    queue.pop_front();
    const Segment* seg = s.find_segment(cur);
    if (!seg) continue;
    for (const auto& next : seg->links) {
      if (parent.count(next) || !s.find_segment(next)) continue;
      parent.emplace(next, cur);
      if (targets.count(next)) return path_to(next);
      queue.push_back(next);
    }
  }
  return std::nullopt;
}

}  // namespace crange
