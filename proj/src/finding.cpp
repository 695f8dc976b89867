// SPDX-License-Identifier: Apache-2.0
#include "crange/finding.hpp"

#include <charconv>

#include "crange/error.hpp"

namespace crange {

std::string_view to_string(Tool t) noexcept {
  switch (t) {
    case Tool::openvas: return "openvas";
    case Tool::nmap: return "nmap";
    case Tool::zap: return "zap";
    case Tool::nikto2: return "nikto";
    case Tool::msf: return "msf";
  }
  return "?";
}

std::string_view to_string(Environment e) noexcept {
  switch (e) {
    case Environment::real: return "real";
    case Environment::vm: return "vm";
    case Environment::container: return "container";
  }
  return "?";
}

Tool tool_from_string(std::string_view s) {
  if (s == "openvas") return Tool::openvas;
  if (s == "nmap") return Tool::nmap;
  if (s == "zap") return Tool::zap;
  if (s == "nikto" || s == "nikto2") return Tool::nikto2;
  if (s == "msf") return Tool::msf;
  throw SchemaError("tool", "unknown tool '" + std::string(s) + "'");
}

Environment environment_from_string(std::string_view s) {
  if (s == "real") return Environment::real;
  if (s == "vm") return Environment::vm;
  if (s == "container") return Environment::container;
  throw SchemaError("env", "unknown environment '" + std::string(s) + "'");
}

Cwe Cwe::id(int number) {
  if (number <= 0) throw SchemaError("cwe", "CWE number must be positive");
  return Cwe(Kind::id, number);
}

Cwe Cwe::parse(std::string_view s) {
  if (s == "other") return other();
  if (s == "noinfo") return noinfo();
  std::string_view digits = s;
  if (digits.size() > 4 && (digits.substr(0, 4) == "CWE-" || digits.substr(0, 4) == "cwe-")) {
    digits.remove_prefix(4);
  }
  int n = 0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (digits.empty() || ec != std::errc{} || end != digits.data() + digits.size() || n <= 0) {
    throw SchemaError("cwe", "invalid CWE '" + std::string(s) + "'");
  }
  return id(n);
}

std::string Cwe::str() const {
  switch (kind_) {
    case Kind::id: return "CWE-" + std::to_string(number_);
    case Kind::other: return "other";
    case Kind::noinfo: return "noinfo";
  }
  return "?";
}

std::string Cwe::bare() const {
  return kind_ == Kind::id ? std::to_string(number_) : str();
}

void FindingSet::add(const Finding& f, std::size_t count) {
  if (f.environment != env_) {
    throw PreconditionError("finding from environment '" + std::string(to_string(f.environment)) +
                            "' added to a '" + std::string(to_string(env_)) + "' set");
  }
  if (f.detector_id.empty()) throw PreconditionError("finding has an empty detector_id");
  if (count == 0) throw PreconditionError("finding count must be at least 1");

  FindingKey key{f.tool, f.target, f.detector_id, f.location};
  auto [it, inserted] = entries_.try_emplace(std::move(key), FindingEntry{f.cwe, f.severity, 0});
  FindingEntry& e = it->second;
  if (!inserted) {
    if (f.cwe < e.cwe) e.cwe = f.cwe;
    if (f.severity && (!e.severity || *f.severity < *e.severity)) e.severity = f.severity;
  }
  e.count += count;
}

void FindingSet::merge(const FindingSet& other) {
  if (other.env_ != env_) {
    throw PreconditionError("cannot merge '" + std::string(to_string(other.env_)) +
                            "' findings into a '" + std::string(to_string(env_)) + "' set");
  }
  for (const auto& [key, e] : other.entries_) {
    Finding f{key.tool, env_, key.target, key.detector_id, e.cwe, key.location, e.severity};
    add(f, e.count);
  }
  for (const auto& [k, v] : other.metadata) metadata.emplace(k, v);
}

std::size_t FindingSet::total() const noexcept {
  std::size_t n = 0;
  for (const auto& [key, e] : entries_) n += e.count;
  return n;
}

bool operator==(const FindingSet& a, const FindingSet& b) {
  if (a.env_ != b.env_ || a.entries_.size() != b.entries_.size()) return false;
  auto ib = b.entries_.begin();
  for (const auto& [key, e] : a.entries_) {
    if (!(key == ib->first) || e.count != ib->second.count || e.cwe != ib->second.cwe) return false;
    ++ib;
  }
  return true;
}

}  // namespace crange
