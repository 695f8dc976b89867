// SPDX-License-Identifier: Apache-2.0
//
// Normalized scanner findings. A FindingSet is a multiset keyed by
// (tool, target, detector_id, location); the environment tag says which
// backend produced it.
#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace crange {

enum class Tool { openvas, nmap, zap, nikto2, msf };
enum class Environment { real, vm, container };

std::string_view to_string(Tool t) noexcept;  // nikto2 renders as "nikto"
std::string_view to_string(Environment e) noexcept;
Tool tool_from_string(std::string_view s);  // accepts "nikto" and "nikto2"; throws SchemaError
Environment environment_from_string(std::string_view s);  // throws SchemaError

// A CWE number or one of the two buckets for findings without one. Orders
// numeric ids ascending, then other, then noinfo.
class Cwe {
public:
  enum class Kind { id, other, noinfo };

  Cwe() = default;
  static Cwe id(int number);  // throws SchemaError unless number > 0
  static Cwe other() noexcept { return Cwe(Kind::other, 0); }
  static Cwe noinfo() noexcept { return Cwe(Kind::noinfo, 0); }

  // "CWE-89", "cwe-89", "89", "other" or "noinfo". Throws SchemaError.
  static Cwe parse(std::string_view s);

  Kind kind() const noexcept { return kind_; }
  int number() const noexcept { return number_; }

  std::string str() const;   // "CWE-89", "other", "noinfo"
  std::string bare() const;  // "89", "other", "noinfo"

  friend auto operator<=>(const Cwe&, const Cwe&) = default;

private:
  Cwe(Kind k, int n) noexcept : kind_(k), number_(n) {}

  Kind kind_ = Kind::noinfo;
  int number_ = 0;
};

struct Finding {
  Tool tool = Tool::openvas;
  Environment environment = Environment::vm;
  std::string target;
  std::string detector_id;
  Cwe cwe;
  std::string location;
  std::optional<std::string> severity;
};

struct FindingKey {
  Tool tool = Tool::openvas;
  std::string target;
  std::string detector_id;
  std::string location;

  friend auto operator<=>(const FindingKey&, const FindingKey&) = default;
};

struct FindingEntry {
  Cwe cwe;
  std::optional<std::string> severity;
  std::size_t count = 0;
};

class FindingSet {
public:
  explicit FindingSet(Environment env = Environment::vm) : env_(env) {}

  Environment environment() const noexcept { return env_; }

  // Adds `count` occurrences. A repeated key increments its count; if the
  // repeat disagrees on cwe or severity the smaller value is kept, so the
  // result does not depend on insertion order. Throws PreconditionError for
  // another environment's finding, an empty detector_id or count 0.
  void add(const Finding& f, std::size_t count = 1);

  // Multiset union (counts add). Associative and commutative. Throws
  // PreconditionError when the environment tags differ.
  void merge(const FindingSet& other);

  const std::map<FindingKey, FindingEntry>& entries() const noexcept { return entries_; }
  std::size_t distinct() const noexcept { return entries_.size(); }
  std::size_t total() const noexcept;
  bool empty() const noexcept { return entries_.empty(); }

  // Free-form facts about the run (e.g. "scan_duration_s"); not part of
  // equality.
  std::map<std::string, std::string> metadata;

  // Same environment, keys, counts and CWE tags.
  friend bool operator==(const FindingSet& a, const FindingSet& b);

private:
  Environment env_;
  std::map<FindingKey, FindingEntry> entries_;
};

}  // namespace crange
