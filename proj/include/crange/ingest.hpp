// SPDX-License-Identifier: Apache-2.0
//
// Report adapters. Each parser accepts a documented subset of one tool's
// output (see docs/formats.md) and produces a FindingSet; the JSON-lines
// interchange format is what every downstream command consumes.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "crange/finding.hpp"

namespace crange {

// Detector id to CWE. Lookup tries the exact table, then the longest
// matching prefix rule, and falls back to noinfo.
class CweMap {
public:
  // {"exact": {id: cwe}, "prefix": {prefix: cwe}}; both keys optional.
  // Throws ParseError / SchemaError.
  static CweMap from_json(std::string_view text);
  static const CweMap& builtin();

  void set_exact(std::string id, Cwe cwe);
  void set_prefix(std::string prefix, Cwe cwe);

  Cwe lookup(std::string_view detector_id) const;
  bool has_entry(std::string_view detector_id) const;

  std::size_t size() const noexcept { return exact_.size() + prefix_.size(); }

private:
  std::map<std::string, Cwe, std::less<>> exact_;
  std::map<std::string, Cwe, std::less<>> prefix_;
};

Cwe map_cve_to_cwe(std::string_view detector_id, const CweMap& m);

// Open ports only. detector_id "service:<product>/<version>" (the service
// name stands in for a missing product; "/<version>" is dropped when there is
// no version), location "<port>/<proto>". The runstats elapsed time is kept
// as metadata "scan_duration_s".
FindingSet parse_nmap(std::string_view xml, Environment env, const CweMap& m = CweMap::builtin());

// One finding per <result>. detector_id is the first CVE listed on the NVT,
// or the NVT oid when it lists none ("NOCVE").
FindingSet parse_openvas(std::string_view xml, Environment env,
                         const CweMap& m = CweMap::builtin());

// One finding per alert instance, keyed by "zap:<pluginid>" and the instance
// URL path. cweid wins over the map; -1, 0 or absent falls back to it.
FindingSet parse_zap(std::string_view json, Environment env, const CweMap& m = CweMap::builtin());

// CSV rows host,port,osvdb,message with an optional header line.
FindingSet parse_nikto(std::string_view csv, Environment env, const CweMap& m = CweMap::builtin());

// Lines "<module path> SUCCESS|FAIL"; blank lines and '#' comments allowed.
FindingSet parse_msf_log(std::string_view log, Environment env,
                         const CweMap& m = CweMap::builtin());

FindingSet parse_report(Tool tool, std::string_view text, Environment env,
                        const CweMap& m = CweMap::builtin());

// Canonical interchange: one object per identity key, keys in the order
// tool, env, target, detector_id, cwe, location, count; lines sorted by key.
std::string write_jsonl(const FindingSet& fs);

// Every line must carry the same env. An input without lines yields an
// empty set tagged `empty_env`. Throws ParseError / SchemaError with the
// 1-based line number in the message.
FindingSet read_jsonl(std::string_view text, Environment empty_env);

}  // namespace crange
