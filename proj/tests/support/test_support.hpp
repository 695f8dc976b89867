// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <fstream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "crange/finding.hpp"
#include "crange/ingest.hpp"
#include "crange/repro.hpp"

namespace crange::test {

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing test file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string fixture(const std::string& rel) {
  return read_text(std::string(CRANGE_FIXTURE_DIR) + "/" + rel);
}

inline std::string env_suffix(Environment env) { return env == Environment::vm ? "vm" : "container"; }

// Canonical corpus, e.g. corpus("zap_msf2", Environment::vm).
inline FindingSet corpus(const std::string& name, Environment env) {
  return read_jsonl(fixture("corpus/" + name + "_" + env_suffix(env) + ".jsonl"), env);
}

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names = {"openvas", "nmap",     "zap_msf2",
                                                 "zap_msf3", "nikto",   "msf"};
  return names;
}

inline FindingSet merged_corpus(Environment env) {
  FindingSet all(env);
  for (const auto& n : corpus_names()) all.merge(corpus(n, env));
  return all;
}

// Random multiset over a small key universe so that overlaps are common.
inline FindingSet random_set(std::mt19937_64& rng, Environment env, std::size_t max_keys,
                             std::size_t max_count) {
  static const Tool tools[] = {Tool::openvas, Tool::nmap, Tool::zap, Tool::nikto2, Tool::msf};
  std::uniform_int_distribution<std::size_t> nkeys(0, max_keys);
  std::uniform_int_distribution<std::size_t> count(1, max_count);
  std::uniform_int_distribution<int> tool(0, 4), det(0, 7), loc(0, 2), cwe(1, 4);
  FindingSet fs(env);
  const std::size_t n = nkeys(rng);
  std::set<std::tuple<int, int, int>> used;
  while (used.size() < n) {
    const auto k = std::make_tuple(tool(rng), det(rng), loc(rng));
    if (!used.insert(k).second) continue;
    Finding f;
    f.tool = tools[std::get<0>(k)];
    f.environment = env;
    f.target = "h";
    f.detector_id = "d" + std::to_string(std::get<1>(k));
    f.location = "l" + std::to_string(std::get<2>(k));
    f.cwe = Cwe::id(cwe(rng) * 10);
    fs.add(f, count(rng));
  }
  return fs;
}

// Element-by-element multiset Jaccard: every occurrence becomes a distinct
// (key, copy number) element, then plain set intersection and union.
inline double brute_force_jaccard(const FindingSet& a, const FindingSet& b) {
  using Element = std::pair<std::tuple<std::string, std::string, std::string>, std::size_t>;
  auto expand = [](const FindingSet& fs) {
    std::set<Element> out;
    for (const auto& [key, e] : fs.entries()) {
      for (std::size_t i = 0; i < e.count; ++i) {
        out.insert({{std::string(to_string(key.tool)), key.detector_id, key.location}, i});
      }
    }
    return out;
  };
  const auto ea = expand(a);
  const auto eb = expand(b);
  std::vector<Element> inter, uni;
  std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(inter));
  std::set_union(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(uni));
  if (uni.empty()) return 1.0;
  return static_cast<double>(inter.size()) / static_cast<double>(uni.size());
}

// ZAP Metasploitable2 counts (VM, container), one pair per published row.
struct ZapRow {
  const char* name;
  int cwe;
  std::size_t vm;
  std::size_t container;
};

inline const std::vector<ZapRow>& zap_msf2_rows() {
  static const std::vector<ZapRow> rows = {
      {"SQL Injection", 89, 358, 422},
      {"Server Side Include", 97, 1, 1},
      {"XSS (reflected)", 79, 1075, 1000},
      {"XSS (stored)", 79, 5, 5},
      {"Path Traversal", 22, 21, 21},
      {"Command Injection", 78, 361, 342},
      {"File Inclusion", 98, 209, 206},
      {"Application error disclosure", 200, 242, 246},
      {"Directory Browsing", 548, 14, 15},
      {"Parameter tampering", 472, 13, 14},
      {"Buffer Error disclosure", 200, 291, 287},
      {"Private IP disclosure", 200, 136, 139},
  };
  return rows;
}

// Spreadsheet-style oracle: per-row min and max summed over the rows.
inline double zap_msf2_oracle_j() {
  double mins = 0, maxs = 0;
  for (const auto& r : zap_msf2_rows()) {
    mins += static_cast<double>(std::min(r.vm, r.container));
    maxs += static_cast<double>(std::max(r.vm, r.container));
  }
  return mins / maxs;
}

}  // namespace crange::test
