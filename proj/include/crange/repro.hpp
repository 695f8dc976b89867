// SPDX-License-Identifier: Apache-2.0
//
// Reproducibility metrics between two finding sets: key projection,
// set and multiset Jaccard similarity, per-CWE aggregation and match rates.
#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "crange/finding.hpp"

namespace crange {

enum class CountMode { presence, multiset };

// Which finding fields decide that two findings are "the same detection".
// detector_id is always part of the key. The target is left out by default
// because the two backends give each host a different address.
struct MatchPredicate {
  bool use_tool = true;
  bool use_target = false;
  bool use_location = true;
  CountMode mode = CountMode::multiset;

  static MatchPredicate presence() {
    MatchPredicate p;
    p.mode = CountMode::presence;
    return p;
  }
};

// Projected identity: (tool, target, detector_id, location) with unused
// fields blanked. Tool is empty when the predicate ignores it.
using ProjectedKey = std::tuple<std::string, std::string, std::string, std::string>;

// Counts per projected key. Presence mode clamps every count to 1.
std::map<ProjectedKey, std::size_t> project(const FindingSet& fs, const MatchPredicate& phi);

// |keys(a) ∩ keys(b)| / |keys(a) ∪ keys(b)|; 1 when both are empty.
// Throws PreconditionError unless phi is in presence mode.
double jaccard_set(const FindingSet& a, const FindingSet& b, const MatchPredicate& phi);

// Σ min(a_k, b_k) / Σ max(a_k, b_k) over projected keys; 1 when both are
// empty. The predicate's count mode is ignored.
double jaccard_multiset(const FindingSet& a, const FindingSet& b,
                        const MatchPredicate& phi = MatchPredicate{});

// Total count per CWE, in Cwe order.
std::map<Cwe, std::size_t> aggregate_by_cwe(const FindingSet& fs);

struct CweRow {
  Cwe cwe;
  std::size_t baseline = 0;
  std::size_t candidate = 0;
  bool matched = false;

  friend bool operator==(const CweRow&, const CweRow&) = default;
};

struct ToolCweRow {
  Tool tool = Tool::openvas;
  Cwe cwe;
  std::size_t baseline = 0;
  std::size_t candidate = 0;
  bool matched = false;

  friend bool operator==(const ToolCweRow&, const ToolCweRow&) = default;
};

// One projected key. cwe is the smallest tag seen for it on either side.
struct ItemRow {
  ProjectedKey key;
  Cwe cwe;
  std::size_t baseline = 0;
  std::size_t candidate = 0;
  bool matched = false;

  friend bool operator==(const ItemRow&, const ItemRow&) = default;
};

struct ToolSubtotal {
  Tool tool = Tool::openvas;
  std::size_t baseline = 0;
  std::size_t candidate = 0;
  std::size_t rows = 0;
  std::size_t matched_rows = 0;
  double j_set = 1.0;
  double j_multiset = 1.0;

  friend bool operator==(const ToolSubtotal&, const ToolSubtotal&) = default;
};

struct ReproReport {
  Environment baseline_env = Environment::vm;
  Environment candidate_env = Environment::container;
  CountMode mode = CountMode::multiset;
  // Sorted by baseline + candidate descending, then CWE.
  std::vector<CweRow> rows;
  // Sorted by tool, then CWE.
  std::vector<ToolCweRow> tool_rows;
  std::vector<ItemRow> items;
  std::vector<ToolSubtotal> per_tool;
  double j_set = 1.0;
  double j_multiset = 1.0;
  std::vector<std::string> notes;

  friend bool operator==(const ReproReport&, const ReproReport&) = default;
};

// Note attached to every report with an unmatched row.
extern const char* const kSingleFigureDeviationNote;

// Row counts are occurrences in multiset mode and distinct projected keys in
// presence mode. Both J values are always filled in. Throws PreconditionError
// when a and b carry the same environment tag.
ReproReport diff(const FindingSet& baseline, const FindingSet& candidate,
                 const MatchPredicate& phi = MatchPredicate{});

// min/max × 100 per row; 100 when both counts are zero.
double match_rate(std::size_t baseline, std::size_t candidate) noexcept;
std::map<Cwe, double> match_rate(const ReproReport& r);
std::map<std::pair<Tool, Cwe>, double> match_rate_by_tool(const ReproReport& r);

}  // namespace crange
