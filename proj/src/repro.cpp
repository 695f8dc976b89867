// SPDX-License-Identifier: Apache-2.0
#include "crange/repro.hpp"

#include <algorithm>
#include <set>

#include "crange/error.hpp"

namespace crange {

const char* const kSingleFigureDeviationNote =
    "Both J (set) and J (multiset) are reported. The published single-figure similarity "
    "(0.993, quoted elsewhere as 0.997) cannot be derived from the per-class counts under "
    "either definition.";

namespace {

ProjectedKey project_key(const FindingKey& k, const MatchPredicate& phi) {
  return {phi.use_tool ? std::string(to_string(k.tool)) : std::string{},
          phi.use_target ? k.target : std::string{}, k.detector_id,
          phi.use_location ? k.location : std::string{}};
}

struct Sums {
  std::size_t min_sum = 0;
  std::size_t max_sum = 0;
};

Sums min_max(const std::map<ProjectedKey, std::size_t>& a,
             const std::map<ProjectedKey, std::size_t>& b) {
  Sums s;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      s.max_sum += ia->second;
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      s.max_sum += ib->second;
      ++ib;
    } else {
      s.min_sum += std::min(ia->second, ib->second);
      s.max_sum += std::max(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  return s;
}

double ratio(const Sums& s) {
  return s.max_sum == 0 ? 1.0 : static_cast<double>(s.min_sum) / static_cast<double>(s.max_sum);
}

FindingSet only_tool(const FindingSet& fs, Tool tool) {
  FindingSet out(fs.environment());
  for (const auto& [key, e] : fs.entries()) {
    if (key.tool != tool) continue;
    out.add({key.tool, fs.environment(), key.target, key.detector_id, e.cwe, key.location,
             e.severity},
            e.count);
  }
  return out;
}

}  // namespace

std::map<ProjectedKey, std::size_t> project(const FindingSet& fs, const MatchPredicate& phi) {
  std::map<ProjectedKey, std::size_t> out;
  for (const auto& [key, e] : fs.entries()) {
    auto& n = out[project_key(key, phi)];
    n = phi.mode == CountMode::presence ? 1 : n + e.count;
  }
  return out;
}

double jaccard_set(const FindingSet& a, const FindingSet& b, const MatchPredicate& phi) {
  if (phi.mode != CountMode::presence) {
    throw PreconditionError("jaccard_set requires a presence-mode match predicate");
  }
  return ratio(min_max(project(a, phi), project(b, phi)));
}

double jaccard_multiset(const FindingSet& a, const FindingSet& b, const MatchPredicate& phi) {
  MatchPredicate m = phi;
  m.mode = CountMode::multiset;
  return ratio(min_max(project(a, m), project(b, m)));
}

std::map<Cwe, std::size_t> aggregate_by_cwe(const FindingSet& fs) {
  std::map<Cwe, std::size_t> out;
  for (const auto& [key, e] : fs.entries()) out[e.cwe] += e.count;
  return out;
}

double match_rate(std::size_t baseline, std::size_t candidate) noexcept {
  const auto hi = std::max(baseline, candidate);
  if (hi == 0) return 100.0;
  return static_cast<double>(std::min(baseline, candidate)) / static_cast<double>(hi) * 100.0;
}

ReproReport diff(const FindingSet& baseline, const FindingSet& candidate,
                 const MatchPredicate& phi) {
  if (baseline.environment() == candidate.environment()) {
    throw PreconditionError("baseline and candidate share the environment tag '" +
                            std::string(to_string(baseline.environment())) + "'");
  }

  ReproReport r;
  r.baseline_env = baseline.environment();
  r.candidate_env = candidate.environment();
  r.mode = phi.mode;

  MatchPredicate set_phi = phi;
  set_phi.mode = CountMode::presence;
  r.j_set = jaccard_set(baseline, candidate, set_phi);
  r.j_multiset = jaccard_multiset(baseline, candidate, phi);

  // Items: projected keys with counts per side, tagged with the smallest CWE.
  std::map<ProjectedKey, ItemRow> items;
  std::map<ProjectedKey, Tool> item_tool;
  auto collect = [&](const FindingSet& fs, bool is_baseline) {
    for (const auto& [key, e] : fs.entries()) {
      const auto pk = project_key(key, phi);
      auto [it, inserted] = items.try_emplace(pk, ItemRow{pk, e.cwe, 0, 0, false});
      if (!inserted && e.cwe < it->second.cwe) it->second.cwe = e.cwe;
      auto& n = is_baseline ? it->second.baseline : it->second.candidate;
      n = phi.mode == CountMode::presence ? 1 : n + e.count;
      item_tool[pk] = key.tool;
    }
  };
  collect(baseline, true);
  collect(candidate, false);

  std::map<Cwe, CweRow> by_cwe;
  std::map<std::pair<Tool, Cwe>, ToolCweRow> by_tool_cwe;
  for (auto& [pk, item] : items) {
    item.matched = item.baseline == item.candidate;
    r.items.push_back(item);

    auto& row = by_cwe.try_emplace(item.cwe, CweRow{item.cwe, 0, 0, false}).first->second;
    row.baseline += item.baseline;
    row.candidate += item.candidate;

    const Tool tool = item_tool[pk];
    auto& trow = by_tool_cwe.try_emplace({tool, item.cwe}, ToolCweRow{tool, item.cwe, 0, 0, false})
                     .first->second;
    trow.baseline += item.baseline;
    trow.candidate += item.candidate;
  }

  for (auto& [cwe, row] : by_cwe) {
    row.matched = row.baseline == row.candidate;
    r.rows.push_back(row);
  }
  std::stable_sort(r.rows.begin(), r.rows.end(), [](const CweRow& x, const CweRow& y) {
    const auto tx = x.baseline + x.candidate;
    const auto ty = y.baseline + y.candidate;
    if (tx != ty) return tx > ty;
    return x.cwe < y.cwe;
  });

  std::set<Tool> tools;
  for (auto& [k, row] : by_tool_cwe) {
    row.matched = row.baseline == row.candidate;
    r.tool_rows.push_back(row);
    tools.insert(k.first);
  }

  for (Tool tool : tools) {
    const auto a = only_tool(baseline, tool);
    const auto b = only_tool(candidate, tool);
    ToolSubtotal t;
    t.tool = tool;
    for (const auto& row : r.tool_rows) {
      if (row.tool != tool) continue;
      t.baseline += row.baseline;
      t.candidate += row.candidate;
      ++t.rows;
      if (row.matched) ++t.matched_rows;
    }
    t.j_set = jaccard_set(a, b, set_phi);
    t.j_multiset = jaccard_multiset(a, b, phi);
    r.per_tool.push_back(t);
  }

  const bool divergent = std::any_of(r.rows.begin(), r.rows.end(),
                                     [](const CweRow& row) { return !row.matched; });
  if (divergent) r.notes.emplace_back(kSingleFigureDeviationNote);
  return r;
}

std::map<Cwe, double> match_rate(const ReproReport& r) {
  std::map<Cwe, double> out;
  for (const auto& row : r.rows) out[row.cwe] = match_rate(row.baseline, row.candidate);
  return out;
}

std::map<std::pair<Tool, Cwe>, double> match_rate_by_tool(const ReproReport& r) {
  std::map<std::pair<Tool, Cwe>, double> out;
  for (const auto& row : r.tool_rows) {
    out[{row.tool, row.cwe}] = match_rate(row.baseline, row.candidate);
  }
  return out;
}

}  // namespace crange
