// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <random>

#include "crange/error.hpp"
#include "crange/repro.hpp"
#include "test_support.hpp"

using namespace crange;

namespace {

FindingSet make(Environment env, std::initializer_list<std::pair<const char*, std::size_t>> items) {
  FindingSet fs(env);
  for (const auto& [det, n] : items) {
    fs.add(Finding{Tool::zap, env, "h", det, Cwe::id(79), "/", std::nullopt}, n);
  }
  return fs;
}

}  // namespace

TEST_CASE("jaccard on small literal sets") {
  const auto a = make(Environment::vm, {{"x", 2}, {"y", 1}});
  const auto b = make(Environment::container, {{"x", 1}, {"z", 1}});
  // min: x1 ; max: x2 + y1 + z1
  CHECK(jaccard_multiset(a, b) == doctest::Approx(0.25).epsilon(1e-12));

  const auto p = make(Environment::vm, {{"x", 1}, {"y", 1}});
  const auto q = make(Environment::container, {{"y", 1}, {"z", 1}});
  CHECK(jaccard_set(p, q, MatchPredicate::presence()) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(jaccard_set(p, q, MatchPredicate{}), PreconditionError);

  const FindingSet e1(Environment::vm), e2(Environment::container);
  CHECK(jaccard_multiset(e1, e2) == 1.0);
  CHECK(jaccard_set(e1, e2, MatchPredicate::presence()) == 1.0);
  CHECK(jaccard_multiset(a, e2) == 0.0);
}

TEST_CASE("jaccard properties on random sets") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 300; ++i) {
    const auto a = test::random_set(rng, Environment::vm, 12, 5);
    const auto b = test::random_set(rng, Environment::container, 12, 5);
    const double jm = jaccard_multiset(a, b);
    const double js = jaccard_set(a, b, MatchPredicate::presence());
    CHECK(jm >= 0.0);
    CHECK(jm <= 1.0);
    CHECK(js >= 0.0);
    CHECK(js <= 1.0);
    CHECK(jm == doctest::Approx(jaccard_multiset(b, a)).epsilon(1e-12));
    CHECK(js == doctest::Approx(jaccard_set(b, a, MatchPredicate::presence())).epsilon(1e-12));
    CHECK(jm == doctest::Approx(test::brute_force_jaccard(a, b)).epsilon(1e-12));
    CHECK(jaccard_multiset(a, a) == 1.0);
    CHECK(jaccard_set(a, a, MatchPredicate::presence()) == 1.0);
  }
}

TEST_CASE("projection honours the predicate") {
  FindingSet a(Environment::vm);
  a.add(Finding{Tool::zap, Environment::vm, "10.0.0.1", "d", Cwe::id(1), "/a", std::nullopt}, 2);
  a.add(Finding{Tool::zap, Environment::vm, "10.0.0.2", "d", Cwe::id(1), "/a", std::nullopt}, 3);
  a.add(Finding{Tool::nikto2, Environment::vm, "10.0.0.1", "d", Cwe::id(1), "/b", std::nullopt});
  CHECK(project(a, MatchPredicate{}).size() == 2);
  MatchPredicate with_target;
  with_target.use_target = true;
  CHECK(project(a, with_target).size() == 3);
  MatchPredicate bare;
  bare.use_tool = false;
  bare.use_location = false;
  const auto p = project(a, bare);
  REQUIRE(p.size() == 1);
  CHECK(p.begin()->second == 6);
  CHECK(project(a, MatchPredicate::presence()).begin()->second == 1);
}

TEST_CASE("aggregate_by_cwe on the OpenVAS corpus") {
  const auto vm = test::corpus("openvas", Environment::vm);
  const auto agg = aggregate_by_cwe(vm);
  CHECK(agg.at(Cwe::id(264)) == 54);
  CHECK(agg.at(Cwe::id(119)) == 66);
  CHECK(agg.at(Cwe::id(20)) == 82);
  CHECK(agg.at(Cwe::noinfo()) == 123);
  const auto ct = test::corpus("zap_msf2", Environment::container);
  CHECK(aggregate_by_cwe(ct).at(Cwe::id(89)) == 422);
}

TEST_CASE("diff rows and notes") {
  const auto vm = test::corpus("zap_msf2", Environment::vm);
  const auto ct = test::corpus("zap_msf2", Environment::container);
  const auto r = diff(vm, ct);
  CHECK(r.baseline_env == Environment::vm);
  CHECK(r.candidate_env == Environment::container);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const auto prev = r.rows[i - 1].baseline + r.rows[i - 1].candidate;
    const auto cur = r.rows[i].baseline + r.rows[i].candidate;
    CHECK((prev > cur || (prev == cur && r.rows[i - 1].cwe < r.rows[i].cwe)));
  }
  const auto sqli = std::find_if(r.rows.begin(), r.rows.end(),
                                 [](const CweRow& row) { return row.cwe == Cwe::id(89); });
  REQUIRE(sqli != r.rows.end());
  CHECK(sqli->baseline == 358);
  CHECK(sqli->candidate == 422);
  CHECK_FALSE(sqli->matched);
  CHECK(r.j_multiset == doctest::Approx(test::zap_msf2_oracle_j()).epsilon(1e-12));
  CHECK(r.j_set == 1.0);
  CHECK(std::find(r.notes.begin(), r.notes.end(), kSingleFigureDeviationNote) != r.notes.end());

  const auto same = diff(test::corpus("nmap", Environment::vm),
                         test::corpus("nmap", Environment::container));
  CHECK(same.notes.empty());
  for (const auto& row : same.rows) CHECK(row.matched);

  CHECK_THROWS_AS(diff(vm, vm), PreconditionError);
}

TEST_CASE("presence mode counts distinct keys") {
  const auto vm = test::corpus("zap_msf2", Environment::vm);
  const auto ct = test::corpus("zap_msf2", Environment::container);
  const auto r = diff(vm, ct, MatchPredicate::presence());
  CHECK(r.mode == CountMode::presence);
  for (const auto& row : r.rows) CHECK(row.matched);
  CHECK(r.j_multiset == doctest::Approx(test::zap_msf2_oracle_j()).epsilon(1e-12));
}

TEST_CASE("match rate") {
  CHECK(match_rate(358, 422) == doctest::Approx(100.0 * 358 / 422));
  CHECK(match_rate(1, 0) == 0.0);
  CHECK(match_rate(0, 0) == 100.0);
  CHECK(match_rate(82, 82) == 100.0);
  const auto r = diff(test::corpus("zap_msf2", Environment::vm),
                      test::corpus("zap_msf2", Environment::container));
  CHECK(match_rate(r).at(Cwe::id(89)) == doctest::Approx(84.834).epsilon(1e-4));
  CHECK(match_rate_by_tool(r).at({Tool::zap, Cwe::id(89)}) == doctest::Approx(84.834).epsilon(1e-4));
}

TEST_CASE("per-tool subtotals add up to the merged rows") {
  const auto vm = test::merged_corpus(Environment::vm);
  const auto ct = test::merged_corpus(Environment::container);
  const auto r = diff(vm, ct);
  std::size_t b = 0, c = 0;
  for (const auto& t : r.per_tool) {
    b += t.baseline;
    c += t.candidate;
  }
  CHECK(b == vm.total());
  CHECK(c == ct.total());
  std::map<Cwe, std::pair<std::size_t, std::size_t>> by_cwe;
  for (const auto& tr : r.tool_rows) {
    by_cwe[tr.cwe].first += tr.baseline;
    by_cwe[tr.cwe].second += tr.candidate;
  }
  REQUIRE(by_cwe.size() == r.rows.size());
  for (const auto& row : r.rows) {
    CHECK(by_cwe.at(row.cwe).first == row.baseline);
    CHECK(by_cwe.at(row.cwe).second == row.candidate);
  }
}
