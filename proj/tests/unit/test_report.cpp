// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <json.hpp>

#include "crange/error.hpp"
#include "crange/report.hpp"
#include "test_support.hpp"

using namespace crange;

namespace {

ReproReport zap_report() {
  return diff(test::corpus("zap_msf2", Environment::vm),
              test::corpus("zap_msf2", Environment::container));
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("fixed-point rendering") {
  CHECK(fixed(0.93783, 3) == "0.938");
  CHECK(fixed(84.8341, 1) == "84.8");
  CHECK(fixed(1.0, 3) == "1.000");
}

TEST_CASE("markdown shows divergent rows and both similarity figures") {
  const auto md = render_markdown(zap_report());
  CHECK(contains(md, "| 89 | 358 | 422 | ✗ |"));
  CHECK(contains(md, "| 97 | 1 | 1 | ✓ |"));
  CHECK(contains(md, "J (set): 1.000"));
  CHECK(contains(md, "J (multiset): 0.938"));
  CHECK(contains(md, "## Per tool"));
  CHECK(contains(md, "84.8%"));
  CHECK(contains(md, kSingleFigureDeviationNote));

  ReportOptions only_set;
  only_set.show_multiset = false;
  CHECK_FALSE(contains(render_markdown(zap_report(), only_set), "J (multiset): "));
}

TEST_CASE("csv renderings") {
  const auto r = zap_report();
  const auto csv = render_csv(r);
  CHECK(csv.rfind("cwe,baseline,candidate,matched\n", 0) == 0);
  CHECK(contains(csv, "\n89,358,422,false\n"));
  const auto mr = render_match_rate_csv(r);
  CHECK(mr.rfind("tool,cwe,baseline,candidate,match_rate\n", 0) == 0);
  CHECK(contains(mr, "\nzap,89,358,422,84.8\n"));
  CHECK(contains(mr, "\nall,89,358,422,84.8\n"));
}

TEST_CASE("json round trip and determinism") {
  const auto r = zap_report();
  const auto text = render_json(r);
  CHECK(text == render_json(zap_report()));
  CHECK(report_from_json(text) == r);
  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("baseline_env") == "vm");
  CHECK_FALSE(j.contains("generated_at"));
  ReportOptions stamped;
  stamped.generated_at = "2020-01-01T00:00:00Z";
  CHECK(nlohmann::json::parse(render_json(r, stamped)).at("generated_at") == "2020-01-01T00:00:00Z");
  CHECK_THROWS_AS(report_from_json("{}"), SchemaError);
  CHECK_THROWS_AS(report_from_json("{"), ParseError);
}

TEST_CASE("comparison renderings") {
  const auto s = compare_backends(simulate_series(default_profiles().vm, 1, 3),
                                  simulate_series(default_profiles().container, 1, 3));
  const auto csv = render_csv(s);
  CHECK(csv.rfind("instance_count,vm_mb,ct_mb,ratio\n", 0) == 0);
  CHECK(contains(csv, "\n3,3072.0,150.0,20.480\n"));
  CHECK(nlohmann::json::parse(render_json(s)).at("points").size() == 3);
  CHECK(contains(render_markdown(s), "3072"));

  std::vector<ResourceSample> v = {{0, 1, 5, 0, 0}}, c = {{0, 1, 0, 0, 0}};
  CHECK(nlohmann::json::parse(render_json(compare_backends(v, c)))["points"][0]["memory_ratio"].is_null());
}

TEST_CASE("format names") {
  CHECK(format_from_string("md") == Format::md);
  CHECK(format_from_string("markdown") == Format::md);
  CHECK(format_from_string("csv") == Format::csv);
  CHECK_THROWS_AS(format_from_string("html"), SchemaError);
}
