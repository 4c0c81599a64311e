#include "compatlab/exact/scenario.hpp"

#include "doctest.h"

using namespace compatlab;
using namespace compatlab::exact;
using nlohmann::json;

namespace {

json base_scenario() {
  return json::parse(R"({
    "schema": "compatlab.scenario/1",
    "atoms": ["00", "01", "10", "11", "null"],
    "weights": ["1/4", "1/4", "1/4", "1/4", 0],
    "rvs": {
      "y": [[0, 0], [0, 1], [1, 0], [1, 1], [9, 9]],
      "past": [0, 0, 1, 1, 5],
      "future": [0, 1, 0, 1, 5],
      "m_early": [0, 0, 1, 1, 0],
      "m_late": ["-1/2", "1/2", "1/2", "3/2", 0]
    },
    "structure": {
      "alphas": [{"name": "early", "x": "all", "y": [0]}, {"name": "late", "x": "all", "y": "all"}],
      "order": [["early", "late"]]
    },
    "checks": [
      {"type": "compatibility", "x": "past", "y": "y"},
      {"type": "compatibility", "x": "future", "y": "y", "expect": "fail"},
      {"type": "dual", "x": "future", "y": "y", "expect": "fail"},
      {"type": "adapted", "x": "past", "y": "y"},
      {"type": "joint", "x1": "past", "x2": "past", "y": "y"},
      {"type": "martingale", "m": ["m_early", "m_late"], "x": "past", "y": "y"}
    ]
  })");
}

}  // namespace

TEST_CASE("scenario run") {
  auto report = run_scenario(base_scenario());
  CHECK(report["schema"] == kScenarioReportSchema);
  CHECK(report["arithmetic"] == "rational");
  CHECK(report["pass"] == true);
  REQUIRE(report["checks"].size() == 6);
  const auto& future = report["checks"][1];
  CHECK(future["pass"] == false);
  CHECK(future["matches_expectation"] == true);
  CHECK(future["alphas"][0]["max_deviation"] == "1/2");
  CHECK(report["checks"][0]["alphas"][0]["max_deviation"] == "0/1");
}

TEST_CASE("scenario outcome against expectation") {
  auto doc = base_scenario();
  doc["checks"][1]["expect"] = "pass";
  CHECK(run_scenario(doc)["pass"] == false);
}

TEST_CASE("float scenarios") {
  auto doc = base_scenario();
  doc["arithmetic"] = "float";
  doc["weights"] = {0.25, 0.25, 0.25, 0.25, 0.0};
  auto report = run_scenario(doc);
  CHECK(report["pass"] == true);
  CHECK(report["checks"][1]["alphas"][0]["max_deviation"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("partial test-function sets") {
  auto doc = base_scenario();
  doc["structure"]["h"] = json::parse(R"([{"name": "y1", "component": 0}])");
  doc["checks"] = json::parse(R"([{"type": "compatibility", "x": "future", "y": "y"}])");
  CHECK(run_scenario(doc)["pass"] == true);
  doc["structure"]["h"] = json::parse(R"([{"indicator": [1, 1]}])");
  doc["checks"][0]["expect"] = "fail";
  CHECK(run_scenario(doc)["pass"] == true);
}

TEST_CASE("malformed scenarios are configuration errors") {
  auto expect_config_error = [](json doc) { CHECK_THROWS_AS(run_scenario(doc), ConfigError); };
  {
    auto doc = base_scenario();
    doc["schema"] = "other/1";
    expect_config_error(doc);
  }
  {
    auto doc = base_scenario();
    doc["weights"][0] = "1/3";
    expect_config_error(doc);
  }
  {
    auto doc = base_scenario();
    doc["checks"][0]["x"] = "missing";
    expect_config_error(doc);
  }
  {
    auto doc = base_scenario();
    doc["checks"][0]["type"] = "bogus";
    expect_config_error(doc);
  }
  {
    auto doc = base_scenario();
    doc["weights"][0] = 0.25;
    expect_config_error(doc);
  }
  {
    auto doc = base_scenario();
    doc["rvs"]["past"] = {0, 0};
    expect_config_error(doc);
  }
  {
    auto doc = base_scenario();
    doc["arithmetic"] = "decimal";
    expect_config_error(doc);
  }
  {
    auto doc = base_scenario();
    doc.erase("structure");
    expect_config_error(doc);
  }
  {
    auto doc = base_scenario();
    doc["checks"][5]["m"] = {"m_late", "m_late"};
    expect_config_error(doc);
  }
  expect_config_error(json::array());
}

TEST_CASE("rational literals") {
  CHECK(render_rational(parse_rational("3/6")) == "1/2");
  CHECK(render_rational(parse_rational("0")) == "0/1");
  CHECK(render_rational(parse_rational("-0.25")) == "-1/4");
  CHECK(render_rational(parse_rational(" 7 ")) == "7/1");
  CHECK(render_rational(parse_rational("-2/-4")) == "1/2");
  CHECK_THROWS_AS(parse_rational("1/0"), ConfigError);
  CHECK_THROWS_AS(parse_rational("abc"), ConfigError);
  CHECK_THROWS_AS(parse_rational(""), ConfigError);
  CHECK_THROWS_AS(parse_rational("1.2.3"), ConfigError);
  CHECK(NumTraits<double>::parse("1/4") == 0.25);
  CHECK_THROWS_AS(NumTraits<double>::parse("x"), ConfigError);
}
