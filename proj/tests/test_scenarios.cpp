#include "doctest.h"

#include <algorithm>

#include "finsler/scenarios.hpp"

using namespace finsler;

TEST_CASE("every named scenario passes at the default seed") {
  for (const auto& name : scenario_names()) {
    SUBCASE(name.c_str()) {
      const auto r = run_by_name(name, 42);
      REQUIRE(r.has_value());
      CHECK(r->name == name);
      for (const auto& c : r->checks) {
        INFO(c.description << ": " << c.observed << " (expected " << c.expected << ")");
        CHECK(c.pass);
      }
      CHECK(r->overall_pass());
    }
  }
}

TEST_CASE("scenario identifiers are stable") {
  const auto& names = scenario_names();
  for (const char* id : {"remark-4-3", "example-4-9", "example-4-10", "theorem-2-3", "transfer-sweep"}) {
    CHECK(std::find(names.begin(), names.end(), id) != names.end());
  }
  CHECK_FALSE(run_by_name("no-such-scenario").has_value());
}

TEST_CASE("scenarios are deterministic given the seed") {
  CHECK(run_remark_4_3(7) == run_remark_4_3(7));
  CHECK(run_transfer_sweep(7, 6) == run_transfer_sweep(7, 6));
  CHECK(run_theorem_3_2_demo(7) == run_theorem_3_2_demo(7));
}

TEST_CASE("overall_pass is the conjunction of the checks") {
  ScenarioResult r;
  CHECK(r.overall_pass());
  r.checks.push_back({"a", "1", "1", true});
  CHECK(r.overall_pass());
  r.checks.push_back({"b", "1", "2", false});
  CHECK_FALSE(r.overall_pass());
}

TEST_CASE("central projection variants") {
  const ScenarioResult big = run_central_projection_counterexample(3, 2, false, 1);
  CHECK(big.overall_pass());
  const ScenarioResult control = run_central_projection_counterexample(2, 2, true, 1);
  CHECK(control.overall_pass());
}

TEST_CASE("example-4-9 at other sizes") {
  CHECK(run_example_4_9(3, 2).overall_pass());
  CHECK(run_example_4_9(3, 4).overall_pass());
}
