#include "doctest.h"

#include <fstream>
#include <sstream>
#include <string>

#include "finsler/cli.hpp"

using namespace finsler;
using namespace finsler::cli;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(FINSLER_DATA_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::string& text) {
  try {
    (void)parse_scenario_file(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("scenario file parsing") {
  const ScenarioFile f = parse_scenario_file(slurp("m2_self.json"));
  CHECK(f.blocks == std::vector<std::size_t>{2});
  CHECK(f.multiplicities == std::vector<std::size_t>{1});
  CHECK(f.ambient_rows == 2);
  REQUIRE(f.generators.size() == 1);
  CHECK(f.generators[0] == CMatrix::identity(2));
  CHECK(f.seed == 42);
}

TEST_CASE("validation errors carry the field path") {
  CHECK(error_of(slurp("malformed_blocks.json")).find("algebra.blocks") != std::string::npos);
  CHECK(error_of("{").find("invalid JSON") != std::string::npos);
  CHECK(error_of(R"({"algebra": {"blocks": [2]}, "representation": {"multiplicities": [1]},
                     "module": {"ambient_rows": 2, "generators": [[[1, 0, 0], [0, 1, 0]]]}})")
            .find("module.generators[0]") != std::string::npos);
  CHECK(error_of(R"({"algebra": {"blocks": [2]}, "representation": {"multiplicities": [1, 1]},
                     "module": {"ambient_rows": 2, "generators": []}})")
            .find("representation.multiplicities") != std::string::npos);
}

TEST_CASE("command line values override file values") {
  ScenarioFile f = parse_scenario_file(slurp("m2_self.json"));
  apply_overrides(f, {1e-7, 9u, 12u});
  CHECK(f.tol.eq_tol == 1e-7);
  CHECK(f.seed == 9);
  CHECK(f.sample_count == 12);
  CHECK_THROWS_AS(apply_overrides(f, {2.0, {}, {}}), InputError);
}

TEST_CASE("commands on the bundled files") {
  const Report v = cmd_verify_module(slurp("m2_self.json"));
  CHECK(v.pass());
  CHECK(v.properties.at("full"));
  CHECK(cmd_quasirep(slurp("m2_self.json")).pass());
  CHECK(cmd_dilate(slurp("cp_module.json")).pass());
  CHECK(cmd_dilate_module(slurp("cp_module.json")).pass());
  CHECK(cmd_analyze(slurp("random_m3.json")).pass());
  CHECK_FALSE(cmd_quasirep(slurp("doubled_image.json")).pass());
  const Report c = cmd_verify_module(slurp("central_projection.json"));
  CHECK(c.pass());
  CHECK_FALSE(c.properties.at("full"));
}

TEST_CASE("reports round-trip through JSON") {
  for (const Report& r : {cmd_dilate_module(slurp("cp_module.json")), cmd_analyze(slurp("central_projection.json")),
                          cmd_repro("remark-4-3")}) {
    const std::string text = to_json(r);
    CHECK(report_from_json(text) == r);
    CHECK(to_json(report_from_json(text)) == text);
    CHECK(text.find("\"schema_version\": 1") != std::string::npos);
  }
  Report timed = cmd_repro("theorem-2-3");
  timed.wall_time_seconds = 0.25;
  CHECK(report_from_json(to_json(timed)) == timed);
}

TEST_CASE("text output carries the rank line") {
  const std::string text = to_text(cmd_repro("remark-4-3"));
  CHECK(text.find("span Φ(E)H: 2 / 4") != std::string::npos);
}

TEST_CASE("identical input gives identical structured output") {
  CHECK(to_json(cmd_analyze(slurp("random_m3.json"))) == to_json(cmd_analyze(slurp("random_m3.json"))));
  CHECK(digest("abc") == digest("abc"));
  CHECK(digest("abc") != digest("abd"));
  CHECK_THROWS_AS(cmd_repro("nonsense"), InputError);
}
