#pragma once

// Scenario files in, reports out. The command functions are the whole
// behaviour of the command-line tool; the executable only parses flags.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "finsler/numkit.hpp"
#include "finsler/scenarios.hpp"

namespace finsler::cli {

/// Malformed or inconsistent input. The message starts with the field path.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioFile {
  std::vector<std::size_t> blocks;
  std::vector<std::size_t> multiplicities;         // phi
  std::vector<std::size_t> action_multiplicities;  // module action, one per block by default
  std::size_t ambient_rows = 0;
  std::vector<CMatrix> generators;
  std::optional<std::vector<CMatrix>> kraus;
  std::optional<std::vector<CMatrix>> images;  // Phi(g_i)
  Tolerance tol;
  std::uint64_t seed = 42;
  std::size_t sample_count = 100;
};

/// Parses and validates JSON text; throws InputError.
ScenarioFile parse_scenario_file(const std::string& text);

struct Overrides {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
};

void apply_overrides(ScenarioFile& file, const Overrides& o);

struct Report {
  int schema_version = 1;
  std::string command;
  std::string input_digest;
  std::vector<Check> checks;
  std::map<std::string, double> residuals;
  std::map<std::string, std::int64_t> dimensions;
  std::map<std::string, bool> properties;
  std::vector<ScenarioResult> scenarios;
  std::optional<double> wall_time_seconds;

  bool pass() const;
  friend bool operator==(const Report&, const Report&) = default;
};

std::string to_json(const Report& r);
/// Throws InputError on malformed documents.
Report report_from_json(const std::string& text);
std::string to_text(const Report& r);

/// FNV-1a 64-bit, as 16 hex digits.
std::string digest(const std::string& bytes);

Report cmd_verify_module(const std::string& text, const Overrides& o = {});
Report cmd_quasirep(const std::string& text, const Overrides& o = {});
Report cmd_dilate(const std::string& text, const Overrides& o = {});
Report cmd_dilate_module(const std::string& text, const Overrides& o = {});
Report cmd_analyze(const std::string& text, const Overrides& o = {});
/// `name` is a scenario identifier or "all". Throws InputError for unknown names.
Report cmd_repro(const std::string& name, std::uint64_t seed = 42);

}  // namespace finsler::cli
