#pragma once

// Self-checking reproductions of the named examples. Each scenario is a pure
// function of its seed; expected values are integers or residual bounds.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "finsler/algebra.hpp"
#include "finsler/module.hpp"

namespace finsler {

struct Check {
  std::string description;
  std::string expected;
  std::string observed;
  bool pass = false;
  friend bool operator==(const Check&, const Check&) = default;
};

struct ScenarioResult {
  std::string name;
  std::string description;
  std::vector<Check> checks;
  bool overall_pass() const;
  friend bool operator==(const ScenarioResult&, const ScenarioResult&) = default;
};

/// A = M_a + M_b on C^{a+b}, E = A P with P = I_a + 0, and the identity
/// quasi-representation Phi(aP) = aP. With trivial = true, P = I.
ScenarioResult run_central_projection_counterexample(std::size_t a, std::size_t b, bool trivial, std::uint64_t seed);

/// E = A = M_n over phi = identity of multiplicity m. With `localized`
/// Phi comes from build_quasirep, otherwise Phi(x) = x (m = 1 only).
ScenarioResult run_matrix_identity(std::size_t n, std::size_t multiplicity, bool localized, std::uint64_t seed);

/// Builds Phi on (module, phi), checks the quasi-representation identity on
/// 50 samples and dim K = localisation Gram rank.
ScenarioResult run_localization_demo(const FinslerModule& module, const Representation& phi, std::uint64_t seed);

ScenarioResult run_remark_4_3(std::uint64_t seed = 42);
ScenarioResult run_example_4_9(std::uint64_t seed = 42, std::size_t n = 3);
ScenarioResult run_example_4_10(std::uint64_t seed = 42, std::size_t n = 3);
ScenarioResult run_theorem_2_3_demo(std::uint64_t seed = 42);
/// Module dilation on a CP, non-multiplicative phi, plus the failure modes.
ScenarioResult run_theorem_3_2_demo(std::uint64_t seed = 42);
/// Random full modules with irreducible phi; every transfer implication must hold.
ScenarioResult run_transfer_sweep(std::uint64_t seed = 42, std::size_t instances = 30);
/// Deliberately broken inputs that the verifiers must reject.
ScenarioResult run_negative_controls(std::uint64_t seed = 42);

/// Stable identifiers, in run order.
const std::vector<std::string>& scenario_names();
std::optional<ScenarioResult> run_by_name(const std::string& name, std::uint64_t seed = 42);
std::vector<ScenarioResult> run_all(std::uint64_t seed = 42);

}  // namespace finsler
