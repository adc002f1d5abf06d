#pragma once

// Concrete Finsler modules: right A-modules realised inside q x p matrices,
// with A acting on the right through a faithful representation pi on C^p.
// The map rho is derived from the module, never supplied: pi(rho(x))^2 = x*x.

#include <cstdint>
#include <functional>
#include <vector>

#include "finsler/algebra.hpp"
#include "finsler/numkit.hpp"

namespace finsler {

class FinslerModule;
class Sampler;

class ModuleElement {
 public:
  const CMatrix& matrix() const noexcept { return matrix_; }

 private:
  friend class FinslerModule;
  explicit ModuleElement(CMatrix m) : matrix_(std::move(m)) {}
  CMatrix matrix_;
};

class FinslerModule {
 public:
  /// Module generated by `generators` under the right action: the complex
  /// span of { g pi(a) }. Throws Errc::not_in_algebra when some x*x falls
  /// outside pi(A).
  FinslerModule(Representation action, std::size_t ambient_rows, std::vector<CMatrix> generators,
                const Tolerance& tol = {});

  /// Module given as the plain linear span of `elements`. The span must
  /// already be closed under the action (Errc::action_not_closed otherwise).
  static FinslerModule exact_span(Representation action, std::size_t ambient_rows,
                                  std::vector<CMatrix> elements, const Tolerance& tol = {});

  const CStarAlgebra& algebra() const noexcept { return action_.algebra(); }
  const Representation& action() const noexcept { return action_; }
  const Tolerance& tolerance() const noexcept { return tol_; }
  std::size_t ambient_rows() const noexcept { return rows_; }
  std::size_t ambient_cols() const noexcept { return action_.dim(); }
  const std::vector<CMatrix>& generators() const noexcept { return generators_; }

  /// Orthonormal (Frobenius) basis of the module as a vector space.
  const std::vector<CMatrix>& span_basis() const noexcept { return span_basis_; }
  std::size_t span_dim() const noexcept { return span_basis_.size(); }

  /// Wraps a matrix after checking membership (Errc::not_in_module).
  ModuleElement element(const CMatrix& m) const;
  ModuleElement generator(std::size_t i) const { return ModuleElement(generators_.at(i)); }
  ModuleElement zero() const { return ModuleElement(CMatrix(rows_, ambient_cols())); }
  /// sum_k coeffs[k] * span_basis()[k]
  ModuleElement combination(std::span<const Complex> coeffs) const;

  ModuleElement act(const ModuleElement& x, const AlgElement& a) const;
  /// <x, y> = pi^{-1}(x*y).
  AlgElement inner(const ModuleElement& x, const ModuleElement& y) const;
  AlgElement rho_squared(const ModuleElement& x) const { return inner(x, x); }
  AlgElement rho(const ModuleElement& x) const;

 private:
  FinslerModule(Representation action, std::size_t rows, std::vector<CMatrix> generators,
                std::vector<CMatrix> spanning, bool require_closed, const Tolerance& tol);

  Representation action_;
  std::size_t rows_;
  std::vector<CMatrix> generators_;
  std::vector<CMatrix> span_basis_;
  Tolerance tol_;
};

/// Free-function forms of the module operations.
ModuleElement act(const FinslerModule& e, const ModuleElement& x, const AlgElement& a);
AlgElement rho(const FinslerModule& e, const ModuleElement& x);
/// max over blocks of the operator norm of rho(x).
double module_norm(const FinslerModule& e, const ModuleElement& x);

struct RandomModuleOptions {
  std::size_t max_rows = 6;
  std::size_t max_generators = 4;
  /// Every block receives at least one row, which makes the module full.
  bool require_full = false;
  /// Action multiplicities; empty means one per block.
  std::vector<std::size_t> multiplicities;
  /// Random unitary changes of basis on both sides.
  bool rotate = true;
  /// Adds an isometric generator x with x*x = pi(1), so rho(x) = 1.
  /// Needs q_k >= n_k on every block.
  bool unit_generator = false;
};

/// Generators U (sum_k G_k (x) I_{m_k}) V* with Gaussian G_k of shape
/// q_k x n_k and sum_k q_k m_k <= max_rows.
FinslerModule random_module(const CStarAlgebra& algebra, Sampler& sampler, const RandomModuleOptions& options = {},
                            const Tolerance& tol = {});

/// Draws a random element with complex Gaussian coordinates in span_basis().
ModuleElement sample_element(const FinslerModule& e, Sampler& sampler);

struct AxiomReport {
  double max_residual = 0.0;
  std::size_t samples = 0;
  bool pass = true;
};

using RhoSquaredFn = std::function<AlgElement(const ModuleElement&)>;

/// Checks rho(xa)^2 = a* rho(x)^2 a on `sample_count` random pairs, each
/// residual scaled by 1 + ||a||^2 ||x||^2. Passes when the maximum stays
/// within 10 * eq_tol. The default squares the module's own rho; a custom
/// `rho_squared` exists for negative testing.
AxiomReport verify_finsler_axiom(const FinslerModule& e, std::size_t sample_count, std::uint64_t seed,
                                 const RhoSquaredFn& rho_squared = {});

struct FullnessReport {
  std::size_t span_dim = 0;
  std::size_t algebra_dim = 0;
  std::size_t samples = 0;
  bool full = false;
};

/// Grows span{rho(x)^2} over random x until it is unchanged for
/// 3 * dim(A) consecutive samples.
FullnessReport fullness(const FinslerModule& e, std::uint64_t seed = 0x5eed);
bool is_full(const FinslerModule& e, std::uint64_t seed = 0x5eed);

}  // namespace finsler
