#pragma once

// Completely positive maps, their minimal Stinespring dilation, and the
// module-level dilation of a quasi-representation with a residual certificate.

#include <optional>
#include <vector>

#include "finsler/algebra.hpp"
#include "finsler/quasirep.hpp"

namespace finsler {

/// Raised when a quasi-representation does not satisfy the identities the
/// module dilation consumes. Carries the offending residual.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, double residual)
      : Error(Errc::precondition_failed, what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class CPMap {
 public:
  /// phi(a) = sum_r K_r pi_c(a) K_r* with pi_c the canonical representation;
  /// each K_r is dim_h x canonical_dim.
  static CPMap from_kraus(const CStarAlgebra& algebra, std::vector<CMatrix> kraus, const Tolerance& tol = {});
  /// Raw images of the basis. Checks phi(a*) = phi(a)* (Errc::not_hermitian).
  static CPMap from_images(const CStarAlgebra& algebra, std::size_t dim_h, std::vector<CMatrix> images,
                           const Tolerance& tol = {});
  static CPMap from_map(AlgebraMap map, const Tolerance& tol = {});

  const CStarAlgebra& algebra() const noexcept { return map_.algebra(); }
  std::size_t dim() const noexcept { return map_.dim(); }
  const AlgebraMap& map() const noexcept { return map_; }
  const std::optional<std::vector<CMatrix>>& kraus() const noexcept { return kraus_; }
  CMatrix operator()(const AlgElement& a) const { return map_(a); }

 private:
  CPMap(AlgebraMap map, std::optional<std::vector<CMatrix>> kraus) : map_(std::move(map)), kraus_(std::move(kraus)) {}

  AlgebraMap map_;
  std::optional<std::vector<CMatrix>> kraus_;
};

/// sum over basis b of pi_c(b) (x) phi(b), a (p dim_h)^2 Hermitian matrix.
CMatrix choi(const CPMap& phi);
bool is_completely_positive(const CPMap& phi, const Tolerance& tol = {});

struct ScalarDilation {
  Representation theta;
  CMatrix v;  // dim x phi.dim()
  std::size_t dim = 0;
  /// max over basis a of ||phi(a) - V* theta(a) V|| / (1 + ||a||)
  double reconstruction_residual = 0.0;
  /// ||V*V - phi(1)||
  double isometry_residual = 0.0;
};

/// Minimal dilation over A (x) C^dim_h with Gram <a(x)h, b(x)h'> = <h, phi(a*b) h'>.
/// Throws Errc::not_cp.
ScalarDilation stinespring(const CPMap& phi, const Tolerance& tol = {});

struct DilationResiduals {
  double scalar_dilation = 0.0;
  double isometry_v = 0.0;
  double module_reconstruction = 0.0;
  double theta_morphism = 0.0;
  double action_compat = 0.0;
  double projection_w = 0.0;
  /// max(0, ||Psi(g)|| - ||g||)
  double bound_excess = 0.0;
  /// Disagreement of Psi across dependent spanning vectors.
  double psi_well_definedness = 0.0;
};

struct DilationCertificate {
  Representation theta;
  CMatrix v;                 // dim_h' x dim_h
  CMatrix w;                 // dim_k' x dim_k, W W* = I
  std::vector<CMatrix> psi;  // Psi(g_i), dim_k' x dim_h'
  CMatrix psi_linear;        // acts on row-major vec(x)
  std::size_t dim_h = 0;
  std::size_t dim_k = 0;
  std::size_t dim_h_prime = 0;
  std::size_t dim_k_prime = 0;
  DilationResiduals residuals;
  double threshold = 0.0;  // 10 * eq_tol

  bool valid() const;
};

CMatrix psi(const DilationCertificate& cert, const ModuleElement& x);

/// Requires phi CP and unital, and the squared identity Phi(x)*Phi(y) =
/// phi(<x,y>) together with Phi(xa) = Phi(x)phi(a) on the module
/// (PreconditionError otherwise).
DilationCertificate module_stinespring(const QuasiRep& q, const Tolerance& tol = {});

}  // namespace finsler
