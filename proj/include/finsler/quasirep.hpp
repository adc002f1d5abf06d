#pragma once

// Quasi-representations Phi: E -> B(H, K) of a Finsler module over a linear
// map phi: A -> B(H). Phi is stored by the images of the module generators and
// extended linearly through Phi(g pi(a)) = Phi(g) phi(a).

#include <cstdint>
#include <vector>

#include "finsler/algebra.hpp"
#include "finsler/module.hpp"
#include "finsler/numkit.hpp"

namespace finsler {

class QuasiRep {
 public:
  /// `generator_images[i]` is Phi(g_i), a dim_k x phi.dim() matrix. The
  /// extension is least squares against the presentation {g_i pi(b)}; any
  /// disagreement between presentations of one element is recorded in
  /// well_definedness_residual() rather than thrown.
  QuasiRep(FinslerModule module, AlgebraMap phi, std::size_t dim_k, std::vector<CMatrix> generator_images,
           const Tolerance& tol = {});

  const FinslerModule& module() const noexcept { return module_; }
  const AlgebraMap& phi() const noexcept { return phi_; }
  const Tolerance& tolerance() const noexcept { return tol_; }
  std::size_t dim_h() const noexcept { return phi_.dim(); }
  std::size_t dim_k() const noexcept { return dim_k_; }
  const std::vector<CMatrix>& images() const noexcept { return images_; }

  /// ||Q N|| / (1 + ||Q||) with N an orthonormal basis of the presentation
  /// kernel and Q the presented images.
  double well_definedness_residual() const noexcept { return well_defined_; }

  CMatrix operator()(const ModuleElement& x) const { return apply(x.matrix()); }

 private:
  CMatrix apply(const CMatrix& m) const;

  FinslerModule module_;
  AlgebraMap phi_;
  std::size_t dim_k_;
  std::vector<CMatrix> images_;
  Tolerance tol_;
  CMatrix linear_;  // (dim_k * dim_h) x (rows * cols), acting on row-major vec(x)
  double well_defined_ = 0.0;
};

/// rho_0(T) = (T*T)^{1/2}.
CMatrix rho0(const CMatrix& t);

/// The localisation E (x)_phi H: Gram G[(i,s),(j,t)] = phi(<g_i, g_j>)_{st}
/// quotiented by its kernel. Throws Errc::gram_not_psd on a clearly
/// indefinite Gram matrix.
QuasiRep build_quasirep(const FinslerModule& module, const Representation& phi, const Tolerance& tol = {});

/// The localisation Gram matrix itself.
CMatrix localization_gram(const FinslerModule& module, const AlgebraMap& phi);

struct QuasiRepReport {
  double max_identity_residual = 0.0;
  double max_action_residual = 0.0;
  double well_definedness_residual = 0.0;
  std::size_t samples = 0;
  bool identity_ok = false;
  bool action_ok = false;
  /// Both identities hold (and the extension is well defined).
  bool pass = false;
  /// Only rho_0(Phi(x)) = phi(rho(x)) holds.
  bool weak = false;
};

/// Samples x and (x, a). Identity residual ||rho0(Phi(x)) - phi(rho(x))|| / (1 + ||x||),
/// action residual ||Phi(xa) - Phi(x) phi(a)|| / (1 + ||x|| ||a||). The
/// generators themselves are always included.
QuasiRepReport verify_quasirep(const QuasiRep& q, std::size_t sample_count, std::uint64_t seed);

}  // namespace finsler
