#pragma once

// Nondegeneracy and irreducibility of quasi-representations, and the checks
// that these properties pass between Phi and phi.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "finsler/quasirep.hpp"

namespace finsler {

struct Nondegeneracy {
  std::size_t range_rank = 0;    // rank span{Phi(x) h}
  std::size_t dim_k = 0;
  std::size_t corange_rank = 0;  // rank span{Phi(x)* k}
  std::size_t dim_h = 0;
  bool nondegenerate = false;
};

Nondegeneracy nondegeneracy(const QuasiRep& q);
bool is_nondegenerate(const QuasiRep& q);

struct OperatorPair {
  CMatrix s;  // on H
  CMatrix t;  // on K
};

/// All (S, T) with T Phi(x) = Phi(x) S and S Phi(x)* = Phi(x)* T on the module.
struct CommutantPairSpace {
  std::size_t dimension = 0;
  std::vector<OperatorPair> basis;  // orthonormal for the joint Frobenius product
};

CommutantPairSpace commutant_pairs(const QuasiRep& q);

/// max over x in the span basis of ||(1-Q) Phi(x) P|| and ||(1-P) Phi(x)* Q||.
double invariance_residual(const QuasiRep& q, const OperatorPair& projections);

struct Irreducibility {
  bool irreducible = false;
  std::size_t pair_dimension = 0;
  /// Nontrivial invariant projection pair (P, Q) when one was found.
  std::optional<OperatorPair> witness;
  double witness_residual = 0.0;
  /// How the witness was obtained: "range", "corange" or "spectral".
  std::string witness_kind;
};

Irreducibility is_irreducible(const QuasiRep& q);

struct Implication {
  std::string name;
  bool hypothesis = false;
  bool conclusion = false;
  bool respected() const { return !hypothesis || conclusion; }
};

struct TransferReport {
  bool module_full = false;
  bool rep_nondegenerate = false;
  bool rep_irreducible = false;
  bool quasirep_nondegenerate = false;
  bool quasirep_irreducible = false;
  bool unit_rho_found = false;
  std::vector<Implication> implications;
  bool all_respected() const;
};

/// Evaluates each transfer implication between phi and Phi. The unit-rho
/// hypothesis asks for some x (a generator, span basis vector or one of
/// `sample_count` random elements) with phi(rho(x)) = I.
TransferReport check_transfer(const QuasiRep& q, std::size_t sample_count = 100, std::uint64_t seed = 42);

}  // namespace finsler
