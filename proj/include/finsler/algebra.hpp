#pragma once

// Finite-dimensional C*-algebras presented as direct sums of full matrix
// blocks M_{n_1} + ... + M_{n_k}, together with linear maps out of them,
// representations, states and commutants.
//
// Basis convention: the matrix units E^{(k)}_{ij}, ordered by block k, then
// row i, then column j. Coordinates of an element are its block entries
// concatenated in that order.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "finsler/numkit.hpp"

namespace finsler {

class AlgElement;

class CStarAlgebra {
 public:
  explicit CStarAlgebra(std::vector<std::size_t> block_dims);

  const std::vector<std::size_t>& block_dims() const noexcept { return dims_; }
  std::size_t num_blocks() const noexcept { return dims_.size(); }
  /// Linear dimension, sum of n_i^2.
  std::size_t dim() const noexcept { return dim_; }
  /// Dimension of the defining (multiplicity-one) representation, sum of n_i.
  std::size_t canonical_dim() const noexcept { return canonical_dim_; }
  /// Coordinate offset of block k.
  std::size_t block_offset(std::size_t k) const { return offsets_.at(k); }

  AlgElement zero() const;
  AlgElement one() const;
  /// Central projection onto block k.
  AlgElement block_unit(std::size_t k) const;
  AlgElement basis(std::size_t index) const;
  std::vector<AlgElement> basis() const;
  AlgElement from_coords(std::span<const Complex> coords) const;

  /// Matrix of left multiplication by `a` in basis coordinates (dim x dim).
  CMatrix left_multiplication(const AlgElement& a) const;

  friend bool operator==(const CStarAlgebra&, const CStarAlgebra&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;
  std::size_t dim_ = 0;
  std::size_t canonical_dim_ = 0;
};

class AlgElement {
 public:
  explicit AlgElement(std::vector<CMatrix> blocks);

  CStarAlgebra algebra() const;
  const std::vector<CMatrix>& blocks() const noexcept { return blocks_; }
  const CMatrix& block(std::size_t k) const { return blocks_.at(k); }
  std::vector<Complex> coords() const;

  AlgElement adjoint() const;
  /// C*-norm: the largest operator norm over blocks.
  double norm() const;
  bool same_algebra(const AlgElement& other) const;

  AlgElement& operator+=(const AlgElement& o);
  AlgElement& operator-=(const AlgElement& o);
  AlgElement& operator*=(Complex s);

 private:
  std::vector<CMatrix> blocks_;
};

AlgElement operator+(AlgElement a, const AlgElement& b);
AlgElement operator-(AlgElement a, const AlgElement& b);
AlgElement operator*(Complex s, AlgElement a);
AlgElement operator*(const AlgElement& a, const AlgElement& b);

/// Blockwise product; throws Errc::algebra_mismatch for elements of different algebras.
AlgElement multiply(const AlgElement& a, const AlgElement& b);
AlgElement involution(const AlgElement& a);
bool is_positive(const AlgElement& a, const Tolerance& tol = {});
/// (a*a)^{1/2}, blockwise.
AlgElement abs_sqrt(const AlgElement& a);

/// A linear map from a block algebra into N x N matrices, stored by the
/// images of the basis.
class AlgebraMap {
 public:
  AlgebraMap(CStarAlgebra algebra, std::size_t dim, std::vector<CMatrix> basis_images);

  const CStarAlgebra& algebra() const noexcept { return algebra_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<CMatrix>& basis_images() const noexcept { return images_; }

  CMatrix operator()(const AlgElement& a) const;
  CMatrix operator()(std::span<const Complex> coords) const;

  /// Largest residual of phi(ab) - phi(a)phi(b) and phi(a*) - phi(a)* over basis pairs.
  double homomorphism_residual() const;

 private:
  CStarAlgebra algebra_;
  std::size_t dim_;
  std::vector<CMatrix> images_;
};

/// rank span{phi(b) e_s} == dim.
bool map_is_nondegenerate(const AlgebraMap& phi, const Tolerance& tol = {});
/// Commutant of the image is one-dimensional.
bool map_is_irreducible(const AlgebraMap& phi, const Tolerance& tol = {});

/// A *-representation pi(a) = U (sum_i a_i (x) I_{m_i}) U*.
class Representation {
 public:
  Representation(CStarAlgebra algebra, std::vector<std::size_t> multiplicities,
                 std::optional<CMatrix> basis_unitary = std::nullopt, const Tolerance& tol = {});

  /// Multiplicity one on every block, no change of basis.
  static Representation canonical(const CStarAlgebra& algebra);

  /// Accepts raw images of the basis after checking multiplicativity and
  /// the involution on all basis pairs (Errc::not_homomorphism otherwise).
  /// Multiplicities are read off the ranks of the central projections.
  static Representation from_images(const CStarAlgebra& algebra, std::size_t dim,
                                    std::vector<CMatrix> images, const Tolerance& tol = {});

  const CStarAlgebra& algebra() const noexcept { return map_.algebra(); }
  const std::vector<std::size_t>& multiplicities() const noexcept { return mult_; }
  const std::optional<CMatrix>& basis_unitary() const noexcept { return unitary_; }
  std::size_t dim() const noexcept { return map_.dim(); }
  const AlgebraMap& map() const noexcept { return map_; }
  bool is_faithful() const;

  CMatrix operator()(const AlgElement& a) const { return map_(a); }

  struct Preimage {
    AlgElement element;
    double residual;  // Frobenius norm of pi(element) - m
  };
  /// Least-squares preimage of `m` in pi(A).
  Preimage preimage(const CMatrix& m) const;

 private:
  Representation(AlgebraMap map, std::vector<std::size_t> multiplicities,
                 std::optional<CMatrix> unitary, const Tolerance& tol);

  AlgebraMap map_;
  std::vector<std::size_t> mult_;
  std::optional<CMatrix> unitary_;
  CMatrix pinv_;  // dim(A) x N^2
};

bool rep_is_irreducible(const Representation& pi, const Tolerance& tol = {});
bool rep_is_nondegenerate(const Representation& pi, const Tolerance& tol = {});

/// phi(a) = sum_k tr(D_k a_k) with PSD density blocks of total trace one.
class State {
 public:
  State(CStarAlgebra algebra, std::vector<CMatrix> density_blocks, const Tolerance& tol = {});

  const CStarAlgebra& algebra() const noexcept { return algebra_; }
  const std::vector<CMatrix>& density_blocks() const noexcept { return density_; }
  Complex operator()(const AlgElement& a) const;

 private:
  CStarAlgebra algebra_;
  std::vector<CMatrix> density_;
};

struct GnsResult {
  Representation rep;
  CMatrix cyclic_vector;  // N x 1
};

GnsResult gns(const State& state, const Tolerance& tol = {});

struct Commutant {
  std::size_t dimension = 0;
  std::vector<CMatrix> basis;  // orthonormal in the Frobenius inner product
};

/// All T on C^n with TX = XT and TX* = X*T for every X in `ops`.
Commutant commutant(std::span<const CMatrix> ops, std::size_t n, const Tolerance& tol = {});

}  // namespace finsler
