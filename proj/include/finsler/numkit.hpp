#pragma once

// Dense complex linear algebra used by every other layer of the library.
//
// All routines are deterministic and allocation-based; nothing here is tuned
// for large problems. Typical operand sizes are below a few hundred rows.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace finsler {

using Complex = std::complex<double>;

enum class Errc {
  not_hermitian,
  not_positive,
  empty_input,
  shape_mismatch,
  algebra_mismatch,
  not_in_algebra,
  not_in_module,
  action_not_closed,
  not_homomorphism,
  gram_not_psd,
  not_cp,
  precondition_failed,
  invalid_argument,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Equality and rank thresholds shared by every check in the library.
struct Tolerance {
  double eq_tol = 1e-9;     // relative equality threshold
  double rank_tol = 1e-10;  // singular-value cutoff relative to the largest

  /// Throws Errc::invalid_argument unless both values lie in (0, 1).
  void validate() const;
};

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static CMatrix diagonal(std::span<const double> values);
  static CMatrix diagonal(std::span<const Complex> values);
  /// Column vector holding `values`.
  static CMatrix column(std::span<const Complex> values);
  /// n x n matrix unit with a single 1 at (i, j).
  static CMatrix unit(std::size_t n, std::size_t i, std::size_t j);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conj() const;

  CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const CMatrix& b);
  CMatrix col(std::size_t j) const;
  void set_col(std::size_t j, const CMatrix& v);

  /// Row-major flattening as a (rows*cols) x 1 column.
  CMatrix flatten() const;
  /// Inverse of flatten().
  static CMatrix unflatten(const CMatrix& v, std::size_t rows, std::size_t cols);

  double frobenius_norm() const;
  Complex trace() const;
  bool all_finite() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(Complex s);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(Complex s, CMatrix a);
CMatrix operator*(CMatrix a, Complex s);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix direct_sum(std::span<const CMatrix> blocks);
/// Concatenate matrices with equal row counts side by side.
CMatrix hstack(std::span<const CMatrix> parts, std::size_t rows);
/// Inner product <a, b> = sum conj(a_ij) b_ij.
Complex inner(const CMatrix& a, const CMatrix& b);

// ---------------------------------------------------------------------------
// Decompositions

struct HermEig {
  std::vector<double> values;  // descending
  CMatrix vectors;             // columns are eigenvectors, M = U diag(values) U*
};

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
HermEig herm_eig(const CMatrix& m, const Tolerance& tol = {});

/// Positive square root; eigenvalues within -eq_tol*(1+||M||) are clamped to 0.
CMatrix psd_sqrt(const CMatrix& m, const Tolerance& tol = {});

struct Svd {
  std::vector<double> values;  // descending, one per column of the input
  CMatrix u;                   // rows x cols, columns normalised where values > 0
  CMatrix v;                   // cols x cols, unitary
};

/// Singular value decomposition M = U diag(values) V* by one-sided Jacobi.
/// Tall inputs are first reduced to a square triangle by Householder QR.
/// For wide inputs the trailing cols - rows values are (numerically) zero.
Svd svd(const CMatrix& m);

/// Largest singular value; 0 for empty or zero matrices.
double op_norm(const CMatrix& m);

/// |T| = (T*T)^{1/2}, computed from the SVD of T.
CMatrix abs_value(const CMatrix& t);

struct SpanInfo {
  std::size_t rank = 0;
  std::vector<CMatrix> basis;  // orthonormal columns in the flattened space
};

/// Rank and orthonormal basis of the span of `vectors`, each flattened
/// row-major. Throws Errc::empty_input for an empty list.
SpanInfo span_rank(std::span<const CMatrix> vectors, const Tolerance& tol = {});

struct LeastSquares {
  CMatrix x;
  double residual = 0.0;  // Frobenius norm of A x - b
};

/// Numerical rank with the relative singular-value cutoff.
std::size_t matrix_rank(const CMatrix& a, const Tolerance& tol = {});

/// Minimum-norm least-squares solution of A x = b (b may have several columns).
LeastSquares least_squares(const CMatrix& a, const CMatrix& b, const Tolerance& tol = {});

CMatrix pseudo_inverse(const CMatrix& a, const Tolerance& tol = {});

/// Orthonormal basis (columns) of ker A, using the relative rank cutoff.
CMatrix null_space(const CMatrix& a, const Tolerance& tol = {});

/// Quotient of a PSD Gram matrix by its null space.
///
/// With G = U diag(l) U*, keeps eigenvalues above rank_tol * max(l) and returns
/// embed = diag(sqrt(l)) U_r* (so that embed* embed ~ G) and
/// lift = U_r diag(1/sqrt(l)) (so that embed * lift = I_r).
struct GramFactor {
  std::size_t rank = 0;
  CMatrix embed;
  CMatrix lift;
  std::vector<double> kept;
};

GramFactor gram_factor(const CMatrix& gram, const Tolerance& tol = {});

}  // namespace finsler
