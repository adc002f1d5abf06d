#include "finsler/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace finsler {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::not_hermitian: return "NotHermitian";
    case Errc::not_positive: return "NotPositive";
    case Errc::empty_input: return "EmptyInput";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::algebra_mismatch: return "AlgebraMismatch";
    case Errc::not_in_algebra: return "NotInAlgebra";
    case Errc::not_in_module: return "NotInModule";
    case Errc::action_not_closed: return "ActionNotClosed";
    case Errc::not_homomorphism: return "NotHomomorphism";
    case Errc::gram_not_psd: return "GramNotPSD";
    case Errc::not_cp: return "NotCP";
    case Errc::precondition_failed: return "PreconditionFailed";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void Tolerance::validate() const {
  if (!(eq_tol > 0.0 && eq_tol < 1.0) || !(rank_tol > 0.0 && rank_tol < 1.0)) {
    throw Error(Errc::invalid_argument, "tolerances must lie in (0, 1)");
  }
}

// ---------------------------------------------------------------------------
// CMatrix

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw Error(Errc::shape_mismatch, "entry count does not match rows x cols");
  }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(Errc::shape_mismatch, "ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> values) {
  CMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> values) {
  CMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

CMatrix CMatrix::column(std::span<const Complex> values) {
  return CMatrix(values.size(), 1, std::vector<Complex>(values.begin(), values.end()));
}

CMatrix CMatrix::unit(std::size_t n, std::size_t i, std::size_t j) {
  CMatrix m(n, n);
  m(i, j) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

CMatrix CMatrix::transpose() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

CMatrix CMatrix::conj() const {
  CMatrix r = *this;
  for (auto& z : r.data_) z = std::conj(z);
  return r;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(Errc::shape_mismatch, "block out of range");
  CMatrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void CMatrix::set_block(std::size_t r0, std::size_t c0, const CMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) {
    throw Error(Errc::shape_mismatch, "block out of range");
  }
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

CMatrix CMatrix::col(std::size_t j) const { return block(0, j, rows_, 1); }

void CMatrix::set_col(std::size_t j, const CMatrix& v) { set_block(0, j, v); }

CMatrix CMatrix::flatten() const { return CMatrix(size(), 1, data_); }

CMatrix CMatrix::unflatten(const CMatrix& v, std::size_t rows, std::size_t cols) {
  return CMatrix(rows, cols, std::vector<Complex>(v.data_.begin(), v.data_.end()));
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

Complex CMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(Errc::shape_mismatch, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(Errc::shape_mismatch, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator-(CMatrix a) { return a *= -1.0; }
CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
CMatrix operator*(CMatrix a, Complex s) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw Error(Errc::shape_mismatch, "matrix product");
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return r;
}

CMatrix direct_sum(std::span<const CMatrix> blocks) {
  std::size_t rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  CMatrix r(rows, cols);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    r.set_block(r0, c0, b);
    r0 += b.rows();
    c0 += b.cols();
  }
  return r;
}

CMatrix hstack(std::span<const CMatrix> parts, std::size_t rows) {
  std::size_t cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw Error(Errc::shape_mismatch, "hstack row count");
    cols += p.cols();
  }
  CMatrix r(rows, cols);
  std::size_t c0 = 0;
  for (const auto& p : parts) {
    r.set_block(0, c0, p);
    c0 += p.cols();
  }
  return r;
}

Complex inner(const CMatrix& a, const CMatrix& b) {
  if (a.size() != b.size()) throw Error(Errc::shape_mismatch, "inner product");
  Complex s = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) s += std::conj(ea[k]) * eb[k];
  return s;
}

// ---------------------------------------------------------------------------
// Jacobi machinery

namespace {

// Unitary G on coordinates (p, q) with G* [[app, apq], [conj(apq), aqq]] G diagonal.
// Stored as g[0]=G_pp, g[1]=G_pq, g[2]=G_qp, g[3]=G_qq. `shift` is t*|apq|,
// so the new diagonal is (app - shift, aqq + shift).
struct Rotation {
  Complex g[4];
  double shift;
};

Rotation jacobi_rotation(double app, double aqq, Complex apq) {
  const double r = std::abs(apq);
  const Complex phase = std::conj(apq) / r;  // e^{-i arg apq}
  const double theta = (aqq - app) / (2.0 * r);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  return {{c, s, -s * phase, c * phase}, t * r};
}

// Columns (p, q) of m <- [col_p, col_q] * G.
void rotate_columns(CMatrix& m, std::size_t p, std::size_t q, const Rotation& rot) {
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const Complex mp = m(k, p);
    const Complex mq = m(k, q);
    m(k, p) = mp * rot.g[0] + mq * rot.g[2];
    m(k, q) = mp * rot.g[1] + mq * rot.g[3];
  }
}

// Rows (p, q) of m <- G* [row_p; row_q].
void rotate_rows(CMatrix& m, std::size_t p, std::size_t q, const Rotation& rot) {
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const Complex mp = m(p, k);
    const Complex mq = m(q, k);
    m(p, k) = std::conj(rot.g[0]) * mp + std::conj(rot.g[2]) * mq;
    m(q, k) = std::conj(rot.g[1]) * mp + std::conj(rot.g[3]) * mq;
  }
}

constexpr int kMaxSweeps = 100;

std::vector<std::size_t> descending_order(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  return idx;
}

// Householder QR of a tall matrix; returns the n x n triangle and thin Q.
void householder_qr(const CMatrix& a, CMatrix& q, CMatrix& r) {
  const std::size_t m = a.rows(), n = a.cols();
  CMatrix work = a;
  std::vector<std::vector<Complex>> reflectors(n);
  for (std::size_t k = 0; k < n; ++k) {
    double norm2 = 0.0;
    for (std::size_t i = k; i < m; ++i) norm2 += std::norm(work(i, k));
    const double normx = std::sqrt(norm2);
    if (normx == 0.0) continue;
    const Complex x0 = work(k, k);
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
    const Complex alpha = -phase * normx;
    std::vector<Complex> v(m - k);
    for (std::size_t i = k; i < m; ++i) v[i - k] = work(i, k);
    v[0] -= alpha;
    double vn = 0.0;
    for (const auto& z : v) vn += std::norm(z);
    vn = std::sqrt(vn);
    if (vn == 0.0) continue;
    for (auto& z : v) z /= vn;
    for (std::size_t j = k; j < n; ++j) {
      Complex w = 0.0;
      for (std::size_t i = k; i < m; ++i) w += std::conj(v[i - k]) * work(i, j);
      for (std::size_t i = k; i < m; ++i) work(i, j) -= 2.0 * v[i - k] * w;
    }
    reflectors[k] = std::move(v);
  }
  r = CMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) r(i, j) = work(i, j);
  q = CMatrix(m, n);
  for (std::size_t i = 0; i < n; ++i) q(i, i) = 1.0;
  for (std::size_t kk = n; kk-- > 0;) {
    const auto& v = reflectors[kk];
    if (v.empty()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      Complex w = 0.0;
      for (std::size_t i = kk; i < m; ++i) w += std::conj(v[i - kk]) * q(i, j);
      for (std::size_t i = kk; i < m; ++i) q(i, j) -= 2.0 * v[i - kk] * w;
    }
  }
}

// One-sided Jacobi on the columns of `a` (any shape); a <- a V, returns V.
CMatrix orthogonalize_columns(CMatrix& a) {
  const std::size_t n = a.cols();
  CMatrix v = CMatrix::identity(n);
  constexpr double kEps = 1e-15;
  // columns below 1e-15 ||A||_F are roundoff and would never settle
  double total = 0.0;
  for (const auto& z : a.entries()) total += std::norm(z);
  const double negligible = 1e-30 * total;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t k = 0; k < a.rows(); ++k) {
          alpha += std::norm(a(k, p));
          beta += std::norm(a(k, q));
          gamma += std::conj(a(k, p)) * a(k, q);
        }
        if (alpha <= negligible || beta <= negligible) continue;
        if (std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        const Rotation rot = jacobi_rotation(alpha, beta, gamma);
        rotate_columns(a, p, q, rot);
        rotate_columns(v, p, q, rot);
        rotated = true;
      }
    }
    if (!rotated) break;
  }
  return v;
}

}  // namespace

HermEig herm_eig(const CMatrix& m, const Tolerance& tol) {
  if (!m.is_square()) throw Error(Errc::not_hermitian, "matrix is not square");
  const CMatrix adj = m.adjoint();
  const double scale = m.frobenius_norm();
  if ((m - adj).frobenius_norm() > tol.eq_tol * (1.0 + scale)) {
    throw Error(Errc::not_hermitian, "||M - M*|| exceeds tolerance");
  }
  const std::size_t n = m.rows();
  CMatrix a = 0.5 * (m + adj);
  CMatrix u = CMatrix::identity(n);
  const double threshold = 1e-17 * std::max(scale, 1e-300);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        if (std::abs(apq) <= threshold) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const Rotation rot = jacobi_rotation(app, aqq, apq);
        rotate_columns(a, p, q, rot);
        rotate_rows(a, p, q, rot);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - rot.shift;
        a(q, q) = aqq + rot.shift;
        rotate_columns(u, p, q, rot);
        rotated = true;
      }
    }
    if (!rotated) break;
  }
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
  const auto order = descending_order(diag);
  HermEig out;
  out.values.resize(n);
  out.vectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = diag[order[k]];
    out.vectors.set_col(k, u.col(order[k]));
  }
  return out;
}

CMatrix psd_sqrt(const CMatrix& m, const Tolerance& tol) {
  const HermEig eig = herm_eig(m, tol);
  if (eig.values.empty()) return m;
  const double norm = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
  if (eig.values.back() < -tol.eq_tol * (1.0 + norm)) {
    throw Error(Errc::not_positive, "eigenvalue " + std::to_string(eig.values.back()) + " below tolerance");
  }
  std::vector<double> roots(eig.values.size());
  for (std::size_t i = 0; i < roots.size(); ++i) roots[i] = std::sqrt(std::max(eig.values[i], 0.0));
  const CMatrix& u = eig.vectors;
  return u * CMatrix::diagonal(std::span<const double>(roots)) * u.adjoint();
}

Svd svd(const CMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  Svd out;
  CMatrix work;
  CMatrix q;
  const bool tall = rows > cols;
  if (tall) {
    householder_qr(m, q, work);
  } else {
    work = m;
  }
  CMatrix v = orthogonalize_columns(work);
  std::vector<double> norms(cols);
  for (std::size_t j = 0; j < cols; ++j) norms[j] = work.col(j).frobenius_norm();
  const auto order = descending_order(norms);
  out.values.resize(cols);
  CMatrix u_small(work.rows(), cols);
  out.v = CMatrix(cols, cols);
  for (std::size_t k = 0; k < cols; ++k) {
    const std::size_t j = order[k];
    out.values[k] = norms[j];
    if (norms[j] > 0.0) u_small.set_col(k, (1.0 / norms[j]) * work.col(j));
    out.v.set_col(k, v.col(j));
  }
  out.u = tall ? q * u_small : u_small;
  return out;
}

double op_norm(const CMatrix& m) {
  if (m.empty()) return 0.0;
  const Svd s = m.rows() < m.cols() ? svd(m.adjoint()) : svd(m);
  return s.values.front();
}

CMatrix abs_value(const CMatrix& t) {
  const Svd s = svd(t);
  CMatrix vs = s.v;
  for (std::size_t j = 0; j < vs.cols(); ++j)
    for (std::size_t i = 0; i < vs.rows(); ++i) vs(i, j) *= s.values[j];
  return vs * s.v.adjoint();
}

namespace {

std::size_t numerical_rank(const std::vector<double>& values, double rank_tol) {
  if (values.empty() || values.front() <= 0.0) return 0;
  const double cut = rank_tol * values.front();
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [cut](double s) { return s > cut; }));
}

}  // namespace

SpanInfo span_rank(std::span<const CMatrix> vectors, const Tolerance& tol) {
  if (vectors.empty()) throw Error(Errc::empty_input, "span_rank needs at least one vector");
  const std::size_t dim = vectors.front().size();
  CMatrix stacked(dim, vectors.size());
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != dim) throw Error(Errc::shape_mismatch, "span_rank vectors differ in size");
    auto e = vectors[j].entries();
    for (std::size_t i = 0; i < dim; ++i) stacked(i, j) = e[i];
  }
  const Svd s = svd(stacked);
  SpanInfo info;
  info.rank = numerical_rank(s.values, tol.rank_tol);
  for (std::size_t k = 0; k < info.rank; ++k) info.basis.push_back(s.u.col(k));
  return info;
}

std::size_t matrix_rank(const CMatrix& a, const Tolerance& tol) {
  if (a.empty()) return 0;
  const Svd s = a.rows() < a.cols() ? svd(a.adjoint()) : svd(a);
  return numerical_rank(s.values, tol.rank_tol);
}

LeastSquares least_squares(const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
  if (a.rows() != b.rows()) throw Error(Errc::shape_mismatch, "least_squares: A.rows != b.rows");
  LeastSquares out;
  out.x = pseudo_inverse(a, tol) * b;
  out.residual = (a * out.x - b).frobenius_norm();
  return out;
}

CMatrix pseudo_inverse(const CMatrix& a, const Tolerance& tol) {
  const Svd s = svd(a);
  const std::size_t r = numerical_rank(s.values, tol.rank_tol);
  CMatrix pinv(a.cols(), a.rows());
  for (std::size_t k = 0; k < r; ++k) {
    const double inv = 1.0 / s.values[k];
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const Complex vik = s.v(i, k) * inv;
      for (std::size_t j = 0; j < a.rows(); ++j) pinv(i, j) += vik * std::conj(s.u(j, k));
    }
  }
  return pinv;
}

CMatrix null_space(const CMatrix& a, const Tolerance& tol) {
  const std::size_t n = a.cols();
  if (a.rows() == 0) return CMatrix::identity(n);
  const Svd s = svd(a);
  const std::size_t r = numerical_rank(s.values, tol.rank_tol);
  return s.v.block(0, r, n, n - r);
}

GramFactor gram_factor(const CMatrix& gram, const Tolerance& tol) {
  GramFactor out;
  const std::size_t n = gram.rows();
  if (n == 0) {
    out.embed = CMatrix(0, 0);
    out.lift = CMatrix(0, 0);
    return out;
  }
  const HermEig eig = herm_eig(gram, tol);
  const double top = std::max(eig.values.front(), 0.0);
  if (eig.values.back() < -tol.eq_tol * (1.0 + top)) {
    throw Error(Errc::gram_not_psd, "Gram eigenvalue " + std::to_string(eig.values.back()));
  }
  std::size_t r = 0;
  if (top > 0.0) {
    while (r < n && eig.values[r] > tol.rank_tol * top) ++r;
  }
  out.rank = r;
  out.embed = CMatrix(r, n);
  out.lift = CMatrix(n, r);
  for (std::size_t k = 0; k < r; ++k) {
    const double l = eig.values[k];
    out.kept.push_back(l);
    const double sq = std::sqrt(l);
    for (std::size_t i = 0; i < n; ++i) {
      out.embed(k, i) = sq * std::conj(eig.vectors(i, k));
      out.lift(i, k) = eig.vectors(i, k) / sq;
    }
  }
  return out;
}

}  // namespace finsler
