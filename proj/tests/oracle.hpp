#pragma once

// Brute-force reference computations built on Eigen. Nothing in here calls the
// library's decompositions; inputs are converted entry by entry.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "finsler/algebra.hpp"
#include "finsler/numkit.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using finsler::CMatrix;
using finsler::Complex;

inline Mat to_eigen(const CMatrix& m) {
  Mat out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return out;
}

inline CMatrix from_eigen(const Mat& m) {
  CMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return out;
}

inline double diff(const CMatrix& a, const CMatrix& b) { return (to_eigen(a) - to_eigen(b)).norm(); }

/// Singular values, descending.
inline Eigen::VectorXd singular_values(const Mat& m) {
  if (m.size() == 0) return {};
  return Eigen::JacobiSVD<Mat>(m).singularValues();
}

inline std::size_t rank(const Mat& m, double rel = 1e-10) {
  const Eigen::VectorXd s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > rel * s(0);
  return r;
}

/// Rank of a PSD Gram matrix, counted on its eigenvalues.
inline std::size_t gram_rank(const Mat& g, double rel = 1e-12) {
  if (g.size() == 0) return 0;
  const Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.adjoint()));
  const Eigen::VectorXd l = es.eigenvalues();
  const double top = l.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < l.size(); ++i) r += l(i) > rel * top;
  return r;
}

/// Gram matrix <v_i, v_j> of flattened vectors.
inline Mat gram(const std::vector<CMatrix>& vs) {
  const auto n = static_cast<Eigen::Index>(vs.size());
  Mat g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      Complex s = 0;
      const auto& a = vs[static_cast<std::size_t>(i)];
      const auto& b = vs[static_cast<std::size_t>(j)];
      for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a.entries()[k]) * b.entries()[k];
      g(i, j) = s;
    }
  return g;
}

inline Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m) {
  const Mat e = to_eigen(m);
  return Eigen::SelfAdjointEigenSolver<Mat>(0.5 * (e + e.adjoint())).eigenvalues();
}

/// Dimension of {X : X A = A X for all A in ops}, by stacking the n^2 unknowns.
inline std::size_t commutant_dim(const std::vector<CMatrix>& ops, std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n * n);
  Mat sys(static_cast<Eigen::Index>(ops.size()) * nn, nn);
  sys.setZero();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Mat e = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
      for (std::size_t k = 0; k < ops.size(); ++k) {
        const Mat a = to_eigen(ops[k]);
        const Mat c = e * a - a * e;
        for (Eigen::Index r = 0; r < c.rows(); ++r)
          for (Eigen::Index s = 0; s < c.cols(); ++s)
            sys(static_cast<Eigen::Index>(k) * nn + r * c.cols() + s, static_cast<Eigen::Index>(i * n + j)) = c(r, s);
      }
    }
  if (ops.empty()) return n * n;
  return n * n - rank(sys);
}

/// Block-diagonal image of an algebra element: U (+_k a_k (x) I_{m_k}) U*.
inline Mat represent(const finsler::AlgElement& a, const std::vector<std::size_t>& mult, const Mat* unitary = nullptr) {
  std::size_t dim = 0;
  for (std::size_t k = 0; k < mult.size(); ++k) dim += a.block(k).rows() * mult[k];
  Mat out = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  Eigen::Index off = 0;
  for (std::size_t k = 0; k < mult.size(); ++k) {
    const Mat b = to_eigen(a.block(k));
    const auto n = b.rows();
    const auto m = static_cast<Eigen::Index>(mult[k]);
    // kron(b, I_m)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index s = 0; s < m; ++s) out(off + i * m + s, off + j * m + s) = b(i, j);
    off += n * m;
  }
  if (unitary) return (*unitary) * out * unitary->adjoint();
  return out;
}

/// Matrix-unit basis of the algebra, block by block, row-major.
inline std::vector<finsler::AlgElement> units(const finsler::CStarAlgebra& alg) {
  std::vector<finsler::AlgElement> out;
  for (std::size_t k = 0; k < alg.num_blocks(); ++k) {
    const std::size_t n = alg.block_dims()[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<CMatrix> blocks;
        for (std::size_t l = 0; l < alg.num_blocks(); ++l)
          blocks.push_back(l == k ? CMatrix::unit(n, i, j) : CMatrix(alg.block_dims()[l], alg.block_dims()[l]));
        out.emplace_back(std::move(blocks));
      }
  }
  return out;
}

/// Coefficients c with sum c_a pi(b_a) closest to m, by dense least squares.
inline Eigen::VectorXcd preimage(const finsler::CStarAlgebra& alg, const std::vector<std::size_t>& mult,
                                 const Mat* unitary, const Mat& m) {
  const auto basis = units(alg);
  Mat sys(m.size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t a = 0; a < basis.size(); ++a) {
    const Mat img = represent(basis[a], mult, unitary);
    for (Eigen::Index i = 0; i < img.rows(); ++i)
      for (Eigen::Index j = 0; j < img.cols(); ++j) sys(i * img.cols() + j, static_cast<Eigen::Index>(a)) = img(i, j);
  }
  Eigen::VectorXcd rhs(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) rhs(i * m.cols() + j) = m(i, j);
  return sys.completeOrthogonalDecomposition().solve(rhs);
}

/// Gram of the localisation: G[(i,s),(j,t)] = phi(<g_i, g_j>)_{s,t}, where
/// <x, y> is the preimage of x* y under the action and phi(b_a) = images[a].
inline Mat localization_gram(const finsler::CStarAlgebra& alg, const std::vector<std::size_t>& action_mult,
                             const Mat* action_unitary, const std::vector<CMatrix>& generators,
                             const std::vector<CMatrix>& phi_images) {
  const auto h = static_cast<Eigen::Index>(phi_images.front().rows());
  const auto n = static_cast<Eigen::Index>(generators.size());
  Mat g(n * h, n * h);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Mat xy = to_eigen(generators[static_cast<std::size_t>(i)]).adjoint() *
                     to_eigen(generators[static_cast<std::size_t>(j)]);
      const Eigen::VectorXcd c = preimage(alg, action_mult, action_unitary, xy);
      Mat blk = Mat::Zero(h, h);
      for (Eigen::Index a = 0; a < c.size(); ++a) blk += c(a) * to_eigen(phi_images[static_cast<std::size_t>(a)]);
      g.block(i * h, j * h, h, h) = blk;
    }
  return g;
}

/// Stinespring Gram G[(a,s),(b,t)] = phi(b_a* b_b)_{s,t} for a map given on units.
inline Mat stinespring_gram(const finsler::CStarAlgebra& alg, const std::vector<Mat>& phi_on_units) {
  const auto basis = units(alg);
  const auto h = phi_on_units.front().rows();
  const auto d = static_cast<Eigen::Index>(basis.size());
  // index of a unit product, or -1 when it vanishes
  std::vector<std::size_t> blk, row, col;
  for (std::size_t k = 0; k < alg.num_blocks(); ++k) {
    const std::size_t n = alg.block_dims()[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) blk.push_back(k), row.push_back(i), col.push_back(j);
  }
  Mat g = Mat::Zero(d * h, d * h);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) {
      // (E_ij)* E_kl = E_ji E_kl = delta_ik E_jl within one block
      const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
      if (blk[ua] != blk[ub] || row[ua] != row[ub]) continue;
      for (Eigen::Index c = 0; c < d; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        if (blk[uc] == blk[ua] && row[uc] == col[ua] && col[uc] == col[ub]) {
          g.block(a * h, b * h, h, h) = phi_on_units[uc];
          break;
        }
      }
    }
  return g;
}

/// Choi matrix sum E_ij (x) phi(E_ij) for a map on a single block M_n.
inline Mat choi_single_block(std::size_t n, const std::vector<Mat>& phi_on_units) {
  const auto h = phi_on_units.front().rows();
  const auto nn = static_cast<Eigen::Index>(n);
  Mat c = Mat::Zero(nn * h, nn * h);
  for (Eigen::Index i = 0; i < nn; ++i)
    for (Eigen::Index j = 0; j < nn; ++j) c.block(i * h, j * h, h, h) = phi_on_units[static_cast<std::size_t>(i * nn + j)];
  return c;
}

inline Mat psd_sqrt(const Mat& m) {
  const Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()));
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace oracle
