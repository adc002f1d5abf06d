#include "finsler/random.hpp"

#include <cmath>

namespace finsler {

CMatrix Sampler::matrix(std::size_t rows, std::size_t cols) {
  CMatrix m(rows, cols);
  for (auto& z : m.entries()) z = complex_gaussian();
  return m;
}

CMatrix Sampler::hermitian(std::size_t n) {
  const CMatrix g = matrix(n, n);
  return 0.5 * (g + g.adjoint());
}

CMatrix Sampler::unitary(std::size_t n) {
  CMatrix g = matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    // two passes of modified Gram-Schmidt
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += std::conj(g(i, k)) * g(i, j);
        for (std::size_t i = 0; i < n; ++i) g(i, j) -= c * g(i, k);
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(g(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) g(i, j) /= norm;
  }
  return g;
}

AlgElement Sampler::element(const CStarAlgebra& algebra) {
  std::vector<CMatrix> blocks;
  for (auto n : algebra.block_dims()) blocks.push_back(matrix(n, n));
  return AlgElement(std::move(blocks));
}

}  // namespace finsler
