#pragma once

// Seeded sampling of matrices and algebra elements. Every randomized check in
// the library draws from a Sampler so that results are reproducible from the
// seed alone.

#include <cstdint>
#include <random>

#include "finsler/algebra.hpp"
#include "finsler/numkit.hpp"

namespace finsler {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double gaussian() { return normal_(engine_); }
  Complex complex_gaussian() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {re, im};
  }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }

  CMatrix matrix(std::size_t rows, std::size_t cols);
  CMatrix hermitian(std::size_t n);
  /// Haar-ish unitary from Gram-Schmidt on a Gaussian matrix.
  CMatrix unitary(std::size_t n);
  AlgElement element(const CStarAlgebra& algebra);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace finsler
