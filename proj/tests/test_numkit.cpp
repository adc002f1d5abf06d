#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "finsler/numkit.hpp"
#include "finsler/random.hpp"

using namespace finsler;

TEST_CASE("herm_eig small cases") {
  const HermEig d = herm_eig(CMatrix{{3.0, 0.0}, {0.0, 1.0}});
  CHECK(d.values[0] == doctest::Approx(3.0));
  CHECK(d.values[1] == doctest::Approx(1.0));
  CHECK(op_norm(d.vectors - CMatrix::identity(2)) < 1e-12);

  const HermEig x = herm_eig(CMatrix{{0.0, 1.0}, {1.0, 0.0}});
  CHECK(x.values[0] == doctest::Approx(1.0));
  CHECK(x.values[1] == doctest::Approx(-1.0));
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  try {
    (void)herm_eig(CMatrix{{0.0, 1.0}, {0.0, 0.0}});
    FAIL("accepted a non-Hermitian matrix");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_hermitian);
  }
}

TEST_CASE("herm_eig: unitary eigenvectors, sorted real eigenvalues") {
  Sampler s(1);
  for (std::size_t n = 1; n <= 7; ++n) {
    const HermEig e = herm_eig(s.hermitian(n));
    CHECK(op_norm(e.vectors.adjoint() * e.vectors - CMatrix::identity(n)) <= 1e-9);
    CHECK(std::is_sorted(e.values.rbegin(), e.values.rend()));
  }
}

TEST_CASE("psd_sqrt small cases") {
  CHECK(op_norm(psd_sqrt(CMatrix{{4.0, 0.0}, {0.0, 9.0}}) - CMatrix{{2.0, 0.0}, {0.0, 3.0}}) < 1e-12);
  CHECK(op_norm(psd_sqrt(CMatrix(3, 3))) == 0.0);
  try {
    (void)psd_sqrt(CMatrix{{-1.0, 0.0}, {0.0, 1.0}});
    FAIL("accepted a negative eigenvalue");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_positive);
  }
}

TEST_CASE("psd_sqrt scales with c") {
  Sampler s(2);
  for (int t = 0; t < 10; ++t) {
    const CMatrix b = s.matrix(4, 4);
    const CMatrix m = b.adjoint() * b;
    const double c = s.uniform(0.0, 3.0);
    const CMatrix lhs = psd_sqrt((c * c) * m);
    const CMatrix rhs = c * psd_sqrt(m);
    CHECK(op_norm(lhs - rhs) <= 1e-9 * (1.0 + op_norm(rhs)));
  }
}

TEST_CASE("op_norm small cases and submultiplicativity") {
  CHECK(op_norm(CMatrix::identity(5)) == doctest::Approx(1.0));
  CHECK(op_norm(CMatrix{{2.0, 0.0}, {0.0, -5.0}}) == doctest::Approx(5.0));
  CHECK(op_norm(CMatrix()) == 0.0);
  Sampler s(3);
  for (int t = 0; t < 20; ++t) {
    const CMatrix a = s.matrix(3, 5), b = s.matrix(5, 4);
    CHECK(op_norm(a * b) <= op_norm(a) * op_norm(b) + 1e-9);
  }
}

TEST_CASE("span_rank small cases") {
  const CMatrix e1 = CMatrix::column(std::vector<Complex>{1.0, 0.0, 0.0});
  const CMatrix e2 = CMatrix::column(std::vector<Complex>{0.0, 1.0, 0.0});
  CHECK(span_rank(std::vector<CMatrix>{e1, e1, e2}).rank == 2);
  CHECK(span_rank(std::vector<CMatrix>{CMatrix(3, 1)}).rank == 0);
  try {
    (void)span_rank(std::vector<CMatrix>{});
    FAIL("accepted an empty list");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_input);
  }
}

TEST_CASE("span_rank is invariant under permutation") {
  Sampler s(4);
  for (int t = 0; t < 10; ++t) {
    std::vector<CMatrix> vs;
    const CMatrix a = s.matrix(5, 1), b = s.matrix(5, 1);
    for (int i = 0; i < 6; ++i) vs.push_back(s.gaussian() * a + s.gaussian() * b);
    vs.push_back(s.matrix(5, 1));
    const std::size_t r = span_rank(vs).rank;
    CHECK(r == 3);
    std::shuffle(vs.begin(), vs.end(), s.engine());
    CHECK(span_rank(vs).rank == r);
  }
}

TEST_CASE("least_squares small cases") {
  Sampler s(5);
  const CMatrix b = s.matrix(3, 1);
  const LeastSquares id = least_squares(CMatrix::identity(3), b);
  CHECK(op_norm(id.x - b) < 1e-12);
  CHECK(id.residual < 1e-12);

  const LeastSquares mean = least_squares(CMatrix{{1.0}, {1.0}}, CMatrix{{1.0}, {3.0}});
  CHECK(std::abs(mean.x(0, 0) - 2.0) < 1e-12);
  CHECK(mean.residual == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("gram_factor splits a PSD Gram matrix") {
  Sampler s(6);
  const CMatrix f = s.matrix(3, 6);
  const CMatrix g = f.adjoint() * f;  // rank 3 in dimension 6
  const GramFactor gf = gram_factor(g);
  CHECK(gf.rank == 3);
  CHECK(op_norm(gf.embed.adjoint() * gf.embed - g) <= 1e-9 * op_norm(g));
  CHECK(op_norm(gf.embed * gf.lift - CMatrix::identity(3)) <= 1e-9);
}

TEST_CASE("tolerance validation") {
  CHECK_NOTHROW(Tolerance{}.validate());
  CHECK_THROWS_AS((Tolerance{0.0, 1e-10}.validate()), Error);
  CHECK_THROWS_AS((Tolerance{1e-9, 1.0}.validate()), Error);
}
