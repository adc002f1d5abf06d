#include "doctest.h"

#include <vector>

#include "finsler/module.hpp"
#include "finsler/random.hpp"

using namespace finsler;

namespace {

const std::vector<std::vector<std::size_t>> kShapes = {{2}, {3}, {2, 2}};

}  // namespace

TEST_CASE("the algebra as a module over itself") {
  const CStarAlgebra alg({2});
  const Representation pi = Representation::canonical(alg);
  const FinslerModule e(pi, 2, {CMatrix::identity(2)});
  CHECK(e.span_dim() == 4);
  CHECK(is_full(e));
  Sampler s(21);
  const AlgElement a = s.element(alg);
  const ModuleElement x = e.element(a.block(0));
  CHECK((rho(e, x) - abs_sqrt(a)).norm() < 1e-9);
  CHECK(module_norm(e, x) == doctest::Approx(op_norm(a.block(0))));
}

TEST_CASE("rho of the zero element is zero") {
  const CStarAlgebra alg({2, 2});
  const Representation pi = Representation::canonical(alg);
  const FinslerModule e(pi, 4, {pi(alg.block_unit(0))});
  CHECK(rho(e, e.zero()).norm() == 0.0);
  CHECK(module_norm(e, e.zero()) == 0.0);
}

TEST_CASE("module rejects elements outside its span and generators outside the algebra") {
  Sampler s(22);
  const CStarAlgebra alg({2, 2});
  const Representation pi = Representation::canonical(alg);
  const FinslerModule e(pi, 4, {pi(alg.block_unit(0))});
  try {
    (void)e.element(s.matrix(4, 4));
    FAIL("accepted an element outside the span");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::not_in_module);
  }
  try {
    (void)FinslerModule(pi, 2, {s.matrix(2, 4)});
    FAIL("accepted a generic generator");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::not_in_algebra);
  }
  CHECK_THROWS_AS(FinslerModule(pi, 2, {s.matrix(3, 4)}), Error);
}

TEST_CASE("Finsler axiom, positivity of rho and the Banach inequality on random modules") {
  Sampler s(23);
  for (const auto& shape : kShapes) {
    const CStarAlgebra alg(shape);
    for (int t = 0; t < 8; ++t) {
      RandomModuleOptions opt;
      opt.multiplicities.assign(shape.size(), 1 + static_cast<std::size_t>(t % 2));
      const FinslerModule e = random_module(alg, s, opt);
      const AxiomReport ax = verify_finsler_axiom(e, 30, 100 + t);
      CHECK(ax.pass);
      CHECK(ax.max_residual <= 1e-8);
      for (int k = 0; k < 5; ++k) {
        const ModuleElement x = sample_element(e, s);
        const AlgElement a = s.element(alg);
        CHECK(is_positive(rho(e, x)));
        CHECK(module_norm(e, act(e, x, a)) <= module_norm(e, x) * op_norm(e.action()(a)) + 1e-9);
      }
    }
  }
}

TEST_CASE("a corrupted rho fails the axiom") {
  Sampler s(24);
  const CStarAlgebra alg({3});
  const FinslerModule e = random_module(alg, s);
  const auto bad = [&](const ModuleElement& x) { return e.rho_squared(x) + 1e-3 * alg.one(); };
  const AxiomReport ax = verify_finsler_axiom(e, 50, 1, bad);
  CHECK_FALSE(ax.pass);
  CHECK(ax.max_residual > 1e-4);
}

TEST_CASE("fullness") {
  const CStarAlgebra alg({2, 2});
  const Representation pi = Representation::canonical(alg);
  CHECK_FALSE(is_full(FinslerModule(pi, 4, {pi(alg.block_unit(0))})));
  CHECK(is_full(FinslerModule(pi, 4, {CMatrix::identity(4)})));
  Sampler s(25);
  RandomModuleOptions opt;
  opt.require_full = true;
  for (int t = 0; t < 5; ++t) CHECK(is_full(random_module(alg, s, opt)));
}

TEST_CASE("fullness is unchanged by adding generators from the span") {
  Sampler s(26);
  for (const auto& shape : kShapes) {
    const CStarAlgebra alg(shape);
    for (int t = 0; t < 5; ++t) {
      const FinslerModule e = random_module(alg, s);
      std::vector<CMatrix> more = e.generators();
      more.push_back(sample_element(e, s).matrix());
      more.push_back(act(e, e.generator(0), s.element(alg)).matrix());
      const FinslerModule bigger(e.action(), e.ambient_rows(), more);
      CHECK(bigger.span_dim() == e.span_dim());
      CHECK(is_full(bigger) == is_full(e));
    }
  }
}

TEST_CASE("exact_span rejects a subspace that the action leaves") {
  const CStarAlgebra alg({2});
  const Representation pi = Representation::canonical(alg);
  try {
    (void)FinslerModule::exact_span(pi, 2, {CMatrix::identity(2)});
    FAIL("accepted a non-closed span");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::action_not_closed);
  }
  CHECK_NOTHROW(FinslerModule::exact_span(pi, 1, {CMatrix{{1.0, 0.0}}, CMatrix{{0.0, 1.0}}}));
}

TEST_CASE("random modules respect the size limits") {
  Sampler s(27);
  for (const auto& shape : kShapes) {
    const CStarAlgebra alg(shape);
    for (int t = 0; t < 20; ++t) {
      const FinslerModule e = random_module(alg, s);
      CHECK(e.ambient_rows() <= 6);
      CHECK(e.generators().size() >= 1);
      CHECK(e.generators().size() <= 4);
    }
  }
}
