#include "finsler/module.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finsler/random.hpp"

namespace finsler {

namespace {

// Frobenius distance from m to the span of an orthonormal family.
double projection_residual(const std::vector<CMatrix>& basis, const CMatrix& m) {
  CMatrix r = m;
  for (const auto& u : basis) r -= inner(u, m) * u;
  return r.frobenius_norm();
}

}  // namespace

FinslerModule::FinslerModule(Representation action, std::size_t ambient_rows, std::vector<CMatrix> generators,
                             const Tolerance& tol)
    : FinslerModule(action, ambient_rows, generators,
                    [&] {
                      std::vector<CMatrix> spanning;
                      for (const auto& g : generators) {
                        for (const auto& img : action.map().basis_images()) {
                          if (g.cols() != img.rows()) {
                            throw Error(Errc::shape_mismatch, "generator has " + std::to_string(g.cols()) +
                                                                  " columns, action acts on C^" +
                                                                  std::to_string(img.rows()));
                          }
                          spanning.push_back(g * img);
                        }
                      }
                      return spanning;
                    }(),
                    false, tol) {}

FinslerModule FinslerModule::exact_span(Representation action, std::size_t ambient_rows,
                                        std::vector<CMatrix> elements, const Tolerance& tol) {
  std::vector<CMatrix> spanning = elements;
  return FinslerModule(std::move(action), ambient_rows, std::move(elements), std::move(spanning), true, tol);
}

FinslerModule::FinslerModule(Representation action, std::size_t rows, std::vector<CMatrix> generators,
                             std::vector<CMatrix> spanning, bool require_closed, const Tolerance& tol)
    : action_(std::move(action)), rows_(rows), generators_(std::move(generators)), tol_(tol) {
  tol_.validate();
  if (!action_.is_faithful()) throw Error(Errc::invalid_argument, "module action must be faithful");
  const std::size_t p = action_.dim();
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (generators_[i].rows() != rows_ || generators_[i].cols() != p) {
      throw Error(Errc::shape_mismatch, "generator " + std::to_string(i) + " must be " + std::to_string(rows_) +
                                            " x " + std::to_string(p));
    }
  }
  if (!spanning.empty()) {
    const SpanInfo info = span_rank(spanning, tol_);
    for (const auto& b : info.basis) span_basis_.push_back(CMatrix::unflatten(b, rows_, p));
  }

  if (require_closed) {
    for (const auto& u : span_basis_) {
      for (const auto& img : action_.map().basis_images()) {
        const CMatrix moved = u * img;
        if (projection_residual(span_basis_, moved) > tol_.eq_tol * (1.0 + moved.frobenius_norm())) {
          throw Error(Errc::action_not_closed, "span is not invariant under the right action");
        }
      }
    }
  }

  // x*x in pi(A) for every x iff u_i* u_j in pi(A) for all pairs (polarisation).
  for (std::size_t i = 0; i < span_basis_.size(); ++i) {
    for (std::size_t j = i; j < span_basis_.size(); ++j) {
      const auto pre = action_.preimage(span_basis_[i].adjoint() * span_basis_[j]);
      if (pre.residual > tol_.eq_tol * 2.0) {
        throw Error(Errc::not_in_algebra, "x*y outside pi(A) for module basis pair (" + std::to_string(i) + ", " +
                                              std::to_string(j) + "), residual " + std::to_string(pre.residual));
      }
    }
  }
}

ModuleElement FinslerModule::element(const CMatrix& m) const {
  if (m.rows() != rows_ || m.cols() != ambient_cols()) throw Error(Errc::shape_mismatch, "element shape");
  if (projection_residual(span_basis_, m) > tol_.eq_tol * (1.0 + m.frobenius_norm())) {
    throw Error(Errc::not_in_module, "matrix is not in the module span");
  }
  return ModuleElement(m);
}

ModuleElement FinslerModule::combination(std::span<const Complex> coeffs) const {
  if (coeffs.size() != span_basis_.size()) throw Error(Errc::shape_mismatch, "coefficient count");
  CMatrix m(rows_, ambient_cols());
  for (std::size_t k = 0; k < coeffs.size(); ++k) m += coeffs[k] * span_basis_[k];
  return ModuleElement(std::move(m));
}

ModuleElement FinslerModule::act(const ModuleElement& x, const AlgElement& a) const {
  if (a.algebra() != algebra()) throw Error(Errc::algebra_mismatch, "act: element of another algebra");
  return ModuleElement(x.matrix() * action_(a));
}

AlgElement FinslerModule::inner(const ModuleElement& x, const ModuleElement& y) const {
  const auto pre = action_.preimage(x.matrix().adjoint() * y.matrix());
  const double scale = x.matrix().frobenius_norm() * y.matrix().frobenius_norm();
  if (pre.residual > tol_.eq_tol * (1.0 + scale)) {
    throw Error(Errc::not_in_algebra, "x*y is not in pi(A), residual " + std::to_string(pre.residual));
  }
  return pre.element;
}

AlgElement FinslerModule::rho(const ModuleElement& x) const {
  (void)rho_squared(x);  // membership of x*x in pi(A)
  const auto pre = action_.preimage(abs_value(x.matrix()));
  std::vector<CMatrix> blocks;
  for (const auto& b : pre.element.blocks()) blocks.push_back(0.5 * (b + b.adjoint()));
  return AlgElement(std::move(blocks));
}

ModuleElement act(const FinslerModule& e, const ModuleElement& x, const AlgElement& a) { return e.act(x, a); }

AlgElement rho(const FinslerModule& e, const ModuleElement& x) { return e.rho(x); }

double module_norm(const FinslerModule& e, const ModuleElement& x) { return e.rho(x).norm(); }

ModuleElement sample_element(const FinslerModule& e, Sampler& sampler) {
  std::vector<Complex> c(e.span_dim());
  for (auto& z : c) z = sampler.complex_gaussian();
  return e.combination(c);
}

AxiomReport verify_finsler_axiom(const FinslerModule& e, std::size_t sample_count, std::uint64_t seed,
                                 const RhoSquaredFn& rho_squared) {
  if (sample_count == 0) throw Error(Errc::invalid_argument, "sample_count must be at least 1");
  const RhoSquaredFn square = rho_squared ? rho_squared : [&e](const ModuleElement& x) {
    const AlgElement r = e.rho(x);
    return r * r;
  };
  Sampler sampler(seed);
  AxiomReport report;
  for (std::size_t s = 0; s < sample_count; ++s) {
    const ModuleElement x = sample_element(e, sampler);
    const AlgElement a = sampler.element(e.algebra());
    const AlgElement lhs = square(e.act(x, a));
    const AlgElement rhs = a.adjoint() * square(x) * a;
    const double xn = op_norm(x.matrix());
    const double an = a.norm();
    const double r = (lhs - rhs).norm() / (1.0 + an * an * xn * xn);
    report.max_residual = std::max(report.max_residual, r);
    ++report.samples;
  }
  report.pass = report.max_residual <= 10.0 * e.tolerance().eq_tol;
  return report;
}

FullnessReport fullness(const FinslerModule& e, std::uint64_t seed) {
  FullnessReport report;
  const std::size_t d = e.algebra().dim();
  report.algebra_dim = d;
  Sampler sampler(seed);
  std::vector<CMatrix> basis;
  std::size_t stable = 0;
  while (stable < 3 * d && basis.size() < d) {
    const ModuleElement x = sample_element(e, sampler);
    ++report.samples;
    const auto c = e.rho_squared(x).coords();
    CMatrix v = CMatrix::column(c);
    const double norm = v.frobenius_norm();
    if (norm == 0.0) {
      ++stable;
      continue;
    }
    v *= 1.0 / norm;
    std::vector<CMatrix> candidate = basis;
    candidate.push_back(v);
    const SpanInfo info = span_rank(candidate, e.tolerance());
    if (info.rank > basis.size()) {
      basis = info.basis;
      stable = 0;
    } else {
      ++stable;
    }
  }
  report.span_dim = basis.size();
  report.full = report.span_dim == d;
  return report;
}

bool is_full(const FinslerModule& e, std::uint64_t seed) { return fullness(e, seed).full; }

}  // namespace finsler

namespace finsler {

FinslerModule random_module(const CStarAlgebra& algebra, Sampler& sampler, const RandomModuleOptions& options,
                            const Tolerance& tol) {
  const auto& dims = algebra.block_dims();
  const std::size_t blocks = dims.size();
  std::vector<std::size_t> mult = options.multiplicities.empty() ? std::vector<std::size_t>(blocks, 1)
                                                                 : options.multiplicities;
  if (mult.size() != blocks) throw Error(Errc::shape_mismatch, "one multiplicity per block is required");
  if (options.max_generators == 0) throw Error(Errc::invalid_argument, "max_generators must be positive");

  std::vector<std::size_t> rows(blocks, 0);
  std::size_t used = 0;
  if (options.require_full) {
    for (std::size_t k = 0; k < blocks; ++k) {
      rows[k] = 1;
      used += mult[k];
    }
    if (used > options.max_rows) throw Error(Errc::invalid_argument, "max_rows too small for a full module");
  }
  if (options.unit_generator) {
    used = 0;
    for (std::size_t k = 0; k < blocks; ++k) {
      rows[k] = std::max(rows[k], dims[k]);
      used += rows[k] * mult[k];
    }
    if (used > options.max_rows) throw Error(Errc::invalid_argument, "max_rows too small for a unit generator");
  }
  // a few extra rows on random blocks, within budget
  const std::size_t extra = sampler.index(0, options.max_rows);
  for (std::size_t r = 0; r < extra; ++r) {
    const std::size_t k = sampler.index(0, blocks - 1);
    if (used + mult[k] > options.max_rows) continue;
    ++rows[k];
    used += mult[k];
  }
  if (used == 0) {
    std::size_t k = 0;
    while (k < blocks && mult[k] > options.max_rows) ++k;
    if (k == blocks) throw Error(Errc::invalid_argument, "max_rows too small");
    rows[k] = 1;
    used = mult[k];
  }

  std::optional<CMatrix> v;
  std::size_t p = 0;
  for (std::size_t k = 0; k < blocks; ++k) p += dims[k] * mult[k];
  if (options.rotate) v = sampler.unitary(p);
  Representation action(algebra, mult, v, tol);
  const CMatrix u = options.rotate ? sampler.unitary(used) : CMatrix::identity(used);

  const std::size_t count = sampler.index(1, options.max_generators);
  std::vector<CMatrix> generators;
  for (std::size_t g = 0; g < count; ++g) {
    CMatrix m(used, p);
    std::size_t r0 = 0, c0 = 0;
    for (std::size_t k = 0; k < blocks; ++k) {
      const CMatrix gk = sampler.matrix(rows[k], dims[k]);
      m.set_block(r0, c0, kron(gk, CMatrix::identity(mult[k])));
      r0 += rows[k] * mult[k];
      c0 += dims[k] * mult[k];
    }
    generators.push_back(std::move(m));
  }
  if (options.unit_generator) {
    CMatrix m(used, p);
    std::size_t r0 = 0, c0 = 0;
    for (std::size_t k = 0; k < blocks; ++k) {
      for (std::size_t i = 0; i < dims[k] * mult[k]; ++i) m(r0 + i, c0 + i) = 1.0;
      r0 += rows[k] * mult[k];
      c0 += dims[k] * mult[k];
    }
    generators.push_back(std::move(m));
  }
  for (auto& m : generators) {
    m = u * m;
    if (v) m = m * v->adjoint();
  }
  return FinslerModule(std::move(action), used, std::move(generators), tol);
}

}  // namespace finsler
