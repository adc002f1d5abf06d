#include "finsler/quasirep.hpp"

#include <algorithm>
#include <string>

#include "finsler/random.hpp"

namespace finsler {

QuasiRep::QuasiRep(FinslerModule module, AlgebraMap phi, std::size_t dim_k, std::vector<CMatrix> generator_images,
                   const Tolerance& tol)
    : module_(std::move(module)), phi_(std::move(phi)), dim_k_(dim_k), images_(std::move(generator_images)), tol_(tol) {
  tol_.validate();
  if (!(phi_.algebra() == module_.algebra())) throw Error(Errc::algebra_mismatch, "phi acts on another algebra");
  const auto& gens = module_.generators();
  if (images_.size() != gens.size()) {
    throw Error(Errc::shape_mismatch, "expected " + std::to_string(gens.size()) + " generator images, got " +
                                          std::to_string(images_.size()));
  }
  const std::size_t h = phi_.dim();
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i].rows() != dim_k_ || images_[i].cols() != h) {
      throw Error(Errc::shape_mismatch, "image " + std::to_string(i) + " must be " + std::to_string(dim_k_) + " x " +
                                            std::to_string(h));
    }
  }

  const std::size_t in = module_.ambient_rows() * module_.ambient_cols();
  const std::size_t out = dim_k_ * h;
  if (gens.empty()) {
    linear_ = CMatrix(out, in);
    return;
  }
  const auto& pi_images = module_.action().map().basis_images();
  const auto& phi_images = phi_.basis_images();
  const std::size_t d = pi_images.size();
  CMatrix p(in, gens.size() * d);
  CMatrix q(out, gens.size() * d);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      p.set_col(i * d + a, (gens[i] * pi_images[a]).flatten());
      q.set_col(i * d + a, (images_[i] * phi_images[a]).flatten());
    }
  }
  linear_ = q * pseudo_inverse(p, tol_);
  const CMatrix kernel = null_space(p, tol_);
  well_defined_ = kernel.cols() == 0 ? 0.0 : (q * kernel).frobenius_norm() / (1.0 + q.frobenius_norm());
}

CMatrix QuasiRep::apply(const CMatrix& m) const {
  if (m.rows() != module_.ambient_rows() || m.cols() != module_.ambient_cols()) {
    throw Error(Errc::shape_mismatch, "module element shape");
  }
  return CMatrix::unflatten(linear_ * m.flatten(), dim_k_, phi_.dim());
}

CMatrix rho0(const CMatrix& t) { return abs_value(t); }

CMatrix localization_gram(const FinslerModule& module, const AlgebraMap& phi) {
  const std::size_t h = phi.dim();
  const std::size_t n = module.generators().size();
  CMatrix gram(n * h, n * h);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const AlgElement ip = module.inner(module.generator(i), module.generator(j));
      gram.set_block(i * h, j * h, phi(ip));
    }
  }
  return gram;
}

QuasiRep build_quasirep(const FinslerModule& module, const Representation& phi, const Tolerance& tol) {
  const std::size_t h = phi.dim();
  const std::size_t n = module.generators().size();
  if (!(phi.algebra() == module.algebra())) throw Error(Errc::algebra_mismatch, "phi acts on another algebra");
  if (n == 0 || h == 0) return QuasiRep(module, phi.map(), 0, std::vector<CMatrix>(n, CMatrix(0, h)), tol);
  const GramFactor f = gram_factor(localization_gram(module, phi.map()), tol);
  std::vector<CMatrix> images;
  for (std::size_t i = 0; i < n; ++i) images.push_back(f.embed.block(0, i * h, f.rank, h));
  return QuasiRep(module, phi.map(), f.rank, std::move(images), tol);
}

QuasiRepReport verify_quasirep(const QuasiRep& q, std::size_t sample_count, std::uint64_t seed) {
  if (sample_count == 0) throw Error(Errc::invalid_argument, "sample_count must be at least 1");
  const FinslerModule& e = q.module();
  QuasiRepReport report;

  auto identity = [&](const ModuleElement& x) {
    const double r = op_norm(rho0(q(x)) - q.phi()(e.rho(x))) / (1.0 + op_norm(x.matrix()));
    report.max_identity_residual = std::max(report.max_identity_residual, r);
  };
  auto action = [&](const ModuleElement& x, const AlgElement& a) {
    const double r =
        op_norm(q(e.act(x, a)) - q(x) * q.phi()(a)) / (1.0 + op_norm(x.matrix()) * a.norm());
    report.max_action_residual = std::max(report.max_action_residual, r);
  };

  Sampler sampler(seed);
  for (std::size_t i = 0; i < e.generators().size(); ++i) {
    identity(e.generator(i));
    action(e.generator(i), sampler.element(e.algebra()));
  }
  for (std::size_t s = 0; s < sample_count; ++s) {
    const ModuleElement x = sample_element(e, sampler);
    const AlgElement a = sampler.element(e.algebra());
    identity(x);
    action(x, a);
    ++report.samples;
  }
  const double bound = 10.0 * q.tolerance().eq_tol;
  report.well_definedness_residual = q.well_definedness_residual();
  report.identity_ok = report.max_identity_residual <= bound;
  report.action_ok = report.max_action_residual <= bound && report.well_definedness_residual <= bound;
  report.pass = report.identity_ok && report.action_ok;
  report.weak = report.identity_ok && !report.action_ok;
  return report;
}

}  // namespace finsler
