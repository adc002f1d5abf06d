#include "finsler/dilation.hpp"

#include <algorithm>
#include <string>

namespace finsler {

namespace {

struct Unit {
  std::size_t block, row, col;
};

std::vector<Unit> decode_units(const CStarAlgebra& alg) {
  std::vector<Unit> units;
  for (std::size_t k = 0; k < alg.num_blocks(); ++k) {
    const std::size_t n = alg.block_dims()[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) units.push_back({k, i, j});
  }
  return units;
}

std::size_t unit_index(const CStarAlgebra& alg, std::size_t k, std::size_t i, std::size_t j) {
  return alg.block_offset(k) + i * alg.block_dims()[k] + j;
}

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Index of E_a* E_b, or kNone when the product vanishes.
std::size_t adjoint_product(const CStarAlgebra& alg, const Unit& a, const Unit& b) {
  if (a.block != b.block || a.row != b.row) return kNone;
  return unit_index(alg, a.block, a.col, b.col);
}

// Index of E_a* E_c E_b.
std::size_t sandwich(const CStarAlgebra& alg, const Unit& a, const Unit& c, const Unit& b) {
  if (a.block != c.block || c.block != b.block || a.row != c.row || c.col != b.row) return kNone;
  return unit_index(alg, a.block, a.col, b.col);
}

}  // namespace

CPMap CPMap::from_kraus(const CStarAlgebra& algebra, std::vector<CMatrix> kraus, const Tolerance& tol) {
  tol.validate();
  if (kraus.empty()) throw Error(Errc::empty_input, "at least one Kraus operator is required");
  const std::size_t p = algebra.canonical_dim();
  const std::size_t h = kraus.front().rows();
  for (std::size_t r = 0; r < kraus.size(); ++r) {
    if (kraus[r].rows() != h || kraus[r].cols() != p) {
      throw Error(Errc::shape_mismatch, "Kraus operator " + std::to_string(r) + " must be " + std::to_string(h) +
                                            " x " + std::to_string(p));
    }
  }
  const Representation pi = Representation::canonical(algebra);
  std::vector<CMatrix> images;
  for (const auto& b : pi.map().basis_images()) {
    CMatrix img(h, h);
    for (const auto& k : kraus) img += k * b * k.adjoint();
    images.push_back(std::move(img));
  }
  return CPMap(AlgebraMap(algebra, h, std::move(images)), std::move(kraus));
}

CPMap CPMap::from_images(const CStarAlgebra& algebra, std::size_t dim_h, std::vector<CMatrix> images,
                         const Tolerance& tol) {
  return from_map(AlgebraMap(algebra, dim_h, std::move(images)), tol);
}

CPMap CPMap::from_map(AlgebraMap map, const Tolerance& tol) {
  tol.validate();
  const CStarAlgebra& alg = map.algebra();
  const auto units = decode_units(alg);
  const auto& images = map.basis_images();
  for (std::size_t a = 0; a < units.size(); ++a) {
    const std::size_t star = unit_index(alg, units[a].block, units[a].col, units[a].row);
    const double r = (images[star] - images[a].adjoint()).frobenius_norm();
    if (r > tol.eq_tol * (1.0 + images[a].frobenius_norm())) {
      throw Error(Errc::not_hermitian, "phi(a*) != phi(a)* for basis element " + std::to_string(a));
    }
  }
  return CPMap(std::move(map), std::nullopt);
}

CMatrix choi(const CPMap& phi) {
  const Representation pi = Representation::canonical(phi.algebra());
  const std::size_t p = pi.dim();
  const std::size_t h = phi.dim();
  CMatrix c(p * h, p * h);
  const auto& images = phi.map().basis_images();
  const auto& units = pi.map().basis_images();
  for (std::size_t a = 0; a < images.size(); ++a) c += kron(units[a], images[a]);
  return c;
}

bool is_completely_positive(const CPMap& phi, const Tolerance& tol) {
  const CMatrix c = choi(phi);
  if (c.empty()) return true;
  const HermEig eig = herm_eig(c, tol);
  return eig.values.back() >= -tol.eq_tol * (1.0 + op_norm(c));
}

ScalarDilation stinespring(const CPMap& phi, const Tolerance& tol) {
  if (!is_completely_positive(phi, tol)) throw Error(Errc::not_cp, "phi is not completely positive");
  const CStarAlgebra& alg = phi.algebra();
  const auto units = decode_units(alg);
  const auto& images = phi.map().basis_images();
  const std::size_t d = units.size();
  const std::size_t h = phi.dim();

  CMatrix gram(d * h, d * h);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      if (const std::size_t ab = adjoint_product(alg, units[a], units[b]); ab != kNone)
        gram.set_block(a * h, b * h, images[ab]);
  const GramFactor f = gram_factor(gram, tol);
  const CMatrix lift_adj = f.lift.adjoint();

  std::vector<CMatrix> theta_images;
  for (std::size_t c = 0; c < d; ++c) {
    CMatrix gc(d * h, d * h);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        if (const std::size_t idx = sandwich(alg, units[a], units[c], units[b]); idx != kNone)
          gc.set_block(a * h, b * h, images[idx]);
    theta_images.push_back(lift_adj * gc * f.lift);
  }
  // <b_a (x) e_s, 1 (x) e_t> = phi(b_a*)_{st}
  CMatrix gv(d * h, h);
  for (std::size_t a = 0; a < d; ++a)
    gv.set_block(a * h, 0, images[unit_index(alg, units[a].block, units[a].col, units[a].row)]);

  ScalarDilation out{Representation::from_images(alg, f.rank, std::move(theta_images), tol), lift_adj * gv, f.rank,
                     0.0, 0.0};
  const CMatrix v_adj = out.v.adjoint();
  for (std::size_t a = 0; a < d; ++a) {
    const AlgElement b = alg.basis(a);
    const double r = op_norm(images[a] - v_adj * out.theta(b) * out.v) / (1.0 + b.norm());
    out.reconstruction_residual = std::max(out.reconstruction_residual, r);
  }
  out.isometry_residual = op_norm(v_adj * out.v - phi(alg.one()));
  return out;
}

bool DilationCertificate::valid() const {
  const auto& r = residuals;
  for (double x : {r.scalar_dilation, r.isometry_v, r.module_reconstruction, r.theta_morphism, r.action_compat,
                   r.projection_w, r.bound_excess, r.psi_well_definedness}) {
    if (!(x <= threshold)) return false;
  }
  return true;
}

CMatrix psi(const DilationCertificate& cert, const ModuleElement& x) {
  return CMatrix::unflatten(cert.psi_linear * x.matrix().flatten(), cert.dim_k_prime, cert.dim_h_prime);
}

DilationCertificate module_stinespring(const QuasiRep& q, const Tolerance& tol) {
  tol.validate();
  const double threshold = 10.0 * tol.eq_tol;
  const FinslerModule& e = q.module();
  const CStarAlgebra& alg = e.algebra();
  const CPMap cp = CPMap::from_map(q.phi(), tol);
  if (!is_completely_positive(cp, tol)) throw Error(Errc::not_cp, "phi is not completely positive");

  const std::size_t h = q.dim_h();
  const double unital = op_norm(cp(alg.one()) - CMatrix::identity(h));
  if (unital > threshold) throw PreconditionError("phi is not unital, residual " + std::to_string(unital), unital);

  // The identities the construction consumes, checked on the span basis.
  std::vector<ModuleElement> span;
  for (std::size_t k = 0; k < e.span_dim(); ++k) {
    std::vector<Complex> c(e.span_dim());
    c[k] = 1.0;
    span.push_back(e.combination(c));
  }
  std::vector<CMatrix> x_images;
  for (const auto& u : span) x_images.push_back(q(u));
  const auto basis = alg.basis();
  double identity = 0.0;
  double action = 0.0;
  for (std::size_t k = 0; k < span.size(); ++k) {
    for (std::size_t l = 0; l < span.size(); ++l) {
      const CMatrix lhs = x_images[k].adjoint() * x_images[l];
      identity = std::max(identity, op_norm(lhs - cp(e.inner(span[k], span[l]))));
    }
    for (const auto& b : basis) action = std::max(action, op_norm(q(e.act(span[k], b)) - x_images[k] * cp(b)));
  }
  if (identity > threshold) {
    throw PreconditionError("Phi(x)*Phi(y) != phi(<x,y>), residual " + std::to_string(identity), identity);
  }
  if (action > threshold) {
    throw PreconditionError("Phi(xa) != Phi(x)phi(a), residual " + std::to_string(action), action);
  }
  if (q.well_definedness_residual() > threshold) {
    throw PreconditionError("Phi is not well defined on the module, residual " +
                                std::to_string(q.well_definedness_residual()),
                            q.well_definedness_residual());
  }

  ScalarDilation sd = stinespring(cp, tol);
  DilationCertificate cert{sd.theta, sd.v, {}, {}, {}, h, q.dim_k(), sd.dim, 0, {}, threshold};
  cert.residuals.scalar_dilation = sd.reconstruction_residual;
  cert.residuals.isometry_v = op_norm(sd.v.adjoint() * sd.v - CMatrix::identity(h));

  // K' = span{Phi(x) h}
  std::vector<CMatrix> columns;
  for (const auto& x : x_images)
    for (std::size_t s = 0; s < x.cols(); ++s) columns.push_back(x.col(s));
  std::vector<CMatrix> k_basis;
  if (!columns.empty() && q.dim_k() > 0) k_basis = span_rank(columns, tol).basis;
  cert.dim_k_prime = k_basis.size();
  cert.w = k_basis.empty() ? CMatrix(0, q.dim_k()) : hstack(k_basis, q.dim_k()).adjoint();
  cert.residuals.projection_w = op_norm(cert.w * cert.w.adjoint() - CMatrix::identity(cert.dim_k_prime));

  // Spanning set theta(b)Vh of H' and Psi(x) by least squares against W Phi(xb)h.
  std::vector<CMatrix> s_parts;
  for (const auto& b : basis) s_parts.push_back(cert.theta(b) * cert.v);
  const CMatrix s = hstack(s_parts, sd.dim);
  const CMatrix s_pinv = pseudo_inverse(s, tol);
  const CMatrix s_null = null_space(s, tol);
  auto build_psi = [&](const ModuleElement& x, double& well_defined) {
    std::vector<CMatrix> t_parts;
    for (const auto& b : basis) t_parts.push_back(cert.w * q(e.act(x, b)));
    const CMatrix t = hstack(t_parts, cert.dim_k_prime);
    if (s_null.cols() > 0 && !t.empty()) {
      well_defined = std::max(well_defined, (t * s_null).frobenius_norm() / (1.0 + t.frobenius_norm()));
    }
    return t * s_pinv;
  };

  double well_defined = 0.0;
  cert.psi_linear = CMatrix(cert.dim_k_prime * sd.dim, e.ambient_rows() * e.ambient_cols());
  for (const auto& u : span) {
    cert.psi_linear += build_psi(u, well_defined).flatten() * u.matrix().flatten().adjoint();
  }

  std::vector<ModuleElement> probes;
  for (std::size_t i = 0; i < e.generators().size(); ++i) probes.push_back(e.generator(i));
  probes.insert(probes.end(), span.begin(), span.end());
  auto& r = cert.residuals;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const ModuleElement& x = probes[i];
    const CMatrix psi_x = build_psi(x, well_defined);
    if (i < e.generators().size()) cert.psi.push_back(psi_x);
    const CMatrix phi_x = q(x);
    r.module_reconstruction =
        std::max(r.module_reconstruction, op_norm(phi_x - cert.w.adjoint() * psi_x * cert.v));
    r.theta_morphism = std::max(r.theta_morphism, op_norm(psi_x.adjoint() * psi_x - cert.theta(e.rho_squared(x))));
    for (const auto& b : basis) {
      r.action_compat = std::max(r.action_compat, op_norm(psi_x * cert.theta(b) - psi(cert, e.act(x, b))));
    }
    r.bound_excess = std::max(r.bound_excess, op_norm(psi_x) - module_norm(e, x));
  }
  r.psi_well_definedness = well_defined;
  return cert;
}

}  // namespace finsler
