#include "finsler/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/random.hpp"

namespace finsler {

namespace {

std::vector<ModuleElement> span_elements(const FinslerModule& e) {
  std::vector<ModuleElement> out;
  for (std::size_t k = 0; k < e.span_dim(); ++k) {
    std::vector<Complex> c(e.span_dim());
    c[k] = 1.0;
    out.push_back(e.combination(c));
  }
  return out;
}

std::vector<CMatrix> span_images(const QuasiRep& q) {
  std::vector<CMatrix> out;
  for (const auto& u : span_elements(q.module())) out.push_back(q(u));
  return out;
}

// Orthonormal basis (as columns) of the span of the columns of `mats`.
CMatrix column_span(const std::vector<CMatrix>& mats, std::size_t rows, const Tolerance& tol) {
  std::vector<CMatrix> cols;
  for (const auto& m : mats)
    for (std::size_t s = 0; s < m.cols(); ++s) cols.push_back(m.col(s));
  if (rows == 0 || cols.empty()) return CMatrix(rows, 0);
  const SpanInfo info = span_rank(cols, tol);
  if (info.rank == 0) return CMatrix(rows, 0);
  return hstack(info.basis, rows);
}

CMatrix projector(const CMatrix& basis) { return basis * basis.adjoint(); }

bool is_zero_map(const std::vector<CMatrix>& images, const Tolerance& tol) {
  return std::all_of(images.begin(), images.end(), [&](const CMatrix& x) { return op_norm(x) <= tol.eq_tol; });
}

// Spectral projections of a Hermitian pair onto the first eigenvalue cluster.
std::optional<OperatorPair> spectral_split(const CMatrix& s, const CMatrix& t, double gap, const Tolerance& tol) {
  const HermEig es = s.rows() ? herm_eig(s, tol) : HermEig{};
  const HermEig et = t.rows() ? herm_eig(t, tol) : HermEig{};
  std::vector<double> all = es.values;
  all.insert(all.end(), et.values.begin(), et.values.end());
  if (all.empty()) return std::nullopt;
  std::sort(all.begin(), all.end(), std::greater<>());
  double cut = 0.0;
  bool split = false;
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    if (all[i] - all[i + 1] > gap) {
      cut = 0.5 * (all[i] + all[i + 1]);
      split = true;
      break;
    }
  }
  if (!split) return std::nullopt;
  auto top = [cut](const HermEig& eig, std::size_t n) {
    CMatrix p(n, n);
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
      if (eig.values[k] <= cut) continue;
      const CMatrix v = eig.vectors.col(k);
      p += v * v.adjoint();
    }
    return p;
  };
  return OperatorPair{top(es, s.rows()), top(et, t.rows())};
}

}  // namespace

Nondegeneracy nondegeneracy(const QuasiRep& q) {
  const Tolerance& tol = q.tolerance();
  const auto images = span_images(q);
  std::vector<CMatrix> adjoints;
  for (const auto& x : images) adjoints.push_back(x.adjoint());
  Nondegeneracy out;
  out.dim_k = q.dim_k();
  out.dim_h = q.dim_h();
  out.range_rank = column_span(images, out.dim_k, tol).cols();
  out.corange_rank = column_span(adjoints, out.dim_h, tol).cols();
  out.nondegenerate = out.range_rank == out.dim_k && out.corange_rank == out.dim_h;
  return out;
}

bool is_nondegenerate(const QuasiRep& q) { return nondegeneracy(q).nondegenerate; }

CommutantPairSpace commutant_pairs(const QuasiRep& q) {
  const std::size_t h = q.dim_h();
  const std::size_t k = q.dim_k();
  const std::size_t n = h * h + k * k;
  const auto images = span_images(q);
  const CMatrix ih = CMatrix::identity(h);
  const CMatrix ik = CMatrix::identity(k);

  // Unknowns (vec S, vec T), both row-major.
  CMatrix system(images.size() * 2 * h * k, n);
  std::size_t row = 0;
  for (const auto& x : images) {
    CMatrix top(h * k, n);  // T X - X S
    top.set_block(0, 0, -kron(x, ih));
    top.set_block(0, h * h, kron(ik, x.transpose()));
    CMatrix bottom(h * k, n);  // S X* - X* T
    bottom.set_block(0, 0, kron(ih, x.conj()));
    bottom.set_block(0, h * h, -kron(x.adjoint(), ik));
    system.set_block(row, 0, top);
    system.set_block(row + h * k, 0, bottom);
    row += 2 * h * k;
  }
  const CMatrix kernel = null_space(system, q.tolerance());
  CommutantPairSpace out;
  out.dimension = kernel.cols();
  for (std::size_t c = 0; c < kernel.cols(); ++c) {
    const CMatrix v = kernel.col(c);
    out.basis.push_back({CMatrix::unflatten(v.block(0, 0, h * h, 1), h, h),
                         CMatrix::unflatten(v.block(h * h, 0, k * k, 1), k, k)});
  }
  return out;
}

double invariance_residual(const QuasiRep& q, const OperatorPair& pq) {
  const CMatrix ih = CMatrix::identity(q.dim_h());
  const CMatrix ik = CMatrix::identity(q.dim_k());
  double r = 0.0;
  for (const auto& x : span_images(q)) {
    r = std::max(r, op_norm((ik - pq.t) * x * pq.s));
    r = std::max(r, op_norm((ih - pq.s) * x.adjoint() * pq.t));
  }
  return r;
}

Irreducibility is_irreducible(const QuasiRep& q) {
  const Tolerance& tol = q.tolerance();
  const std::size_t h = q.dim_h();
  const std::size_t k = q.dim_k();
  Irreducibility out;
  const CommutantPairSpace pairs = commutant_pairs(q);
  out.pair_dimension = pairs.dimension;
  out.irreducible = pairs.dimension == 1;
  if (pairs.dimension <= 1) return out;

  auto accept = [&](OperatorPair w, const char* kind) {
    const double r = invariance_residual(q, w);
    if (r > 10.0 * tol.eq_tol) return false;
    out.witness = std::move(w);
    out.witness_residual = r;
    out.witness_kind = kind;
    return true;
  };

  const auto images = span_images(q);
  // every pair is invariant under the zero map; no witness is reported for it
  if (is_zero_map(images, tol)) return out;
  const Nondegeneracy nd = nondegeneracy(q);
  if (h > 0 && nd.range_rank < k) {
    std::vector<CMatrix> copy = images;
    if (accept({CMatrix::identity(h), projector(column_span(copy, k, tol))}, "range")) return out;
  }
  if (k > 0 && nd.corange_rank < h) {
    std::vector<CMatrix> adj;
    for (const auto& x : images) adj.push_back(x.adjoint());
    if (accept({projector(column_span(adj, h, tol)), CMatrix::identity(k)}, "corange")) return out;
  }

  const double gap = 10.0 * tol.eq_tol;
  for (const auto& b : pairs.basis) {
    const OperatorPair parts[2] = {
        {0.5 * (b.s + b.s.adjoint()), 0.5 * (b.t + b.t.adjoint())},
        {Complex(0.0, -0.5) * (b.s - b.s.adjoint()), Complex(0.0, -0.5) * (b.t - b.t.adjoint())},
    };
    for (const auto& part : parts) {
      if (auto w = spectral_split(part.s, part.t, gap, tol); w && accept(std::move(*w), "spectral")) return out;
    }
  }
  return out;
}

bool TransferReport::all_respected() const {
  return std::all_of(implications.begin(), implications.end(), [](const Implication& i) { return i.respected(); });
}

TransferReport check_transfer(const QuasiRep& q, std::size_t sample_count, std::uint64_t seed) {
  const FinslerModule& e = q.module();
  const Tolerance& tol = q.tolerance();
  TransferReport r;
  r.module_full = is_full(e);
  r.rep_nondegenerate = map_is_nondegenerate(q.phi(), tol);
  r.rep_irreducible = map_is_irreducible(q.phi(), tol);
  r.quasirep_nondegenerate = is_nondegenerate(q);
  r.quasirep_irreducible = is_irreducible(q).irreducible;

  const CMatrix id = CMatrix::identity(q.dim_h());
  auto unit_rho = [&](const ModuleElement& x) {
    return op_norm(q.phi()(e.rho(x)) - id) <= tol.eq_tol * (1.0 + op_norm(x.matrix()));
  };
  if (q.dim_h() > 0) {
    for (std::size_t i = 0; i < e.generators().size() && !r.unit_rho_found; ++i) r.unit_rho_found = unit_rho(e.generator(i));
    for (const auto& u : span_elements(e)) {
      if (r.unit_rho_found) break;
      r.unit_rho_found = unit_rho(u);
    }
    Sampler sampler(seed);
    for (std::size_t s = 0; s < sample_count && !r.unit_rho_found; ++s) r.unit_rho_found = unit_rho(sample_element(e, sampler));
  }

  const bool full_nd = r.module_full && r.rep_nondegenerate;
  const bool full_irr = r.module_full && r.rep_irreducible;
  r.implications = {
      {"quasirep nondegenerate => rep nondegenerate", r.quasirep_nondegenerate, r.rep_nondegenerate},
      {"full and rep nondegenerate => quasirep nondegenerate", full_nd, r.quasirep_nondegenerate},
      {"phi(rho(x)) = I for some x => both nondegenerate", r.unit_rho_found,
       r.quasirep_nondegenerate && r.rep_nondegenerate},
      {"quasirep irreducible => rep irreducible", r.quasirep_irreducible, r.rep_irreducible},
      {"full and rep irreducible => quasirep irreducible", full_irr, r.quasirep_irreducible},
      {"full and rep irreducible => quasirep nondegenerate and irreducible", full_irr,
       r.quasirep_nondegenerate && r.quasirep_irreducible},
  };
  return r;
}

}  // namespace finsler
