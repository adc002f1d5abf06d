#include "finsler/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace finsler {

namespace {

struct UnitIndex {
  std::size_t block, row, col;
};

UnitIndex decode(const CStarAlgebra& alg, std::size_t index) {
  for (std::size_t k = 0; k < alg.num_blocks(); ++k) {
    const std::size_t n = alg.block_dims()[k];
    const std::size_t off = alg.block_offset(k);
    if (index < off + n * n) {
      const std::size_t local = index - off;
      return {k, local / n, local % n};
    }
  }
  throw Error(Errc::invalid_argument, "basis index out of range");
}

std::size_t encode(const CStarAlgebra& alg, const UnitIndex& u) {
  const std::size_t n = alg.block_dims()[u.block];
  return alg.block_offset(u.block) + u.row * n + u.col;
}

// Index of E_a E_b when the product is a nonzero matrix unit.
std::optional<std::size_t> unit_product(const CStarAlgebra& alg, std::size_t a, std::size_t b) {
  const UnitIndex ua = decode(alg, a);
  const UnitIndex ub = decode(alg, b);
  if (ua.block != ub.block || ua.col != ub.row) return std::nullopt;
  return encode(alg, {ua.block, ua.row, ub.col});
}

std::size_t unit_adjoint(const CStarAlgebra& alg, std::size_t a) {
  const UnitIndex u = decode(alg, a);
  return encode(alg, {u.block, u.col, u.row});
}

void require_same(const AlgElement& a, const AlgElement& b) {
  if (!a.same_algebra(b)) throw Error(Errc::algebra_mismatch, "elements belong to different algebras");
}

// Stacked basis images as columns of an N^2 x dim(A) matrix.
CMatrix image_matrix(const AlgebraMap& map) {
  const std::size_t n2 = map.dim() * map.dim();
  CMatrix m(n2, map.algebra().dim());
  for (std::size_t a = 0; a < map.basis_images().size(); ++a) {
    auto e = map.basis_images()[a].entries();
    for (std::size_t i = 0; i < n2; ++i) m(i, a) = e[i];
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// CStarAlgebra

CStarAlgebra::CStarAlgebra(std::vector<std::size_t> block_dims) : dims_(std::move(block_dims)) {
  if (dims_.empty()) throw Error(Errc::invalid_argument, "an algebra needs at least one block");
  for (auto n : dims_) {
    if (n == 0) throw Error(Errc::invalid_argument, "block dimensions must be positive");
    offsets_.push_back(dim_);
    dim_ += n * n;
    canonical_dim_ += n;
  }
}

AlgElement CStarAlgebra::zero() const {
  std::vector<CMatrix> blocks;
  for (auto n : dims_) blocks.emplace_back(n, n);
  return AlgElement(std::move(blocks));
}

AlgElement CStarAlgebra::one() const {
  std::vector<CMatrix> blocks;
  for (auto n : dims_) blocks.push_back(CMatrix::identity(n));
  return AlgElement(std::move(blocks));
}

AlgElement CStarAlgebra::block_unit(std::size_t k) const {
  std::vector<CMatrix> blocks;
  for (std::size_t b = 0; b < dims_.size(); ++b) {
    blocks.push_back(b == k ? CMatrix::identity(dims_[b]) : CMatrix(dims_[b], dims_[b]));
  }
  return AlgElement(std::move(blocks));
}

AlgElement CStarAlgebra::basis(std::size_t index) const {
  const UnitIndex u = decode(*this, index);
  AlgElement e = zero();
  std::vector<CMatrix> blocks = e.blocks();
  blocks[u.block](u.row, u.col) = 1.0;
  return AlgElement(std::move(blocks));
}

std::vector<AlgElement> CStarAlgebra::basis() const {
  std::vector<AlgElement> out;
  out.reserve(dim_);
  for (std::size_t a = 0; a < dim_; ++a) out.push_back(basis(a));
  return out;
}

AlgElement CStarAlgebra::from_coords(std::span<const Complex> coords) const {
  if (coords.size() != dim_) throw Error(Errc::shape_mismatch, "coordinate vector has wrong length");
  std::vector<CMatrix> blocks;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    const std::size_t n = dims_[k];
    blocks.emplace_back(n, n, std::vector<Complex>(coords.begin() + static_cast<std::ptrdiff_t>(offsets_[k]),
                                                   coords.begin() + static_cast<std::ptrdiff_t>(offsets_[k] + n * n)));
  }
  return AlgElement(std::move(blocks));
}

CMatrix CStarAlgebra::left_multiplication(const AlgElement& a) const {
  if (a.algebra() != *this) throw Error(Errc::algebra_mismatch, "left_multiplication");
  const auto c = a.coords();
  CMatrix l(dim_, dim_);
  // a * E_b = sum_x c_x E_x E_b
  for (std::size_t b = 0; b < dim_; ++b) {
    for (std::size_t x = 0; x < dim_; ++x) {
      if (c[x] == Complex{}) continue;
      if (auto p = unit_product(*this, x, b)) l(*p, b) += c[x];
    }
  }
  return l;
}

// ---------------------------------------------------------------------------
// AlgElement

AlgElement::AlgElement(std::vector<CMatrix> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw Error(Errc::invalid_argument, "an element needs at least one block");
  for (const auto& b : blocks_) {
    if (!b.is_square() || b.rows() == 0) throw Error(Errc::shape_mismatch, "blocks must be nonempty and square");
  }
}

CStarAlgebra AlgElement::algebra() const {
  std::vector<std::size_t> dims;
  for (const auto& b : blocks_) dims.push_back(b.rows());
  return CStarAlgebra(std::move(dims));
}

std::vector<Complex> AlgElement::coords() const {
  std::vector<Complex> c;
  for (const auto& b : blocks_) c.insert(c.end(), b.entries().begin(), b.entries().end());
  return c;
}

AlgElement AlgElement::adjoint() const {
  std::vector<CMatrix> blocks;
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return AlgElement(std::move(blocks));
}

double AlgElement::norm() const {
  double n = 0.0;
  for (const auto& b : blocks_) n = std::max(n, op_norm(b));
  return n;
}

bool AlgElement::same_algebra(const AlgElement& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k].rows() != other.blocks_[k].rows()) return false;
  }
  return true;
}

AlgElement& AlgElement::operator+=(const AlgElement& o) {
  require_same(*this, o);
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += o.blocks_[k];
  return *this;
}

AlgElement& AlgElement::operator-=(const AlgElement& o) {
  require_same(*this, o);
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= o.blocks_[k];
  return *this;
}

AlgElement& AlgElement::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

AlgElement operator+(AlgElement a, const AlgElement& b) { return a += b; }
AlgElement operator-(AlgElement a, const AlgElement& b) { return a -= b; }
AlgElement operator*(Complex s, AlgElement a) { return a *= s; }
AlgElement operator*(const AlgElement& a, const AlgElement& b) { return multiply(a, b); }

AlgElement multiply(const AlgElement& a, const AlgElement& b) {
  require_same(a, b);
  std::vector<CMatrix> blocks;
  for (std::size_t k = 0; k < a.blocks().size(); ++k) blocks.push_back(a.block(k) * b.block(k));
  return AlgElement(std::move(blocks));
}

AlgElement involution(const AlgElement& a) { return a.adjoint(); }

bool is_positive(const AlgElement& a, const Tolerance& tol) {
  const double scale = a.norm();
  for (const auto& b : a.blocks()) {
    if ((b - b.adjoint()).frobenius_norm() > tol.eq_tol * (1.0 + scale)) return false;
    const HermEig eig = herm_eig(b, tol);
    if (eig.values.back() < -tol.eq_tol * (1.0 + scale)) return false;
  }
  return true;
}

AlgElement abs_sqrt(const AlgElement& a) {
  std::vector<CMatrix> blocks;
  for (const auto& b : a.blocks()) blocks.push_back(abs_value(b));
  return AlgElement(std::move(blocks));
}

// ---------------------------------------------------------------------------
// AlgebraMap

AlgebraMap::AlgebraMap(CStarAlgebra algebra, std::size_t dim, std::vector<CMatrix> basis_images)
    : algebra_(std::move(algebra)), dim_(dim), images_(std::move(basis_images)) {
  if (images_.size() != algebra_.dim()) {
    throw Error(Errc::shape_mismatch, "need one image per basis element");
  }
  for (const auto& m : images_) {
    if (m.rows() != dim_ || m.cols() != dim_) throw Error(Errc::shape_mismatch, "basis image has wrong shape");
  }
}

CMatrix AlgebraMap::operator()(std::span<const Complex> coords) const {
  if (coords.size() != images_.size()) throw Error(Errc::algebra_mismatch, "coordinate length");
  CMatrix out(dim_, dim_);
  for (std::size_t a = 0; a < images_.size(); ++a) {
    const Complex c = coords[a];
    if (c == Complex{}) continue;
    auto dst = out.entries();
    auto src = images_[a].entries();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += c * src[i];
  }
  return out;
}

CMatrix AlgebraMap::operator()(const AlgElement& a) const {
  if (a.algebra() != algebra_) throw Error(Errc::algebra_mismatch, "map applied to foreign element");
  const auto c = a.coords();
  return (*this)(std::span<const Complex>(c));
}

double AlgebraMap::homomorphism_residual() const {
  double worst = 0.0;
  const std::size_t d = algebra_.dim();
  const CMatrix zero(dim_, dim_);
  for (std::size_t a = 0; a < d; ++a) {
    const std::size_t adj = unit_adjoint(algebra_, a);
    worst = std::max(worst, (images_[adj] - images_[a].adjoint()).frobenius_norm());
    for (std::size_t b = 0; b < d; ++b) {
      const auto p = unit_product(algebra_, a, b);
      const CMatrix& target = p ? images_[*p] : zero;
      worst = std::max(worst, (images_[a] * images_[b] - target).frobenius_norm());
    }
  }
  return worst;
}

bool map_is_nondegenerate(const AlgebraMap& phi, const Tolerance& tol) {
  if (phi.dim() == 0) return true;
  const CMatrix stacked = hstack(phi.basis_images(), phi.dim());
  return matrix_rank(stacked, tol) == phi.dim();
}

bool map_is_irreducible(const AlgebraMap& phi, const Tolerance& tol) {
  if (phi.dim() == 0) return false;
  return commutant(phi.basis_images(), phi.dim(), tol).dimension == 1;
}

// ---------------------------------------------------------------------------
// Representation

namespace {

AlgebraMap multiplicity_map(const CStarAlgebra& alg, const std::vector<std::size_t>& mult,
                            const std::optional<CMatrix>& unitary) {
  if (mult.size() != alg.num_blocks()) {
    throw Error(Errc::shape_mismatch, "one multiplicity per block is required");
  }
  std::size_t n = 0;
  std::vector<std::size_t> offsets;
  for (std::size_t k = 0; k < mult.size(); ++k) {
    offsets.push_back(n);
    n += mult[k] * alg.block_dims()[k];
  }
  if (unitary && (unitary->rows() != n || unitary->cols() != n)) {
    throw Error(Errc::shape_mismatch, "basis unitary must be " + std::to_string(n) + " x " + std::to_string(n));
  }
  std::vector<CMatrix> images;
  images.reserve(alg.dim());
  for (std::size_t a = 0; a < alg.dim(); ++a) {
    const UnitIndex u = decode(alg, a);
    const std::size_t m = mult[u.block];
    CMatrix img(n, n);
    // E_ij (x) I_m
    for (std::size_t r = 0; r < m; ++r) img(offsets[u.block] + u.row * m + r, offsets[u.block] + u.col * m + r) = 1.0;
    if (unitary) img = (*unitary) * img * unitary->adjoint();
    images.push_back(std::move(img));
  }
  return AlgebraMap(alg, n, std::move(images));
}

}  // namespace

Representation::Representation(CStarAlgebra algebra, std::vector<std::size_t> multiplicities,
                               std::optional<CMatrix> basis_unitary, const Tolerance& tol)
    : Representation(multiplicity_map(algebra, multiplicities, basis_unitary), multiplicities, basis_unitary,
                     tol) {}

Representation::Representation(AlgebraMap map, std::vector<std::size_t> multiplicities,
                               std::optional<CMatrix> unitary, const Tolerance& tol)
    : map_(std::move(map)), mult_(std::move(multiplicities)), unitary_(std::move(unitary)) {
  if (unitary_) {
    const std::size_t n = map_.dim();
    if (unitary_->rows() != n || unitary_->cols() != n) {
      throw Error(Errc::shape_mismatch, "basis unitary must be N x N");
    }
    if ((unitary_->adjoint() * (*unitary_) - CMatrix::identity(n)).frobenius_norm() > tol.eq_tol * (1.0 + n)) {
      throw Error(Errc::invalid_argument, "basis_unitary is not unitary");
    }
  }
  pinv_ = pseudo_inverse(image_matrix(map_), tol);
}

Representation Representation::canonical(const CStarAlgebra& algebra) {
  return Representation(algebra, std::vector<std::size_t>(algebra.num_blocks(), 1));
}

Representation Representation::from_images(const CStarAlgebra& algebra, std::size_t dim,
                                           std::vector<CMatrix> images, const Tolerance& tol) {
  AlgebraMap map(algebra, dim, std::move(images));
  const double res = map.homomorphism_residual();
  if (res > 10.0 * tol.eq_tol) {
    throw Error(Errc::not_homomorphism, "basis images violate multiplicativity/involution, residual " +
                                            std::to_string(res));
  }
  std::vector<std::size_t> mult;
  for (std::size_t k = 0; k < algebra.num_blocks(); ++k) {
    const double rank = map(algebra.block_unit(k)).trace().real();
    mult.push_back(static_cast<std::size_t>(std::llround(rank / static_cast<double>(algebra.block_dims()[k]))));
  }
  return Representation(std::move(map), std::move(mult), std::nullopt, tol);
}

bool Representation::is_faithful() const {
  return std::all_of(mult_.begin(), mult_.end(), [](std::size_t m) { return m >= 1; });
}

Representation::Preimage Representation::preimage(const CMatrix& m) const {
  if (m.rows() != dim() || m.cols() != dim()) throw Error(Errc::shape_mismatch, "preimage operand shape");
  const CMatrix coords = pinv_ * m.flatten();
  AlgElement element = algebra().from_coords(coords.entries());
  const double residual = (map_(element) - m).frobenius_norm();
  return {std::move(element), residual};
}

bool rep_is_irreducible(const Representation& pi, const Tolerance& tol) {
  return map_is_irreducible(pi.map(), tol);
}

bool rep_is_nondegenerate(const Representation& pi, const Tolerance& tol) {
  return map_is_nondegenerate(pi.map(), tol);
}

// ---------------------------------------------------------------------------
// State and GNS

State::State(CStarAlgebra algebra, std::vector<CMatrix> density_blocks, const Tolerance& tol)
    : algebra_(std::move(algebra)), density_(std::move(density_blocks)) {
  if (density_.size() != algebra_.num_blocks()) throw Error(Errc::shape_mismatch, "one density block per block");
  Complex total = 0.0;
  for (std::size_t k = 0; k < density_.size(); ++k) {
    const std::size_t n = algebra_.block_dims()[k];
    if (density_[k].rows() != n || density_[k].cols() != n) throw Error(Errc::shape_mismatch, "density block shape");
    const HermEig eig = herm_eig(density_[k], tol);
    if (eig.values.back() < -tol.eq_tol) throw Error(Errc::not_positive, "density block is not PSD");
    total += density_[k].trace();
  }
  if (std::abs(total - 1.0) > tol.eq_tol) throw Error(Errc::invalid_argument, "density has trace != 1");
}

Complex State::operator()(const AlgElement& a) const {
  if (a.algebra() != algebra_) throw Error(Errc::algebra_mismatch, "state applied to foreign element");
  Complex v = 0.0;
  for (std::size_t k = 0; k < density_.size(); ++k) v += (density_[k] * a.block(k)).trace();
  return v;
}

GnsResult gns(const State& state, const Tolerance& tol) {
  const CStarAlgebra& alg = state.algebra();
  const std::size_t d = alg.dim();
  const auto basis = alg.basis();
  CMatrix gram(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) gram(a, b) = state(basis[a].adjoint() * basis[b]);

  const GramFactor f = gram_factor(gram, tol);
  std::vector<CMatrix> images;
  images.reserve(d);
  for (std::size_t c = 0; c < d; ++c) images.push_back(f.embed * alg.left_multiplication(basis[c]) * f.lift);
  const auto unit = alg.one().coords();
  CMatrix omega = f.embed * CMatrix::column(unit);
  return {Representation::from_images(alg, f.rank, std::move(images), tol), std::move(omega)};
}

// ---------------------------------------------------------------------------
// Commutant

Commutant commutant(std::span<const CMatrix> ops, std::size_t n, const Tolerance& tol) {
  Commutant out;
  const std::size_t n2 = n * n;
  if (ops.empty()) {
    out.dimension = n2;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out.basis.push_back(CMatrix::unit(n, i, j));
    return out;
  }
  const CMatrix id = CMatrix::identity(n);
  CMatrix system(2 * ops.size() * n2, n2);
  std::size_t row = 0;
  for (const auto& x : ops) {
    if (x.rows() != n || x.cols() != n) throw Error(Errc::shape_mismatch, "commutant operand shape");
    // row-major vec: vec(TX) = (I (x) X^T) vec T, vec(XT) = (X (x) I) vec T
    system.set_block(row, 0, kron(id, x.transpose()) - kron(x, id));
    row += n2;
    system.set_block(row, 0, kron(id, x.conj()) - kron(x.adjoint(), id));
    row += n2;
  }
  const CMatrix ns = null_space(system, tol);
  out.dimension = ns.cols();
  for (std::size_t k = 0; k < ns.cols(); ++k) out.basis.push_back(CMatrix::unflatten(ns.col(k), n, n));
  return out;
}

}  // namespace finsler
