#include "finsler/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "finsler/analysis.hpp"
#include "finsler/dilation.hpp"
#include "finsler/quasirep.hpp"
#include "finsler/random.hpp"

namespace finsler {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string ratio(std::size_t a, std::size_t b) { return std::to_string(a) + " / " + std::to_string(b); }

void add(ScenarioResult& r, std::string description, std::string expected, std::string observed, bool pass) {
  r.checks.push_back({std::move(description), std::move(expected), std::move(observed), pass});
}

void add_bool(ScenarioResult& r, std::string description, bool expected, bool observed) {
  add(r, std::move(description), yes_no(expected), yes_no(observed), expected == observed);
}

void add_bound(ScenarioResult& r, std::string description, double bound, double observed) {
  add(r, std::move(description), "<= " + sci(bound), sci(observed), observed <= bound);
}

void append(ScenarioResult& into, const ScenarioResult& from, const std::string& prefix) {
  for (auto c : from.checks) {
    c.description = prefix + c.description;
    into.checks.push_back(std::move(c));
  }
}

// Runs `body`; a thrown Error becomes a failing check instead of aborting the run.
void guarded(ScenarioResult& r, const std::string& what, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    add(r, what, "completes", e.what(), false);
  }
}

constexpr double kBound = 1e-8;

}  // namespace

bool ScenarioResult::overall_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

ScenarioResult run_central_projection_counterexample(std::size_t a, std::size_t b, bool trivial, std::uint64_t seed) {
  ScenarioResult r;
  r.name = "central-projection";
  guarded(r, "central projection instance", [&] {
    const CStarAlgebra alg({a, b});
    const Representation pi = Representation::canonical(alg);
    const std::size_t p = a + b;
    const CMatrix proj = trivial ? CMatrix::identity(p) : pi(alg.block_unit(0));
    const FinslerModule e(pi, p, {proj});
    const QuasiRep phi(e, pi.map(), p, {proj});

    const AxiomReport ax = verify_finsler_axiom(e, 100, seed);
    add(r, "Finsler axiom rho(xa)^2 = a* rho(x)^2 a", "pass", ax.pass ? "pass" : "fail", ax.pass);
    add_bool(r, "module is full", trivial, is_full(e, seed));
    const QuasiRepReport vq = verify_quasirep(phi, 100, seed + 1);
    add(r, "identity map is a quasi-representation (rho0 identity and action)", "pass",
        "identity " + sci(vq.max_identity_residual) + ", action " + sci(vq.max_action_residual), vq.pass);
    const Nondegeneracy nd = nondegeneracy(phi);
    const std::size_t expected_rank = trivial ? p : a;
    add(r, "span Φ(E)H", ratio(expected_rank, p), ratio(nd.range_rank, nd.dim_k),
        nd.range_rank == expected_rank && nd.dim_k == p);
    add_bool(r, "Φ nondegenerate", trivial, nd.nondegenerate);
    if (!trivial) {
      const Irreducibility ir = is_irreducible(phi);
      bool near = false;
      std::string seen = "none";
      if (ir.witness) {
        const double d = std::max(op_norm(ir.witness->s - CMatrix::identity(p)), op_norm(ir.witness->t - proj));
        near = d <= kBound && ir.witness_residual <= kBound;
        seen = ir.witness_kind + " pair, distance to (I, P) " + sci(d);
      }
      add(r, "Φ reducible with invariant pair (I, P(H))", "(I, P)", seen, !ir.irreducible && near);
    }
    const TransferReport tr = check_transfer(phi, 50, seed);
    const auto kept = std::count_if(tr.implications.begin(), tr.implications.end(),
                                    [](const Implication& i) { return i.respected(); });
    add(r, "transfer implications respected", ratio(tr.implications.size(), tr.implications.size()),
        ratio(static_cast<std::size_t>(kept), tr.implications.size()), tr.all_respected());
  });
  return r;
}

ScenarioResult run_remark_4_3(std::uint64_t seed) {
  ScenarioResult r = run_central_projection_counterexample(2, 2, false, seed);
  r.name = "remark-4-3";
  r.description =
      "E = AP over A = M2 + M2 on C^4 with P = I2 + 0 central; E is not full and the identity "
      "quasi-representation has span Φ(E)H = P(H) != H";
  append(r, run_central_projection_counterexample(2, 2, true, seed), "control P = I: ");
  append(r, run_central_projection_counterexample(3, 2, false, seed), "M3 + M2, P = I3 + 0: ");
  return r;
}

ScenarioResult run_matrix_identity(std::size_t n, std::size_t multiplicity, bool localized, std::uint64_t seed) {
  ScenarioResult r;
  r.name = "matrix-identity";
  guarded(r, "matrix identity instance", [&] {
    const CStarAlgebra alg({n});
    const Representation act = Representation::canonical(alg);
    const FinslerModule e(act, n, {CMatrix::identity(n)});
    const Representation phi(alg, {multiplicity});
    const std::size_t m2 = multiplicity * multiplicity;

    const Commutant c = commutant(phi.map().basis_images(), phi.dim());
    add(r, "commutant of phi(A)", std::to_string(m2), std::to_string(c.dimension), c.dimension == m2);
    add_bool(r, "module is full", true, is_full(e, seed));
    const QuasiRep q = localized ? build_quasirep(e, phi) : QuasiRep(e, phi.map(), n, {CMatrix::identity(n)});
    const QuasiRepReport vq = verify_quasirep(q, 100, seed);
    add(r, "quasi-representation identities", "pass",
        "identity " + sci(vq.max_identity_residual) + ", action " + sci(vq.max_action_residual), vq.pass);
    add_bool(r, "Φ nondegenerate", true, is_nondegenerate(q));
    const Irreducibility ir = is_irreducible(q);
    add_bool(r, "Φ irreducible", multiplicity == 1, ir.irreducible);
    add(r, "commutant pair dimension", std::to_string(m2), std::to_string(ir.pair_dimension),
        ir.pair_dimension == m2);
    if (multiplicity > 1) {
      add(r, "witness satisfies the invariance inclusions", "<= " + sci(kBound),
          ir.witness ? sci(ir.witness_residual) : "none", ir.witness && ir.witness_residual <= kBound);
    }
  });
  return r;
}

ScenarioResult run_example_4_9(std::uint64_t seed, std::size_t n) {
  ScenarioResult r = run_matrix_identity(n, 1, true, seed);
  r.name = "example-4-9";
  r.description = "identity representation of K(H) = M_" + std::to_string(n) +
                  " (finite dimension forces K(H) = B(H)), E = K(H) with rho(T) = |T|, Φ from the localisation";
  append(r, run_matrix_identity(1, 1, true, seed), "n = 1: ");
  return r;
}

ScenarioResult run_example_4_10(std::uint64_t seed, std::size_t n) {
  ScenarioResult r = run_matrix_identity(n, 1, false, seed);
  r.name = "example-4-10";
  r.description = "identity map of B(H) = M_" + std::to_string(n) + " with commutant CI, Φ(x) = x";
  append(r, run_matrix_identity(4, 2, true, seed), "control n = 4, multiplicity 2: ");
  return r;
}

ScenarioResult run_localization_demo(const FinslerModule& module, const Representation& phi, std::uint64_t seed) {
  ScenarioResult r;
  r.name = "localization";
  guarded(r, "localisation instance", [&] {
    const QuasiRep q = build_quasirep(module, phi);
    const QuasiRepReport vq = verify_quasirep(q, 50, seed);
    add_bound(r, "(Φ(x)*Φ(x))^{1/2} = phi(rho(x))", kBound, vq.max_identity_residual);
    add_bound(r, "Φ(xa) = Φ(x)phi(a)", kBound, vq.max_action_residual);
    const std::size_t rank =
        module.generators().empty() ? 0 : matrix_rank(localization_gram(module, phi.map()), q.tolerance());
    add(r, "dim K equals localisation Gram rank", std::to_string(rank), std::to_string(q.dim_k()),
        rank == q.dim_k());
  });
  return r;
}

ScenarioResult run_theorem_2_3_demo(std::uint64_t seed) {
  ScenarioResult r;
  r.name = "theorem-2-3";
  r.description = "quasi-representation from the localisation E (x)_phi H with phi the identity of M2";
  const CStarAlgebra alg({2});
  const Representation pi = Representation::canonical(alg);
  struct Case {
    std::string label;
    FinslerModule module;
    std::size_t dim_k;
  };
  std::vector<Case> cases;
  guarded(r, "module construction", [&] {
    cases.push_back({"E = A = M2: ", FinslerModule(pi, 2, {CMatrix::identity(2)}), 2});
    cases.push_back({"E = 0: ", FinslerModule(pi, 2, {}), 0});
    cases.push_back({"E = C^2 rows: ", FinslerModule(pi, 1, {CMatrix{{1.0, 0.0}}}), 1});
  });
  for (const auto& c : cases) {
    append(r, run_localization_demo(c.module, pi, seed), c.label);
    guarded(r, c.label + "dim K", [&] {
      const std::size_t k = build_quasirep(c.module, pi).dim_k();
      add(r, c.label + "dim K", std::to_string(c.dim_k), std::to_string(k), k == c.dim_k);
    });
  }
  return r;
}

ScenarioResult run_theorem_3_2_demo(std::uint64_t seed) {
  ScenarioResult r;
  r.name = "theorem-3-2";
  r.description =
      "module dilation Φ = W*ΨV for phi = id + psi on M2 + M2, psi(a) = (a + uau*)/2, on E = AP; "
      "E = A with phi = psi is rejected since Φ(x)*Φ(x) = phi(x*x) forces phi multiplicative";
  const CMatrix flip{{0.0, 1.0}, {1.0, 0.0}};
  const double h = std::sqrt(0.5);

  guarded(r, "dilation of id + psi", [&] {
    const CStarAlgebra alg({2, 2});
    const Representation pi = Representation::canonical(alg);
    CMatrix k1 = CMatrix::identity(4);
    k1(2, 2) = h;
    k1(3, 3) = h;
    CMatrix k2(4, 4);
    k2.set_block(2, 2, h * flip);
    const CPMap cp = CPMap::from_kraus(alg, {k1, k2});
    const CMatrix proj = pi(alg.block_unit(0));
    const FinslerModule e(pi, 4, {proj});
    const QuasiRep q(e, cp.map(), 4, {proj});
    add(r, "phi is not multiplicative", "> 1.000e-03", sci(cp.map().homomorphism_residual()),
        cp.map().homomorphism_residual() > 1e-3);
    const DilationCertificate cert = module_stinespring(q);
    const auto& res = cert.residuals;
    add_bound(r, "scalar dilation phi = V*θV", kBound, res.scalar_dilation);
    add_bound(r, "V*V = I", kBound, res.isometry_v);
    add_bound(r, "Φ = W*ΨV", kBound, res.module_reconstruction);
    add_bound(r, "Ψ(x)*Ψ(x) = θ(rho(x)^2)", kBound, res.theta_morphism);
    add_bound(r, "Ψ(x)θ(a) = Ψ(xa)", kBound, res.action_compat);
    add_bound(r, "WW* = I on K'", kBound, res.projection_w);
    add_bound(r, "||Ψ(x)|| <= ||x|| excess", kBound, res.bound_excess);
    add(r, "dim H'", "6", std::to_string(cert.dim_h_prime), cert.dim_h_prime == 6);
    add(r, "dim K'", "2", std::to_string(cert.dim_k_prime), cert.dim_k_prime == 2);

    // rebuild phi and Φ from the returned factors on random inputs
    Sampler s(seed);
    double phi_err = 0.0, big_err = 0.0;
    for (int t = 0; t < 20; ++t) {
      const AlgElement a = s.element(alg);
      phi_err = std::max(phi_err, op_norm(cp(a) - cert.v.adjoint() * cert.theta(a) * cert.v) / (1.0 + a.norm()));
      const ModuleElement x = sample_element(e, s);
      big_err = std::max(big_err, op_norm(q(x) - cert.w.adjoint() * psi(cert, x) * cert.v));
    }
    add_bound(r, "random a: phi(a) = V*θ(a)V", kBound, phi_err);
    add_bound(r, "random x: Φ(x) = W*Ψ(x)V", kBound, big_err);
  });

  guarded(r, "E = A with phi = psi", [&] {
    const CStarAlgebra alg({2});
    const Representation pi = Representation::canonical(alg);
    const CPMap cp = CPMap::from_kraus(alg, {h * CMatrix::identity(2), h * flip});
    const FinslerModule e(pi, 2, {CMatrix::identity(2)});
    const QuasiRep q(e, cp.map(), 2, {CMatrix::identity(2)});
    try {
      (void)module_stinespring(q);
      add(r, "E = A, phi = psi: rejected", "PreconditionFailed", "accepted", false);
    } catch (const PreconditionError& err) {
      add(r, "E = A, phi = psi: rejected", "PreconditionFailed", "residual " + sci(err.residual()),
          err.residual() > 1e-3);
    }
  });

  guarded(r, "identity dilation", [&] {
    const CStarAlgebra alg({2});
    const Representation pi = Representation::canonical(alg);
    const FinslerModule e(pi, 2, {CMatrix::identity(2)});
    const QuasiRep q(e, pi.map(), 2, {CMatrix::identity(2)});
    const DilationCertificate cert = module_stinespring(q);
    add(r, "E = A = M2, Φ = phi = id: certificate valid", "valid", cert.valid() ? "valid" : "invalid", cert.valid());
    add(r, "E = A = M2: dim H' and dim K'", "2, 2",
        std::to_string(cert.dim_h_prime) + ", " + std::to_string(cert.dim_k_prime),
        cert.dim_h_prime == 2 && cert.dim_k_prime == 2);
  });
  return r;
}

ScenarioResult run_transfer_sweep(std::uint64_t seed, std::size_t instances) {
  ScenarioResult r;
  r.name = "transfer-sweep";
  r.description = std::to_string(instances) +
                  " random full modules over M2, M3, M2 + M2 with irreducible phi; every implication between "
                  "nondegeneracy and irreducibility of phi and Φ is evaluated";
  Sampler sampler(seed);
  const std::vector<std::vector<std::size_t>> shapes = {{2}, {3}, {2, 2}};
  std::size_t full = 0, irreducible_phi = 0, good = 0;
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // violations, hypothesis held
  std::vector<std::string> order;
  for (std::size_t i = 0; i < instances; ++i) {
    guarded(r, "instance " + std::to_string(i), [&] {
      const CStarAlgebra alg(shapes[i % shapes.size()]);
      RandomModuleOptions opt;
      opt.require_full = true;
      // every other triple carries an isometric generator, so phi(rho(x)) = I is reachable
      opt.unit_generator = (i / shapes.size()) % 2 == 1;
      for (std::size_t k = 0; k < alg.num_blocks(); ++k) {
        opt.multiplicities.push_back(opt.unit_generator ? 1 : sampler.index(1, 2));
      }
      const FinslerModule e = random_module(alg, sampler, opt);
      std::vector<std::size_t> mult(alg.num_blocks(), 0);
      mult[sampler.index(0, alg.num_blocks() - 1)] = 1;
      std::size_t dim = 0;
      for (std::size_t k = 0; k < mult.size(); ++k) dim += mult[k] * alg.block_dims()[k];
      const Representation phi(alg, mult, sampler.unitary(dim));
      const QuasiRep q = build_quasirep(e, phi);
      const TransferReport tr = check_transfer(q, 20, seed + i);
      full += tr.module_full;
      irreducible_phi += tr.rep_irreducible;
      good += tr.quasirep_nondegenerate && tr.quasirep_irreducible;
      for (const auto& imp : tr.implications) {
        if (!tally.count(imp.name)) order.push_back(imp.name);
        auto& t = tally[imp.name];
        t.first += !imp.respected();
        t.second += imp.hypothesis;
      }
    });
  }
  add(r, "full modules", ratio(instances, instances), ratio(full, instances), full == instances);
  add(r, "irreducible phi", ratio(instances, instances), ratio(irreducible_phi, instances),
      irreducible_phi == instances);
  for (const auto& name : order) {
    const auto& t = tally[name];
    add(r, "violations of: " + name, "0",
        std::to_string(t.first) + " (hypothesis held in " + std::to_string(t.second) + ")", t.first == 0);
  }
  add(r, "Φ nondegenerate and irreducible", ratio(instances, instances), ratio(good, instances), good == instances);
  return r;
}

ScenarioResult run_negative_controls(std::uint64_t seed) {
  ScenarioResult r;
  r.name = "negative-control";
  r.description = "corrupted inputs; each check passes when the verifier reports the failure";
  const CStarAlgebra m2({2});
  const Representation pi = Representation::canonical(m2);

  guarded(r, "corrupted rho", [&] {
    const FinslerModule e(pi, 2, {CMatrix::identity(2)});
    const AlgElement shift = 1e-3 * m2.one();
    const AxiomReport ax = verify_finsler_axiom(e, 100, seed, [&](const ModuleElement& x) {
      return e.rho_squared(x) + shift;
    });
    add(r, "rho^2 + 1e-3 I fails the Finsler axiom", "fail", (ax.pass ? "pass, " : "fail, ") + sci(ax.max_residual),
        !ax.pass);
  });

  guarded(r, "doubled image", [&] {
    Sampler s(seed);
    RandomModuleOptions opt;
    opt.require_full = true;
    const FinslerModule e = random_module(m2, s, opt);
    const QuasiRep q = build_quasirep(e, pi);
    std::vector<CMatrix> images = q.images();
    images[0] *= 2.0;
    const QuasiRep bad(e, pi.map(), q.dim_k(), images);
    const QuasiRepReport vq = verify_quasirep(bad, 50, seed);
    add(r, "Φ(g) replaced by 2Φ(g) fails", "fail", (vq.pass ? "pass, " : "fail, ") + sci(vq.max_identity_residual),
        !vq.pass && vq.max_identity_residual > 1e-4);
    const QuasiRep zero(e, pi.map(), q.dim_k(), std::vector<CMatrix>(images.size(), CMatrix(q.dim_k(), 2)));
    const QuasiRepReport vz = verify_quasirep(zero, 50, seed);
    add(r, "Φ = 0 on a nonzero module fails", "fail", vz.pass ? "pass" : "fail", !vz.pass);
  });

  guarded(r, "transpose", [&] {
    std::vector<CMatrix> images;
    for (std::size_t a = 0; a < m2.dim(); ++a) images.push_back(pi(m2.basis(a)).transpose());
    const CPMap t = CPMap::from_images(m2, 2, images);
    const HermEig eig = herm_eig(choi(t));
    add(r, "transpose on M2: least Choi eigenvalue", "-1 within 1e-10", sci(eig.values.back()),
        std::abs(eig.values.back() + 1.0) <= 1e-10);
    add_bool(r, "transpose on M2 completely positive", false, is_completely_positive(t));
  });

  guarded(r, "perturbed dilation", [&] {
    const FinslerModule e(pi, 2, {CMatrix::identity(2), CMatrix::identity(2)});
    CMatrix off = CMatrix::identity(2);
    off(0, 1) = 0.1;
    const QuasiRep q(e, pi.map(), 2, {CMatrix::identity(2), off});
    try {
      (void)module_stinespring(q);
      add(r, "perturbed Φ rejected by the module dilation", "PreconditionFailed", "accepted", false);
    } catch (const PreconditionError& err) {
      add(r, "perturbed Φ rejected by the module dilation", "residual > 1.000e-04", sci(err.residual()),
          err.residual() > 1e-4);
    }
  });

  guarded(r, "not a module", [&] {
    const CStarAlgebra alg({2, 2});
    Sampler s(seed);
    try {
      (void)FinslerModule(Representation::canonical(alg), 2, {s.matrix(2, 4)});
      add(r, "generic 2 x 4 generator over M2 + M2", "NotInAlgebra", "accepted", false);
    } catch (const Error& err) {
      add(r, "generic 2 x 4 generator over M2 + M2", "NotInAlgebra", to_string(err.code()),
          err.code() == Errc::not_in_algebra);
    }
  });
  return r;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"remark-4-3",  "example-4-9",    "example-4-10",    "theorem-2-3",
                                                 "theorem-3-2", "transfer-sweep", "negative-control"};
  return names;
}

std::optional<ScenarioResult> run_by_name(const std::string& name, std::uint64_t seed) {
  if (name == "remark-4-3") return run_remark_4_3(seed);
  if (name == "example-4-9") return run_example_4_9(seed);
  if (name == "example-4-10") return run_example_4_10(seed);
  if (name == "theorem-2-3") return run_theorem_2_3_demo(seed);
  if (name == "theorem-3-2") return run_theorem_3_2_demo(seed);
  if (name == "transfer-sweep") return run_transfer_sweep(seed);
  if (name == "negative-control") return run_negative_controls(seed);
  return std::nullopt;
}

std::vector<ScenarioResult> run_all(std::uint64_t seed) {
  std::vector<ScenarioResult> out;
  for (const auto& name : scenario_names()) out.push_back(*run_by_name(name, seed));
  return out;
}

}  // namespace finsler
