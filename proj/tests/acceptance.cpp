// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "worked.hpp"
#include "finsler/analysis.hpp"
#include "finsler/cli.hpp"
#include "finsler/dilation.hpp"
#include "finsler/module.hpp"
#include "finsler/quasirep.hpp"
#include "finsler/random.hpp"
#include "finsler/scenarios.hpp"
#include "oracle.hpp"

using namespace finsler;
using oracle::Mat;
using oracle::to_eigen;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

struct Instance {
  FinslerModule module;
  Representation phi;
};

const std::vector<std::vector<std::size_t>> kShapes = {{2}, {3}, {2, 2}};

std::vector<Instance> build_corpus(std::uint64_t seed) {
  Sampler s(seed);
  std::vector<Instance> out;
  for (const auto& shape : kShapes) {
    const CStarAlgebra alg(shape);
    for (int i = 0; i < 50; ++i) {
      RandomModuleOptions opt;
      opt.max_rows = 6;
      opt.max_generators = 4;
      for (std::size_t k = 0; k < shape.size(); ++k) opt.multiplicities.push_back(s.index(1, 2));
      FinslerModule e = random_module(alg, s, opt);
      std::vector<std::size_t> mult;
      std::size_t dim = 0;
      for (auto n : shape) {
        mult.push_back(s.index(1, 2));
        dim += n * mult.back();
      }
      out.push_back({std::move(e), Representation(alg, mult, s.unitary(dim))});
    }
  }
  return out;
}

std::size_t oracle_dim_k(const Instance& in) {
  const FinslerModule& e = in.module;
  const Mat u = to_eigen(*e.action().basis_unitary());
  return oracle::gram_rank(oracle::localization_gram(e.algebra(), e.action().multiplicities(), &u, e.generators(),
                                                     in.phi.map().basis_images()));
}

void criterion_1(const std::vector<Instance>& corpus) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  bool limits = true, pass = true;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const FinslerModule& e = corpus[i].module;
    limits = limits && e.ambient_rows() <= 6 && !e.generators().empty() && e.generators().size() <= 4;
    const AxiomReport ax = verify_finsler_axiom(e, 100, 1000 + i);
    worst = std::max(worst, ax.max_residual);
    pass = pass && ax.pass && ax.samples == 100;
  }
  const double secs = seconds_since(t0);
  report(1, pass && limits && worst <= 1e-8 && secs <= 60.0,
         std::to_string(corpus.size()) + " modules, max residual " + sci(worst) + ", " + sci(secs) + " s");
}

std::vector<QuasiRep> criterion_2(const std::vector<Instance>& corpus) {
  std::vector<QuasiRep> out;
  double worst = 0.0;
  std::size_t dim_ok = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    QuasiRep q = build_quasirep(corpus[i].module, corpus[i].phi);
    const QuasiRepReport r = verify_quasirep(q, 50, 2000 + i);
    worst = std::max(worst, r.max_identity_residual);
    dim_ok += q.dim_k() == oracle_dim_k(corpus[i]);
    out.push_back(std::move(q));
  }
  report(2, worst <= 1e-8 && dim_ok == corpus.size(),
         "identity residual " + sci(worst) + ", dim K = oracle Gram rank on " + std::to_string(dim_ok) + " / " +
             std::to_string(corpus.size()));
  return out;
}

void criterion_3() {
  Sampler s(3003);
  double rec = 0.0, iso = 0.0;
  std::size_t dim_ok = 0, count = 0;
  while (count < 100) {
    const std::size_t n = s.index(1, 4), m = s.index(1, 4), r = s.index(1, 4);
    if (r * n < m) continue;  // sum K K* would be singular
    const CStarAlgebra alg({n});
    std::vector<Mat> kraus;
    Mat sum = Mat::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < r; ++i) {
      kraus.push_back(to_eigen(s.matrix(m, n)));
      sum += kraus.back() * kraus.back().adjoint();
    }
    const Mat inv_root = oracle::psd_sqrt(sum).inverse();
    std::vector<CMatrix> ks;
    for (auto& k : kraus) {
      k = inv_root * k;
      ks.push_back(oracle::from_eigen(k));
    }
    const CPMap phi = CPMap::from_kraus(alg, ks);
    const ScalarDilation d = stinespring(phi);
    // phi on the matrix units straight from the Kraus operators
    std::vector<Mat> on_units;
    for (const auto& u : oracle::units(alg)) {
      Mat img = Mat::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
      for (const auto& k : kraus) img += k * to_eigen(u.block(0)) * k.adjoint();
      on_units.push_back(img);
    }
    const Mat v = to_eigen(d.v);
    for (std::size_t a = 0; a < on_units.size(); ++a) {
      const auto u = oracle::units(alg)[a];
      rec = std::max(rec, (v.adjoint() * to_eigen(d.theta(u)) * v - on_units[a]).norm());
    }
    iso = std::max(iso, (v.adjoint() * v - Mat::Identity(v.cols(), v.cols())).norm());
    dim_ok += d.dim == oracle::gram_rank(oracle::stinespring_gram(alg, on_units));
    ++count;
  }
  // the transpose on M2
  const CStarAlgebra m2({2});
  std::vector<CMatrix> imgs;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) imgs.push_back(CMatrix::unit(2, j, i));
  const CPMap t = CPMap::from_images(m2, 2, imgs);
  const double least = oracle::hermitian_eigenvalues(choi(t)).minCoeff();
  const bool rejected = !is_completely_positive(t) && std::abs(least + 1.0) <= 1e-10;
  bool threw = false;
  try {
    (void)stinespring(t);
  } catch (const Error& e) {
    threw = e.code() == Errc::not_cp;
  }
  report(3, rec <= 1e-8 && iso <= 1e-9 && dim_ok == 100 && rejected && threw,
         "100 maps: reconstruction " + sci(rec) + ", ||V*V - I|| " + sci(iso) + ", dim H' exact on " +
             std::to_string(dim_ok) + "; transpose least Choi eigenvalue " + sci(least) +
             (threw ? ", NotCP raised" : ", NotCP missing"));
}

void criterion_4(const std::vector<QuasiRep>& quasireps) {
  const auto t0 = Clock::now();
  double worst = 0.0, worst_direct = 0.0, weakest_negative = 1e300;
  std::size_t valid = 0, rejected = 0, total = 0;
  Sampler s(4004);
  for (std::size_t shape = 0; shape < kShapes.size(); ++shape) {
    for (std::size_t i = 0; i < 10; ++i, ++total) {
      const QuasiRep& q = quasireps[shape * 50 + i];
      const DilationCertificate cert = module_stinespring(q);
      const auto& r = cert.residuals;
      worst = std::max({worst, r.scalar_dilation, r.isometry_v, r.module_reconstruction, r.theta_morphism,
                        r.action_compat, r.projection_w, r.bound_excess, r.psi_well_definedness});
      valid += cert.valid();
      // the two identities recomputed outside the certificate
      const FinslerModule& e = q.module();
      const Mat v = to_eigen(cert.v), w = to_eigen(cert.w);
      for (int t = 0; t < 10; ++t) {
        const ModuleElement x = sample_element(e, s);
        const Mat p = to_eigen(psi(cert, x));
        const double scale = 1.0 + std::pow(module_norm(e, x), 2);
        worst_direct = std::max({worst_direct, (p.adjoint() * p - to_eigen(cert.theta(e.rho_squared(x)))).norm() / scale,
                                 (w.adjoint() * p * v - to_eigen(q(x))).norm() / scale});
      }
      // negative control: perturb every generator image
      std::vector<CMatrix> noisy;
      for (const auto& img : q.images()) noisy.push_back(img + 1e-2 * s.matrix(img.rows(), img.cols()));
      const QuasiRep bad(e, q.phi(), q.dim_k(), noisy);
      try {
        const DilationCertificate c = module_stinespring(bad);
        const auto& b = c.residuals;
        const double top = std::max({b.scalar_dilation, b.isometry_v, b.module_reconstruction, b.theta_morphism,
                                     b.action_compat, b.projection_w, b.bound_excess, b.psi_well_definedness});
        weakest_negative = std::min(weakest_negative, top);
        rejected += top > 1e-4;
      } catch (const PreconditionError& err) {
        weakest_negative = std::min(weakest_negative, err.residual());
        rejected += err.residual() > 1e-4;
      }
    }
  }
  const double secs = seconds_since(t0);
  report(4, worst <= 1e-8 && worst_direct <= 1e-8 && valid == total && rejected == total && secs <= 120.0,
         std::to_string(valid) + " / " + std::to_string(total) + " valid, max residual " + sci(worst) +
             ", recomputed " + sci(worst_direct) + "; perturbed rejected " + std::to_string(rejected) + " / " +
             std::to_string(total) + " (weakest residual " + sci(weakest_negative) + "), " + sci(secs) + " s");
}

std::string observed(const ScenarioResult& r, const std::string& description) {
  for (const auto& c : r.checks)
    if (c.description == description) return c.observed;
  return "missing";
}

void criterion_5() {
  const ScenarioResult rem = run_remark_4_3(42);
  const ScenarioResult e49 = run_example_4_9(42);
  const ScenarioResult e410 = run_example_4_10(42);
  const ScenarioResult sweep = run_transfer_sweep(42, 30);
  const bool rem_ok =
      rem.overall_pass() && observed(rem, "span Φ(E)H") == "2 / 4" && observed(rem, "module is full") == "false";
  const bool e49_ok = e49.overall_pass() && observed(e49, "commutant pair dimension") == "1";
  const bool e410_ok = e410.overall_pass() && observed(e410, "commutant pair dimension") == "1";
  std::size_t implications = 0, clean = 0;
  for (const auto& c : sweep.checks) {
    if (c.description.rfind("violations of: ", 0) != 0) continue;
    ++implications;
    clean += c.observed.rfind("0 ", 0) == 0;
  }
  const bool sweep_ok = sweep.overall_pass() && observed(sweep, "full modules") == "30 / 30" &&
                        observed(sweep, "irreducible phi") == "30 / 30" && implications > 0 && clean == implications;
  report(5, rem_ok && e49_ok && e410_ok && sweep_ok,
         std::string("remark-4-3 ") + (rem_ok ? "ok" : "bad") + " (rank " + observed(rem, "span Φ(E)H") +
             "), example-4-9 " + (e49_ok ? "ok" : "bad") + ", example-4-10 " + (e410_ok ? "ok" : "bad") +
             ", transfer-sweep " + std::to_string(clean) + " / " + std::to_string(implications) +
             " implications without violations");
}

void criterion_6() {
  std::size_t ok = 0;
  std::string failed;
  for (const auto& ex : worked::examples()) {
    const worked::Outcome out = ex.run();
    ok += out.pass;
    if (!out.pass) failed += " [" + ex.name + ": " + out.detail + "]";
  }
  report(6, ok == worked::examples().size(),
         std::to_string(ok) + " / " + std::to_string(worked::examples().size()) + " worked examples agree" + failed);
}

void criterion_7() {
  const std::string a = cli::to_json(cli::cmd_repro("all", 42));
  const std::string b = cli::to_json(cli::cmd_repro("all", 42));
  report(7, a == b && !a.empty(), "two full runs at seed 42: " + std::to_string(a.size()) + " bytes, digests " +
                                      cli::digest(a) + " / " + cli::digest(b));
}

}  // namespace

int main() {
  const std::vector<Instance> corpus = build_corpus(42);
  criterion_1(corpus);
  const std::vector<QuasiRep> quasireps = criterion_2(corpus);
  criterion_3();
  criterion_4(quasireps);
  criterion_5();
  criterion_6();
  criterion_7();
  std::printf("%s\n", failures == 0 ? "all criteria pass" : (std::to_string(failures) + " criteria fail").c_str());
  return failures == 0 ? 0 : 1;
}
