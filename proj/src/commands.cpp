#include <cstdio>

#include "finsler/analysis.hpp"
#include "finsler/cli.hpp"
#include "finsler/dilation.hpp"
#include "finsler/quasirep.hpp"

namespace finsler::cli {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void bound_check(Report& r, const std::string& name, double value, double bound) {
  r.residuals[name] = value;
  r.checks.push_back({name, "<= " + sci(bound), sci(value), value <= bound});
}

struct Loaded {
  ScenarioFile file;
  CStarAlgebra algebra;
  FinslerModule module;
  Representation phi;
};

// Library errors raised while assembling objects from a file are input errors.
template <class F>
auto as_input(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw InputError(what + ": " + e.what());
  }
}

Loaded load(const std::string& text, const Overrides& o) {
  ScenarioFile f = parse_scenario_file(text);
  apply_overrides(f, o);
  CStarAlgebra alg = as_input("algebra", [&] { return CStarAlgebra(f.blocks); });
  Representation action =
      as_input("module.action_multiplicities", [&] { return Representation(alg, f.action_multiplicities, {}, f.tol); });
  FinslerModule module =
      as_input("module.generators", [&] { return FinslerModule(action, f.ambient_rows, f.generators, f.tol); });
  Representation phi =
      as_input("representation", [&] { return Representation(alg, f.multiplicities, {}, f.tol); });
  return {std::move(f), std::move(alg), std::move(module), std::move(phi)};
}

AlgebraMap phi_map(const Loaded& l) {
  if (l.file.kraus) {
    return as_input("map.kraus", [&] { return CPMap::from_kraus(l.algebra, *l.file.kraus, l.file.tol).map(); });
  }
  return l.phi.map();
}

// Phi from explicit images when the file has them, else the localisation.
QuasiRep quasirep_of(const Loaded& l) {
  if (l.file.images) {
    const std::size_t k = l.file.images->empty() ? 0 : l.file.images->front().rows();
    return as_input("map.images", [&] { return QuasiRep(l.module, phi_map(l), k, *l.file.images, l.file.tol); });
  }
  if (l.file.kraus) throw InputError("map.images: required when phi is given by Kraus operators");
  return as_input("module", [&] { return build_quasirep(l.module, l.phi, l.file.tol); });
}

Report start(const std::string& command, const std::string& text) {
  Report r;
  r.command = command;
  r.input_digest = digest(text);
  return r;
}

}  // namespace

Report cmd_verify_module(const std::string& text, const Overrides& o) {
  const Loaded l = load(text, o);
  Report r = start("verify-module", text);
  const AxiomReport ax = verify_finsler_axiom(l.module, l.file.sample_count, l.file.seed);
  bound_check(r, "finsler_axiom", ax.max_residual, 10.0 * l.file.tol.eq_tol);
  const FullnessReport fr = fullness(l.module, l.file.seed);
  r.properties["full"] = fr.full;
  r.dimensions["algebra_dim"] = static_cast<std::int64_t>(fr.algebra_dim);
  r.dimensions["rho_squared_span"] = static_cast<std::int64_t>(fr.span_dim);
  r.dimensions["module_span"] = static_cast<std::int64_t>(l.module.span_dim());
  r.dimensions["ambient_rows"] = static_cast<std::int64_t>(l.module.ambient_rows());
  r.dimensions["ambient_cols"] = static_cast<std::int64_t>(l.module.ambient_cols());
  r.dimensions["samples"] = static_cast<std::int64_t>(ax.samples);
  return r;
}

Report cmd_quasirep(const std::string& text, const Overrides& o) {
  const Loaded l = load(text, o);
  Report r = start("quasirep", text);
  const QuasiRep q = quasirep_of(l);
  const QuasiRepReport vq = verify_quasirep(q, l.file.sample_count, l.file.seed);
  const double bound = 10.0 * l.file.tol.eq_tol;
  bound_check(r, "identity", vq.max_identity_residual, bound);
  bound_check(r, "action", vq.max_action_residual, bound);
  bound_check(r, "well_definedness", vq.well_definedness_residual, bound);
  r.properties["quasirep"] = vq.pass;
  r.properties["weak"] = vq.weak;
  r.dimensions["dim_h"] = static_cast<std::int64_t>(q.dim_h());
  r.dimensions["dim_k"] = static_cast<std::int64_t>(q.dim_k());
  if (!l.file.images && !l.module.generators().empty()) {
    const std::size_t rank = matrix_rank(localization_gram(l.module, q.phi()), l.file.tol);
    r.dimensions["gram_rank"] = static_cast<std::int64_t>(rank);
    r.checks.push_back({"dim_k equals Gram rank", std::to_string(rank), std::to_string(q.dim_k()), rank == q.dim_k()});
  }
  return r;
}

Report cmd_dilate(const std::string& text, const Overrides& o) {
  const Loaded l = load(text, o);
  Report r = start("dilate", text);
  const CPMap cp = CPMap::from_map(phi_map(l), l.file.tol);
  const bool is_cp = is_completely_positive(cp, l.file.tol);
  r.properties["completely_positive"] = is_cp;
  r.checks.push_back({"completely positive", "true", is_cp ? "true" : "false", is_cp});
  r.dimensions["dim_h"] = static_cast<std::int64_t>(cp.dim());
  if (!is_cp) return r;
  const ScalarDilation sd = stinespring(cp, l.file.tol);
  const double bound = 10.0 * l.file.tol.eq_tol;
  bound_check(r, "reconstruction", sd.reconstruction_residual, bound);
  bound_check(r, "isometry", sd.isometry_residual, bound);
  r.residuals["unital"] = op_norm(cp(l.algebra.one()) - CMatrix::identity(cp.dim()));
  r.properties["unital"] = r.residuals["unital"] <= bound;
  r.dimensions["dim_h_prime"] = static_cast<std::int64_t>(sd.dim);
  return r;
}

Report cmd_dilate_module(const std::string& text, const Overrides& o) {
  const Loaded l = load(text, o);
  Report r = start("dilate-module", text);
  const QuasiRep q = quasirep_of(l);
  r.dimensions["dim_h"] = static_cast<std::int64_t>(q.dim_h());
  r.dimensions["dim_k"] = static_cast<std::int64_t>(q.dim_k());
  try {
    const DilationCertificate c = module_stinespring(q, l.file.tol);
    const auto& res = c.residuals;
    bound_check(r, "scalar_dilation", res.scalar_dilation, c.threshold);
    bound_check(r, "isometry_v", res.isometry_v, c.threshold);
    bound_check(r, "module_reconstruction", res.module_reconstruction, c.threshold);
    bound_check(r, "theta_morphism", res.theta_morphism, c.threshold);
    bound_check(r, "action_compat", res.action_compat, c.threshold);
    bound_check(r, "projection_w", res.projection_w, c.threshold);
    bound_check(r, "bound_excess", res.bound_excess, c.threshold);
    bound_check(r, "psi_well_definedness", res.psi_well_definedness, c.threshold);
    r.dimensions["dim_h_prime"] = static_cast<std::int64_t>(c.dim_h_prime);
    r.dimensions["dim_k_prime"] = static_cast<std::int64_t>(c.dim_k_prime);
    r.properties["valid"] = c.valid();
  } catch (const PreconditionError& e) {
    r.residuals["precondition"] = e.residual();
    r.checks.push_back({"quasi-representation identities", "hold", e.what(), false});
    r.properties["valid"] = false;
  } catch (const Error& e) {
    if (e.code() != Errc::not_cp) throw;
    r.checks.push_back({"phi completely positive", "true", "false", false});
    r.properties["valid"] = false;
  }
  return r;
}

Report cmd_analyze(const std::string& text, const Overrides& o) {
  const Loaded l = load(text, o);
  Report r = start("analyze", text);
  const QuasiRep q = quasirep_of(l);
  const Nondegeneracy nd = nondegeneracy(q);
  const Irreducibility ir = is_irreducible(q);
  const TransferReport tr = check_transfer(q, l.file.sample_count, l.file.seed);
  r.properties["nondegenerate"] = nd.nondegenerate;
  r.properties["irreducible"] = ir.irreducible;
  r.properties["module_full"] = tr.module_full;
  r.properties["rep_nondegenerate"] = tr.rep_nondegenerate;
  r.properties["rep_irreducible"] = tr.rep_irreducible;
  r.properties["unit_rho_found"] = tr.unit_rho_found;
  r.dimensions["dim_h"] = static_cast<std::int64_t>(nd.dim_h);
  r.dimensions["dim_k"] = static_cast<std::int64_t>(nd.dim_k);
  r.dimensions["range_rank"] = static_cast<std::int64_t>(nd.range_rank);
  r.dimensions["corange_rank"] = static_cast<std::int64_t>(nd.corange_rank);
  r.dimensions["commutant_pair_dim"] = static_cast<std::int64_t>(ir.pair_dimension);
  if (ir.witness) {
    bound_check(r, "witness invariance (" + ir.witness_kind + ")", ir.witness_residual, 10.0 * l.file.tol.eq_tol);
  }
  for (const auto& imp : tr.implications) {
    r.checks.push_back({imp.name, "respected",
                        std::string(imp.respected() ? "respected" : "violated") +
                            (imp.hypothesis ? "" : " (hypothesis false)"),
                        imp.respected()});
  }
  return r;
}

Report cmd_repro(const std::string& name, std::uint64_t seed) {
  Report r = start("repro " + name, name + " seed=" + std::to_string(seed));
  if (name == "all") {
    r.scenarios = run_all(seed);
  } else if (auto s = run_by_name(name, seed)) {
    r.scenarios.push_back(std::move(*s));
  } else {
    std::string known;
    for (const auto& n : scenario_names()) known += (known.empty() ? "" : ", ") + n;
    throw InputError("scenario: unknown name '" + name + "' (known: " + known + ", all)");
  }
  return r;
}

}  // namespace finsler::cli
