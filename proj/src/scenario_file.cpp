#include <algorithm>

#include "json.hpp"

#include "finsler/cli.hpp"

namespace finsler::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw InputError(path + ": " + what); }

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing field");
  return *it;
}

std::size_t count(const json& v, const std::string& path, std::size_t min) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  if (v.is_number_unsigned()) {
    const auto n = v.get<std::uint64_t>();
    if (n < min) fail(path, "must be at least " + std::to_string(min));
    return static_cast<std::size_t>(n);
  }
  const auto n = v.get<std::int64_t>();
  if (n < static_cast<std::int64_t>(min)) fail(path, "must be at least " + std::to_string(min));
  return static_cast<std::size_t>(n);
}

std::vector<std::size_t> counts(const json& v, const std::string& path, std::size_t min) {
  if (!v.is_array()) fail(path, "expected an array of integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(count(v[i], path + "[" + std::to_string(i) + "]", min));
  return out;
}

double real(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

Complex entry(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2) fail(path, "expected an [re, im] pair");
  return {real(v[0], path + "[0]"), real(v[1], path + "[1]")};
}

CMatrix matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of rows");
  const std::size_t rows = v.size();
  if (!v[0].is_array()) fail(path + "[0]", "expected a row array");
  const std::size_t cols = v[0].size();
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array()) fail(rp, "expected a row array");
    if (v[i].size() != cols) fail(rp, "row has " + std::to_string(v[i].size()) + " entries, expected " + std::to_string(cols));
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = entry(v[i][j], rp + "[" + std::to_string(j) + "]");
  }
  return m;
}

std::vector<CMatrix> matrices(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of matrices");
  std::vector<CMatrix> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(matrix(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

void expect_shape(const CMatrix& m, std::size_t rows, std::size_t cols, const std::string& path) {
  if (m.rows() != rows || m.cols() != cols) {
    fail(path, "shape " + std::to_string(m.rows()) + " x " + std::to_string(m.cols()) + ", expected " +
                   std::to_string(rows) + " x " + std::to_string(cols));
  }
}

}  // namespace

ScenarioFile parse_scenario_file(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("$: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("$", "expected an object");
  ScenarioFile f;

  f.blocks = counts(field(field(doc, "algebra", "$"), "blocks", "algebra"), "algebra.blocks", 1);
  if (f.blocks.empty()) fail("algebra.blocks", "needs at least one block");

  const json& rep = field(doc, "representation", "$");
  f.multiplicities = counts(field(rep, "multiplicities", "representation"), "representation.multiplicities", 0);
  if (f.multiplicities.size() != f.blocks.size()) fail("representation.multiplicities", "needs one entry per block");

  const json& mod = field(doc, "module", "$");
  f.ambient_rows = count(field(mod, "ambient_rows", "module"), "module.ambient_rows", 1);
  if (mod.contains("action_multiplicities")) {
    f.action_multiplicities = counts(mod["action_multiplicities"], "module.action_multiplicities", 1);
    if (f.action_multiplicities.size() != f.blocks.size()) {
      fail("module.action_multiplicities", "needs one entry per block");
    }
  } else {
    f.action_multiplicities.assign(f.blocks.size(), 1);
  }
  std::size_t p = 0;
  for (std::size_t k = 0; k < f.blocks.size(); ++k) p += f.blocks[k] * f.action_multiplicities[k];
  f.generators = matrices(field(mod, "generators", "module"), "module.generators");
  for (std::size_t i = 0; i < f.generators.size(); ++i) {
    expect_shape(f.generators[i], f.ambient_rows, p, "module.generators[" + std::to_string(i) + "]");
  }

  std::size_t dim_h = 0;
  for (std::size_t k = 0; k < f.blocks.size(); ++k) dim_h += f.blocks[k] * f.multiplicities[k];
  if (doc.contains("map")) {
    const json& map = doc["map"];
    if (!map.is_object()) fail("map", "expected an object");
    if (map.contains("kraus")) {
      f.kraus = matrices(map["kraus"], "map.kraus");
      if (f.kraus->empty()) fail("map.kraus", "needs at least one operator");
      std::size_t canonical = 0;
      for (auto n : f.blocks) canonical += n;
      dim_h = f.kraus->front().rows();
      for (std::size_t r = 0; r < f.kraus->size(); ++r) {
        expect_shape((*f.kraus)[r], dim_h, canonical, "map.kraus[" + std::to_string(r) + "]");
      }
    }
    if (map.contains("images")) {
      f.images = matrices(map["images"], "map.images");
      if (f.images->size() != f.generators.size()) fail("map.images", "needs one image per generator");
      for (std::size_t i = 0; i < f.images->size(); ++i) {
        const std::size_t k = f.images->front().rows();
        expect_shape((*f.images)[i], k, dim_h, "map.images[" + std::to_string(i) + "]");
      }
    }
    if (!map.contains("kraus") && !map.contains("images")) fail("map", "expected kraus or images");
  }

  if (doc.contains("tolerance")) {
    const json& t = doc["tolerance"];
    if (!t.is_object()) fail("tolerance", "expected an object");
    if (t.contains("eq_tol")) f.tol.eq_tol = real(t["eq_tol"], "tolerance.eq_tol");
    if (t.contains("rank_tol")) f.tol.rank_tol = real(t["rank_tol"], "tolerance.rank_tol");
    try {
      f.tol.validate();
    } catch (const Error&) {
      fail("tolerance", "values must lie in (0, 1)");
    }
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) fail("seed", "expected an unsigned integer");
    f.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("sample_count")) f.sample_count = count(doc["sample_count"], "sample_count", 1);
  return f;
}

void apply_overrides(ScenarioFile& file, const Overrides& o) {
  if (o.tol) {
    file.tol.eq_tol = *o.tol;
    try {
      file.tol.validate();
    } catch (const Error&) {
      throw InputError("--tol: must lie in (0, 1)");
    }
  }
  if (o.seed) file.seed = *o.seed;
  if (o.samples) {
    if (*o.samples == 0) throw InputError("--samples: must be at least 1");
    file.sample_count = *o.samples;
  }
}

}  // namespace finsler::cli
