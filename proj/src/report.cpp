#include <algorithm>
#include <cstdio>
#include <sstream>

#include "finsler/cli.hpp"
#include "json.hpp"

namespace finsler::cli {

namespace {

using nlohmann::json;

json check_json(const Check& c) {
  return {{"description", c.description}, {"expected", c.expected}, {"observed", c.observed}, {"pass", c.pass}};
}

Check check_from(const json& j) {
  return {j.at("description").get<std::string>(), j.at("expected").get<std::string>(),
          j.at("observed").get<std::string>(), j.at("pass").get<bool>()};
}

}  // namespace

bool Report::pass() const {
  const bool checks_ok = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  const bool scenarios_ok =
      std::all_of(scenarios.begin(), scenarios.end(), [](const ScenarioResult& s) { return s.overall_pass(); });
  return checks_ok && scenarios_ok;
}

std::string to_json(const Report& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["command"] = r.command;
  j["input_digest"] = r.input_digest;
  j["pass"] = r.pass();
  j["checks"] = json::array();
  for (const auto& c : r.checks) j["checks"].push_back(check_json(c));
  j["residuals"] = json::object();
  for (const auto& [k, v] : r.residuals) j["residuals"][k] = v;
  j["dimensions"] = json::object();
  for (const auto& [k, v] : r.dimensions) j["dimensions"][k] = v;
  j["properties"] = json::object();
  for (const auto& [k, v] : r.properties) j["properties"][k] = v;
  j["scenarios"] = json::array();
  for (const auto& s : r.scenarios) {
    json sj{{"name", s.name}, {"description", s.description}, {"pass", s.overall_pass()}, {"checks", json::array()}};
    for (const auto& c : s.checks) sj["checks"].push_back(check_json(c));
    j["scenarios"].push_back(std::move(sj));
  }
  if (r.wall_time_seconds) j["wall_time_seconds"] = *r.wall_time_seconds;
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    Report r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != 1) throw InputError("schema_version: unsupported version");
    r.command = j.at("command").get<std::string>();
    r.input_digest = j.at("input_digest").get<std::string>();
    for (const auto& c : j.at("checks")) r.checks.push_back(check_from(c));
    for (const auto& [k, v] : j.at("residuals").items()) r.residuals[k] = v.get<double>();
    for (const auto& [k, v] : j.at("dimensions").items()) r.dimensions[k] = v.get<std::int64_t>();
    for (const auto& [k, v] : j.at("properties").items()) r.properties[k] = v.get<bool>();
    for (const auto& sj : j.at("scenarios")) {
      ScenarioResult s;
      s.name = sj.at("name").get<std::string>();
      s.description = sj.at("description").get<std::string>();
      for (const auto& c : sj.at("checks")) s.checks.push_back(check_from(c));
      r.scenarios.push_back(std::move(s));
    }
    if (j.contains("wall_time_seconds")) r.wall_time_seconds = j["wall_time_seconds"].get<double>();
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  }
}

namespace {

void render_check(std::ostringstream& out, const Check& c) {
  out << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.description << ": " << c.observed;
  if (c.observed != c.expected) out << " (expected " << c.expected << ")";
  out << "\n";
}

}  // namespace

std::string to_text(const Report& r) {
  std::ostringstream out;
  out << r.command << "  [input " << r.input_digest << "]\n";
  for (const auto& c : r.checks) render_check(out, c);
  for (const auto& s : r.scenarios) {
    out << s.name << ": " << (s.overall_pass() ? "pass" : "FAIL") << "\n";
    if (!s.description.empty()) out << "  " << s.description << "\n";
    for (const auto& c : s.checks) render_check(out, c);
  }
  if (!r.dimensions.empty()) {
    out << "dimensions:";
    for (const auto& [k, v] : r.dimensions) out << " " << k << "=" << v;
    out << "\n";
  }
  if (!r.properties.empty()) {
    out << "properties:";
    for (const auto& [k, v] : r.properties) out << " " << k << "=" << (v ? "true" : "false");
    out << "\n";
  }
  for (const auto& [k, v] : r.residuals) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    out << "residual " << k << ": " << buf << "\n";
  }
  if (r.wall_time_seconds) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *r.wall_time_seconds);
    out << "wall time: " << buf << " s\n";
  }
  out << (r.pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

std::string digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace finsler::cli
