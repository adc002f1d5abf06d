// finsler: command-line front end. Exit codes: 0 pass, 1 check failure, 2 invalid input.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "finsler/cli.hpp"

namespace {

using finsler::cli::Overrides;
using finsler::cli::Report;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw finsler::cli::InputError(path + ": cannot open file");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finsler modules, quasi-representations and their dilations"};
  app.require_subcommand(1);

  std::string format = "text";
  std::string out_path;
  bool timing = false;
  Overrides overrides;
  double tol = 0.0;
  std::uint64_t seed = 42;
  std::size_t samples = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output on stdout")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--out", out_path, "Also write the JSON report to this path");
    sub->add_flag("--timing", timing, "Include wall time in the JSON report");
    sub->add_option("--seed", seed, "Seed for sampling (overrides the file)");
  };

  std::string file;
  std::vector<std::pair<std::string, Report (*)(const std::string&, const Overrides&)>> file_commands = {
      {"verify-module", finsler::cli::cmd_verify_module}, {"quasirep", finsler::cli::cmd_quasirep},
      {"dilate", finsler::cli::cmd_dilate},               {"dilate-module", finsler::cli::cmd_dilate_module},
      {"analyze", finsler::cli::cmd_analyze},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, fn] : file_commands) {
    CLI::App* sub = app.add_subcommand(name, "Run " + name + " on a scenario file");
    sub->add_option("file", file, "Scenario file (JSON)")->required();
    sub->add_option("--tol", tol, "Equality tolerance (overrides the file)");
    sub->add_option("--samples", samples, "Sample count (overrides the file)");
    common(sub);
    subs.push_back(sub);
  }
  std::string scenario;
  CLI::App* repro = app.add_subcommand("repro", "Reproduce a named scenario, or all of them");
  repro->add_option("name", scenario, "Scenario identifier or 'all'")->required();
  common(repro);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto started = std::chrono::steady_clock::now();
  Report report;
  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      if (subs[i]->count("--tol")) overrides.tol = tol;
      if (subs[i]->count("--seed")) overrides.seed = seed;
      if (subs[i]->count("--samples")) overrides.samples = samples;
      report = file_commands[i].second(read_file(file), overrides);
    }
    if (repro->parsed()) report = finsler::cli::cmd_repro(scenario, seed);
  } catch (const finsler::cli::InputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const finsler::Error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  Report structured = report;
  if (timing) structured.wall_time_seconds = elapsed;
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << finsler::cli::to_json(structured);
  }
  if (format == "json") {
    std::cout << finsler::cli::to_json(structured);
  } else {
    report.wall_time_seconds = elapsed;
    std::cout << finsler::cli::to_text(report);
  }
  return report.pass() ? 0 : 1;
}
