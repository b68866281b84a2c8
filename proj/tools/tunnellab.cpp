#include <CLI11.hpp>
#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tunnellab/lab.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_scenario = 3;
constexpr int exit_io = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rectangular-barrier scattering lab: scenarios, sweeps and CSV/JSON output"};
  app.set_version_flag("--version", tl::version);
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a named scenario");
  std::string scenario, config_path, out;
  bool json = false, no_timestamp = false;
  int threads = 0;
  run->add_option("scenario", scenario, "scenario name (see `list`)")->required();
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--out", out, "output path prefix");
  run->add_flag("--json", json, "also write a JSON mirror of every table");
  run->add_flag("--no-timestamp", no_timestamp, "omit the timestamp line from the provenance header");
  run->add_option("--threads", threads, "OpenMP thread count")->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list", "list scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  if (*list) {
    for (const auto& n : tl::scenario_names()) std::cout << n << "  " << tl::scenario_summary(n) << "\n";
    return exit_ok;
  }

  if (threads > 0) omp_set_num_threads(threads);

  tl::ScenarioSpec spec;
  try {
    std::string text = "{}";
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) {
        std::cerr << "error: cannot read config '" << config_path << "'\n";
        return exit_io;
      }
      std::stringstream ss;
      ss << f.rdbuf();
      text = ss.str();
    }
    spec = tl::parse_config(text, scenario);
  } catch (const tl::ConfigError& e) {
    std::cerr << "config error: " << (config_path.empty() ? "" : config_path + ":") << e.what() << "\n";
    return exit_config;
  } catch (const tl::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return exit_scenario;
  }
  if (!out.empty()) spec.output = out;

  std::vector<tl::ResultTable> tables;
  try {
    tables = tl::run_scenario(spec);
  } catch (const std::exception& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return exit_scenario;
  }
  try {
    for (const auto& p : tl::write_tables(tables, spec.output, json, !no_timestamp)) std::cout << p << "\n";
  } catch (const tl::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return exit_io;
  }
  return exit_ok;
}
