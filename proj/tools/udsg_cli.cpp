// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "udsg/parallel.hpp"
#include "udsg/suite.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::string output_dir(const std::string& flag, const udsg::Scenario& sc) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("UDSG_OUT_DIR"); env && *env) return env;
  if (!sc.out_dir.empty()) return sc.out_dir;
  return "udsg-out/" + sc.name;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ultradistribution semigroup verification runner"};
  app.require_subcommand(1);

  std::string scenario_path, out;
  unsigned threads = 0;
  std::vector<std::string> checks;
  auto* run = app.add_subcommand("run", "Run a scenario and write report.json plus CSV plot data");
  run->add_option("scenario", scenario_path, "Scenario file (key = value)")->required();
  run->add_option("--out", out, "Output directory (overrides UDSG_OUT_DIR and out.dir)");
  run->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  run->add_option("--check", checks, "Run only the named checks")->take_all();

  auto* list = app.add_subcommand("list", "List checks with their default tolerances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (list->parsed()) {
    for (const auto& c : udsg::check_catalog())
      std::cout << c.name << "  [" << c.tag << "]  " << c.comparison << ' ' << udsg::format_number(c.tolerance) << '\n';
    return 0;
  }

  udsg::Scenario sc;
  try {
    sc = udsg::load_scenario(scenario_path);
    udsg::validate_checks(sc, checks);
  } catch (const udsg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  udsg::set_threads(threads);
  std::string dir = output_dir(out, sc);

  udsg::RunResults res = udsg::run_suite(sc, checks, &std::cout);
  try {
    auto paths = udsg::emit_report(res, dir);
    std::cout << "wrote " << paths.front() << " (+" << paths.size() - 1 << " CSV files)\n";
  } catch (const udsg::ReportError& e) {
    std::cerr << "report error: " << e.what() << '\n';
    return kExitConfig;
  }
  std::size_t failed = 0;
  for (const auto& c : res.checks) failed += c.pass ? 0 : 1;
  std::cout << res.checks.size() - failed << '/' << res.checks.size() << " checks passed\n";
  return failed == 0 ? 0 : kExitFail;
}
