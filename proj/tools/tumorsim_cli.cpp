// tumorsim command-line front end.
//
//   tumorsim run <config>     full simulation, writes diagnostics.csv + snapshots
//   tumorsim mms              manufactured-solution convergence table
//   tumorsim limit <config>   vanishing-interface sweep, writes limit.csv
//   tumorsim check <config>   parse and validate only

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "tumorsim/config.hpp"
#include "tumorsim/limit.hpp"
#include "tumorsim/mms.hpp"

namespace {

using namespace tumorsim;

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == '\n') ch = ';';
  }
  while (!s.empty() && (s.back() == ';' || s.back() == ' ')) s.pop_back();
  return s;
}

int cmd_check(const std::string& path) {
  const RunConfig c = load_config(path);
  validate_config(c);
  std::cout << "ok: " << path << " (" << c.nx << "x" << c.ny << ", mode " << to_string(c.mode) << ")\n";
  return 0;
}

int cmd_run(const std::string& path) {
  const RunConfig c = load_config(path);
  const RunResult r = execute_run(c);
  const BoundsReport b = check_bounds(r.state, c.dt);
  std::cout << r.records.size() << " steps to t = " << r.state.t << ", output in " << c.output_dir << '\n'
            << b.summary();
  return 0;
}

int cmd_mms() {
  const auto cases = run_mms_suite();
  print_mms_table(std::cout, cases);
  for (const auto& c : cases) {
    for (double o : c.orders) {
      if (!(o >= 1.8 && o <= 2.2)) {
        std::cerr << "error: " << c.name << " observed order " << o << " outside [1.8, 2.2]\n";
        return 1;
      }
    }
  }
  return 0;
}

int cmd_limit(const std::string& path) {
  const RunConfig c = load_config(path);
  validate_config(c);
  const GridSpec grid = c.grid();
  LimitConfig lc{grid, c.params, c.T, c.dt, make_initial_field(c.phi0, grid)};
  const LimitReport rep = run_limit_study(c.eps_list, lc);
  std::filesystem::create_directories(c.output_dir);
  const auto out = std::filesystem::path(c.output_dir) / "limit.csv";
  std::ofstream f(out);
  if (!f) throw Error("cannot write " + out.string());
  write_limit_table(f, rep);
  write_limit_table(std::cout, rep);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tumor growth phase-field simulator"};
  app.require_subcommand(1);
  std::string config;
  auto* run = app.add_subcommand("run", "run the configured simulation");
  run->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);
  auto* mms = app.add_subcommand("mms", "manufactured-solution convergence suite");
  auto* limit = app.add_subcommand("limit", "vanishing-interface sweep");
  limit->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);
  auto* check = app.add_subcommand("check", "validate a config file");
  check->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_run(config);
    if (*mms) return cmd_mms();
    if (*limit) return cmd_limit(config);
    if (*check) return cmd_check(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 2;
}
