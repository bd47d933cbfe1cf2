#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "eqm/scenario.hpp"

namespace {

constexpr int exit_pass = 0;
constexpr int exit_config_error = 2;

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  double dt = 0.0;
  bool quiet = false;
};

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

int finish(const eqm::SuiteOutcome& outcome, const Options& opt) {
  for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& e : outcome.errors) std::cerr << "error: " << e << '\n';
  if (!opt.quiet && !outcome.report.empty()) std::cout << eqm::report_table(outcome.report);
  std::size_t failed = 0;
  for (const auto& r : outcome.report) failed += r.pass ? 0 : 1;
  if (!opt.quiet || outcome.exit_code != exit_pass)
    std::cout << outcome.report.size() << " checks, " << failed << " failed, " << outcome.errors.size()
              << " errors\n";
  return outcome.exit_code;
}

eqm::SuiteOptions suite_options(const Options& opt, const CLI::App& app) {
  eqm::SuiteOptions so;
  so.out_dir = opt.out_dir;
  if (app.count("--dt")) so.dt_override = opt.dt;
  return so;
}

int run_single(const Options& opt, const CLI::App& app, bool koopman_only) {
  std::string document;
  if (!read_file(opt.config_path, document)) {
    std::cerr << "error: cannot read " << opt.config_path << '\n';
    return exit_config_error;
  }
  if (koopman_only) {
    try {
      const auto cfg = eqm::parse_config(document);
      if (!cfg.wants(eqm::Output::koopman)) {
        std::cerr << "error: " << opt.config_path << ": outputs must include \"koopman\"\n";
        return exit_config_error;
      }
    } catch (const eqm::ConfigError& e) {
      std::cerr << "error: " << opt.config_path << ": " << e.what() << '\n';
      return exit_config_error;
    }
  }
  return finish(eqm::run_suite({{opt.config_path, document}}, suite_options(opt, app)), opt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear density-matrix flows, conservation checks and Koopman diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--out-dir", opt.out_dir, "Directory for CSV tables and reports")->capture_default_str();
  app.add_option("--dt", opt.dt, "Override the integrator time step")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", opt.quiet, "Print only errors and failures");

  auto* run = app.add_subcommand("run", "Run a single scenario document");
  run->add_option("config", opt.config_path, "Scenario document (JSON)")->required();
  auto* suite = app.add_subcommand("suite", "Run the bundled scenario corpus");
  auto* koopman = app.add_subcommand("koopman", "Run the Koopman checks of a scenario document");
  koopman->add_option("config", opt.config_path, "Scenario document (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_pass : exit_config_error;
  }

  if (*run) return run_single(opt, app, false);
  if (*koopman) return run_single(opt, app, true);
  if (*suite) return finish(eqm::run_suite(eqm::bundled_corpus(), suite_options(opt, app)), opt);
  return exit_config_error;
}
