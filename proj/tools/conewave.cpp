#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "conewave/config.hpp"
#include "conewave/errors.hpp"
#include "conewave/initial_data.hpp"
#include "conewave/pipeline.hpp"

namespace {

enum Exit { kPass = 0, kCheckFailure = 1, kConfigError = 2, kRuntimeAbort = 3 };

void print_checks(const conewave::RunOutcome& r) {
  for (const auto& c : r.checks)
    std::printf("%s %-48s lhs=%.6g rhs=%.6g margin=%.3g\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.lhs, c.rhs,
                c.margin);
  for (const auto& s : r.skipped) std::printf("SKIP %s\n", s.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Defocusing wave equation energy-flux experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", conewave::kToolVersion);

  std::string config_path, out_dir, report_path;
  int levels = 3;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "evolve one configuration and write all artifacts");
  run->add_option("--config", config_path, "TOML run configuration")->required();
  run->add_option("--out", out_dir, "output directory (overrides run.output)");
  run->add_flag("--quiet", quiet, "print only the summary line");

  auto* ladder = app.add_subcommand("ladder", "refinement ladder h, h/2, h/4, ... with observed orders");
  ladder->add_option("--config", config_path, "TOML run configuration (coarsest level)")->required();
  ladder->add_option("--levels", levels, "number of levels (>= 2)");
  ladder->add_option("--out", out_dir, "output directory (overrides run.output)");
  ladder->add_flag("--quiet", quiet, "print only the order table");

  auto* verify = app.add_subcommand("verify", "exit 0 iff every check in a report passes");
  verify->add_option("report", report_path, "report.json")->required();

  auto* families = app.add_subcommand("list-data-families", "print the available initial-data families");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kConfigError;
  }

  try {
    if (*families) {
      for (const auto& f : conewave::data_families()) {
        std::cout << f.name << ": " << f.description << "\n  parameters:";
        for (const auto& p : f.parameters) std::cout << " " << p;
        std::cout << "\n";
      }
      return kPass;
    }
    if (*verify) {
      const auto v = conewave::verify_report(report_path);
      for (const auto& f : v.failures) std::cout << "FAIL " << f << "\n";
      std::cout << (v.total - v.failed) << "/" << v.total << " checks pass\n";
      return v.failed == 0 ? kPass : kCheckFailure;
    }
    const conewave::RunConfig cfg = conewave::load_config(config_path);
    const std::filesystem::path dir = out_dir.empty() ? cfg.output : std::filesystem::path(out_dir);
    if (*run) {
      const auto r = conewave::run_experiment(cfg, dir);
      if (!quiet) print_checks(r);
      int failed = 0;
      for (const auto& c : r.checks) failed += c.pass ? 0 : 1;
      std::printf("%s: %zu checks, %d failed; artifacts in %s\n", r.all_pass() ? "PASS" : "FAIL", r.checks.size(),
                  failed, dir.string().c_str());
      return r.all_pass() ? kPass : kCheckFailure;
    }
    if (*ladder) {
      const auto l = conewave::run_ladder(cfg, levels, dir);
      if (!quiet)
        for (std::size_t k = 0; k < l.levels.size(); ++k) {
          const auto& m = l.levels[k].metrics;
          std::printf("level %zu h=%.4g drift=%.3g decomposition=%.3g cone_residual=%.3g mu_discrepancy=%.3g %s\n", k,
                      m.h, m.energy_drift, m.decomposition_error, m.cone_residual, m.mu_discrepancy,
                      l.levels[k].all_pass() ? "PASS" : "FAIL");
        }
      for (const auto& [name, o] : l.orders) {
        std::printf("order %-40s", name.c_str());
        for (double v : o) std::printf(" %7.3f", v);
        std::printf("\n");
      }
      std::printf("%s: convergence table in %s\n", l.all_pass() ? "PASS" : "FAIL", dir.string().c_str());
      return l.all_pass() ? kPass : kCheckFailure;
    }
  } catch (const conewave::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "runtime abort: " << e.what() << "\n";
    return kRuntimeAbort;
  }
  return kConfigError;
}
