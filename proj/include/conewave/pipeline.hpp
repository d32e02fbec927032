#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "conewave/analysis.hpp"
#include "conewave/config.hpp"

namespace conewave {

inline constexpr const char* kToolVersion = "0.1.0";

// Scalar error measures of one run, the inputs to ladder orders.
struct RunMetrics {
  double h = 0.0;
  double dt = 0.0;
  double energy_drift = 0.0;         // staggered leapfrog energy, relative
  double quadrature_drift = 0.0;     // max |E(t) - E(t_first)| / E from cell quadrature
  double decomposition_error = 0.0;  // max |E₋ + E₊ - E| / E over stored times
  double cone_residual = 0.0;        // max |residual| / scale over cone ledgers (NaN if none)
  double mu_discrepancy = 0.0;       // NaN if μ is off
  std::vector<std::pair<std::string, double>> ledger_residuals;  // region/side → relative residual
};

struct RunOutcome {
  std::filesystem::path dir;
  std::vector<BoundCheck> checks;
  std::vector<std::string> skipped;  // diagnostics that could not be evaluated, with reason
  RunMetrics metrics;
  double E = 0.0;
  bool all_pass() const;
};

// Bytes held by the run's stored states (plus working copies).
std::size_t estimate_run_memory(const RunConfig& cfg);
// CONEWAVE_MEMORY_MB if set, otherwise 80% of physical memory.
std::size_t memory_budget();

// Evolves, runs the enabled diagnostics and writes every artifact into out_dir.
RunOutcome run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir);

struct LadderOutcome {
  std::vector<RunOutcome> levels;
  // metric name → observed orders log2(e_k / e_{k+1}) between consecutive levels
  std::vector<std::pair<std::string, std::vector<double>>> orders;
  bool all_pass() const;
};

// Level k uses the config's grid refined by 2^k; artifacts go to out_dir/level_k.
LadderOutcome run_ladder(const RunConfig& cfg, int levels, const std::filesystem::path& out_dir);

struct VerifyResult {
  int total = 0;
  int failed = 0;
  std::vector<std::string> failures;
};
// Throws ConfigError when the file is missing or is not a report.
VerifyResult verify_report(const std::filesystem::path& report);

std::string sha256_hex(const std::string& bytes);

}  // namespace conewave
