#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "conewave/errors.hpp"
#include "conewave/pipeline.hpp"

using namespace conewave;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"(
[data]
family = "monopole"
[grid]
n_r = 256
[run]
T_end = 6
[diagnostics]
cone_t0 = [0]
cone_r0 = [2]
morawetz_R = [1]
decay = false
)";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string l;
  std::getline(in, l);
  return l;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("conewave_unit_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("sha256 test vector") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("run writes the frozen artifacts, reproducibly") {
  const RunConfig cfg = parse_config(kSmall);
  const fs::path a = scratch("run_a"), b = scratch("run_b");
  const RunOutcome r = run_experiment(cfg, a);
  CHECK(r.E > 3.0);
  CHECK_FALSE(r.checks.empty());
  for (const char* f : {"energy.csv", "mu.csv", "norms.csv", "ledgers.json", "ledgers.csv", "report.json", "manifest.json"})
    CHECK(fs::exists(a / f));
  CHECK(first_line(a / "energy.csv") == "t,E,E_minus,E_plus,E_minus_inner_c");
  CHECK(first_line(a / "mu.csv") == "t,P_origin,P_cylinder");
  CHECK(first_line(a / "norms.csv") == "t,Lp1_norm,st_norm_increment");
  CHECK(first_line(a / "ledgers.csv") == "region_id,segment_id,type,value,mu_term,morawetz_term,residual");
  CHECK(slurp(a / "manifest.json").find(sha256_hex(cfg.source_text)) != std::string::npos);

  run_experiment(cfg, b);
  for (const char* f : {"energy.csv", "mu.csv", "norms.csv", "ledgers.json", "ledgers.csv", "report.json", "manifest.json"})
    CHECK(slurp(a / f) == slurp(b / f));

  const VerifyResult v = verify_report(a / "report.json");
  CHECK(v.total == static_cast<int>(r.checks.size()));
  CHECK(v.failed == (r.all_pass() ? 0 : v.failed));
}

TEST_CASE("verify: failing and malformed reports") {
  const fs::path d = scratch("verify");
  fs::create_directories(d);
  std::ofstream(d / "ok.json") << R"({"checks":[{"name":"a","pass":true},{"name":"b","pass":true}]})";
  std::ofstream(d / "bad.json") << R"({"checks":[{"name":"a","pass":true},{"name":"b","pass":false}]})";
  std::ofstream(d / "broken.json") << R"({"checks": 3})";
  std::ofstream(d / "garbage.json") << "not json";
  CHECK(verify_report(d / "ok.json").failed == 0);
  const auto bad = verify_report(d / "bad.json");
  CHECK(bad.failed == 1);
  CHECK(bad.failures == std::vector<std::string>{"b"});
  CHECK_THROWS_AS(verify_report(d / "broken.json"), ConfigError);
  CHECK_THROWS_AS(verify_report(d / "garbage.json"), ConfigError);
  CHECK_THROWS_AS(verify_report(d / "missing.json"), ConfigError);
}

TEST_CASE("streaming run keeps per-state series only") {
  RunConfig cfg = parse_config(std::string(kSmall) + "streaming = true\n");
  const fs::path d = scratch("stream");
  const RunOutcome r = run_experiment(cfg, d);
  CHECK(slurp(d / "ledgers.json") == "[]\n");
  bool has_drift = false;
  for (const auto& c : r.checks) has_drift |= c.name == "energy_drift";
  CHECK(has_drift);
  CHECK(estimate_run_memory(cfg) < estimate_run_memory(parse_config(kSmall)));
}

TEST_CASE("ladder: orders and errors") {
  const RunConfig cfg = parse_config(kSmall);
  CHECK_THROWS_AS(run_ladder(cfg, 1, scratch("ladder1")), ConfigError);
  const fs::path d = scratch("ladder");
  const LadderOutcome l = run_ladder(cfg, 2, d);
  REQUIRE(l.levels.size() == 2u);
  CHECK(l.levels[1].metrics.h == doctest::Approx(0.5 * l.levels[0].metrics.h));
  CHECK(fs::exists(d / "convergence.csv"));
  CHECK(fs::exists(d / "level_1" / "report.json"));
  for (const auto& [name, o] : l.orders)
    if (name == "energy_drift") CHECK(o[0] >= 1.8);
}

TEST_CASE("memory pre-flight refuses oversized runs") {
  setenv("CONEWAVE_MEMORY_MB", "1", 1);
  CHECK(memory_budget() == (1u << 20));
  CHECK_THROWS_AS(run_experiment(parse_config(kSmall), scratch("mem")), ConfigError);
  unsetenv("CONEWAVE_MEMORY_MB");
}
