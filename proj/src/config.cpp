#include "conewave/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml++/toml.hpp>

#include "conewave/errors.hpp"

namespace conewave {

namespace {

const std::vector<std::pair<std::string, std::vector<std::string>>> kKeys = {
    {"problem", {"p", "coupling"}},
    {"data", {"family", "amplitude", "sigma", "z0", "cutoff_radius"}},
    {"grid", {"backend", "n_r", "n_rho", "n_z", "extent"}},
    {"run", {"T_end", "t_start", "cfl", "store_stride", "energy_stride", "kappa", "seed", "output"}},
    {"diagnostics",
     {"streaming", "ledgers", "cone_t0", "cone_r0", "slab", "mu", "morawetz_R", "weighted", "decay", "decay_T0",
      "inner_c", "scattering_q", "flux_bounds", "drift_tol", "decomposition_tol", "mono_tol"}},
};

void reject_unknown(const toml::table& root) {
  for (const auto& [k, v] : root) {
    const std::string key(k.str());
    const auto it = std::find_if(kKeys.begin(), kKeys.end(), [&](const auto& e) { return e.first == key; });
    if (it == kKeys.end()) throw ConfigError("unknown section [" + key + "]");
    const auto* tbl = v.as_table();
    if (!tbl) throw ConfigError("[" + key + "] must be a table");
    for (const auto& [k2, v2] : *tbl) {
      const std::string sub(k2.str());
      if (std::find(it->second.begin(), it->second.end(), sub) == it->second.end())
        throw ConfigError("unknown key " + key + "." + sub);
    }
  }
}

double get_num(const toml::table& root, const char* sec, const char* key, double def) {
  const auto node = root[sec][key];
  if (!node) return def;
  if (auto v = node.value<double>()) {
    if (!std::isfinite(*v)) throw ConfigError(std::string(sec) + "." + key + " must be finite");
    return *v;
  }
  throw ConfigError(std::string(sec) + "." + key + " must be a number");
}

int get_int(const toml::table& root, const char* sec, const char* key, int def) {
  const auto node = root[sec][key];
  if (!node) return def;
  if (auto v = node.value_exact<int64_t>()) return static_cast<int>(*v);
  throw ConfigError(std::string(sec) + "." + key + " must be an integer");
}

bool get_bool(const toml::table& root, const char* sec, const char* key, bool def) {
  const auto node = root[sec][key];
  if (!node) return def;
  if (auto v = node.value_exact<bool>()) return *v;
  throw ConfigError(std::string(sec) + "." + key + " must be true or false");
}

std::string get_str(const toml::table& root, const char* sec, const char* key, const std::string& def) {
  const auto node = root[sec][key];
  if (!node) return def;
  if (auto v = node.value_exact<std::string>()) return *v;
  throw ConfigError(std::string(sec) + "." + key + " must be a string");
}

std::vector<double> get_list(const toml::table& root, const char* sec, const char* key, std::vector<double> def) {
  const auto node = root[sec][key];
  if (!node) return def;
  const auto* arr = node.as_array();
  if (!arr) throw ConfigError(std::string(sec) + "." + key + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : *arr) {
    auto v = e.value<double>();
    if (!v || !std::isfinite(*v)) throw ConfigError(std::string(sec) + "." + key + " must be an array of numbers");
    out.push_back(*v);
  }
  return out;
}

void validate(const RunConfig& c) {
  if (c.family != "monopole" && c.family != "ztilt") throw ConfigError("data.family must be monopole or ztilt");
  if (!(c.sigma > 0.0)) throw ConfigError("data.sigma must be > 0");
  if (c.amplitude < 0.0) throw ConfigError("data.amplitude must be >= 0");
  if (c.family == "ztilt" && c.z0 != 0.0) throw ConfigError("data.z0 must be 0 for the ztilt family");
  if (c.cutoff_radius < 0.0) throw ConfigError("data.cutoff_radius must be >= 0");
  if (c.backend == Backend::Radial1D) {
    if (c.family != "monopole" || c.z0 != 0.0)
      throw ConfigError("grid.backend radial1d needs radial data (monopole with z0 = 0)");
    if (c.n_r < 16) throw ConfigError("grid.n_r must be >= 16");
  } else {
    if (c.n_rho < 8 || c.n_z < 16) throw ConfigError("grid.n_rho must be >= 8 and grid.n_z >= 16");
  }
  if (c.extent < 0.0) throw ConfigError("grid.extent must be >= 0");
  if (!(c.solver.cfl > 0.0 && c.solver.cfl <= 0.9)) throw ConfigError("run.cfl must lie in (0, 0.9]");
  if (c.solver.T_end < 0.0) throw ConfigError("run.T_end must be >= 0");
  if (c.solver.t_start > 0.0) throw ConfigError("run.t_start must be <= 0");
  if (c.solver.store_stride < 0 || c.solver.energy_stride < 0) throw ConfigError("run strides must be >= 0");
  if (!(c.kappa > 0.0 && c.kappa < 1.0)) throw ConfigError("run.kappa must lie in (0, 1)");
  if (!(c.diag.inner_c > 0.0 && c.diag.inner_c < 1.0)) throw ConfigError("diagnostics.inner_c must lie in (0, 1)");
  if (!(c.diag.scattering_q >= 1.0)) throw ConfigError("diagnostics.scattering_q must be >= 1");
  for (double r : c.diag.cone_r0)
    if (!(r > 0.0)) throw ConfigError("diagnostics.cone_r0 entries must be > 0");
  for (double R : c.diag.morawetz_R)
    if (!(R > 0.0)) throw ConfigError("diagnostics.morawetz_R entries must be > 0");
  if (!(c.diag.drift_tol > 0.0)) throw ConfigError("diagnostics.drift_tol must be > 0");
  if (!(c.diag.decomposition_tol > 0.0)) throw ConfigError("diagnostics.decomposition_tol must be > 0");
  if (!(c.diag.mono_tol >= 0.0)) throw ConfigError("diagnostics.mono_tol must be >= 0");
  if (!(c.diag.decay_T0 >= 1.0)) throw ConfigError("diagnostics.decay_T0 must be >= 1");
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "config parse error: " << e.description() << " at line " << e.source().begin.line;
    throw ConfigError(os.str());
  }
  reject_unknown(root);
  RunConfig c;
  c.source_text = text;
  const double p = get_num(root, "problem", "p", 3.0);
  const double coupling = get_num(root, "problem", "coupling", 1.0);
  c.problem = ProblemSpec::make(p, coupling);

  c.family = get_str(root, "data", "family", c.family);
  c.amplitude = get_num(root, "data", "amplitude", c.amplitude);
  c.sigma = get_num(root, "data", "sigma", c.sigma);
  c.z0 = get_num(root, "data", "z0", c.z0);
  c.cutoff_radius = get_num(root, "data", "cutoff_radius", c.cutoff_radius);

  const std::string backend = get_str(root, "grid", "backend", "radial1d");
  if (backend == "radial1d") c.backend = Backend::Radial1D;
  else if (backend == "axisym2d") c.backend = Backend::Axisym2D;
  else throw ConfigError("grid.backend must be radial1d or axisym2d");
  c.n_r = get_int(root, "grid", "n_r", c.n_r);
  c.n_rho = get_int(root, "grid", "n_rho", c.n_rho);
  c.n_z = get_int(root, "grid", "n_z", c.n_z);
  c.extent = get_num(root, "grid", "extent", c.extent);

  c.solver.T_end = get_num(root, "run", "T_end", 10.0);
  c.solver.t_start = get_num(root, "run", "t_start", 0.0);
  c.solver.cfl = get_num(root, "run", "cfl", 0.5);
  c.solver.store_stride = get_int(root, "run", "store_stride", 0);
  c.solver.energy_stride = get_int(root, "run", "energy_stride", 0);
  c.kappa = get_num(root, "run", "kappa", c.kappa);
  const int seed = get_int(root, "run", "seed", 0);
  if (seed < 0) throw ConfigError("run.seed must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  std::filesystem::path out = get_str(root, "run", "output", "conewave_out");
  c.output = out.is_relative() && !base_dir.empty() ? base_dir / out : out;

  auto& d = c.diag;
  d.streaming = get_bool(root, "diagnostics", "streaming", d.streaming);
  d.ledgers = get_bool(root, "diagnostics", "ledgers", d.ledgers);
  d.cone_t0 = get_list(root, "diagnostics", "cone_t0", d.cone_t0);
  d.cone_r0 = get_list(root, "diagnostics", "cone_r0", d.cone_r0);
  d.slab = get_bool(root, "diagnostics", "slab", d.slab);
  d.mu = get_bool(root, "diagnostics", "mu", d.mu);
  d.morawetz_R = get_list(root, "diagnostics", "morawetz_R", d.morawetz_R);
  d.weighted = get_bool(root, "diagnostics", "weighted", d.weighted);
  d.decay = get_bool(root, "diagnostics", "decay", d.decay);
  d.decay_T0 = get_num(root, "diagnostics", "decay_T0", d.decay_T0);
  d.inner_c = get_num(root, "diagnostics", "inner_c", d.inner_c);
  d.scattering_q = get_num(root, "diagnostics", "scattering_q", d.scattering_q);
  d.flux_bounds = get_bool(root, "diagnostics", "flux_bounds", d.flux_bounds);
  d.drift_tol = get_num(root, "diagnostics", "drift_tol", d.drift_tol);
  d.decomposition_tol = get_num(root, "diagnostics", "decomposition_tol", d.decomposition_tol);
  d.mono_tol = get_num(root, "diagnostics", "mono_tol", d.mono_tol);
  c.solver.keep_trace = !d.streaming;
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

InitialData RunConfig::data() const {
  const auto profile = family == "ztilt" ? AngularProfile::ZTilt : AngularProfile::Monopole;
  InitialData d = gaussian_data(amplitude, sigma, z0, profile);
  if (cutoff_radius > 0.0) d = cutoff_data(d, cutoff_radius);
  return d;
}

Grid RunConfig::grid(const InitialData& d) const {
  const double need = causal_radius(d, solver);
  const double L = extent > 0.0 ? extent : need + 1.0;
  if (L < need) throw ConfigError("grid.extent is below the causal radius R0 + max|t|");
  if (backend == Backend::Radial1D) return Grid::radial(L, n_r);
  return Grid::axisym(L, L, n_rho, n_z);
}

RunConfig RunConfig::refined(int level) const {
  RunConfig c = *this;
  const int f = 1 << level;
  c.n_r *= f;
  c.n_rho *= f;
  c.n_z *= f;
  return c;
}

}  // namespace conewave
