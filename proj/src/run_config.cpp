#include "cmae/run_config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cmae {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

class KeyMap {
 public:
  explicit KeyMap(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string take(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("config: missing required key '" + key + "'");
    used_.insert(key);
    return it->second;
  }

  std::string take_or(const std::string& key, const std::string& fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.insert(key);
    return it->second;
  }

  double take_double(const std::string& key) { return to_double(key, take(key)); }
  double take_double_or(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return to_double(key, take(key));
  }
  int take_int(const std::string& key) { return to_int(key, take(key)); }
  int take_int_or(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    return to_int(key, take(key));
  }
  bool take_bool_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const std::string v = take(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: key '" + key + "' expects a boolean, got '" + v + "'");
  }

  void reject_unknown() const {
    for (const auto& [key, value] : kv_) {
      (void)value;
      if (!used_.count(key)) throw ConfigError("config: unknown key '" + key + "'");
    }
  }

 private:
  double to_double(const std::string& key, const std::string& v) {
    try {
      size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("");
      return x;
    } catch (...) {
      throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
    }
  }
  int to_int(const std::string& key, const std::string& v) {
    try {
      size_t pos = 0;
      const int x = std::stoi(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("");
      return x;
    } catch (...) {
      throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
    }
  }

  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

std::map<std::string, std::string> tokenize(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config: empty key on line " + std::to_string(lineno));
    if (kv.count(key)) throw ConfigError("config: duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::istringstream in(v);
  std::string tok;
  while (in >> tok) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument("");
    } catch (...) {
      throw ConfigError("config: key '" + key + "' expects numbers, got '" + tok + "'");
    }
  }
  if (out.empty()) throw ConfigError("config: key '" + key + "' expects at least one number");
  return out;
}

}  // namespace

RunConfig parse_run_config_text(const std::string& text) {
  KeyMap kv(tokenize(text));
  RunConfig cfg;

  // Domain: all physical parameters are required (no silent defaults).
  cfg.domain.n = kv.take_int("domain.n");
  cfg.domain.radius = kv.take_double("domain.radius");
  const std::string mode = kv.take("domain.mode");
  if (mode == "full-grid") {
    cfg.domain.mode = DomainMode::FullGrid;
    cfg.domain.grid_res = kv.take_int("domain.grid_res");
  } else if (mode == "radial") {
    cfg.domain.mode = DomainMode::Radial;
    cfg.domain.radial_res = kv.take_int("domain.radial_res");
  } else {
    throw ConfigError("config: key 'domain.mode' must be 'full-grid' or 'radial'");
  }

  const std::string kind = kv.take("density.kind");
  if (kind == "constant") {
    cfg.density = DensitySpec::constant(kv.take_double("density.c"));
  } else if (kind == "radial-poly") {
    cfg.density = DensitySpec::radial_poly(
        parse_double_list("density.coeffs", kv.take("density.coeffs")));
  } else if (kind == "gaussian-bump") {
    cfg.density = DensitySpec::gaussian_bump(
        kv.take_double("density.base"), kv.take_double("density.amplitude"),
        kv.take_double("density.center_x"), kv.take_double("density.center_y"),
        kv.take_double("density.sigma"));
  } else {
    throw ConfigError(
        "config: key 'density.kind' must be 'constant', 'radial-poly' or 'gaussian-bump'");
  }

  cfg.solver.tol_lin = kv.take_double_or("solver.tol_lin", cfg.solver.tol_lin);
  cfg.solver.tol_solver = kv.take_double_or("solver.tol_solver", cfg.solver.tol_solver);
  cfg.solver.max_lin_iters = kv.take_int_or("solver.max_lin_iters", cfg.solver.max_lin_iters);

  cfg.iteration.tol_R = kv.take_double_or("iteration.tol_R", cfg.iteration.tol_R);
  cfg.iteration.tol_u = kv.take_double_or("iteration.tol_u", cfg.iteration.tol_u);
  cfg.iteration.max_iters = kv.take_int_or("iteration.max_iters", cfg.iteration.max_iters);
  cfg.iteration.tol_mono = kv.take_double_or("iteration.tol_mono", cfg.iteration.tol_mono);
  cfg.iteration.normalize_each_step =
      kv.take_bool_or("iteration.normalize_steps", cfg.iteration.normalize_each_step);
  cfg.iteration.init_margin = kv.take_double_or("iteration.init_margin", cfg.iteration.init_margin);

  const std::string init = kv.take_or("iteration.init", "scaled-rho");
  if (init == "scaled-rho") {
    cfg.init = InitStrategy::ScaledRho;
  } else if (init == "ma-of-f") {
    cfg.init = InitStrategy::MaOfF;
  } else {
    throw ConfigError("config: key 'iteration.init' must be 'scaled-rho' or 'ma-of-f'");
  }

  cfg.oracle_ode_steps = kv.take_int_or("oracle.ode_steps", 0);
  cfg.oracle_solve_dir = kv.take_or("oracle.solve_dir", "");
  cfg.output_dir = kv.take_or("output.dir", cfg.output_dir);

  kv.reject_unknown();

  try {
    cfg.domain.validate();
    cfg.density.validate(cfg.domain);
    cfg.solver.validate();
    cfg.iteration.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig parse_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config_text(buf.str());
}

}  // namespace cmae
