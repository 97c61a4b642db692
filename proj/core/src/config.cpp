#include "lagfsi/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lagfsi/catalogs.hpp"

namespace lagfsi {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string join(const std::vector<std::string>& v) {
  std::string out = "invalid config:";
  for (const auto& s : v) out += "\n  - " + s;
  return out;
}

bool parse_double(const std::string& s, double& out) {
  std::istringstream is(s);
  return static_cast<bool>(is >> out) && is.eof();
}

bool parse_size(const std::string& s, std::size_t& out) {
  std::istringstream is(s);
  long long v = 0;
  if (!(is >> v) || !is.eof() || v < 0) return false;
  out = static_cast<std::size_t>(v);
  return true;
}

bool parse_switch(const std::string& s, bool& out) {
  if (s == "on" || s == "true") { out = true; return true; }
  if (s == "off" || s == "false") { out = false; return true; }
  return false;
}

bool known_name(const std::vector<std::string>& names, const std::string& s) {
  for (const auto& n : names)
    if (n == s) return true;
  return false;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> v)
    : std::runtime_error(join(v)), violations(std::move(v)) {}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SimulationConfig parse_config_text(const std::string& text) {
  SimulationConfig cfg;
  std::vector<std::string> bad;
  std::string normalized;

  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      bad.push_back("line " + std::to_string(lineno) + ": expected `section.key = value`");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    normalized += key + "=" + val + "\n";

    double d = 0.0;
    std::size_t n = 0;
    auto need_double = [&](double& target) {
      if (parse_double(val, d)) target = d;
      else bad.push_back(key + ": not a number: '" + val + "'");
    };
    auto need_size = [&](std::size_t& target) {
      if (parse_size(val, n)) target = n;
      else bad.push_back(key + ": not a nonnegative integer: '" + val + "'");
    };

    if (key == "geometry.container_radius") need_double(cfg.geometry.container_radius);
    else if (key == "geometry.h") need_double(cfg.geometry.h);
    else if (key == "geometry.solid") {
      Disk disk;
      std::istringstream vs(val);
      if (vs >> disk.cx >> disk.cy >> disk.r) cfg.geometry.solids.push_back(disk);
      else bad.push_back(key + ": expected `cx cy r`: '" + val + "'");
    } else if (key == "material.nu") need_double(cfg.material.nu);
    else if (key == "material.lambda") need_double(cfg.material.lambda);
    else if (key == "material.mu") need_double(cfg.material.mu);
    else if (key == "material.constitutive") {
      if (val == "grad") cfg.material.constitutive = FluidConstitutive::Grad;
      else if (val == "def") cfg.material.constitutive = FluidConstitutive::Def;
      else bad.push_back(key + ": expected grad|def: '" + val + "'");
    } else if (key == "numerics.dt") need_double(cfg.fixed_point.stepper.dt);
    else if (key == "numerics.T") need_double(cfg.fixed_point.stepper.T);
    else if (key == "numerics.eps") {
      need_double(cfg.fixed_point.stepper.penalty.epsilon);
      cfg.epsilon_set = true;
    } else if (key == "numerics.n") need_size(cfg.fixed_point.stepper.penalty.mollify_n);
    else if (key == "numerics.tol") need_double(cfg.fixed_point.tol);
    else if (key == "numerics.max_iterations") need_size(cfg.fixed_point.max_iterations);
    else if (key == "numerics.M") need_double(cfg.fixed_point.M);
    else if (key == "numerics.integrator") {
      if (val == "backward-euler")
        cfg.fixed_point.stepper.integrator = Integrator::BackwardEuler;
      else if (val == "midpoint")
        cfg.fixed_point.stepper.integrator = Integrator::Midpoint;
      else bad.push_back(key + ": expected backward-euler|midpoint: '" + val + "'");
    } else if (key == "forcing.name") cfg.forcing = val;
    else if (key == "initial.name") cfg.initial = val;
    else if (key == "output.dir") cfg.output_dir = val;
    else if (key == "output.snapshots") {
      if (!parse_switch(val, cfg.emit_snapshots))
        bad.push_back(key + ": expected on|off: '" + val + "'");
    } else if (key == "output.deterministic") {
      if (!parse_switch(val, cfg.deterministic))
        bad.push_back(key + ": expected on|off: '" + val + "'");
    } else {
      bad.push_back("unknown key: " + key);
    }
  }

  if (!cfg.epsilon_set)
    cfg.fixed_point.stepper.penalty.epsilon = 1e-4 * cfg.geometry.h * cfg.geometry.h;

  // validation (named violations, all collected)
  if (cfg.material.nu <= 0.0) bad.push_back("material.nu: must be > 0");
  if (cfg.material.lambda <= 0.0) bad.push_back("material.lambda: must be > 0");
  if (cfg.material.mu <= 0.0) bad.push_back("material.mu: must be > 0");
  if (cfg.geometry.container_radius <= 0.0)
    bad.push_back("geometry.container_radius: must be > 0");
  if (cfg.geometry.h <= 0.0) bad.push_back("geometry.h: must be > 0");
  if (cfg.fixed_point.stepper.dt <= 0.0) bad.push_back("numerics.dt: must be > 0");
  if (cfg.fixed_point.stepper.T <= 0.0) bad.push_back("numerics.T: must be > 0");
  if (cfg.fixed_point.stepper.dt > cfg.fixed_point.stepper.T &&
      cfg.fixed_point.stepper.dt > 0.0 && cfg.fixed_point.stepper.T > 0.0)
    bad.push_back("numerics.dt/numerics.T: dt must not exceed T");
  if (cfg.fixed_point.stepper.penalty.epsilon <= 0.0)
    bad.push_back("numerics.eps: must be > 0");
  if (cfg.fixed_point.tol <= 0.0) bad.push_back("numerics.tol: must be > 0");
  if (!known_name(forcing_catalog_names(), cfg.forcing))
    bad.push_back("forcing.name: unknown catalog entry '" + cfg.forcing + "'");
  if (!known_name(initial_catalog_names(), cfg.initial))
    bad.push_back("initial.name: unknown catalog entry '" + cfg.initial + "'");

  if (!bad.empty()) throw ConfigError(std::move(bad));

  cfg.hash = fnv1a_hex(normalized);
  return cfg;
}

SimulationConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return parse_config_text(os.str());
}

}  // namespace lagfsi
