#include "wave3/config.hpp"

#include <fstream>
#include <sstream>

#include "wave3/errors.hpp"

namespace wave3 {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  if (value == "2pi") return 6.283185307179586476925286766559;
  Rational r;
  if (parse_rational(value, r)) return to_double(r);
  try {
    size_t used = 0;
    double d = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return d;
  } catch (const std::exception&) {
    fail(Errc::config_error, "bad numeric value for " + key + ": " + value);
  }
}

long parse_int(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(Errc::config_error, "bad integer value for " + key + ": " + value);
  }
}

}  // namespace

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(Errc::config_error, "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      fail(Errc::config_error, "line " + std::to_string(lineno) + ": empty key or value");

    if (key.rfind("param.", 0) == 0) {
      std::string name = key.substr(6);
      Rational r;
      if (!parse_rational(value, r))
        fail(Errc::config_error, key + " must be an exact rational p/q, got " + value);
      cfg.params[name] = r;
      continue;
    }
    if (key == "grid_n") cfg.grid_n = static_cast<int>(parse_int(key, value));
    else if (key == "grid_length") cfg.grid_length = parse_double(key, value);
    else if (key == "dt") cfg.dt = parse_double(key, value);
    else if (key == "t_end") cfg.t_end = parse_double(key, value);
    else if (key == "amplitude") cfg.amplitude = parse_double(key, value);
    else if (key == "rng_seed") cfg.rng_seed = static_cast<uint64_t>(parse_int(key, value));
    else if (key == "max_mode") cfg.max_mode = static_cast<int>(parse_int(key, value));
    else if (key == "m11_offset") cfg.m11_offset = parse_double(key, value);
    else if (key == "denominator_floor") cfg.denominator_floor = parse_double(key, value);
    else if (key == "space_scheme") {
      if (value != "spectral" && value != "fd4")
        fail(Errc::config_error, "space_scheme must be spectral or fd4");
      cfg.space_scheme = value;
    } else if (key == "stability_limit") cfg.stability_limit = parse_double(key, value);
    else if (key == "drift_tol") cfg.drift_tol = parse_double(key, value);
    else if (key == "snapshot_stride") cfg.snapshot_stride = static_cast<int>(parse_int(key, value));
    else if (key == "seed_k") cfg.seed_k = parse_double(key, value);
    else if (key == "seed_m") cfg.seed_m = parse_double(key, value);
    else if (key == "seed_c") cfg.seed_c = parse_double(key, value);
    else if (key == "tau") cfg.tau = parse_double(key, value);
    else if (key == "window_x0") cfg.window_x0 = parse_double(key, value);
    else if (key == "window_x1") cfg.window_x1 = parse_double(key, value);
    else if (key == "window_t0") cfg.window_t0 = parse_double(key, value);
    else if (key == "window_t1") cfg.window_t1 = parse_double(key, value);
    else if (key == "window_nx") cfg.window_nx = static_cast<int>(parse_int(key, value));
    else if (key == "window_nt") cfg.window_nt = static_cast<int>(parse_int(key, value));
    else if (key == "chain_residual_tol") cfg.chain_residual_tol = parse_double(key, value);
    else if (key == "max_jet_order") cfg.max_jet_order = static_cast<int>(parse_int(key, value));
    else if (key == "appendix_reading") {
      if (value != "a" && value != "b")
        fail(Errc::config_error, "appendix_reading must be a or b");
      cfg.appendix_reading = value;
    } else {
      fail(Errc::config_error, "unknown key: " + key);
    }
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::config_error, "cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

}  // namespace wave3
