#ifndef DPGPLATE_CONFIG_HPP
#define DPGPLATE_CONFIG_HPP

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpgplate/mesh.hpp"

namespace dpgplate {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Study configuration; defaults reproduce the published setup.
struct RunConfig {
  int degree = 1;
  double thickness = 0.1;
  double nu = 0.3;
  double kappa = 5.0 / 6.0;
  MeshKind mesh = MeshKind::Uniform;
  double distortion = 0.25;
  std::vector<int> refinements = {4, 8, 16, 32, 64};
  int quadrature = 0;  // points per direction; 0 = degree + 5
  std::string solver = "cholesky";
  double solver_tolerance = 1e-12;
  std::string out_dir = ".";
  bool emit_fields = false;
  int field_resolution = 101;

  int quadrature_points() const { return quadrature > 0 ? quadrature : degree + 5; }

  void validate() const {
    if (degree < 1) throw ConfigError("degree must be >= 1");
    if (!(thickness > 0)) throw ConfigError("thickness must be positive");
    if (!(nu >= 0 && nu < 0.5)) throw ConfigError("nu must lie in [0, 0.5)");
    if (!(kappa > 0)) throw ConfigError("kappa must be positive");
    if (refinements.empty()) throw ConfigError("refinements must not be empty");
    for (size_t i = 0; i < refinements.size(); ++i) {
      if (refinements[i] < 1) throw ConfigError("refinements must be >= 1");
      if (i > 0 && refinements[i] <= refinements[i - 1])
        throw ConfigError("refinements must be strictly increasing");
    }
    if (quadrature < 0) throw ConfigError("quadrature must be positive");
    if (solver != "cholesky" && solver != "cg")
      throw ConfigError("solver must be 'cholesky' or 'cg'");
    if (!(solver_tolerance > 0)) throw ConfigError("solver_tolerance must be positive");
    if (field_resolution < 2) throw ConfigError("field_resolution must be >= 2");
    if (distortion < 0 || distortion >= 0.5) throw ConfigError("distortion must lie in [0, 0.5)");
  }
};

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      int v = std::stoi(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("malformed integer list entry '" + item + "'");
    }
  }
  return out;
}

/// Apply one key=value setting; throws ConfigError naming the key on any
/// unknown key or malformed value.
inline void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto as_double = [&](const std::string& v) {
    try {
      size_t pos = 0;
      double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError("malformed value for key '" + key + "': " + v);
    }
  };
  auto as_int = [&](const std::string& v) {
    try {
      size_t pos = 0;
      int i = std::stoi(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return i;
    } catch (const std::exception&) {
      throw ConfigError("malformed value for key '" + key + "': " + v);
    }
  };
  if (key == "degree") cfg.degree = as_int(value);
  else if (key == "thickness") cfg.thickness = as_double(value);
  else if (key == "nu") cfg.nu = as_double(value);
  else if (key == "kappa") cfg.kappa = as_double(value);
  else if (key == "mesh") {
    if (value == "uniform") cfg.mesh = MeshKind::Uniform;
    else if (value == "trapezoidal") cfg.mesh = MeshKind::Trapezoidal;
    else throw ConfigError("malformed value for key 'mesh': " + value);
  } else if (key == "distortion") cfg.distortion = as_double(value);
  else if (key == "refinements") cfg.refinements = parse_int_list(value);
  else if (key == "quadrature") cfg.quadrature = as_int(value);
  else if (key == "solver") cfg.solver = value;
  else if (key == "solver_tolerance") cfg.solver_tolerance = as_double(value);
  else if (key == "out") cfg.out_dir = value;
  else if (key == "emit_fields") {
    if (value == "true" || value == "1") cfg.emit_fields = true;
    else if (value == "false" || value == "0") cfg.emit_fields = false;
    else throw ConfigError("malformed value for key 'emit_fields': " + value);
  } else if (key == "field_resolution") cfg.field_resolution = as_int(value);
  else throw ConfigError("unknown config key '" + key + "'");
}

/// Parse a flat key=value file ('#' comments and blank lines allowed).
inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto is_space = [](unsigned char c) { return std::isspace(c); };
    line.erase(line.begin(), std::find_if_not(line.begin(), line.end(), is_space));
    line.erase(std::find_if_not(line.rbegin(), line.rend(), is_space).base(), line.end());
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    key.erase(std::find_if_not(key.rbegin(), key.rend(), is_space).base(), key.end());
    value.erase(value.begin(), std::find_if_not(value.begin(), value.end(), is_space));
    apply_config_entry(cfg, key, value);
  }
  return cfg;
}

}  // namespace dpgplate

#endif
