// Command-line front end: runs the plate-bending convergence study and
// writes error tables, a summary and optional field-sample grids.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dpgplate/config.hpp"
#include "dpgplate/study.hpp"

int main(int argc, char** argv) {
  CLI::App app{"DPG solver for Reissner-Mindlin plate bending on quadrilateral meshes"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "run a convergence study");
  std::string config_path, mesh_kind, refinements, out_dir;
  int degree = 0;
  double thickness = 0.0, distortion = -1.0;
  bool emit_fields = false;
  run->add_option("--config", config_path, "key=value config file");
  run->add_option("--degree", degree, "trial polynomial degree p >= 1");
  run->add_option("--thickness", thickness, "plate thickness t");
  run->add_option("--mesh", mesh_kind, "mesh kind: uniform|trapezoidal");
  run->add_option("--distortion", distortion, "trapezoidal vertex offset in [0, 0.5)");
  run->add_option("--refinements", refinements, "comma-separated N list, e.g. 4,8,16");
  run->add_flag("--emit-fields", emit_fields, "write field sample grids from the finest mesh");
  run->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  dpgplate::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = dpgplate::parse_config_file(config_path);
    if (run->count("--degree")) cfg.degree = degree;
    if (run->count("--thickness")) cfg.thickness = thickness;
    if (run->count("--mesh")) dpgplate::apply_config_entry(cfg, "mesh", mesh_kind);
    if (run->count("--distortion")) cfg.distortion = distortion;
    if (run->count("--refinements")) cfg.refinements = dpgplate::parse_int_list(refinements);
    if (emit_fields) cfg.emit_fields = true;
    if (run->count("--out")) cfg.out_dir = out_dir;
    cfg.validate();
  } catch (const dpgplate::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  return dpgplate::run_study(cfg);
}
