#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dpgplate/config.hpp"
#include "dpgplate/study.hpp"

using namespace dpgplate;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("dpgplate_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("default configuration") {
  RunConfig cfg;
  REQUIRE_NOTHROW(cfg.validate());
  REQUIRE(cfg.degree == 1);
  REQUIRE(cfg.thickness == 0.1);
  REQUIRE(cfg.mesh == MeshKind::Uniform);
  REQUIRE(cfg.refinements == std::vector<int>{4, 8, 16, 32, 64});
  REQUIRE(cfg.quadrature_points() == 6);
  cfg.degree = 2;
  REQUIRE(cfg.quadrature_points() == 7);
  cfg.quadrature = 9;
  REQUIRE(cfg.quadrature_points() == 9);
}

TEST_CASE("config entries set every key") {
  RunConfig cfg;
  apply_config_entry(cfg, "degree", "3");
  apply_config_entry(cfg, "thickness", "0.01");
  apply_config_entry(cfg, "nu", "0.25");
  apply_config_entry(cfg, "kappa", "1.0");
  apply_config_entry(cfg, "mesh", "trapezoidal");
  apply_config_entry(cfg, "distortion", "0.1");
  apply_config_entry(cfg, "refinements", "2,4,8");
  apply_config_entry(cfg, "quadrature", "10");
  apply_config_entry(cfg, "solver", "cg");
  apply_config_entry(cfg, "solver_tolerance", "1e-10");
  apply_config_entry(cfg, "out", "/tmp/somewhere");
  apply_config_entry(cfg, "emit_fields", "true");
  apply_config_entry(cfg, "field_resolution", "33");
  REQUIRE(cfg.degree == 3);
  REQUIRE(cfg.thickness == 0.01);
  REQUIRE(cfg.nu == 0.25);
  REQUIRE(cfg.mesh == MeshKind::Trapezoidal);
  REQUIRE(cfg.refinements == std::vector<int>{2, 4, 8});
  REQUIRE(cfg.solver == "cg");
  REQUIRE(cfg.emit_fields);
  REQUIRE(cfg.field_resolution == 33);
  REQUIRE_NOTHROW(cfg.validate());

  REQUIRE_THROWS_AS(apply_config_entry(cfg, "no_such_key", "1"), ConfigError);
  REQUIRE_THROWS_AS(apply_config_entry(cfg, "degree", "one"), ConfigError);
  REQUIRE_THROWS_AS(apply_config_entry(cfg, "mesh", "hexagonal"), ConfigError);
  REQUIRE_THROWS_AS(apply_config_entry(cfg, "emit_fields", "maybe"), ConfigError);
  REQUIRE_THROWS_AS(parse_int_list("4,,8"), ConfigError);
  REQUIRE_THROWS_AS(parse_int_list("4,8a"), ConfigError);
}

TEST_CASE("configuration validation rejects bad setups") {
  auto broken = [](auto&& mutate) {
    RunConfig cfg;
    mutate(cfg);
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  };
  broken([](RunConfig& c) { c.degree = 0; });
  broken([](RunConfig& c) { c.thickness = -0.1; });
  broken([](RunConfig& c) { c.nu = 0.5; });
  broken([](RunConfig& c) { c.refinements = {}; });
  broken([](RunConfig& c) { c.refinements = {8, 4}; });
  broken([](RunConfig& c) { c.solver = "gauss"; });
  broken([](RunConfig& c) { c.distortion = 0.6; });
  broken([](RunConfig& c) { c.field_resolution = 1; });
}

TEST_CASE("config file parsing with comments and whitespace") {
  fs::path dir = fresh_dir("config");
  fs::path file = dir / "study.cfg";
  {
    std::ofstream out(file);
    out << "# benchmark setup\n";
    out << "degree = 1\n";
    out << "  thickness=0.001   # thin regime\n";
    out << "\n";
    out << "mesh = trapezoidal\n";
    out << "refinements = 2,4\n";
  }
  RunConfig cfg = parse_config_file(file.string());
  REQUIRE(cfg.degree == 1);
  REQUIRE(cfg.thickness == 0.001);
  REQUIRE(cfg.mesh == MeshKind::Trapezoidal);
  REQUIRE(cfg.refinements == std::vector<int>{2, 4});

  REQUIRE_THROWS_AS(parse_config_file((dir / "missing.cfg").string()), ConfigError);
  {
    std::ofstream out(file);
    out << "degree 1\n";  // no '=' separator
  }
  REQUIRE_THROWS_AS(parse_config_file(file.string()), ConfigError);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 2.30000001e-5, -17.25, 0.0}) {
    REQUIRE(std::stod(format_double(v)) == v);
  }
  REQUIRE(format_double(0.1) == "0.1");
}

TEST_CASE("study run writes deterministic artifacts") {
  RunConfig cfg;
  cfg.refinements = {2, 4};
  fs::path dir = fresh_dir("study");
  cfg.out_dir = dir.string();
  std::ostringstream log;
  REQUIRE(run_study(cfg, log) == 0);
  REQUIRE(fs::exists(dir / "errors.csv"));
  REQUIRE(fs::exists(dir / "summary.txt"));

  std::string csv = slurp(dir / "errors.csv");
  // header plus 4 quantities x 2 meshes
  REQUIRE(count_lines(csv) == 1 + 4 * 2);
  REQUIRE(csv.rfind("quantity,N,h,abs_error,rel_error,rate\n", 0) == 0);
  REQUIRE(csv.find("V,2,") != std::string::npos);
  REQUIRE(csv.find("psi,4,") != std::string::npos);

  std::string summary = slurp(dir / "summary.txt");
  REQUIRE(summary.find("residual oracle") != std::string::npos);

  // byte-identical on a second run
  REQUIRE(run_study(cfg, log) == 0);
  REQUIRE(slurp(dir / "errors.csv") == csv);
  REQUIRE(slurp(dir / "summary.txt") == summary);
}

TEST_CASE("study run emits field sample grids from the finest mesh") {
  RunConfig cfg;
  cfg.refinements = {2, 3};
  cfg.emit_fields = true;
  cfg.field_resolution = 5;
  fs::path dir = fresh_dir("fields");
  cfg.out_dir = dir.string();
  std::ostringstream log;
  REQUIRE(run_study(cfg, log) == 0);
  for (const char* name : {"V1", "V2", "M11", "M12", "M22", "psi1", "psi2", "w"}) {
    fs::path f = dir / ("field_" + std::string(name) + ".csv");
    REQUIRE(fs::exists(f));
    std::string csv = slurp(f);
    REQUIRE(count_lines(csv) == 1 + 5 * 5);
    REQUIRE(csv.rfind("x,y,value\n", 0) == 0);
  }
}

TEST_CASE("study run reports failures through exit codes") {
  std::ostringstream log;
  {
    RunConfig cfg;
    cfg.degree = 0;  // invalid configuration
    REQUIRE(run_study(cfg, log) == 2);
  }
  {
    RunConfig cfg;
    cfg.refinements = {2};
    cfg.quadrature = 1;  // under-integration makes the test Gram singular
    fs::path dir = fresh_dir("failure");
    cfg.out_dir = dir.string();
    REQUIRE(run_study(cfg, log) == 3);
    REQUIRE_FALSE(fs::exists(dir / "errors.csv"));
  }
}
