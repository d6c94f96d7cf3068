#ifndef DPGPLATE_STUDY_HPP
#define DPGPLATE_STUDY_HPP

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dpgplate/config.hpp"
#include "dpgplate/errors.hpp"
#include "dpgplate/exact_solution.hpp"
#include "dpgplate/field_sampler.hpp"

namespace dpgplate {

/// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Write-to-temp-then-rename so failures never leave partial artifacts.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

struct StudyResult {
  RunConfig config;
  double oracle_residual = 0.0;
  std::vector<ErrorReport> reports;  // one per refinement level, N set
  // finest-mesh state, kept for field sampling
  std::optional<Mesh> finest_mesh;
  std::optional<SolutionFields> finest_solution;
};

/// Run the full benchmark study: calibrate and gate the exact solution,
/// then solve and measure errors on every mesh of the sequence.
inline StudyResult execute_study(const RunConfig& cfg) {
  cfg.validate();
  MaterialParams mat{cfg.thickness, cfg.nu, cfg.kappa};
  mat.validate();

  ChinosiSolution exact = ChinosiSolution::calibrated(mat);
  PlateFields fields = exact.fields();
  LoadFunction load = exact.load();

  TrialLayout layout{cfg.degree};
  const ElementBases& bases = element_bases(cfg.degree, cfg.degree + 3, cfg.quadrature_points());

  SolverOptions sopts;
  sopts.method = (cfg.solver == "cg") ? SolverOptions::Method::ConjugateGradient
                                      : SolverOptions::Method::Cholesky;
  sopts.cg_tolerance = cfg.solver_tolerance;

  StudyResult result;
  result.config = cfg;
  result.oracle_residual = exact.oracle_residual;
  for (size_t k = 0; k < cfg.refinements.size(); ++k) {
    int N = cfg.refinements[k];
    Mesh mesh = generate_mesh(N, cfg.mesh, cfg.distortion);
    GlobalSystem sys = assemble_global(mesh, layout, mat, bases, load);
    SolutionFields sol = solve(mesh, layout, sys, sopts);
    ErrorReport rep = l2_errors(mesh, layout, bases, sol, fields);
    rep.N = N;
    result.reports.push_back(rep);
    if (k + 1 == cfg.refinements.size()) {
      result.finest_mesh = std::move(mesh);
      result.finest_solution = std::move(sol);
    }
  }
  return result;
}

namespace detail {

struct QuantityColumn {
  const char* name;
  ErrorEntry ErrorReport::* entry;
};

inline const QuantityColumn* error_columns() {
  static const QuantityColumn cols[4] = {{"V", &ErrorReport::V},
                                         {"M", &ErrorReport::M},
                                         {"w", &ErrorReport::w},
                                         {"psi", &ErrorReport::psi}};
  return cols;
}

}  // namespace detail

/// Error/rate table in CSV form: one row per (quantity, mesh), rate
/// empty on the coarsest mesh.
inline std::string errors_csv(const StudyResult& result) {
  std::string out = "quantity,N,h,abs_error,rel_error,rate\n";
  for (int c = 0; c < 4; ++c) {
    const auto& col = detail::error_columns()[c];
    for (size_t k = 0; k < result.reports.size(); ++k) {
      const ErrorReport& rep = result.reports[k];
      const ErrorEntry& e = rep.*(col.entry);
      out += std::string(col.name) + "," + std::to_string(rep.N) + "," + format_double(rep.h) +
             "," + format_double(e.abs) + "," + format_double(e.rel);
      if (k > 0) {
        const ErrorEntry& prev = result.reports[k - 1].*(col.entry);
        out += "," + format_double(std::log2(prev.rel / e.rel));
      } else {
        out += ",";
      }
      out += "\n";
    }
  }
  return out;
}

inline std::string summary_text(const StudyResult& result) {
  const RunConfig& cfg = result.config;
  std::string out;
  out += "DPG plate bending convergence study\n";
  out += "degree = " + std::to_string(cfg.degree) + "\n";
  out += "thickness = " + format_double(cfg.thickness) + "\n";
  out += "nu = " + format_double(cfg.nu) + ", kappa = " + format_double(cfg.kappa) + "\n";
  out += std::string("mesh = ") + (cfg.mesh == MeshKind::Uniform ? "uniform" : "trapezoidal") +
         "\n";
  out += "exact-solution residual oracle: max residual = " + format_double(result.oracle_residual) +
         "\n\n";
  out += "relative L2 errors (observed rate in parentheses)\n";
  out += "    N";
  for (int c = 0; c < 4; ++c) out += std::string(18 - std::string(detail::error_columns()[c].name).size(), ' ') + detail::error_columns()[c].name;
  out += "\n";
  for (size_t k = 0; k < result.reports.size(); ++k) {
    const ErrorReport& rep = result.reports[k];
    char line[256];
    std::snprintf(line, sizeof(line), "%5d", rep.N);
    out += line;
    for (int c = 0; c < 4; ++c) {
      const auto& col = detail::error_columns()[c];
      const ErrorEntry& e = rep.*(col.entry);
      if (k > 0) {
        const ErrorEntry& prev = result.reports[k - 1].*(col.entry);
        std::snprintf(line, sizeof(line), "  %9.3e (%4.2f)", e.rel,
                      std::log2(prev.rel / e.rel));
      } else {
        std::snprintf(line, sizeof(line), "  %9.3e (  - )", e.rel);
      }
      out += line;
    }
    out += "\n";
  }
  return out;
}

inline std::string field_csv(const Eigen::MatrixXd& grid) {
  int res = static_cast<int>(grid.rows());
  std::string out = "x,y,value\n";
  for (int iy = 0; iy < res; ++iy) {
    double y = static_cast<double>(iy) / (res - 1);
    for (int ix = 0; ix < res; ++ix) {
      double x = static_cast<double>(ix) / (res - 1);
      out += format_double(x) + "," + format_double(y) + "," + format_double(grid(iy, ix)) + "\n";
    }
  }
  return out;
}

/// Execute a study and write its artifacts; returns a process exit code
/// (0 success, 3 solver failure, 4 residual-oracle gate failure).
inline int run_study(const RunConfig& cfg, std::ostream& log = std::cerr) {
  StudyResult result;
  try {
    result = execute_study(cfg);
  } catch (const OracleFailure& e) {
    log << "error: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 3;
  }
  try {
    std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    atomic_write(dir / "errors.csv", errors_csv(result));
    atomic_write(dir / "summary.txt", summary_text(result));
    if (cfg.emit_fields) {
      TrialLayout layout{cfg.degree};
      const ElementBases& bases =
          element_bases(cfg.degree, cfg.degree + 3, cfg.quadrature_points());
      SampledFields grids = sample_fields(*result.finest_mesh, layout, bases,
                                          *result.finest_solution, cfg.field_resolution);
      struct Named {
        const char* name;
        const Eigen::MatrixXd* grid;
      } named[] = {{"V1", &grids.V1},   {"V2", &grids.V2},     {"M11", &grids.M11},
                   {"M12", &grids.M12}, {"M22", &grids.M22},   {"psi1", &grids.psi1},
                   {"psi2", &grids.psi2}, {"w", &grids.w}};
      for (const auto& n : named)
        atomic_write(dir / ("field_" + std::string(n.name) + ".csv"), field_csv(*n.grid));
    }
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace dpgplate

#endif
