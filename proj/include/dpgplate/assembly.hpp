#ifndef DPGPLATE_ASSEMBLY_HPP
#define DPGPLATE_ASSEMBLY_HPP

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "dpgplate/element_system.hpp"
#include "dpgplate/layout.hpp"

namespace dpgplate {

/// Sparse symmetric system over the skeleton unknowns after static
/// condensation and elimination of the clamped boundary traces.
struct GlobalSystem {
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  std::vector<CondensedElement> condensed;   // per-element recovery data
  std::vector<std::vector<int>> scatter;     // per-element local trace -> global (-1 clamped)
  int n_unknowns = 0;
};

/// Coefficients of the discrete solution: interior fields per element,
/// trace values per element (clamped dofs zero) and the raw skeleton
/// vector.
struct SolutionFields {
  TrialLayout layout;
  std::vector<Eigen::VectorXd> interior;
  std::vector<Eigen::VectorXd> trace;
  Eigen::VectorXd skeleton;

  Eigen::VectorXd element_coeffs(int e) const {
    Eigen::VectorXd u(layout.n_total());
    u.head(layout.n_interior()) = interior[e];
    u.tail(layout.n_trace()) = trace[e];
    return u;
  }
};

inline GlobalSystem assemble_global(const Mesh& mesh, const TrialLayout& layout,
                                    const MaterialParams& mat, const ElementBases& bases,
                                    const LoadFunction& load) {
  SkeletonIndexer idx(mesh, layout);
  GlobalSystem sys;
  sys.n_unknowns = idx.n_total();
  sys.b.setZero(sys.n_unknowns);
  sys.condensed.resize(mesh.n_elements());
  sys.scatter.resize(mesh.n_elements());

  std::vector<Eigen::Triplet<double>> triplets;
  int nt = layout.n_trace();
  triplets.reserve(static_cast<size_t>(mesh.n_elements()) * nt * nt);

  for (int el = 0; el < mesh.n_elements(); ++el) {
    ElementSystem esys = build_element_system(mesh, el, layout, mat, bases, load);
    sys.condensed[el] = condense_element(esys);
    sys.scatter[el] = idx.local_to_global(mesh, el, layout);
    const auto& map = sys.scatter[el];
    const CondensedElement& ce = sys.condensed[el];
    for (int i = 0; i < nt; ++i) {
      if (map[i] < 0) continue;
      sys.b[map[i]] += ce.f[i];
      for (int j = 0; j < nt; ++j) {
        if (map[j] < 0) continue;
        triplets.emplace_back(map[i], map[j], ce.S(i, j));
      }
    }
  }
  sys.A.resize(sys.n_unknowns, sys.n_unknowns);
  sys.A.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

struct SolverOptions {
  enum class Method { Cholesky, ConjugateGradient };
  Method method = Method::Cholesky;
  double cg_tolerance = 1e-12;
  int cg_max_iterations = 100000;
};

struct SolveReport {
  double relative_residual = 0.0;
};

/// Solve the skeleton system and recover the interior fields element by
/// element through the condensation data.
inline SolutionFields solve(const Mesh& mesh, const TrialLayout& layout, const GlobalSystem& sys,
                            const SolverOptions& opts = {}, SolveReport* report = nullptr) {
  Eigen::VectorXd x;
  if (sys.n_unknowns == 0) {
    x.resize(0);
  } else if (opts.method == SolverOptions::Method::Cholesky) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(sys.A);
    if (solver.info() != Eigen::Success) throw std::runtime_error("solve: factorization failed");
    x = solver.solve(sys.b);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(opts.cg_tolerance);
    cg.setMaxIterations(opts.cg_max_iterations);
    cg.compute(sys.A);
    x = cg.solve(sys.b);
    if (cg.info() != Eigen::Success) throw std::runtime_error("solve: CG did not converge");
  }
  if (report) {
    double bn = sys.b.norm();
    report->relative_residual = bn > 0 ? (sys.A * x - sys.b).norm() / bn : (sys.A * x).norm();
  }

  SolutionFields sol;
  sol.layout = layout;
  sol.skeleton = x;
  sol.interior.resize(mesh.n_elements());
  sol.trace.resize(mesh.n_elements());
  int nt = layout.n_trace();
  for (int el = 0; el < mesh.n_elements(); ++el) {
    Eigen::VectorXd ut = Eigen::VectorXd::Zero(nt);
    const auto& map = sys.scatter[el];
    for (int i = 0; i < nt; ++i)
      if (map[i] >= 0) ut[i] = x[map[i]];
    sol.trace[el] = ut;
    const CondensedElement& ce = sys.condensed[el];
    sol.interior[el] = ce.offset - ce.recover * ut;
  }
  return sol;
}

/// Point values of all field variables of an element solution.
struct FieldValues {
  Eigen::Vector2d V;
  Eigen::Matrix2d M;
  double w = 0.0;
  Eigen::Vector2d psi;
  double r = 0.0;
};

/// Evaluate the discrete fields of one element at a reference point.
inline FieldValues evaluate_fields(const Mesh& mesh, int elem_id, const TrialLayout& layout,
                                   const ElementBases& bases, const Eigen::VectorXd& interior,
                                   double xi, double eta) {
  const QuadElement& elem = mesh.elements[elem_id];
  GeometryAt g = map_to_physical(elem, xi, eta);
  Eigen::VectorXd sv, vx, vy, div;
  bases.eval_trial_scalar(xi, eta, sv);
  bases.eval_trial_rt(xi, eta, vx, vy, div);
  int nrt = layout.n_rt(), ns = layout.n_scalar();
  auto piola_combo = [&](int off) {
    Eigen::Vector2d ref(interior.segment(off, nrt).dot(vx), interior.segment(off, nrt).dot(vy));
    return Eigen::Vector2d((g.J * ref) / g.detJ);
  };
  FieldValues out;
  out.V = piola_combo(layout.off_V());
  Eigen::Vector2d m0 = piola_combo(layout.off_M(0));
  Eigen::Vector2d m1 = piola_combo(layout.off_M(1));
  out.M << m0[0], m0[1], m1[0], m1[1];
  out.w = interior.segment(layout.off_w(), ns).dot(sv);
  out.psi[0] = interior.segment(layout.off_psi(0), ns).dot(sv);
  out.psi[1] = interior.segment(layout.off_psi(1), ns).dot(sv);
  out.r = interior.segment(layout.off_r(), ns).dot(sv);
  return out;
}

/// Max norm of the globally assembled Galerkin residual
/// B^T G^{-1} (l - B u), traces accumulated across elements.
inline double galerkin_residual(const Mesh& mesh, const TrialLayout& layout,
                                const MaterialParams& mat, const ElementBases& bases,
                                const LoadFunction& load, const GlobalSystem& sys,
                                const SolutionFields& sol) {
  double max_interior = 0.0;
  Eigen::VectorXd skeleton_res = Eigen::VectorXd::Zero(sys.n_unknowns);
  int ni = layout.n_interior(), nt = layout.n_trace();
  for (int el = 0; el < mesh.n_elements(); ++el) {
    ElementSystem esys = build_element_system(mesh, el, layout, mat, bases, load);
    Eigen::MatrixXd res = esys.load - esys.B * sol.element_coeffs(el);
    esys.apply_gram_inverse(res);
    Eigen::VectorXd v = esys.B.transpose() * res;
    max_interior = std::max(max_interior, v.head(ni).cwiseAbs().maxCoeff());
    const auto& map = sys.scatter[el];
    for (int i = 0; i < nt; ++i)
      if (map[i] >= 0) skeleton_res[map[i]] += v[ni + i];
  }
  double max_skel = sys.n_unknowns > 0 ? skeleton_res.cwiseAbs().maxCoeff() : 0.0;
  return std::max(max_interior, max_skel);
}

/// Element-wise DPG energy residuals, usable as a posteriori indicators.
inline std::vector<double> energy_residuals(const Mesh& mesh, const TrialLayout& layout,
                                            const MaterialParams& mat, const ElementBases& bases,
                                            const LoadFunction& load, const SolutionFields& sol) {
  std::vector<double> out(mesh.n_elements());
  for (int el = 0; el < mesh.n_elements(); ++el) {
    ElementSystem esys = build_element_system(mesh, el, layout, mat, bases, load);
    out[el] = esys.energy_residual(sol.element_coeffs(el));
  }
  return out;
}

}  // namespace dpgplate

#endif
