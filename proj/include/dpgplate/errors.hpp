#ifndef DPGPLATE_ERRORS_HPP
#define DPGPLATE_ERRORS_HPP

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "dpgplate/assembly.hpp"
#include "dpgplate/exact_solution.hpp"

namespace dpgplate {

struct ErrorEntry {
  double abs = 0.0;
  double rel = std::numeric_limits<double>::quiet_NaN();  // NaN when the exact norm vanishes
};

/// Absolute and relative L2 errors of the field variables on one mesh.
struct ErrorReport {
  int N = 0;
  double h = 0.0;
  ErrorEntry V, M, w, psi, r;
};

namespace detail {

struct ErrorAccumulator {
  double err2[5] = {0, 0, 0, 0, 0};
  double norm2[5] = {0, 0, 0, 0, 0};

  void add(double jw, const FieldValues& a, const FieldValues& b) {
    err2[0] += jw * (a.V - b.V).squaredNorm();
    norm2[0] += jw * b.V.squaredNorm();
    err2[1] += jw * (a.M - b.M).squaredNorm();
    norm2[1] += jw * b.M.squaredNorm();
    err2[2] += jw * (a.w - b.w) * (a.w - b.w);
    norm2[2] += jw * b.w * b.w;
    err2[3] += jw * (a.psi - b.psi).squaredNorm();
    norm2[3] += jw * b.psi.squaredNorm();
    err2[4] += jw * (a.r - b.r) * (a.r - b.r);
    norm2[4] += jw * b.r * b.r;
  }

  ErrorReport report() const {
    ErrorReport rep;
    ErrorEntry* entries[5] = {&rep.V, &rep.M, &rep.w, &rep.psi, &rep.r};
    for (int k = 0; k < 5; ++k) {
      entries[k]->abs = std::sqrt(err2[k]);
      if (norm2[k] > 0) entries[k]->rel = entries[k]->abs / std::sqrt(norm2[k]);
    }
    return rep;
  }
};

inline FieldValues exact_at(const PlateFields& f, double x, double y) {
  FieldValues v;
  v.V = f.V(x, y);
  v.M = f.M(x, y);
  v.w = f.w(x, y);
  v.psi = f.psi(x, y);
  v.r = f.r(x, y);
  return v;
}

}  // namespace detail

/// L2 errors of a discrete solution against closed-form fields, by the
/// assembly quadrature rule element by element. Shear and moments are
/// compared in physical components (Piola-mapped).
inline ErrorReport l2_errors(const Mesh& mesh, const TrialLayout& layout, const ElementBases& bases,
                             const SolutionFields& sol, const PlateFields& exact) {
  detail::ErrorAccumulator acc;
  int nq = bases.vol.size();
  int nrt = layout.n_rt(), ns = layout.n_scalar();
  for (int el = 0; el < mesh.n_elements(); ++el) {
    const Eigen::VectorXd& u = sol.interior[el];
    // reference-space linear combinations at all volume quadrature points
    Eigen::RowVectorXd Vx = u.segment(layout.off_V(), nrt).transpose() * bases.trial_rt.values_x;
    Eigen::RowVectorXd Vy = u.segment(layout.off_V(), nrt).transpose() * bases.trial_rt.values_y;
    Eigen::RowVectorXd M0x = u.segment(layout.off_M(0), nrt).transpose() * bases.trial_rt.values_x;
    Eigen::RowVectorXd M0y = u.segment(layout.off_M(0), nrt).transpose() * bases.trial_rt.values_y;
    Eigen::RowVectorXd M1x = u.segment(layout.off_M(1), nrt).transpose() * bases.trial_rt.values_x;
    Eigen::RowVectorXd M1y = u.segment(layout.off_M(1), nrt).transpose() * bases.trial_rt.values_y;
    Eigen::RowVectorXd W = u.segment(layout.off_w(), ns).transpose() * bases.trial_scalar.values;
    Eigen::RowVectorXd P0 = u.segment(layout.off_psi(0), ns).transpose() * bases.trial_scalar.values;
    Eigen::RowVectorXd P1 = u.segment(layout.off_psi(1), ns).transpose() * bases.trial_scalar.values;
    Eigen::RowVectorXd R = u.segment(layout.off_r(), ns).transpose() * bases.trial_scalar.values;
    for (int q = 0; q < nq; ++q) {
      GeometryAt g = map_to_physical(mesh.elements[el], bases.vol.points(q, 0), bases.vol.points(q, 1));
      double jw = g.detJ * bases.vol.weights[q];
      FieldValues dh;
      dh.V = g.J * Eigen::Vector2d(Vx[q], Vy[q]) / g.detJ;
      Eigen::Vector2d m0 = g.J * Eigen::Vector2d(M0x[q], M0y[q]) / g.detJ;
      Eigen::Vector2d m1 = g.J * Eigen::Vector2d(M1x[q], M1y[q]) / g.detJ;
      dh.M << m0[0], m0[1], m1[0], m1[1];
      dh.w = W[q];
      dh.psi << P0[q], P1[q];
      dh.r = R[q];
      acc.add(jw, dh, detail::exact_at(exact, g.x[0], g.x[1]));
    }
  }
  ErrorReport rep = acc.report();
  rep.h = mesh.h;
  return rep;
}

/// L2 distance between two closed-form field bundles over the mesh, for
/// oracle self-comparisons.
inline ErrorReport l2_errors_fields(const Mesh& mesh, const ElementBases& bases,
                                    const PlateFields& approx, const PlateFields& exact) {
  detail::ErrorAccumulator acc;
  int nq = bases.vol.size();
  for (int el = 0; el < mesh.n_elements(); ++el) {
    for (int q = 0; q < nq; ++q) {
      GeometryAt g = map_to_physical(mesh.elements[el], bases.vol.points(q, 0), bases.vol.points(q, 1));
      double jw = g.detJ * bases.vol.weights[q];
      acc.add(jw, detail::exact_at(approx, g.x[0], g.x[1]), detail::exact_at(exact, g.x[0], g.x[1]));
    }
  }
  ErrorReport rep = acc.report();
  rep.h = mesh.h;
  return rep;
}

/// Element-wise L2 projection of closed-form fields onto the trial
/// space (best approximation; traces are left empty). Serves as a
/// quasi-interpolant in approximation-order checks.
inline SolutionFields project_fields(const Mesh& mesh, const TrialLayout& layout,
                                     const ElementBases& bases, const PlateFields& f) {
  SolutionFields sol;
  sol.layout = layout;
  sol.interior.resize(mesh.n_elements());
  sol.trace.assign(mesh.n_elements(), Eigen::VectorXd::Zero(layout.n_trace()));
  int nq = bases.vol.size();
  int nrt = layout.n_rt(), ns = layout.n_scalar();
  for (int el = 0; el < mesh.n_elements(); ++el) {
    // physical-component tabulations of the Piola-mapped RT basis
    Eigen::MatrixXd PX(nrt, nq), PY(nrt, nq), SC = bases.trial_scalar.values;
    Eigen::VectorXd jw(nq);
    Eigen::MatrixXd rhs_rt = Eigen::MatrixXd::Zero(nrt, 3 * 2);  // V, M row 1, M row 2 (x,y)
    Eigen::MatrixXd rhs_sc = Eigen::MatrixXd::Zero(ns, 4);       // w, psi1, psi2, r
    for (int q = 0; q < nq; ++q) {
      GeometryAt g = map_to_physical(mesh.elements[el], bases.vol.points(q, 0), bases.vol.points(q, 1));
      jw[q] = g.detJ * bases.vol.weights[q];
      for (int i = 0; i < nrt; ++i) {
        Eigen::Vector2d ref(bases.trial_rt.values_x(i, q), bases.trial_rt.values_y(i, q));
        Eigen::Vector2d phys = g.J * ref / g.detJ;
        PX(i, q) = phys[0];
        PY(i, q) = phys[1];
      }
      FieldValues ex = detail::exact_at(f, g.x[0], g.x[1]);
      Eigen::Matrix<double, 3, 2> targets;
      targets << ex.V.transpose(), ex.M.row(0), ex.M.row(1);
      for (int t = 0; t < 3; ++t)
        rhs_rt.col(2 * t) += jw[q] * targets(t, 0) * PX.col(q),
            rhs_rt.col(2 * t + 1) += jw[q] * targets(t, 1) * PY.col(q);
      double svals[4] = {ex.w, ex.psi[0], ex.psi[1], ex.r};
      for (int t = 0; t < 4; ++t) rhs_sc.col(t) += jw[q] * svals[t] * SC.col(q);
    }
    Eigen::MatrixXd mass_rt =
        PX * jw.asDiagonal() * PX.transpose() + PY * jw.asDiagonal() * PY.transpose();
    Eigen::MatrixXd mass_sc = SC * jw.asDiagonal() * SC.transpose();
    Eigen::LDLT<Eigen::MatrixXd> ldlt_rt(mass_rt), ldlt_sc(mass_sc);
    Eigen::VectorXd u(layout.n_interior());
    for (int t = 0; t < 3; ++t) {
      Eigen::VectorXd rhs = rhs_rt.col(2 * t) + rhs_rt.col(2 * t + 1);
      u.segment(t == 0 ? layout.off_V() : layout.off_M(t - 1), nrt) = ldlt_rt.solve(rhs);
    }
    int soff[4] = {layout.off_w(), layout.off_psi(0), layout.off_psi(1), layout.off_r()};
    for (int t = 0; t < 4; ++t) u.segment(soff[t], ns) = ldlt_sc.solve(rhs_sc.col(t));
    sol.interior[el] = u;
  }
  return sol;
}

/// rate[i] = log2(e[i] / e[i+1]); one entry fewer than the input.
inline std::vector<double> observed_rates(const std::vector<double>& errors) {
  std::vector<double> rates;
  for (size_t i = 1; i < errors.size(); ++i) rates.push_back(std::log2(errors[i - 1] / errors[i]));
  return rates;
}

}  // namespace dpgplate

#endif
