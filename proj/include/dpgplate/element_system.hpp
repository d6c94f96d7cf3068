#ifndef DPGPLATE_ELEMENT_SYSTEM_HPP
#define DPGPLATE_ELEMENT_SYSTEM_HPP

#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

#include "dpgplate/basis.hpp"
#include "dpgplate/layout.hpp"
#include "dpgplate/material.hpp"
#include "dpgplate/mesh.hpp"

namespace dpgplate {

/// Row layout of the enriched test space of degree r:
/// q in RT_r, tau row 1 in RT_r, tau row 2 in RT_r, z in Q_r,
/// phi_1 in Q_r, phi_2 in Q_r, s in Q_r.
struct TestLayout {
  int r = 4;

  int n_rt() const { return 2 * (r + 1) * (r + 2); }
  int n_scalar() const { return (r + 1) * (r + 1); }

  int off_q() const { return 0; }
  int off_tau(int row) const { return n_rt() * (1 + row); }
  int off_z() const { return 3 * n_rt(); }
  int off_phi(int comp) const { return 3 * n_rt() + (1 + comp) * n_scalar(); }
  int off_s() const { return 3 * n_rt() + 3 * n_scalar(); }
  int n_test() const { return 3 * n_rt() + 4 * n_scalar(); }
};

/// Volumetric load entering the linear functional. The transverse
/// pressure drives the z test block; the rotational part (used by
/// manufactured-solution studies) drives the phi block.
struct LoadFunction {
  std::function<double(double, double)> transverse;
  std::function<Eigen::Vector2d(double, double)> rotational;  // may be empty
};

/// Element trial-to-test matrix B_K, block-factorized test Gram matrix
/// G_K and load vector. The Gram matrix of the broken standard test norm
/// is block diagonal over the test components, with the tau block two
/// copies of the q block and the phi block two copies of the z block, so
/// only three distinct blocks are stored and factorized.
struct ElementSystem {
  TrialLayout trial;
  TestLayout test;

  Eigen::MatrixXd B;      // n_test x n_total
  Eigen::VectorXd load;   // n_test

  Eigen::MatrixXd G_rt;   // H(div) Gram of RT_r     (q and each tau row)
  Eigen::MatrixXd G_h1;   // H^1 Gram of Q_r         (z and each phi component)
  Eigen::MatrixXd G_l2;   // L^2 Gram of Q_r         (s)
  Eigen::LLT<Eigen::MatrixXd> llt_rt, llt_h1, llt_l2;

  /// Solve G X = M in place, block by block.
  void apply_gram_inverse(Eigen::Ref<Eigen::MatrixXd> M) const {
    int nr = test.n_rt(), ns = test.n_scalar();
    for (int b = 0; b < 3; ++b)
      M.middleRows(b * nr, nr) = llt_rt.solve(M.middleRows(b * nr, nr));
    for (int b = 0; b < 3; ++b)
      M.middleRows(3 * nr + b * ns, ns) = llt_h1.solve(M.middleRows(3 * nr + b * ns, ns));
    M.middleRows(3 * nr + 3 * ns, ns) = llt_l2.solve(M.middleRows(3 * nr + 3 * ns, ns));
  }

  /// Full dense G_K (diagnostics and tests only).
  Eigen::MatrixXd gram_dense() const {
    int n = test.n_test(), nr = test.n_rt(), ns = test.n_scalar();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    for (int b = 0; b < 3; ++b) G.block(b * nr, b * nr, nr, nr) = G_rt;
    for (int b = 0; b < 3; ++b)
      G.block(3 * nr + b * ns, 3 * nr + b * ns, ns, ns) = G_h1;
    G.block(3 * nr + 3 * ns, 3 * nr + 3 * ns, ns, ns) = G_l2;
    return G;
  }

  /// Normal-equation matrix B^T G^{-1} B and right-hand side B^T G^{-1} l.
  void normal_equations(Eigen::MatrixXd& N, Eigen::VectorXd& g) const {
    Eigen::MatrixXd X = B;
    apply_gram_inverse(X);
    N = B.transpose() * X;
    g = X.transpose() * load;
  }

  /// Energy norm of the local residual functional, || l - B u ||_{G^{-1}}.
  double energy_residual(const Eigen::VectorXd& u) const {
    Eigen::MatrixXd res = load - B * u;
    Eigen::MatrixXd y = res;
    apply_gram_inverse(y);
    double sq = (res.transpose() * y)(0, 0);
    return std::sqrt(std::max(sq, 0.0));
  }
};

/// Assemble B_K, G_K and l_K for one element.
inline ElementSystem build_element_system(const Mesh& mesh, int elem_id, const TrialLayout& trial,
                                          const MaterialParams& mat, const ElementBases& bases,
                                          const LoadFunction& load) {
  const QuadElement& elem = mesh.elements[elem_id];
  ElementSystem sys;
  sys.trial = trial;
  sys.test.r = bases.r();

  const TestLayout& tl = sys.test;
  const int nq = bases.vol.size();
  const int nrt_u = trial.n_rt();      // trial RT_p dim
  const int ns_u = trial.n_scalar();   // trial Q_p dim
  const int nrt_v = tl.n_rt();         // test RT_r dim
  const int ns_v = tl.n_scalar();      // test Q_r dim

  // geometry and physical tabulations at the volume quadrature points
  Eigen::VectorXd jw(nq);
  Eigen::MatrixXd PXu(nrt_u, nq), PYu(nrt_u, nq), DIVu(nrt_u, nq);
  Eigen::MatrixXd PXv(nrt_v, nq), PYv(nrt_v, nq), DIVv(nrt_v, nq);
  Eigen::MatrixXd GXv(ns_v, nq), GYv(ns_v, nq);
  Eigen::Matrix<double, 2, Eigen::Dynamic> xq(2, nq);
  for (int q = 0; q < nq; ++q) {
    GeometryAt g = map_to_physical(elem, bases.vol.points(q, 0), bases.vol.points(q, 1));
    if (g.detJ <= 0.0) throw std::runtime_error("build_element_system: detJ <= 0 at quadrature point");
    jw[q] = bases.vol.weights[q] * g.detJ;
    xq.col(q) = g.x;
    double inv_det = 1.0 / g.detJ;
    // Piola map of RT values, divergence scales by 1/detJ
    PXu.col(q) = (g.J(0, 0) * bases.trial_rt.values_x.col(q) +
                  g.J(0, 1) * bases.trial_rt.values_y.col(q)) * inv_det;
    PYu.col(q) = (g.J(1, 0) * bases.trial_rt.values_x.col(q) +
                  g.J(1, 1) * bases.trial_rt.values_y.col(q)) * inv_det;
    DIVu.col(q) = bases.trial_rt.divergence.col(q) * inv_det;
    PXv.col(q) = (g.J(0, 0) * bases.test_rt.values_x.col(q) +
                  g.J(0, 1) * bases.test_rt.values_y.col(q)) * inv_det;
    PYv.col(q) = (g.J(1, 0) * bases.test_rt.values_x.col(q) +
                  g.J(1, 1) * bases.test_rt.values_y.col(q)) * inv_det;
    DIVv.col(q) = bases.test_rt.divergence.col(q) * inv_det;
    // physical gradients of the scalar test basis: grad = J^{-T} grad_hat
    double i00 = g.J(1, 1) * inv_det, i01 = -g.J(0, 1) * inv_det;
    double i10 = -g.J(1, 0) * inv_det, i11 = g.J(0, 0) * inv_det;
    // J^{-1} = [[i00,i01],[i10,i11]], J^{-T} rows: (i00,i10), (i01,i11)
    GXv.col(q) = i00 * bases.test_scalar.grad_xi.col(q) + i10 * bases.test_scalar.grad_eta.col(q);
    GYv.col(q) = i01 * bases.test_scalar.grad_xi.col(q) + i11 * bases.test_scalar.grad_eta.col(q);
  }
  const Eigen::MatrixXd& Zv = bases.test_scalar.values;   // (ns_v x nq)
  const Eigen::MatrixXd& Uu = bases.trial_scalar.values;  // (ns_u x nq)

  auto weighted = [&](const Eigen::MatrixXd& A) -> Eigen::MatrixXd {
    return A * jw.asDiagonal();
  };

  sys.B.setZero(tl.n_test(), trial.n_total());
  auto block = [&](int row, int nrow, int col, int ncol) {
    return sys.B.block(row, col, nrow, ncol);
  };

  const double shear = mat.t * mat.t / mat.kappa;  // kappa^{-1} t^2
  const double nufac = mat.nu / (1.0 + mat.nu);

  // (V, kappa^{-1} t^2 q + grad z - phi)
  block(tl.off_q(), nrt_v, trial.off_V(), nrt_u) +=
      shear * (weighted(PXv) * PXu.transpose() + weighted(PYv) * PYu.transpose());
  block(tl.off_z(), ns_v, trial.off_V(), nrt_u) +=
      weighted(GXv) * PXu.transpose() + weighted(GYv) * PYu.transpose();
  block(tl.off_phi(0), ns_v, trial.off_V(), nrt_u) -= weighted(Zv) * PXu.transpose();
  block(tl.off_phi(1), ns_v, trial.off_V(), nrt_u) -= weighted(Zv) * PYu.transpose();

  // (M, C^{-1} tau + grad phi + s J); M rows are Piola-mapped RT members
  {
    Eigen::MatrixXd full = weighted(PXv) * PXu.transpose() + weighted(PYv) * PYu.transpose();
    Eigen::MatrixXd xx = weighted(PXv) * PXu.transpose();
    Eigen::MatrixXd xy = weighted(PXv) * PYu.transpose();
    Eigen::MatrixXd yx = weighted(PYv) * PXu.transpose();
    Eigen::MatrixXd yy = weighted(PYv) * PYu.transpose();
    // C^{-1} tau : M = 6 [ tau:M - nu/(1+nu) tr(tau) tr(M) ]
    block(tl.off_tau(0), nrt_v, trial.off_M(0), nrt_u) += 6.0 * (full - nufac * xx);
    block(tl.off_tau(0), nrt_v, trial.off_M(1), nrt_u) += -6.0 * nufac * xy;
    block(tl.off_tau(1), nrt_v, trial.off_M(0), nrt_u) += -6.0 * nufac * yx;
    block(tl.off_tau(1), nrt_v, trial.off_M(1), nrt_u) += 6.0 * (full - nufac * yy);
  }
  for (int row = 0; row < 2; ++row) {
    // (M, grad phi): row c of M pairs with grad phi_c
    block(tl.off_phi(row), ns_v, trial.off_M(row), nrt_u) +=
        weighted(GXv) * PXu.transpose() + weighted(GYv) * PYu.transpose();
  }
  // (M, s J): J = [[0,1],[-1,0]], so M : sJ = s (M_12 - M_21)
  block(tl.off_s(), ns_v, trial.off_M(0), nrt_u) += weighted(Zv) * PYu.transpose();
  block(tl.off_s(), ns_v, trial.off_M(1), nrt_u) -= weighted(Zv) * PXu.transpose();

  // (w, div q)
  block(tl.off_q(), nrt_v, trial.off_w(), ns_u) += weighted(DIVv) * Uu.transpose();
  // (psi, q + div tau)
  block(tl.off_q(), nrt_v, trial.off_psi(0), ns_u) += weighted(PXv) * Uu.transpose();
  block(tl.off_q(), nrt_v, trial.off_psi(1), ns_u) += weighted(PYv) * Uu.transpose();
  block(tl.off_tau(0), nrt_v, trial.off_psi(0), ns_u) += weighted(DIVv) * Uu.transpose();
  block(tl.off_tau(1), nrt_v, trial.off_psi(1), ns_u) += weighted(DIVv) * Uu.transpose();
  // (r J, tau) = r (tau_12 - tau_21)
  block(tl.off_tau(0), nrt_v, trial.off_r(), ns_u) += weighted(PYv) * Uu.transpose();
  block(tl.off_tau(1), nrt_v, trial.off_r(), ns_u) -= weighted(PXv) * Uu.transpose();

  // boundary terms; reference-edge quadrature throughout. For the
  // Piola-mapped test fields, q.n ds on the physical edge equals
  // qhat.nhat dshat, so no metric factor appears in the w_hat/psi_hat
  // pairings. The flux pairings carry the physical edge measure L/2, the
  // outward sign of this element and the Legendre parity factor of a
  // reversed edge.
  const int nqe = bases.seg.size();
  const int nflux = trial.p + 1;
  for (int e = 0; e < 4; ++e) {
    Eigen::MatrixXd wseg = bases.seg.weights.asDiagonal();
    Eigen::MatrixXd ntrace_w = bases.test_rt_ntrace[e] * wseg;   // (nrt_v x nqe)
    const Eigen::MatrixXd& loop = bases.trace_nodal[e];          // (n_loop x nqe)

    block(tl.off_q(), nrt_v, trial.n_interior() + trial.toff_what(), trial.n_loop()) -=
        ntrace_w * loop.transpose();
    block(tl.off_tau(0), nrt_v, trial.n_interior() + trial.toff_psihat(0), trial.n_loop()) -=
        ntrace_w * loop.transpose();
    block(tl.off_tau(1), nrt_v, trial.n_interior() + trial.toff_psihat(1), trial.n_loop()) -=
        ntrace_w * loop.transpose();

    const Edge& edge = mesh.edges[elem.edge_ids[e]];
    double half_len = 0.5 * edge.length;
    double sigma_out = elem.outward_sign[e];
    double sigma_rev = elem.edge_reversed[e] ? -1.0 : 1.0;
    Eigen::MatrixXd scalar_w = bases.test_scalar_edge[e] * wseg;  // (ns_v x nqe)
    Eigen::MatrixXd flux = bases.trace_legendre;                  // (p+1 x nqe)
    double parity = 1.0;
    for (int k = 0; k < nflux; ++k) {
      flux.row(k) *= parity;  // P_k(sigma s) = sigma^k P_k(s)
      parity *= sigma_rev;
    }
    Eigen::MatrixXd pair = sigma_out * half_len * (scalar_w * flux.transpose());  // (ns_v x p+1)
    block(tl.off_z(), ns_v, trial.n_interior() + trial.toff_vn() + e * nflux, nflux) -= pair;
    block(tl.off_phi(0), ns_v, trial.n_interior() + trial.toff_mn(0) + e * nflux, nflux) -= pair;
    block(tl.off_phi(1), ns_v, trial.n_interior() + trial.toff_mn(1) + e * nflux, nflux) -= pair;
  }

  // Gram blocks of the broken standard test norm
  sys.G_rt = weighted(PXv) * PXv.transpose() + weighted(PYv) * PYv.transpose() +
             weighted(DIVv) * DIVv.transpose();
  sys.G_h1 = weighted(Zv) * Zv.transpose() + weighted(GXv) * GXv.transpose() +
             weighted(GYv) * GYv.transpose();
  sys.G_l2 = weighted(Zv) * Zv.transpose();
  sys.llt_rt.compute(sys.G_rt);
  sys.llt_h1.compute(sys.G_h1);
  sys.llt_l2.compute(sys.G_l2);
  if (sys.llt_rt.info() != Eigen::Success || sys.llt_h1.info() != Eigen::Success ||
      sys.llt_l2.info() != Eigen::Success)
    throw std::runtime_error("build_element_system: test Gram matrix not positive definite");

  // load vector: (p, z)_K and, when present, (f_phi, phi)_K
  sys.load.setZero(tl.n_test());
  for (int q = 0; q < nq; ++q) {
    double f = load.transverse ? load.transverse(xq(0, q), xq(1, q)) : 0.0;
    if (f != 0.0) sys.load.segment(tl.off_z(), ns_v) += (jw[q] * f) * Zv.col(q);
    if (load.rotational) {
      Eigen::Vector2d fr = load.rotational(xq(0, q), xq(1, q));
      sys.load.segment(tl.off_phi(0), ns_v) += (jw[q] * fr[0]) * Zv.col(q);
      sys.load.segment(tl.off_phi(1), ns_v) += (jw[q] * fr[1]) * Zv.col(q);
    }
  }

  return sys;
}

/// Statically condensed element: Schur complement over the trace columns
/// plus the data needed to recover the interior fields afterwards.
struct CondensedElement {
  Eigen::MatrixXd S;        // n_trace x n_trace
  Eigen::VectorXd f;        // n_trace
  Eigen::MatrixXd recover;  // n_interior x n_trace
  Eigen::VectorXd offset;   // n_interior; u_int = offset - recover * u_trace
};

inline CondensedElement condense_element(const ElementSystem& sys) {
  Eigen::MatrixXd N;
  Eigen::VectorXd g;
  sys.normal_equations(N, g);
  int ni = sys.trial.n_interior();
  int nt = sys.trial.n_trace();
  Eigen::MatrixXd Nii = N.topLeftCorner(ni, ni);
  Eigen::MatrixXd Nit = N.topRightCorner(ni, nt);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(Nii);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("condense_element: singular interior block");
  CondensedElement out;
  out.recover = ldlt.solve(Nit);
  out.offset = ldlt.solve(g.head(ni));
  out.S = N.bottomRightCorner(nt, nt) - Nit.transpose() * out.recover;
  out.f = g.tail(nt) - Nit.transpose() * out.offset;
  return out;
}

}  // namespace dpgplate

#endif
