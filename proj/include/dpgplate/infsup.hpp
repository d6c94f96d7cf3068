#ifndef DPGPLATE_INFSUP_HPP
#define DPGPLATE_INFSUP_HPP

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "dpgplate/assembly.hpp"

namespace dpgplate {

/// Empirical probe of the discrete inf-sup constant: the square root of
/// the smallest generalized eigenvalue of the uncondensed normal-equation
/// matrix against a trial-space L2 mass norm, on the subspace with the
/// clamped traces removed. Dense eigensolve; intended for small meshes
/// only.
inline double infsup_estimate(const Mesh& mesh, const TrialLayout& layout,
                              const MaterialParams& mat, const ElementBases& bases) {
  SkeletonIndexer idx(mesh, layout);
  int ni = layout.n_interior();
  int ndof = mesh.n_elements() * ni + idx.n_total();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(ndof, ndof);
  Eigen::MatrixXd Mass = Eigen::MatrixXd::Zero(ndof, ndof);
  int skel0 = mesh.n_elements() * ni;

  LoadFunction no_load;
  int nq = bases.vol.size();
  int nrt = layout.n_rt(), ns = layout.n_scalar();
  int nloop = layout.n_loop();

  for (int el = 0; el < mesh.n_elements(); ++el) {
    ElementSystem esys = build_element_system(mesh, el, layout, mat, bases, no_load);
    Eigen::MatrixXd GinvB = esys.B;
    esys.apply_gram_inverse(GinvB);
    Eigen::MatrixXd N_el = esys.B.transpose() * GinvB;
    // global index of every local trial column
    std::vector<int> gmap(layout.n_total());
    for (int i = 0; i < ni; ++i) gmap[i] = el * ni + i;
    auto tmap = idx.local_to_global(mesh, el, layout);
    for (int i = 0; i < layout.n_trace(); ++i)
      gmap[ni + i] = tmap[i] < 0 ? -1 : skel0 + tmap[i];
    for (int i = 0; i < layout.n_total(); ++i) {
      if (gmap[i] < 0) continue;
      for (int j = 0; j < layout.n_total(); ++j)
        if (gmap[j] >= 0) A(gmap[i], gmap[j]) += N_el(i, j);
    }

    // field mass: physical Piola components for the RT blocks
    Eigen::MatrixXd PX(nrt, nq), PY(nrt, nq);
    Eigen::VectorXd jw(nq);
    for (int q = 0; q < nq; ++q) {
      GeometryAt g = map_to_physical(mesh.elements[el], bases.vol.points(q, 0), bases.vol.points(q, 1));
      jw[q] = g.detJ * bases.vol.weights[q];
      for (int i = 0; i < nrt; ++i) {
        Eigen::Vector2d phys =
            g.J * Eigen::Vector2d(bases.trial_rt.values_x(i, q), bases.trial_rt.values_y(i, q)) /
            g.detJ;
        PX(i, q) = phys[0];
        PY(i, q) = phys[1];
      }
    }
    Eigen::MatrixXd mass_rt =
        PX * jw.asDiagonal() * PX.transpose() + PY * jw.asDiagonal() * PY.transpose();
    Eigen::MatrixXd mass_sc =
        bases.trial_scalar.values * jw.asDiagonal() * bases.trial_scalar.values.transpose();
    int rt_off[3] = {layout.off_V(), layout.off_M(0), layout.off_M(1)};
    for (int b : rt_off) Mass.block(el * ni + b, el * ni + b, nrt, nrt) += mass_rt;
    int sc_off[4] = {layout.off_w(), layout.off_psi(0), layout.off_psi(1), layout.off_r()};
    for (int b : sc_off) Mass.block(el * ni + b, el * ni + b, ns, ns) += mass_sc;

    // trace mass: broken edge-wise L2 over the element boundary
    for (int e = 0; e < 4; ++e) {
      double half_len = 0.5 * mesh.edges[mesh.elements[el].edge_ids[e]].length;
      Eigen::MatrixXd loop_mass = half_len * bases.trace_nodal[e] *
                                  bases.seg.weights.asDiagonal() *
                                  bases.trace_nodal[e].transpose();
      int loop_off[3] = {layout.toff_what(), layout.toff_psihat(0), layout.toff_psihat(1)};
      for (int b : loop_off)
        for (int i = 0; i < nloop; ++i) {
          if (gmap[ni + b + i] < 0) continue;
          for (int j = 0; j < nloop; ++j)
            if (gmap[ni + b + j] >= 0) Mass(gmap[ni + b + i], gmap[ni + b + j]) += loop_mass(i, j);
        }
      int flux_off[3] = {layout.toff_vn(), layout.toff_mn(0), layout.toff_mn(1)};
      for (int b : flux_off)
        for (int k = 0; k <= layout.p; ++k) {
          int gi = gmap[ni + b + e * (layout.p + 1) + k];
          Mass(gi, gi) += half_len * 2.0 / (2 * k + 1);
        }
    }
  }

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, Mass,
                                                                Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (eig.info() != Eigen::Success) throw std::runtime_error("infsup_estimate: eigensolver failed");
  double lmin = eig.eigenvalues().minCoeff();
  if (lmin < 0 && lmin > -1e-12) lmin = 0.0;
  return std::sqrt(lmin);
}

}  // namespace dpgplate

#endif
