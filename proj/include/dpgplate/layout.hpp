#ifndef DPGPLATE_LAYOUT_HPP
#define DPGPLATE_LAYOUT_HPP

#include <stdexcept>
#include <vector>

#include "dpgplate/mesh.hpp"

namespace dpgplate {

/// Per-element unknown layout of the trial space of degree p.
///
/// Interior (field) columns, in order:
///   V in RT_p, M row 1 in RT_p, M row 2 in RT_p, w in Q_p,
///   psi_1 in Q_p, psi_2 in Q_p, r in Q_p.
/// Trace columns, in order:
///   w_hat (boundary-loop nodal, degree p+1), psi_hat_1, psi_hat_2,
///   V_n (Legendre degree p per edge), M_n1, M_n2.
struct TrialLayout {
  int p = 1;

  int n_rt() const { return 2 * (p + 1) * (p + 2); }
  int n_scalar() const { return (p + 1) * (p + 1); }
  int n_loop() const { return 4 * (p + 1); }       // vertex-continuous degree p+1 on dK
  int n_flux() const { return 4 * (p + 1); }       // Legendre degree p per edge

  // interior block offsets
  int off_V() const { return 0; }
  int off_M(int row) const { return n_rt() * (1 + row); }
  int off_w() const { return 3 * n_rt(); }
  int off_psi(int comp) const { return 3 * n_rt() + (1 + comp) * n_scalar(); }
  int off_r() const { return 3 * n_rt() + 3 * n_scalar(); }
  int n_interior() const { return 3 * n_rt() + 4 * n_scalar(); }

  // trace block offsets (relative to the start of the trace block)
  int toff_what() const { return 0; }
  int toff_psihat(int comp) const { return (1 + comp) * n_loop(); }
  int toff_vn() const { return 3 * n_loop(); }
  int toff_mn(int comp) const { return 3 * n_loop() + (1 + comp) * n_flux(); }
  int n_trace() const { return 3 * n_loop() + 3 * n_flux(); }

  int n_total() const { return n_interior() + n_trace(); }
};

/// Global numbering of the skeleton unknowns. Clamped boundary values of
/// w_hat and psi_hat (boundary vertices and boundary edges) carry no
/// global index.
///
/// The displacement traces are nodal: one dof per interior vertex plus p
/// interior Gauss-Lobatto nodes per interior edge, ordered along the
/// global edge direction. Fluxes are Legendre coefficients per edge in
/// the global edge parameter.
class SkeletonIndexer {
 public:
  SkeletonIndexer(const Mesh& mesh, const TrialLayout& layout) : p_(layout.p) {
    auto on_boundary = boundary_vertex_flags(mesh);
    vertex_dof_.assign(mesh.n_vertices(), -1);
    int next = 0;
    for (int v = 0; v < mesh.n_vertices(); ++v)
      if (!on_boundary[v]) vertex_dof_[v] = next++;
    n_interior_vertices_ = next;

    edge_dof_.assign(mesh.n_edges(), -1);
    int e_next = 0;
    for (int e = 0; e < mesh.n_edges(); ++e)
      if (!mesh.edges[e].is_boundary) edge_dof_[e] = e_next++;
    n_interior_edges_ = e_next;
    n_edges_ = mesh.n_edges();

    n_what_ = n_interior_vertices_ + p_ * n_interior_edges_;
    n_vn_per_edge_ = p_ + 1;
  }

  int n_what() const { return n_what_; }
  int n_psihat() const { return 2 * n_what_; }
  int n_vn() const { return n_vn_per_edge_ * n_edges_; }
  int n_mn() const { return 2 * n_vn(); }
  int n_total() const { return 3 * n_what_ + 3 * n_vn(); }

  // -1 when the dof is eliminated by the clamped boundary condition
  int what_vertex(int v) const { return vertex_dof_[v]; }
  int what_edge(int e, int node) const {
    if (edge_dof_[e] < 0) return -1;
    return n_interior_vertices_ + edge_dof_[e] * p_ + node;
  }
  int psihat_vertex(int comp, int v) const {
    int d = vertex_dof_[v];
    return d < 0 ? -1 : n_what_ * (1 + comp) + d;
  }
  int psihat_edge(int comp, int e, int node) const {
    int d = what_edge(e, node);
    return d < 0 ? -1 : n_what_ * (1 + comp) + d;
  }
  int vn(int e, int k) const { return 3 * n_what_ + e * n_vn_per_edge_ + k; }
  int mn(int comp, int e, int k) const { return 3 * n_what_ + n_vn() * (1 + comp) + e * n_vn_per_edge_ + k; }

  /// Map of an element's trace columns to global skeleton indices (-1 for
  /// clamped dofs). The w_hat/psi_hat part is a pure renumbering: for a
  /// locally reversed edge, interior node m maps to global node p-1-m
  /// (Gauss-Lobatto nodes are symmetric).
  std::vector<int> local_to_global(const Mesh& mesh, int elem_id, const TrialLayout& layout) const {
    const QuadElement& elem = mesh.elements[elem_id];
    std::vector<int> map(layout.n_trace(), -1);
    auto loop_map = [&](int comp, int base) {
      for (int v = 0; v < 4; ++v)
        map[base + v] = comp < 0 ? what_vertex(elem.vertex_ids[v])
                                 : psihat_vertex(comp, elem.vertex_ids[v]);
      for (int e = 0; e < 4; ++e) {
        for (int m = 0; m < p_; ++m) {
          int node = elem.edge_reversed[e] ? (p_ - 1 - m) : m;
          int g = comp < 0 ? what_edge(elem.edge_ids[e], node)
                           : psihat_edge(comp, elem.edge_ids[e], node);
          map[base + 4 + e * p_ + m] = g;
        }
      }
    };
    loop_map(-1, layout.toff_what());
    loop_map(0, layout.toff_psihat(0));
    loop_map(1, layout.toff_psihat(1));
    for (int e = 0; e < 4; ++e) {
      for (int k = 0; k <= p_; ++k) {
        map[layout.toff_vn() + e * (p_ + 1) + k] = vn(elem.edge_ids[e], k);
        map[layout.toff_mn(0) + e * (p_ + 1) + k] = mn(0, elem.edge_ids[e], k);
        map[layout.toff_mn(1) + e * (p_ + 1) + k] = mn(1, elem.edge_ids[e], k);
      }
    }
    return map;
  }

 private:
  int p_;
  int n_interior_vertices_ = 0;
  int n_interior_edges_ = 0;
  int n_edges_ = 0;
  int n_what_ = 0;
  int n_vn_per_edge_ = 0;
  std::vector<int> vertex_dof_;
  std::vector<int> edge_dof_;
};

}  // namespace dpgplate

#endif
