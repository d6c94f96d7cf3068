#ifndef DPGPLATE_BASIS_HPP
#define DPGPLATE_BASIS_HPP

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "dpgplate/quadrature.hpp"

namespace dpgplate {

/// Values and derivatives of all Legendre polynomials P_0..P_r at x.
inline void legendre_all(int r, double x, Eigen::VectorXd& values, Eigen::VectorXd& derivs) {
  values.resize(r + 1);
  derivs.resize(r + 1);
  values[0] = 1.0;
  derivs[0] = 0.0;
  if (r == 0) return;
  values[1] = x;
  derivs[1] = 1.0;
  for (int k = 2; k <= r; ++k) {
    values[k] = ((2 * k - 1) * x * values[k - 1] - (k - 1) * values[k - 2]) / k;
    derivs[k] = derivs[k - 2] + (2 * k - 1) * values[k - 1];
  }
}

/// 1D nodal (Lagrange) basis on a given node set, stored as Legendre
/// series per basis function for stable evaluation anywhere.
class Lagrange1D {
 public:
  Lagrange1D() = default;

  explicit Lagrange1D(const Eigen::VectorXd& nodes) : nodes_(nodes) {
    int n = static_cast<int>(nodes.size());
    Eigen::MatrixXd V(n, n);  // V(i,k) = P_k(node_i)
    Eigen::VectorXd vals, ders;
    for (int i = 0; i < n; ++i) {
      legendre_all(n - 1, nodes[i], vals, ders);
      V.row(i) = vals.transpose();
    }
    coef_ = V.inverse();  // column i: Legendre coefficients of basis fn i? see below
    // We want basis fn i with fn_i(node_j) = delta_ij: fn_i = sum_k c_ki P_k
    // with V c_i = e_i, so c_i is column i of V^{-1}.
  }

  int size() const { return static_cast<int>(nodes_.size()); }
  const Eigen::VectorXd& nodes() const { return nodes_; }

  /// values[i] = fn_i(x), derivs[i] = fn_i'(x)
  void eval(double x, Eigen::VectorXd& values, Eigen::VectorXd& derivs) const {
    int n = size();
    Eigen::VectorXd pv, pd;
    legendre_all(n - 1, x, pv, pd);
    values = coef_.transpose() * pv;
    derivs = coef_.transpose() * pd;
  }

 private:
  Eigen::VectorXd nodes_;
  Eigen::MatrixXd coef_;  // (n x n), column i = Legendre coefficients of fn i
};

/// Tensor-product nodal basis for Q_r on [-1,1]^2, nodal at Gauss-Lobatto
/// points, tabulated at the points of a square quadrature rule.
struct ScalarBasisSet {
  int degree = 0;
  Eigen::MatrixXd values;    // (dim x nq)
  Eigen::MatrixXd grad_xi;   // (dim x nq)
  Eigen::MatrixXd grad_eta;  // (dim x nq)

  int dim() const { return (degree + 1) * (degree + 1); }
};

/// Raviart-Thomas basis RT_r = P_{r+1,r} x P_{r,r+1} on [-1,1]^2.
/// The leading 4(r+1) members each have nonzero normal trace on exactly
/// one reference edge; the remaining members have zero normal trace.
struct VectorBasisSet {
  int degree = 0;
  Eigen::MatrixXd values_x;    // (dim x nq)
  Eigen::MatrixXd values_y;    // (dim x nq)
  Eigen::MatrixXd divergence;  // (dim x nq), reference divergence
  std::vector<int> edge_of;    // local edge carrying the normal trace, -1 for interior

  int dim() const { return 2 * (degree + 1) * (degree + 2); }
};

/// Polynomial bases on the reference element boundary.
///   Discontinuous: Legendre of degree r per edge (4(r+1) members on dK).
///   VertexContinuous: nodal of degree r on the boundary loop with shared
///   vertex nodes (4r members on dK).
struct EdgeBasisSet {
  enum class Continuity { Discontinuous, VertexContinuous };
  int degree = 0;
  Continuity continuity = Continuity::Discontinuous;
  int dim = 0;
};

namespace detail {

struct RTDof {
  int comp;  // 0: x-component P_{r+1,r}, 1: y-component P_{r,r+1}
  int a;     // comp 0: nodal index in xi;  comp 1: Legendre degree in xi
  int b;     // comp 0: Legendre degree in eta; comp 1: nodal index in eta
  int edge;  // local edge with nonzero normal trace, -1 interior
};

inline std::vector<RTDof> rt_dof_list(int r) {
  std::vector<RTDof> dofs;
  // edge members first: e0 (eta=-1), e1 (xi=1), e2 (eta=1), e3 (xi=-1)
  for (int j = 0; j <= r; ++j) dofs.push_back({1, j, 0, 0});
  for (int j = 0; j <= r; ++j) dofs.push_back({0, r + 1, j, 1});
  for (int j = 0; j <= r; ++j) dofs.push_back({1, j, r + 1, 2});
  for (int j = 0; j <= r; ++j) dofs.push_back({0, 0, j, 3});
  for (int a = 1; a <= r; ++a)
    for (int b = 0; b <= r; ++b) dofs.push_back({0, a, b, -1});
  for (int a = 0; a <= r; ++a)
    for (int b = 1; b <= r; ++b) dofs.push_back({1, a, b, -1});
  return dofs;
}

// Reference-square edge parametrizations, counterclockwise, s in [-1,1].
inline void edge_point(int edge, double s, double& xi, double& eta) {
  switch (edge) {
    case 0: xi = s;  eta = -1; break;
    case 1: xi = 1;  eta = s;  break;
    case 2: xi = -s; eta = 1;  break;
    default: xi = -1; eta = -s; break;
  }
}

inline Eigen::Vector2d edge_normal(int edge) {
  switch (edge) {
    case 0: return {0, -1};
    case 1: return {1, 0};
    case 2: return {0, 1};
    default: return {-1, 0};
  }
}

}  // namespace detail

/// Nodal Q_r basis tabulated at the points of a square rule.
inline ScalarBasisSet scalar_basis(int r, const QuadratureRule& rule) {
  if (r < 0) throw std::invalid_argument("scalar_basis: degree must be >= 0");
  ScalarBasisSet set;
  set.degree = r;
  int dim = (r + 1) * (r + 1);
  int nq = rule.size();
  set.values.resize(dim, nq);
  set.grad_xi.resize(dim, nq);
  set.grad_eta.resize(dim, nq);
  Lagrange1D l1d(r == 0 ? Eigen::VectorXd::Zero(1) : gauss_lobatto_nodes(r + 1));
  Eigen::VectorXd vx, dx, vy, dy;
  for (int q = 0; q < nq; ++q) {
    l1d.eval(rule.points(q, 0), vx, dx);
    l1d.eval(rule.points(q, 1), vy, dy);
    for (int j = 0; j <= r; ++j) {
      for (int i = 0; i <= r; ++i) {
        int k = j * (r + 1) + i;
        set.values(k, q) = vx[i] * vy[j];
        set.grad_xi(k, q) = dx[i] * vy[j];
        set.grad_eta(k, q) = vx[i] * dy[j];
      }
    }
  }
  return set;
}

/// RT_r basis tabulated at the points of a square rule.
inline VectorBasisSet rt_basis(int r, const QuadratureRule& rule) {
  if (r < 0) throw std::invalid_argument("rt_basis: degree must be >= 0");
  VectorBasisSet set;
  set.degree = r;
  auto dofs = detail::rt_dof_list(r);
  int dim = static_cast<int>(dofs.size());
  int nq = rule.size();
  set.values_x.setZero(dim, nq);
  set.values_y.setZero(dim, nq);
  set.divergence.setZero(dim, nq);
  set.edge_of.resize(dim);
  Lagrange1D nodal(gauss_lobatto_nodes(r + 2));  // degree r+1
  Eigen::VectorXd nvx, ndx, nvy, ndy, lvx, ldx, lvy, ldy;
  for (int q = 0; q < nq; ++q) {
    double xi = rule.points(q, 0), eta = rule.points(q, 1);
    nodal.eval(xi, nvx, ndx);
    nodal.eval(eta, nvy, ndy);
    legendre_all(r, xi, lvx, ldx);
    legendre_all(r, eta, lvy, ldy);
    for (int i = 0; i < dim; ++i) {
      const auto& d = dofs[i];
      if (d.comp == 0) {
        set.values_x(i, q) = nvx[d.a] * lvy[d.b];
        set.divergence(i, q) = ndx[d.a] * lvy[d.b];
      } else {
        set.values_y(i, q) = lvx[d.a] * nvy[d.b];
        set.divergence(i, q) = lvx[d.a] * ndy[d.b];
      }
    }
  }
  for (int i = 0; i < dim; ++i) set.edge_of[i] = dofs[i].edge;
  return set;
}

/// Descriptor for the boundary trace bases used by the flux and trace
/// unknowns. Tabulation lives in ElementBases.
inline EdgeBasisSet trace_basis(int r, EdgeBasisSet::Continuity continuity) {
  if (r < 0) throw std::invalid_argument("trace_basis: degree must be >= 0");
  EdgeBasisSet set;
  set.degree = r;
  set.continuity = continuity;
  set.dim = (continuity == EdgeBasisSet::Continuity::Discontinuous) ? 4 * (r + 1) : 4 * r;
  return set;
}

/// All reference-element tabulations needed to assemble one element:
/// trial bases of degree p, enriched test bases of degree r, trace bases,
/// at an n-point-per-direction Gauss rule (volume and edges).
class ElementBases {
 public:
  ElementBases(int p, int r, int nq)
      : p_(p),
        r_(r),
        vol(quadrature_rule(nq, QuadratureRule::Domain::Square)),
        seg(quadrature_rule(nq, QuadratureRule::Domain::Segment)),
        trial_scalar_1d(p == 0 ? Eigen::VectorXd::Zero(1) : gauss_lobatto_nodes(p + 1)),
        test_scalar_1d(gauss_lobatto_nodes(r + 1)),
        trial_rt_nodal_1d(gauss_lobatto_nodes(p + 2)),
        test_rt_nodal_1d(gauss_lobatto_nodes(r + 2)),
        loop_nodal_1d(gauss_lobatto_nodes(p + 2)) {  // trace displacement degree p+1
    trial_scalar = scalar_basis(p, vol);
    test_scalar = scalar_basis(r, vol);
    trial_rt = rt_basis(p, vol);
    test_rt = rt_basis(r, vol);
    trial_rt_dofs = detail::rt_dof_list(p);
    test_rt_dofs = detail::rt_dof_list(r);

    int nqe = seg.size();
    for (int e = 0; e < 4; ++e) {
      trial_scalar_edge[e] = tabulate_scalar_edge(p, trial_scalar_1d, e);
      test_scalar_edge[e] = tabulate_scalar_edge(r, test_scalar_1d, e);
      trial_rt_ntrace[e] = tabulate_rt_ntrace(p, trial_rt_dofs, trial_rt_nodal_1d, e);
      test_rt_ntrace[e] = tabulate_rt_ntrace(r, test_rt_dofs, test_rt_nodal_1d, e);
      trace_nodal[e] = tabulate_loop_nodal(e);
    }
    trace_legendre.resize(p + 1, nqe);
    Eigen::VectorXd lv, ld;
    for (int k = 0; k < nqe; ++k) {
      legendre_all(p, seg.points(k, 0), lv, ld);
      trace_legendre.col(k) = lv;
    }
  }

  int p() const { return p_; }
  int r() const { return r_; }
  int n_loop() const { return 4 * (p_ + 1); }  // vertex-continuous degree p+1 on dK

  /// Q_p values (and optionally reference gradients) at one reference point.
  void eval_trial_scalar(double xi, double eta, Eigen::VectorXd& values,
                         Eigen::VectorXd* gxi = nullptr, Eigen::VectorXd* geta = nullptr) const {
    eval_scalar(trial_scalar_1d, p_, xi, eta, values, gxi, geta);
  }

  /// RT_p reference values and divergence at one reference point.
  void eval_trial_rt(double xi, double eta, Eigen::VectorXd& vx, Eigen::VectorXd& vy,
                     Eigen::VectorXd& div) const {
    eval_rt(trial_rt_dofs, trial_rt_nodal_1d, p_, xi, eta, vx, vy, div);
  }

  const QuadratureRule vol;
  const QuadratureRule seg;

  ScalarBasisSet trial_scalar, test_scalar;
  VectorBasisSet trial_rt, test_rt;
  std::vector<detail::RTDof> trial_rt_dofs, test_rt_dofs;

  // per local edge: (dim x nqe) tabulations in the local edge parameter
  std::array<Eigen::MatrixXd, 4> trial_scalar_edge, test_scalar_edge;
  std::array<Eigen::MatrixXd, 4> trial_rt_ntrace, test_rt_ntrace;   // qhat . nhat
  std::array<Eigen::MatrixXd, 4> trace_nodal;                       // boundary-loop nodal basis
  Eigen::MatrixXd trace_legendre;                                   // P_0..P_p at seg points

  Lagrange1D trial_scalar_1d, test_scalar_1d;
  Lagrange1D trial_rt_nodal_1d, test_rt_nodal_1d;
  Lagrange1D loop_nodal_1d;  // p+2 Gauss-Lobatto nodes, polynomial degree p+1

 private:
  static void eval_scalar(const Lagrange1D& l1d, int r, double xi, double eta,
                          Eigen::VectorXd& values, Eigen::VectorXd* gxi, Eigen::VectorXd* geta) {
    Eigen::VectorXd vx, dx, vy, dy;
    l1d.eval(xi, vx, dx);
    l1d.eval(eta, vy, dy);
    int dim = (r + 1) * (r + 1);
    values.resize(dim);
    if (gxi) gxi->resize(dim);
    if (geta) geta->resize(dim);
    for (int j = 0; j <= r; ++j) {
      for (int i = 0; i <= r; ++i) {
        int k = j * (r + 1) + i;
        values[k] = vx[i] * vy[j];
        if (gxi) (*gxi)[k] = dx[i] * vy[j];
        if (geta) (*geta)[k] = vx[i] * dy[j];
      }
    }
  }

  static void eval_rt(const std::vector<detail::RTDof>& dofs, const Lagrange1D& nodal, int r,
                      double xi, double eta, Eigen::VectorXd& vx, Eigen::VectorXd& vy,
                      Eigen::VectorXd& div) {
    Eigen::VectorXd nvx, ndx, nvy, ndy, lvx, ldx, lvy, ldy;
    nodal.eval(xi, nvx, ndx);
    nodal.eval(eta, nvy, ndy);
    legendre_all(r, xi, lvx, ldx);
    legendre_all(r, eta, lvy, ldy);
    int dim = static_cast<int>(dofs.size());
    vx.setZero(dim);
    vy.setZero(dim);
    div.setZero(dim);
    for (int i = 0; i < dim; ++i) {
      const auto& d = dofs[i];
      if (d.comp == 0) {
        vx[i] = nvx[d.a] * lvy[d.b];
        div[i] = ndx[d.a] * lvy[d.b];
      } else {
        vy[i] = lvx[d.a] * nvy[d.b];
        div[i] = lvx[d.a] * ndy[d.b];
      }
    }
  }

  Eigen::MatrixXd tabulate_scalar_edge(int r, const Lagrange1D& l1d, int edge) const {
    int nqe = seg.size();
    Eigen::MatrixXd tab((r + 1) * (r + 1), nqe);
    Eigen::VectorXd values;
    for (int k = 0; k < nqe; ++k) {
      double xi, eta;
      detail::edge_point(edge, seg.points(k, 0), xi, eta);
      eval_scalar(l1d, r, xi, eta, values, nullptr, nullptr);
      tab.col(k) = values;
    }
    return tab;
  }

  Eigen::MatrixXd tabulate_rt_ntrace(int r, const std::vector<detail::RTDof>& dofs,
                                     const Lagrange1D& nodal, int edge) const {
    int nqe = seg.size();
    Eigen::MatrixXd tab(static_cast<int>(dofs.size()), nqe);
    Eigen::Vector2d n = detail::edge_normal(edge);
    Eigen::VectorXd vx, vy, div;
    for (int k = 0; k < nqe; ++k) {
      double xi, eta;
      detail::edge_point(edge, seg.points(k, 0), xi, eta);
      eval_rt(dofs, nodal, r, xi, eta, vx, vy, div);
      tab.col(k) = n[0] * vx + n[1] * vy;
    }
    return tab;
  }

  // Boundary-loop nodal basis of degree p+1: dofs 0..3 are the vertices,
  // dof 4 + e*p + m is interior node m+1 of local edge e. On edge e the
  // nonzero members are vertex e (endpoint s=-1), vertex e+1 (s=+1) and
  // the edge's own interior nodes.
  Eigen::MatrixXd tabulate_loop_nodal(int edge) const {
    int nqe = seg.size();
    int nloop = 4 * (p_ + 1);
    Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(nloop, nqe);
    Eigen::VectorXd v, d;
    for (int k = 0; k < nqe; ++k) {
      loop_nodal_1d.eval(seg.points(k, 0), v, d);
      tab(edge, k) = v[0];                      // vertex at s=-1
      tab((edge + 1) % 4, k) = v[p_ + 1];       // vertex at s=+1
      for (int m = 0; m < p_; ++m) tab(4 + edge * p_ + m, k) = v[m + 1];
    }
    return tab;
  }

  int p_, r_;
};

/// Shared tabulation cache; build-then-publish under a mutex so first
/// access from concurrent element loops is safe.
inline const ElementBases& element_bases(int p, int r, int nq) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<ElementBases>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(p, r, nq);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<ElementBases>(p, r, nq)).first;
  return *it->second;
}

}  // namespace dpgplate

#endif
