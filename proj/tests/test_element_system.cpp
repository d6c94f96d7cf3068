#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dpgplate/element_system.hpp"

using namespace dpgplate;

namespace {

LoadFunction no_load() { return LoadFunction{}; }

ElementSystem build(const Mesh& mesh, int el, int p, const LoadFunction& load,
                    int nq_override = 0) {
  TrialLayout trial{p};
  MaterialParams mat;
  int nq = nq_override > 0 ? nq_override : p + 5;
  return build_element_system(mesh, el, trial, mat, element_bases(p, p + 3, nq), load);
}

}  // namespace

TEST_CASE("element system dimensions at p = 1") {
  Mesh mesh = generate_mesh(2, MeshKind::Uniform);
  ElementSystem sys = build(mesh, 0, 1, no_load());
  REQUIRE(sys.test.n_test() == 280);
  REQUIRE(sys.trial.n_total() == 100);
  REQUIRE(sys.B.rows() == 280);
  REQUIRE(sys.B.cols() == 100);
  REQUIRE(sys.G_rt.rows() == 60);
  REQUIRE(sys.G_h1.rows() == 25);
  REQUIRE(sys.G_l2.rows() == 25);
}

TEST_CASE("test Gram blocks are symmetric positive definite") {
  Mesh mesh = generate_mesh(2, MeshKind::Trapezoidal, 0.25);
  ElementSystem sys = build(mesh, 1, 1, no_load());
  for (const Eigen::MatrixXd* G : {&sys.G_rt, &sys.G_h1, &sys.G_l2}) {
    REQUIRE((*G - G->transpose()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*G, Eigen::EigenvaluesOnly);
    REQUIRE(es.eigenvalues().minCoeff() > 0.0);
  }
  // the dense assembly used for diagnostics matches the blocks
  Eigen::MatrixXd G = sys.gram_dense();
  REQUIRE((G - G.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  REQUIRE((G.topLeftCorner(60, 60) - sys.G_rt).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("divergence theorem: constant deflection pairs with the boundary flux") {
  // with w = 1 the shear rows reduce to (1, div q) = integral of qhat.nhat
  // over the reference boundary, independent of the element shape
  Mesh mesh = generate_mesh(2, MeshKind::Trapezoidal, 0.25);
  for (int el : {0, 3}) {
    int p = 1;
    const ElementBases& bases = element_bases(p, p + 3, p + 5);
    ElementSystem sys = build(mesh, el, p, no_load());
    Eigen::VectorXd u = Eigen::VectorXd::Zero(sys.trial.n_total());
    u.segment(sys.trial.off_w(), sys.trial.n_scalar()).setOnes();
    Eigen::VectorXd bu = sys.B * u;
    for (int i = 0; i < sys.test.n_rt(); ++i) {
      double boundary = 0;
      for (int e = 0; e < 4; ++e)
        for (int k = 0; k < bases.seg.size(); ++k)
          boundary += bases.seg.weights[k] * bases.test_rt_ntrace[e](i, k);
      REQUIRE(bu[sys.test.off_q() + i] == Catch::Approx(boundary).margin(1e-12));
    }
  }
}

TEST_CASE("constant antisymmetric moment drives only the symmetry rows") {
  // trial M = [[0,1],[-1,0]]: M_12 - M_21 = 2, so the s rows see 2 (s, 1)
  int p = 1;
  Mesh mesh = generate_mesh(2, MeshKind::Uniform);
  double h = 0.5;
  const ElementBases& bases = element_bases(p, p + 3, p + 5);
  ElementSystem sys = build(mesh, 0, p, no_load());
  // reference coefficients of a constant physical field under the Piola
  // map with J = (h/2) I: qhat = (h/2) q
  Eigen::VectorXd u = Eigen::VectorXd::Zero(sys.trial.n_total());
  for (int i = 0; i < sys.trial.n_rt(); ++i) {
    const auto& d = bases.trial_rt_dofs[i];
    if (d.comp == 1 && d.a == 0)  // row 1 of M: physical (0, 1)
      u[sys.trial.off_M(0) + i] = 0.5 * h;
    if (d.comp == 0 && d.b == 0)  // row 2 of M: physical (-1, 0)
      u[sys.trial.off_M(1) + i] = -0.5 * h;
  }
  Eigen::VectorXd bu = sys.B * u;
  // independent quadrature of 2 (s_i, 1) over the physical element
  double jac = 0.25 * h * h;
  for (int i = 0; i < sys.test.n_scalar(); ++i) {
    double expect = 0;
    for (int q = 0; q < bases.vol.size(); ++q)
      expect += 2.0 * jac * bases.vol.weights[q] * bases.test_scalar.values(i, q);
    REQUIRE(bu[sys.test.off_s() + i] == Catch::Approx(expect).margin(1e-12));
  }
  // the z rows pair with V and the fluxes only; both are zero here
  for (int i = 0; i < sys.test.n_scalar(); ++i)
    REQUIRE(bu[sys.test.off_z() + i] == Catch::Approx(0.0).margin(1e-13));
}

TEST_CASE("load vector") {
  Mesh mesh = generate_mesh(2, MeshKind::Trapezoidal, 0.25);
  SECTION("no load gives a zero vector") {
    ElementSystem sys = build(mesh, 0, 1, no_load());
    REQUIRE(sys.load.cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("constant pressure integrates to the element area") {
    LoadFunction load;
    load.transverse = [](double, double) { return 1.0; };
    ElementSystem sys = build(mesh, 0, 1, load);
    // sum over the z block against the partition of unity = integral of p
    double area = 0;
    {
      const ElementBases& bases = element_bases(1, 4, 6);
      for (int q = 0; q < bases.vol.size(); ++q) {
        GeometryAt g = map_to_physical(mesh.elements[0], bases.vol.points(q, 0),
                                       bases.vol.points(q, 1));
        area += bases.vol.weights[q] * g.detJ;
      }
    }
    REQUIRE(sys.load.segment(sys.test.off_z(), sys.test.n_scalar()).sum() ==
            Catch::Approx(area).epsilon(1e-12));
    REQUIRE(sys.load.segment(sys.test.off_q(), 3 * sys.test.n_rt()).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("smooth pressure is stable under quadrature refinement") {
    LoadFunction load;
    load.transverse = [](double x, double y) { return std::sin(3 * x) * std::exp(y); };
    ElementSystem coarse = build(mesh, 1, 1, load, 6);
    ElementSystem fine = build(mesh, 1, 1, load, 12);
    REQUIRE((coarse.load - fine.load).cwiseAbs().maxCoeff() < 1e-8);
  }
  SECTION("rotational load fills the phi rows") {
    LoadFunction load;
    load.rotational = [](double, double) { return Eigen::Vector2d(1.0, -2.0); };
    ElementSystem sys = build(mesh, 0, 1, load);
    double phi1 = sys.load.segment(sys.test.off_phi(0), sys.test.n_scalar()).sum();
    double phi2 = sys.load.segment(sys.test.off_phi(1), sys.test.n_scalar()).sum();
    REQUIRE(phi2 == Catch::Approx(-2.0 * phi1).epsilon(1e-12));
    REQUIRE(sys.load.segment(sys.test.off_z(), sys.test.n_scalar()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("B is exact at the default quadrature order on affine elements") {
  Mesh mesh = generate_mesh(2, MeshKind::Uniform);
  ElementSystem coarse = build(mesh, 2, 1, no_load(), 6);
  ElementSystem fine = build(mesh, 2, 1, no_load(), 12);
  REQUIRE((coarse.B - fine.B).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("normal equations match the dense least-squares form") {
  Mesh mesh = generate_mesh(2, MeshKind::Trapezoidal, 0.25);
  ElementSystem sys = build(mesh, 2, 1, no_load());
  Eigen::MatrixXd N;
  Eigen::VectorXd g;
  sys.normal_equations(N, g);
  REQUIRE((N - N.transpose()).cwiseAbs().maxCoeff() < 1e-10);

  Eigen::MatrixXd G = sys.gram_dense();
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  std::srand(7);
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::VectorXd u = Eigen::VectorXd::Random(sys.trial.n_total());
    Eigen::VectorXd bu = sys.B * u;
    double dense = bu.dot(llt.solve(bu));
    double fast = u.dot(N * u);
    REQUIRE(fast == Catch::Approx(dense).epsilon(1e-9));
    REQUIRE(fast >= 0.0);
  }
}

TEST_CASE("static condensation preserves the quadratic form") {
  Mesh mesh = generate_mesh(2, MeshKind::Trapezoidal, 0.25);
  ElementSystem sys = build(mesh, 3, 1, no_load());
  CondensedElement cond = condense_element(sys);
  int ni = sys.trial.n_interior(), nt = sys.trial.n_trace();
  REQUIRE(cond.S.rows() == nt);
  REQUIRE((cond.S - cond.S.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  // no load and no traces: the recovered interior is zero
  REQUIRE(cond.offset.cwiseAbs().maxCoeff() < 1e-14);

  Eigen::MatrixXd N;
  Eigen::VectorXd g;
  sys.normal_equations(N, g);
  std::srand(11);
  Eigen::VectorXd ut = Eigen::VectorXd::Random(nt);
  Eigen::VectorXd ui = cond.offset - cond.recover * ut;
  // interior equations hold exactly after recovery
  Eigen::VectorXd res = N.topLeftCorner(ni, ni) * ui + N.topRightCorner(ni, nt) * ut - g.head(ni);
  REQUIRE(res.cwiseAbs().maxCoeff() < 1e-9);
  // energy of the condensed form equals the full form at the recovered point
  Eigen::VectorXd full(ni + nt);
  full << ui, ut;
  REQUIRE(ut.dot(cond.S * ut) == Catch::Approx(full.dot(N * full)).epsilon(1e-8));
}

TEST_CASE("energy residual vanishes only at the least-squares solution") {
  Mesh mesh = generate_mesh(2, MeshKind::Uniform);
  LoadFunction load;
  load.transverse = [](double, double) { return 1.0; };
  ElementSystem sys = build(mesh, 0, 1, load);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(sys.trial.n_total());
  double at_zero = sys.energy_residual(zero);
  REQUIRE(at_zero > 0.0);
  Eigen::MatrixXd N;
  Eigen::VectorXd g;
  sys.normal_equations(N, g);
  // the one-element clamped problem: minimize over all trial dofs
  Eigen::VectorXd u = N.ldlt().solve(g);
  REQUIRE(sys.energy_residual(u) < at_zero);
}
