#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dpgplate/basis.hpp"
#include "dpgplate/quadrature.hpp"

using namespace dpgplate;

TEST_CASE("legendre_all matches closed forms") {
  Eigen::VectorXd v, d;
  for (double x : {-0.8, -0.2, 0.0, 0.6, 1.0}) {
    legendre_all(4, x, v, d);
    REQUIRE(v[0] == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(v[1] == Catch::Approx(x).margin(1e-15));
    REQUIRE(v[2] == Catch::Approx(0.5 * (3 * x * x - 1)).margin(1e-14));
    REQUIRE(v[3] == Catch::Approx(0.5 * (5 * x * x * x - 3 * x)).margin(1e-14));
    REQUIRE(d[2] == Catch::Approx(3 * x).margin(1e-14));
    REQUIRE(d[3] == Catch::Approx(0.5 * (15 * x * x - 3)).margin(1e-13));
  }
}

TEST_CASE("Lagrange1D is nodal and reproduces polynomials") {
  Eigen::VectorXd nodes = gauss_lobatto_nodes(4);
  Lagrange1D basis(nodes);
  Eigen::VectorXd v, d;
  for (int j = 0; j < 4; ++j) {
    basis.eval(nodes[j], v, d);
    for (int i = 0; i < 4; ++i)
      REQUIRE(v[i] == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-13));
  }
  // degree-3 space reproduces x^3 exactly: interpolate then re-evaluate
  for (double x : {-0.9, 0.15, 0.77}) {
    basis.eval(x, v, d);
    double interp = 0, dinterp = 0;
    for (int i = 0; i < 4; ++i) {
      interp += v[i] * std::pow(nodes[i], 3);
      dinterp += d[i] * std::pow(nodes[i], 3);
    }
    REQUIRE(interp == Catch::Approx(x * x * x).margin(1e-13));
    REQUIRE(dinterp == Catch::Approx(3 * x * x).margin(1e-12));
  }
}

TEST_CASE("scalar basis dimensions, partition of unity and gradients") {
  QuadratureRule rule = quadrature_rule(5, QuadratureRule::Domain::Square);
  for (int r = 0; r <= 4; ++r) {
    ScalarBasisSet set = scalar_basis(r, rule);
    REQUIRE(set.dim() == (r + 1) * (r + 1));
    REQUIRE(set.values.rows() == set.dim());
    for (int q = 0; q < rule.size(); ++q) {
      REQUIRE(set.values.col(q).sum() == Catch::Approx(1.0).margin(1e-13));
      REQUIRE(set.grad_xi.col(q).sum() == Catch::Approx(0.0).margin(1e-12));
      REQUIRE(set.grad_eta.col(q).sum() == Catch::Approx(0.0).margin(1e-12));
    }
  }
}

TEST_CASE("RT basis dimensions and divergence compatibility") {
  QuadratureRule rule = quadrature_rule(7, QuadratureRule::Domain::Square);
  for (int r = 0; r <= 4; ++r) {
    VectorBasisSet set = rt_basis(r, rule);
    REQUIRE(set.dim() == 2 * (r + 1) * (r + 2));
    REQUIRE(static_cast<int>(set.edge_of.size()) == set.dim());
    // first 4(r+1) members carry the edge traces
    for (int i = 0; i < set.dim(); ++i) {
      if (i < 4 * (r + 1))
        REQUIRE(set.edge_of[i] == i / (r + 1));
      else
        REQUIRE(set.edge_of[i] == -1);
    }

    // div RT_r lies in Q_r: its L2 projection onto Q_r reproduces it pointwise
    ScalarBasisSet q = scalar_basis(r, rule);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(q.dim(), q.dim());
    for (int k = 0; k < rule.size(); ++k)
      mass += rule.weights[k] * q.values.col(k) * q.values.col(k).transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(mass);
    for (int i = 0; i < set.dim(); ++i) {
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(q.dim());
      for (int k = 0; k < rule.size(); ++k)
        rhs += rule.weights[k] * set.divergence(i, k) * q.values.col(k);
      Eigen::VectorXd coeff = llt.solve(rhs);
      for (int k = 0; k < rule.size(); ++k)
        REQUIRE(coeff.dot(q.values.col(k)) == Catch::Approx(set.divergence(i, k)).margin(1e-11));
    }
  }
}

TEST_CASE("RT normal traces live on a single edge and have degree at most r") {
  int p = 2, r = 5, nq = 8;
  const ElementBases& bases = element_bases(p, r, nq);
  const VectorBasisSet& rt = bases.trial_rt;
  for (int e = 0; e < 4; ++e) {
    const Eigen::MatrixXd& tr = bases.trial_rt_ntrace[e];
    for (int i = 0; i < rt.dim(); ++i) {
      double mag = tr.row(i).cwiseAbs().maxCoeff();
      if (rt.edge_of[i] == e) {
        REQUIRE(mag > 0.1);
        // expand the trace in Legendre polynomials: degree <= p only
        for (int k = p + 1; k <= p + 3; ++k) {
          double proj = 0;
          Eigen::VectorXd lv, ld;
          for (int s = 0; s < bases.seg.size(); ++s) {
            legendre_all(k, bases.seg.points(s, 0), lv, ld);
            proj += bases.seg.weights[s] * tr(i, s) * lv[k];
          }
          REQUIRE(proj == Catch::Approx(0.0).margin(1e-12));
        }
      } else {
        REQUIRE(mag < 1e-13);
      }
    }
  }
}

TEST_CASE("Legendre trace tabulation is orthogonal") {
  const ElementBases& bases = element_bases(1, 4, 6);
  int n = static_cast<int>(bases.trace_legendre.rows());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double s = 0;
      for (int k = 0; k < bases.seg.size(); ++k)
        s += bases.seg.weights[k] * bases.trace_legendre(a, k) * bases.trace_legendre(b, k);
      double exact = (a == b) ? 2.0 / (2 * a + 1) : 0.0;
      REQUIRE(s == Catch::Approx(exact).margin(1e-13));
    }
  }
}

TEST_CASE("boundary-loop trace basis: dimension, partition of unity, continuity") {
  for (int p : {1, 2, 3}) {
    const ElementBases& bases = element_bases(p, p + 3, p + 5);
    REQUIRE(bases.n_loop() == 4 * (p + 1));
    for (int e = 0; e < 4; ++e) {
      const Eigen::MatrixXd& tab = bases.trace_nodal[e];
      REQUIRE(tab.rows() == bases.n_loop());
      for (int k = 0; k < bases.seg.size(); ++k)
        REQUIRE(tab.col(k).sum() == Catch::Approx(1.0).margin(1e-12));
      // only the edge's own endpoints and interior nodes contribute
      for (int i = 0; i < bases.n_loop(); ++i) {
        bool owns = (i == e) || (i == (e + 1) % 4) ||
                    (i >= 4 + e * p && i < 4 + (e + 1) * p);
        if (!owns) REQUIRE(tab.row(i).cwiseAbs().maxCoeff() < 1e-14);
      }
    }
  }
}

TEST_CASE("pointwise evaluation matches the tabulated values") {
  const ElementBases& bases = element_bases(2, 5, 7);
  Eigen::VectorXd sv, gx, ge, vx, vy, dv;
  for (int q : {0, 3, 11}) {
    double xi = bases.vol.points(q, 0), eta = bases.vol.points(q, 1);
    bases.eval_trial_scalar(xi, eta, sv, &gx, &ge);
    REQUIRE((sv - bases.trial_scalar.values.col(q)).cwiseAbs().maxCoeff() < 1e-13);
    REQUIRE((gx - bases.trial_scalar.grad_xi.col(q)).cwiseAbs().maxCoeff() < 1e-13);
    REQUIRE((ge - bases.trial_scalar.grad_eta.col(q)).cwiseAbs().maxCoeff() < 1e-13);
    bases.eval_trial_rt(xi, eta, vx, vy, dv);
    REQUIRE((vx - bases.trial_rt.values_x.col(q)).cwiseAbs().maxCoeff() < 1e-13);
    REQUIRE((vy - bases.trial_rt.values_y.col(q)).cwiseAbs().maxCoeff() < 1e-13);
    REQUIRE((dv - bases.trial_rt.divergence.col(q)).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("trace basis descriptors") {
  EdgeBasisSet disc = trace_basis(2, EdgeBasisSet::Continuity::Discontinuous);
  REQUIRE(disc.dim == 12);
  EdgeBasisSet cont = trace_basis(2, EdgeBasisSet::Continuity::VertexContinuous);
  REQUIRE(cont.dim == 8);
}
