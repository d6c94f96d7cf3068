#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dpgplate/quadrature.hpp"

using namespace dpgplate;

namespace {
double integrate_monomial_1d(int n, int k) {
  Eigen::VectorXd x, w;
  gauss_legendre(n, x, w);
  double s = 0;
  for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], k);
  return s;
}
}  // namespace

TEST_CASE("Gauss-Legendre weights sum to the interval length") {
  for (int n = 1; n <= 10; ++n) {
    Eigen::VectorXd x, w;
    gauss_legendre(n, x, w);
    REQUIRE(w.sum() == Catch::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("Gauss-Legendre is exact through degree 2n-1") {
  for (int n = 1; n <= 8; ++n) {
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
      REQUIRE(integrate_monomial_1d(n, k) == Catch::Approx(exact).margin(1e-14));
    }
  }
}

TEST_CASE("Gauss-Legendre known 2-point rule") {
  Eigen::VectorXd x, w;
  gauss_legendre(2, x, w);
  REQUIRE(x[0] == Catch::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  REQUIRE(x[1] == Catch::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  REQUIRE(w[0] == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Gauss-Lobatto nodes include endpoints and are symmetric") {
  for (int n = 2; n <= 8; ++n) {
    Eigen::VectorXd x = gauss_lobatto_nodes(n);
    REQUIRE(x.size() == n);
    REQUIRE(x[0] == Catch::Approx(-1.0).margin(1e-15));
    REQUIRE(x[n - 1] == Catch::Approx(1.0).margin(1e-15));
    for (int i = 0; i < n; ++i) {
      REQUIRE(x[i] == Catch::Approx(-x[n - 1 - i]).margin(1e-13));
      if (i > 0) REQUIRE(x[i] > x[i - 1]);
    }
  }
  // classical 4-point rule nodes at +-sqrt(1/5)
  Eigen::VectorXd x4 = gauss_lobatto_nodes(4);
  REQUIRE(x4[1] == Catch::Approx(-std::sqrt(0.2)).epsilon(1e-13));
}

TEST_CASE("tensor-product square rule integrates mixed monomials") {
  QuadratureRule rule = quadrature_rule(4, QuadratureRule::Domain::Square);
  REQUIRE(rule.size() == 16);
  for (int a = 0; a <= 5; ++a) {
    for (int b = 0; b <= 5; ++b) {
      double s = 0;
      for (int q = 0; q < rule.size(); ++q)
        s += rule.weights[q] * std::pow(rule.points(q, 0), a) * std::pow(rule.points(q, 1), b);
      double exact = (a % 2 || b % 2) ? 0.0 : 4.0 / ((a + 1) * (b + 1));
      REQUIRE(s == Catch::Approx(exact).margin(1e-13));
    }
  }
}

TEST_CASE("segment rule points are ordered and inside (-1,1)") {
  QuadratureRule rule = quadrature_rule(6, QuadratureRule::Domain::Segment);
  REQUIRE(rule.size() == 6);
  for (int q = 0; q < 6; ++q) {
    REQUIRE(std::abs(rule.points(q, 0)) < 1.0);
    if (q > 0) REQUIRE(rule.points(q, 0) > rule.points(q - 1, 0));
  }
}
