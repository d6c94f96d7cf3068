#ifndef DPGPLATE_QUADRATURE_HPP
#define DPGPLATE_QUADRATURE_HPP

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace dpgplate {

/// Gauss-Legendre and Gauss-Lobatto point sets on the reference segment
/// [-1,1], plus their tensor products on the reference square [-1,1]^2.
struct QuadratureRule {
  enum class Domain { Segment, Square };

  Domain domain;
  Eigen::MatrixXd points;   // n x 1 (segment) or n x 2 (square)
  Eigen::VectorXd weights;  // positive, summing to the reference measure

  int size() const { return static_cast<int>(weights.size()); }
};

namespace detail {

// Legendre polynomial P_n and derivative at x, by the three-term recurrence.
inline std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

inline double legendre_value(int n, double x) {
  if (n == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace detail

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1,1],
/// exact for polynomials of degree 2n-1. Newton iteration from the
/// Chebyshev initial guess.
inline void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = -std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = detail::legendre_with_derivative(n, x);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    auto [p, dp] = detail::legendre_with_derivative(n, x);
    (void)p;
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // enforce exact symmetry of the point set
  for (int i = 0; i < n / 2; ++i) {
    double x = 0.5 * (nodes[n - 1 - i] - nodes[i]);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    double w = 0.5 * (weights[i] + weights[n - 1 - i]);
    weights[i] = weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

/// Gauss-Lobatto nodes on [-1,1] (n >= 2 points, endpoints included).
/// Interior nodes are the roots of P'_{n-1}.
inline Eigen::VectorXd gauss_lobatto_nodes(int n) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto_nodes: n must be >= 2");
  Eigen::VectorXd x(n);
  x[0] = -1.0;
  x[n - 1] = 1.0;
  for (int i = 1; i < n - 1; ++i) {
    // initial guess: Chebyshev-Lobatto node
    double t = -std::cos(M_PI * i / (n - 1));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = detail::legendre_with_derivative(n - 1, t);
      // f = dp (derivative of P_{n-1}); f' from the Legendre ODE:
      // (1-t^2) P'' = 2 t P' - n(n-1) P
      double f = dp;
      double fp = (2.0 * t * dp - (n - 1) * n * p) / (1.0 - t * t);
      double dt = f / fp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = t;
  }
  for (int i = 0; i < n / 2; ++i) {
    double s = 0.5 * (x[n - 1 - i] - x[i]);
    x[i] = -s;
    x[n - 1 - i] = s;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  return x;
}

/// Gauss-Legendre rule with n points per direction on the requested domain.
inline QuadratureRule quadrature_rule(int n, QuadratureRule::Domain domain) {
  Eigen::VectorXd x, w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.domain = domain;
  if (domain == QuadratureRule::Domain::Segment) {
    rule.points = x;
    rule.weights = w;
  } else {
    rule.points.resize(n * n, 2);
    rule.weights.resize(n * n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        int k = j * n + i;  // x fastest
        rule.points(k, 0) = x[i];
        rule.points(k, 1) = x[j];
        rule.weights[k] = w[i] * w[j];
      }
    }
  }
  return rule;
}

}  // namespace dpgplate

#endif
