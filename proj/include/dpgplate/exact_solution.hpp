#ifndef DPGPLATE_EXACT_SOLUTION_HPP
#define DPGPLATE_EXACT_SOLUTION_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "dpgplate/element_system.hpp"
#include "dpgplate/material.hpp"

namespace dpgplate {

/// Bivariate polynomial with coefficient matrix c(i,j) of x^i y^j.
/// Small helper so benchmark fields carry exact derivatives.
class Poly2 {
 public:
  Poly2() : c_(Eigen::MatrixXd::Zero(1, 1)) {}
  explicit Poly2(double a) : c_(Eigen::MatrixXd::Constant(1, 1, a)) {}
  explicit Poly2(const Eigen::MatrixXd& c) : c_(c) {}

  static Poly2 x() {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 1);
    c(1, 0) = 1.0;
    return Poly2(c);
  }
  static Poly2 y() {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(1, 2);
    c(0, 1) = 1.0;
    return Poly2(c);
  }

  double operator()(double x, double y) const {
    // Horner in x of Horner-in-y rows
    double acc = 0.0;
    for (int i = static_cast<int>(c_.rows()) - 1; i >= 0; --i) {
      double row = 0.0;
      for (int j = static_cast<int>(c_.cols()) - 1; j >= 0; --j) row = row * y + c_(i, j);
      acc = acc * x + row;
    }
    return acc;
  }

  Poly2 dx() const {
    if (c_.rows() == 1) return Poly2(0.0);
    Eigen::MatrixXd d(c_.rows() - 1, c_.cols());
    for (int i = 1; i < c_.rows(); ++i) d.row(i - 1) = i * c_.row(i);
    return Poly2(d);
  }
  Poly2 dy() const {
    if (c_.cols() == 1) return Poly2(0.0);
    Eigen::MatrixXd d(c_.rows(), c_.cols() - 1);
    for (int j = 1; j < c_.cols(); ++j) d.col(j - 1) = j * c_.col(j);
    return Poly2(d);
  }

  friend Poly2 operator+(const Poly2& a, const Poly2& b) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(std::max(a.c_.rows(), b.c_.rows()),
                                              std::max(a.c_.cols(), b.c_.cols()));
    c.topLeftCorner(a.c_.rows(), a.c_.cols()) += a.c_;
    c.topLeftCorner(b.c_.rows(), b.c_.cols()) += b.c_;
    return Poly2(c);
  }
  friend Poly2 operator-(const Poly2& a, const Poly2& b) { return a + (-1.0) * b; }
  friend Poly2 operator*(double s, const Poly2& a) { return Poly2(Eigen::MatrixXd(s * a.c_)); }
  friend Poly2 operator*(const Poly2& a, const Poly2& b) {
    Eigen::MatrixXd c =
        Eigen::MatrixXd::Zero(a.c_.rows() + b.c_.rows() - 1, a.c_.cols() + b.c_.cols() - 1);
    for (int i = 0; i < a.c_.rows(); ++i)
      for (int j = 0; j < a.c_.cols(); ++j)
        if (a.c_(i, j) != 0.0) c.block(i, j, b.c_.rows(), b.c_.cols()) += a.c_(i, j) * b.c_;
    return Poly2(c);
  }

  const Eigen::MatrixXd& coeffs() const { return c_; }

 private:
  Eigen::MatrixXd c_;
};

inline Poly2 pow(const Poly2& a, int n) {
  Poly2 out(1.0);
  for (int k = 0; k < n; ++k) out = out * a;
  return out;
}

/// Clamped-plate benchmark pressure for a unit square, as a direct
/// transcription of the published two-term polynomial.
inline double chinosi_load(double x, double y, double nu) {
  double bx = 5 * x * x - 5 * x + 1;
  double by = 5 * y * y - 5 * y + 1;
  double term1 =
      12 * y * (y - 1) * bx * (2 * y * y * (y - 1) * (y - 1) + x * (x - 1) * by);
  double term2 =
      12 * x * (x - 1) * by * (2 * x * x * (x - 1) * (x - 1) + y * (y - 1) * bx);
  return (term1 + term2) / (12.0 * (1.0 - nu * nu));
}

/// Thrown when candidate closed-form fields fail the residual check;
/// callers must not fall back to unverified fields.
struct OracleFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Closed-form field bundle for error measurement and oracles.
struct PlateFields {
  std::function<double(double, double)> w;
  std::function<Eigen::Vector2d(double, double)> psi;
  std::function<Eigen::Vector2d(double, double)> V;
  std::function<Eigen::Matrix2d(double, double)> M;
  std::function<double(double, double)> r;
};

/// Independent check that a field bundle solves the first-order
/// Reissner-Mindlin system for the given pressure: all derivatives are
/// taken by fourth-order finite differences (step h with Richardson
/// cancellation), never from the closed forms under test. Returns the
/// max absolute residual of the four equations over an n x n interior
/// grid.
inline double residual_oracle(const PlateFields& f,
                              const std::function<double(double, double)>& pressure,
                              const MaterialParams& mat, int n = 101, double h = 1e-5) {
  auto d1 = [h](const std::function<double(double)>& g) {
    return (8.0 * (g(h) - g(-h)) - (g(2 * h) - g(-2 * h))) / (12.0 * h);
  };
  double max_res = 0.0;
  auto track = [&max_res](double v) { max_res = std::max(max_res, std::abs(v)); };
  double inv_shear = mat.t * mat.t / mat.kappa;
  for (int i = 1; i <= n; ++i) {
    double x = static_cast<double>(i) / (n + 1);
    for (int j = 1; j <= n; ++j) {
      double y = static_cast<double>(j) / (n + 1);
      auto dx = [&](auto&& g) { return d1([&](double e) { return g(x + e, y); }); };
      auto dy = [&](auto&& g) { return d1([&](double e) { return g(x, y + e); }); };

      Eigen::Vector2d grad_w(dx(f.w), dy(f.w));
      Eigen::Vector2d psi = f.psi(x, y);
      Eigen::Vector2d V = f.V(x, y);
      Eigen::Vector2d shear_eq = inv_shear * V - grad_w + psi;
      track(shear_eq[0]);
      track(shear_eq[1]);

      Eigen::Matrix2d grad_psi;
      grad_psi << dx([&](double a, double b) { return f.psi(a, b)[0]; }),
          dy([&](double a, double b) { return f.psi(a, b)[0]; }),
          dx([&](double a, double b) { return f.psi(a, b)[1]; }),
          dy([&](double a, double b) { return f.psi(a, b)[1]; });
      Eigen::Matrix2d J;
      J << 0, 1, -1, 0;
      Eigen::Matrix2d bend_eq =
          compliance_inverse(f.M(x, y), mat.nu) - grad_psi + f.r(x, y) * J;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) track(bend_eq(a, b));

      double div_V = dx([&](double a, double b) { return f.V(a, b)[0]; }) +
                     dy([&](double a, double b) { return f.V(a, b)[1]; });
      track(-div_V - pressure(x, y));

      for (int row = 0; row < 2; ++row) {
        double div_M = dx([&](double a, double b) { return f.M(a, b)(row, 0); }) +
                       dy([&](double a, double b) { return f.M(a, b)(row, 1); });
        track(-div_M - V[row]);
      }
    }
  }
  return max_res;
}

/// Closed-form solution of the clamped-plate benchmark, stored as exact
/// bivariate polynomials. The rotation family is fixed; the overall
/// amplitude and the thickness-dependent deflection correction are
/// calibrated by two scalar least-squares solves against the published
/// pressure and the shear equation, then gated by the finite-difference
/// residual oracle.
class ChinosiSolution {
 public:
  double amplitude = 0.0;   // overall scale fitted to the pressure
  double correction = 0.0;  // coefficient of the t^2 deflection term
  double oracle_residual = 0.0;

  static ChinosiSolution calibrated(const MaterialParams& mat, int oracle_grid = 101) {
    ChinosiSolution sol;
    sol.mat_ = mat;
    Poly2 X = Poly2::x(), Y = Poly2::y(), one(1.0);
    Poly2 gx = pow(X, 3) * pow(X - one, 3);
    Poly2 gy = pow(Y, 3) * pow(Y - one, 3);
    Poly2 gx_d = gx.dx(), gy_d = gy.dy();
    Poly2 ux = (1.0 / 6.0) * gx.dx().dx();  // x(x-1)(5x^2-5x+1)
    Poly2 uy = (1.0 / 6.0) * gy.dy().dy();

    // unit-amplitude rotation family and derived moments/shear
    sol.psi_[0] = (1.0 / 3.0) * gy * gx_d;
    sol.psi_[1] = (1.0 / 3.0) * gx * gy_d;
    double nuf = mat.nu / (1.0 - mat.nu);
    Poly2 e11 = sol.psi_[0].dx(), e22 = sol.psi_[1].dy();
    Poly2 e12 = 0.5 * (sol.psi_[0].dy() + sol.psi_[1].dx());
    Poly2 tr = e11 + e22;
    sol.M_[0][0] = (1.0 / 6.0) * (e11 + nuf * tr);
    sol.M_[1][1] = (1.0 / 6.0) * (e22 + nuf * tr);
    sol.M_[0][1] = sol.M_[1][0] = (1.0 / 6.0) * e12;
    sol.V_[0] = (-1.0) * (sol.M_[0][0].dx() + sol.M_[0][1].dy());
    sol.V_[1] = (-1.0) * (sol.M_[1][0].dx() + sol.M_[1][1].dy());
    sol.r_ = 0.5 * (sol.psi_[0].dy() - sol.psi_[1].dx());

    // amplitude: least-squares match of -div V against the pressure
    Poly2 unit_load = (-1.0) * (sol.V_[0].dx() + sol.V_[1].dy());
    double num = 0.0, den = 0.0;
    int nfit = 40;
    for (int i = 1; i <= nfit; ++i)
      for (int j = 1; j <= nfit; ++j) {
        double x = static_cast<double>(i) / (nfit + 1), y = static_cast<double>(j) / (nfit + 1);
        double q = unit_load(x, y);
        num += q * chinosi_load(x, y, mat.nu);
        den += q * q;
      }
    sol.amplitude = num / den;
    for (auto& p : sol.psi_) p = sol.amplitude * p;
    for (auto& row : sol.M_)
      for (auto& p : row) p = sol.amplitude * p;
    for (auto& p : sol.V_) p = sol.amplitude * p;
    sol.r_ = sol.amplitude * sol.r_;

    // deflection: w = A/3 g(x)g(y) + correction * (g(y)u(x)+g(x)u(y)),
    // correction fitted so that grad w = psi + t^2/kappa V
    Poly2 w_base = (sol.amplitude / 3.0) * gx * gy;
    Poly2 w_corr = gy * ux + gx * uy;
    double inv_shear = mat.t * mat.t / mat.kappa;
    Poly2 res_x0 = w_base.dx() - sol.psi_[0] - inv_shear * sol.V_[0];
    Poly2 res_y0 = w_base.dy() - sol.psi_[1] - inv_shear * sol.V_[1];
    Poly2 corr_dx = w_corr.dx(), corr_dy = w_corr.dy();
    double cnum = 0.0, cden = 0.0;
    for (int i = 1; i <= nfit; ++i)
      for (int j = 1; j <= nfit; ++j) {
        double x = static_cast<double>(i) / (nfit + 1), y = static_cast<double>(j) / (nfit + 1);
        double dxv = corr_dx(x, y), dyv = corr_dy(x, y);
        cnum -= res_x0(x, y) * dxv + res_y0(x, y) * dyv;
        cden += dxv * dxv + dyv * dyv;
      }
    sol.correction = cnum / cden;
    sol.w_ = w_base + sol.correction * w_corr;

    sol.oracle_residual = residual_oracle(
        sol.fields(), [nu = mat.nu](double x, double y) { return chinosi_load(x, y, nu); },
        mat, oracle_grid);
    if (!(sol.oracle_residual < 1e-8))
      throw OracleFailure("benchmark solution failed the residual oracle, max residual " +
                               std::to_string(sol.oracle_residual));
    return sol;
  }

  PlateFields fields() const {
    PlateFields f;
    f.w = [*this](double x, double y) { return w_(x, y); };
    f.psi = [*this](double x, double y) { return Eigen::Vector2d(psi_[0](x, y), psi_[1](x, y)); };
    f.V = [*this](double x, double y) { return Eigen::Vector2d(V_[0](x, y), V_[1](x, y)); };
    f.M = [*this](double x, double y) {
      Eigen::Matrix2d m;
      m << M_[0][0](x, y), M_[0][1](x, y), M_[1][0](x, y), M_[1][1](x, y);
      return m;
    };
    f.r = [*this](double x, double y) { return r_(x, y); };
    return f;
  }

  LoadFunction load() const {
    LoadFunction l;
    l.transverse = [nu = mat_.nu](double x, double y) { return chinosi_load(x, y, nu); };
    return l;
  }

 private:
  MaterialParams mat_;
  Poly2 w_, r_;
  Poly2 psi_[2], V_[2], M_[2][2];
};

/// Polynomial solution whose fields and traces lie in the discrete
/// trial spaces of degree p >= 2: deflection and both rotations equal
/// x(1-x)y(1-y). Moment balance does not hold for this choice, so the
/// matching load carries a rotational part.
struct ManufacturedSolution {
  PlateFields fields;
  LoadFunction load;
};

inline ManufacturedSolution make_manufactured(const MaterialParams& mat) {
  Poly2 X = Poly2::x(), Y = Poly2::y(), one(1.0);
  Poly2 bump = X * (one - X) * Y * (one - Y);

  struct Store {
    Poly2 w, psi0, psi1, V0, V1, M[2][2], r, fz, fphi0, fphi1;
  };
  auto s = std::make_shared<Store>();
  s->w = bump;
  s->psi0 = bump;
  s->psi1 = bump;
  double shear = mat.kappa / (mat.t * mat.t);
  s->V0 = shear * (bump.dx() - bump);
  s->V1 = shear * (bump.dy() - bump);
  double nuf = mat.nu / (1.0 - mat.nu);
  Poly2 e11 = s->psi0.dx(), e22 = s->psi1.dy();
  Poly2 e12 = 0.5 * (s->psi0.dy() + s->psi1.dx());
  Poly2 tr = e11 + e22;
  s->M[0][0] = (1.0 / 6.0) * (e11 + nuf * tr);
  s->M[1][1] = (1.0 / 6.0) * (e22 + nuf * tr);
  s->M[0][1] = s->M[1][0] = (1.0 / 6.0) * e12;
  s->r = 0.5 * (s->psi0.dy() - s->psi1.dx());
  s->fz = (-1.0) * (s->V0.dx() + s->V1.dy());
  s->fphi0 = (-1.0) * (s->M[0][0].dx() + s->M[0][1].dy()) - s->V0;
  s->fphi1 = (-1.0) * (s->M[1][0].dx() + s->M[1][1].dy()) - s->V1;

  ManufacturedSolution out;
  out.fields.w = [s](double x, double y) { return s->w(x, y); };
  out.fields.psi = [s](double x, double y) { return Eigen::Vector2d(s->psi0(x, y), s->psi1(x, y)); };
  out.fields.V = [s](double x, double y) { return Eigen::Vector2d(s->V0(x, y), s->V1(x, y)); };
  out.fields.M = [s](double x, double y) {
    Eigen::Matrix2d m;
    m << s->M[0][0](x, y), s->M[0][1](x, y), s->M[1][0](x, y), s->M[1][1](x, y);
    return m;
  };
  out.fields.r = [s](double x, double y) { return s->r(x, y); };
  out.load.transverse = [s](double x, double y) { return s->fz(x, y); };
  out.load.rotational = [s](double x, double y) {
    return Eigen::Vector2d(s->fphi0(x, y), s->fphi1(x, y));
  };
  return out;
}

}  // namespace dpgplate

#endif
