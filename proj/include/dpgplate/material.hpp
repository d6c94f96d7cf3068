#ifndef DPGPLATE_MATERIAL_HPP
#define DPGPLATE_MATERIAL_HPP

#include <stdexcept>

#include <Eigen/Dense>

namespace dpgplate {

/// Plate parameters after rescaling the static quantities; the elastic
/// moduli enter only through the Poisson ratio.
struct MaterialParams {
  double t = 0.1;       // thickness relative to the unit diameter
  double nu = 0.3;      // Poisson ratio
  double kappa = 5.0 / 6.0;  // shear correction factor

  void validate() const {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("thickness must lie in (0,1]");
    if (!(nu >= 0.0 && nu < 0.5)) throw std::invalid_argument("nu must lie in [0,0.5)");
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  }
};

/// Inverse bending constitutive map: C^{-1} tau = 6 (tau - nu/(1+nu) tr(tau) I).
inline Eigen::Matrix2d compliance_inverse(const Eigen::Matrix2d& tau, double nu) {
  double trace_term = nu / (1.0 + nu) * tau.trace();
  Eigen::Matrix2d out = 6.0 * (tau - trace_term * Eigen::Matrix2d::Identity());
  return out;
}

/// Forward bending map C eps = (1/6) (eps + nu/(1-nu) tr(eps) I), the
/// inverse of compliance_inverse.
inline Eigen::Matrix2d bending_stiffness(const Eigen::Matrix2d& eps, double nu) {
  double trace_term = nu / (1.0 - nu) * eps.trace();
  return (eps + trace_term * Eigen::Matrix2d::Identity()) / 6.0;
}

}  // namespace dpgplate

#endif
