#ifndef DPGPLATE_FIELD_SAMPLER_HPP
#define DPGPLATE_FIELD_SAMPLER_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dpgplate/assembly.hpp"

namespace dpgplate {

/// Newton inversion of the bilinear element map. Returns reference
/// coordinates when the point lies in the element (tolerance on the
/// reference box), nothing otherwise.
inline std::optional<Eigen::Vector2d> invert_bilinear(const QuadElement& elem, double x, double y,
                                                      double tol = 1e-12) {
  Eigen::Vector2d ref(0.0, 0.0);
  for (int it = 0; it < 50; ++it) {
    GeometryAt g = map_to_physical(elem, ref[0], ref[1]);
    Eigen::Vector2d res = g.x - Eigen::Vector2d(x, y);
    if (res.norm() < 1e-14) break;
    ref -= g.J.inverse() * res;
  }
  GeometryAt g = map_to_physical(elem, ref[0], ref[1]);
  if ((g.x - Eigen::Vector2d(x, y)).norm() > 1e-10) return std::nullopt;
  if (std::abs(ref[0]) > 1.0 + tol || std::abs(ref[1]) > 1.0 + tol) return std::nullopt;
  ref[0] = std::clamp(ref[0], -1.0, 1.0);
  ref[1] = std::clamp(ref[1], -1.0, 1.0);
  return ref;
}

struct LocatedPoint {
  int elem = -1;
  Eigen::Vector2d ref;
};

/// Locate the element containing a physical point. The structured grid
/// column is known from x (vertical mesh lines are never distorted);
/// the neighbouring rows of the y-guess cover the trapezoidal offsets.
inline LocatedPoint locate_point(const Mesh& mesh, double x, double y) {
  int N = mesh.N;
  int i = std::clamp(static_cast<int>(std::floor(x * N)), 0, N - 1);
  int j0 = std::clamp(static_cast<int>(std::floor(y * N)), 0, N - 1);
  for (int dj : {0, -1, 1}) {
    int j = j0 + dj;
    if (j < 0 || j >= N) continue;
    int el = j * N + i;
    if (auto ref = invert_bilinear(mesh.elements[el], x, y)) return {el, *ref};
  }
  for (int el = 0; el < mesh.n_elements(); ++el)  // fallback sweep
    if (auto ref = invert_bilinear(mesh.elements[el], x, y)) return {el, *ref};
  throw std::runtime_error("locate_point: no element contains (" + std::to_string(x) + ", " +
                           std::to_string(y) + ")");
}

/// All field quantities sampled on a uniform res x res grid over the
/// unit square; entry (iy, ix) belongs to (x_i, y_j) with x fastest.
struct SampledFields {
  int resolution = 0;
  Eigen::MatrixXd V1, V2, M11, M12, M21, M22, w, psi1, psi2, r;
};

inline SampledFields sample_fields(const Mesh& mesh, const TrialLayout& layout,
                                   const ElementBases& bases, const SolutionFields& sol,
                                   int resolution) {
  if (resolution < 2) throw std::invalid_argument("sample_fields: resolution must be >= 2");
  SampledFields out;
  out.resolution = resolution;
  for (Eigen::MatrixXd* m :
       {&out.V1, &out.V2, &out.M11, &out.M12, &out.M21, &out.M22, &out.w, &out.psi1, &out.psi2,
        &out.r})
    m->resize(resolution, resolution);
  for (int iy = 0; iy < resolution; ++iy) {
    double y = static_cast<double>(iy) / (resolution - 1);
    for (int ix = 0; ix < resolution; ++ix) {
      double x = static_cast<double>(ix) / (resolution - 1);
      LocatedPoint loc = locate_point(mesh, x, y);
      FieldValues v = evaluate_fields(mesh, loc.elem, layout, bases, sol.interior[loc.elem],
                                      loc.ref[0], loc.ref[1]);
      out.V1(iy, ix) = v.V[0];
      out.V2(iy, ix) = v.V[1];
      out.M11(iy, ix) = v.M(0, 0);
      out.M12(iy, ix) = v.M(0, 1);
      out.M21(iy, ix) = v.M(1, 0);
      out.M22(iy, ix) = v.M(1, 1);
      out.w(iy, ix) = v.w;
      out.psi1(iy, ix) = v.psi[0];
      out.psi2(iy, ix) = v.psi[1];
      out.r(iy, ix) = v.r;
    }
  }
  return out;
}

}  // namespace dpgplate

#endif
