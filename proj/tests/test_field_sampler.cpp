#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dpgplate/errors.hpp"
#include "dpgplate/exact_solution.hpp"
#include "dpgplate/field_sampler.hpp"

using namespace dpgplate;

TEST_CASE("bilinear map inversion round-trips") {
  Mesh mesh = generate_mesh(3, MeshKind::Trapezoidal, 0.3);
  for (int el : {0, 4, 8}) {
    for (double xi : {-0.9, 0.0, 0.7}) {
      for (double eta : {-0.4, 0.8}) {
        GeometryAt g = map_to_physical(mesh.elements[el], xi, eta);
        auto ref = invert_bilinear(mesh.elements[el], g.x[0], g.x[1]);
        REQUIRE(ref.has_value());
        REQUIRE((*ref)[0] == Catch::Approx(xi).margin(1e-10));
        REQUIRE((*ref)[1] == Catch::Approx(eta).margin(1e-10));
      }
    }
  }
  // a point well outside the element is rejected
  REQUIRE_FALSE(invert_bilinear(mesh.elements[0], 0.9, 0.9).has_value());
}

TEST_CASE("point location covers the whole unit square") {
  for (MeshKind kind : {MeshKind::Uniform, MeshKind::Trapezoidal}) {
    Mesh mesh = generate_mesh(4, kind, 0.25);
    for (int i = 0; i <= 10; ++i) {
      for (int j = 0; j <= 10; ++j) {
        double x = i / 10.0, y = j / 10.0;
        LocatedPoint loc = locate_point(mesh, x, y);
        REQUIRE(loc.elem >= 0);
        GeometryAt g = map_to_physical(mesh.elements[loc.elem], loc.ref[0], loc.ref[1]);
        REQUIRE((g.x - Eigen::Vector2d(x, y)).norm() < 1e-9);
      }
    }
  }
}

TEST_CASE("sampled grids reproduce projected closed-form fields") {
  MaterialParams mat;
  ChinosiSolution exact = ChinosiSolution::calibrated(mat);
  TrialLayout layout{2};
  const ElementBases& bases = element_bases(2, 5, 7);
  // uniform mesh: the grid then shares the mirror symmetry of the fields
  Mesh mesh = generate_mesh(4, MeshKind::Uniform);
  SolutionFields proj = project_fields(mesh, layout, bases, exact.fields());
  int res = 9;
  SampledFields grid = sample_fields(mesh, layout, bases, proj, res);
  REQUIRE(grid.resolution == res);
  REQUIRE(grid.w.rows() == res);
  double max_err = 0.0, max_w = 0.0;
  for (int iy = 0; iy < res; ++iy) {
    double y = static_cast<double>(iy) / (res - 1);
    for (int ix = 0; ix < res; ++ix) {
      double x = static_cast<double>(ix) / (res - 1);
      max_err = std::max(max_err, std::abs(grid.w(iy, ix) - exact.fields().w(x, y)));
      max_w = std::max(max_w, std::abs(exact.fields().w(x, y)));
    }
  }
  // element-wise Q_2 projection of the smooth deflection on h = 1/4
  REQUIRE(max_w > 0.0);
  REQUIRE(max_err < 0.05 * max_w);
  // corners carry the clamped deflection up to projection error
  REQUIRE(std::abs(grid.w(0, 0)) < 1e-2 * max_w);
  REQUIRE(std::abs(grid.w(res - 1, res - 1)) < 1e-2 * max_w);
  // the exact solution is symmetric across the diagonal; so is the mesh
  for (int iy = 0; iy < res; ++iy)
    for (int ix = 0; ix < res; ++ix) {
      REQUIRE(grid.w(iy, ix) == Catch::Approx(grid.w(ix, iy)).margin(1e-10));
      REQUIRE(grid.psi1(iy, ix) == Catch::Approx(grid.psi2(ix, iy)).margin(1e-10));
      REQUIRE(grid.M11(iy, ix) == Catch::Approx(grid.M22(ix, iy)).margin(1e-9));
    }
  REQUIRE_THROWS(sample_fields(mesh, layout, bases, proj, 1));
}
