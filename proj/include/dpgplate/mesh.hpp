#ifndef DPGPLATE_MESH_HPP
#define DPGPLATE_MESH_HPP

#include <array>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dpgplate {

enum class MeshKind { Uniform, Trapezoidal };

struct Vertex {
  double x = 0.0;
  double y = 0.0;
};

/// Convex quadrilateral with vertices in counterclockwise order.
/// The bilinear map from the reference square [-1,1]^2 is
///   x(xi,eta) = a0 + a1 xi + a2 eta + a3 xi eta   (map_coeffs[0..3])
///   y(xi,eta) = b0 + b1 xi + b2 eta + b3 xi eta   (map_coeffs[4..7])
struct QuadElement {
  std::array<int, 4> vertex_ids{};
  std::array<double, 8> map_coeffs{};
  bool is_affine = false;
  // skeleton connectivity, filled at generation time
  std::array<int, 4> edge_ids{};          // local edge e joins vertices e, (e+1)%4
  std::array<bool, 4> edge_reversed{};    // local ccw traversal opposite to the global edge direction
  std::array<int, 4> outward_sign{};      // +1 if the global edge normal is outward for this element
};

struct Edge {
  std::array<int, 2> vertex_ids{};        // global direction: vertex_ids[0] -> vertex_ids[1]
  int left_elem = -1;
  int right_elem = -1;                    // -1 on the boundary
  Eigen::Vector2d global_normal{0, 0};    // unit; points from left_elem into right_elem
  bool is_boundary = false;
  double length = 0.0;
};

struct Mesh {
  std::vector<Vertex> vertices;
  std::vector<QuadElement> elements;
  std::vector<Edge> edges;
  int N = 0;
  MeshKind kind = MeshKind::Uniform;
  double distortion = 0.0;
  double h = 0.0;                         // max element diameter

  int n_elements() const { return static_cast<int>(elements.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_vertices() const { return static_cast<int>(vertices.size()); }
};

struct GeometryAt {
  Eigen::Vector2d x;
  Eigen::Matrix2d J;
  double detJ;
};

/// Evaluate the bilinear element map, its Jacobian and det at a reference point.
inline GeometryAt map_to_physical(const QuadElement& elem, double xi, double eta) {
  const auto& c = elem.map_coeffs;
  GeometryAt g;
  g.x[0] = c[0] + c[1] * xi + c[2] * eta + c[3] * xi * eta;
  g.x[1] = c[4] + c[5] * xi + c[6] * eta + c[7] * xi * eta;
  g.J(0, 0) = c[1] + c[3] * eta;
  g.J(0, 1) = c[2] + c[3] * xi;
  g.J(1, 0) = c[5] + c[7] * eta;
  g.J(1, 1) = c[6] + c[7] * xi;
  g.detJ = g.J(0, 0) * g.J(1, 1) - g.J(0, 1) * g.J(1, 0);
  return g;
}

/// Divergence-conforming (Piola) map of a reference vector value:
/// q = J qhat / det J.
inline Eigen::Vector2d piola_transform(const QuadElement& elem, const Eigen::Vector2d& xhat,
                                       const Eigen::Vector2d& qhat) {
  GeometryAt g = map_to_physical(elem, xhat[0], xhat[1]);
  if (g.detJ <= 0.0) throw std::runtime_error("piola_transform: detJ <= 0");
  return (g.J * qhat) / g.detJ;
}

struct EdgeGeometry {
  double length;
  int outward_sign;
  // affine parametrization of the edge: s in [-1,1] along the element's
  // local (counterclockwise) traversal
  Eigen::Vector2d midpoint;
  Eigen::Vector2d half_tangent;  // physical point = midpoint + s * half_tangent

  Eigen::Vector2d at(double s) const { return midpoint + s * half_tangent; }
};

/// Geometry of an edge as seen from one of its adjacent elements.
inline EdgeGeometry edge_geometry(const Mesh& mesh, int edge_id, int elem_id) {
  const Edge& edge = mesh.edges[edge_id];
  if (edge.left_elem != elem_id && edge.right_elem != elem_id)
    throw std::invalid_argument("edge_geometry: edge not adjacent to element");
  const QuadElement& elem = mesh.elements[elem_id];
  int local = -1;
  for (int e = 0; e < 4; ++e)
    if (elem.edge_ids[e] == edge_id) local = e;
  const Vertex& a = mesh.vertices[elem.vertex_ids[local]];
  const Vertex& b = mesh.vertices[elem.vertex_ids[(local + 1) % 4]];
  EdgeGeometry g;
  g.length = edge.length;
  g.outward_sign = elem.outward_sign[local];
  g.midpoint = Eigen::Vector2d(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
  g.half_tangent = Eigen::Vector2d(0.5 * (b.x - a.x), 0.5 * (b.y - a.y));
  return g;
}

namespace detail {

inline void set_map_coeffs(QuadElement& elem, const std::vector<Vertex>& verts) {
  // reference vertices (-1,-1), (1,-1), (1,1), (-1,1)
  const Vertex& p0 = verts[elem.vertex_ids[0]];
  const Vertex& p1 = verts[elem.vertex_ids[1]];
  const Vertex& p2 = verts[elem.vertex_ids[2]];
  const Vertex& p3 = verts[elem.vertex_ids[3]];
  auto& c = elem.map_coeffs;
  c[0] = 0.25 * (p0.x + p1.x + p2.x + p3.x);
  c[1] = 0.25 * (-p0.x + p1.x + p2.x - p3.x);
  c[2] = 0.25 * (-p0.x - p1.x + p2.x + p3.x);
  c[3] = 0.25 * (p0.x - p1.x + p2.x - p3.x);
  c[4] = 0.25 * (p0.y + p1.y + p2.y + p3.y);
  c[5] = 0.25 * (-p0.y + p1.y + p2.y - p3.y);
  c[6] = 0.25 * (-p0.y - p1.y + p2.y + p3.y);
  c[7] = 0.25 * (p0.y - p1.y + p2.y - p3.y);
  elem.is_affine = std::abs(c[3]) < 1e-14 && std::abs(c[7]) < 1e-14;
}

inline bool is_convex_ccw(const std::vector<Vertex>& verts, const std::array<int, 4>& ids) {
  for (int k = 0; k < 4; ++k) {
    const Vertex& a = verts[ids[k]];
    const Vertex& b = verts[ids[(k + 1) % 4]];
    const Vertex& c = verts[ids[(k + 2) % 4]];
    double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
    if (cross <= 0.0) return false;
  }
  return true;
}

}  // namespace detail

/// Build the uniform or trapezoidal N x N partition of the unit square.
/// Trapezoidal meshes offset the y-coordinate of each interior grid vertex
/// by +-distortion/N in a checkerboard pattern; vertical grid lines and all
/// boundary vertices stay put.
inline Mesh generate_mesh(int N, MeshKind kind, double distortion = 0.25) {
  if (N < 1) throw std::invalid_argument("generate_mesh: N must be >= 1");
  if (distortion < 0.0 || distortion >= 0.5)
    throw std::invalid_argument("generate_mesh: distortion must lie in [0, 0.5)");

  Mesh mesh;
  mesh.N = N;
  mesh.kind = kind;
  mesh.distortion = (kind == MeshKind::Trapezoidal) ? distortion : 0.0;

  mesh.vertices.resize((N + 1) * (N + 1));
  auto vid = [N](int i, int j) { return j * (N + 1) + i; };
  for (int j = 0; j <= N; ++j) {
    for (int i = 0; i <= N; ++i) {
      double x = static_cast<double>(i) / N;
      double y = static_cast<double>(j) / N;
      if (kind == MeshKind::Trapezoidal && i > 0 && i < N && j > 0 && j < N) {
        double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
        y += sign * distortion / N;
      }
      mesh.vertices[vid(i, j)] = Vertex{x, y};
    }
  }

  mesh.elements.resize(N * N);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) {
      QuadElement& elem = mesh.elements[j * N + i];
      elem.vertex_ids = {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)};
      if (!detail::is_convex_ccw(mesh.vertices, elem.vertex_ids))
        throw std::runtime_error("generate_mesh: distortion produced a non-convex element");
      detail::set_map_coeffs(elem, mesh.vertices);
    }
  }

  // skeleton: edges keyed by their (sorted) vertex pair; global direction
  // runs from the lower to the higher vertex index
  std::map<std::pair<int, int>, int> edge_of;
  for (int el = 0; el < mesh.n_elements(); ++el) {
    QuadElement& elem = mesh.elements[el];
    for (int e = 0; e < 4; ++e) {
      int a = elem.vertex_ids[e];
      int b = elem.vertex_ids[(e + 1) % 4];
      std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = edge_of.find(key);
      int id;
      if (it == edge_of.end()) {
        id = mesh.n_edges();
        Edge edge;
        edge.vertex_ids = {key.first, key.second};
        edge.left_elem = el;
        mesh.edges.push_back(edge);
        edge_of.emplace(key, id);
      } else {
        id = it->second;
        Edge& edge = mesh.edges[id];
        // elements are visited in increasing index order, so the first
        // visitor is the lower-indexed (left) one
        edge.right_elem = el;
      }
      elem.edge_ids[e] = id;
      elem.edge_reversed[e] = (a != key.first);
    }
  }

  for (Edge& edge : mesh.edges) {
    const Vertex& a = mesh.vertices[edge.vertex_ids[0]];
    const Vertex& b = mesh.vertices[edge.vertex_ids[1]];
    edge.length = std::hypot(b.x - a.x, b.y - a.y);
    edge.is_boundary = (edge.right_elem < 0);
    // normal = outward normal of the left element: rotate the local ccw
    // tangent by -90 degrees
    const QuadElement& left = mesh.elements[edge.left_elem];
    for (int e = 0; e < 4; ++e) {
      if (left.edge_ids[e] != &edge - mesh.edges.data()) continue;
      const Vertex& la = mesh.vertices[left.vertex_ids[e]];
      const Vertex& lb = mesh.vertices[left.vertex_ids[(e + 1) % 4]];
      Eigen::Vector2d t(lb.x - la.x, lb.y - la.y);
      edge.global_normal = Eigen::Vector2d(t[1], -t[0]).normalized();
    }
  }

  for (QuadElement& elem : mesh.elements) {
    for (int e = 0; e < 4; ++e) {
      const Edge& edge = mesh.edges[elem.edge_ids[e]];
      int el = static_cast<int>(&elem - mesh.elements.data());
      elem.outward_sign[e] = (edge.left_elem == el) ? 1 : -1;
    }
  }

  double hmax = 0.0;
  for (const QuadElement& elem : mesh.elements) {
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        const Vertex& p = mesh.vertices[elem.vertex_ids[a]];
        const Vertex& q = mesh.vertices[elem.vertex_ids[b]];
        hmax = std::max(hmax, std::hypot(p.x - q.x, p.y - q.y));
      }
    }
  }
  mesh.h = hmax;
  return mesh;
}

/// True if the vertex lies on some boundary edge.
inline std::vector<bool> boundary_vertex_flags(const Mesh& mesh) {
  std::vector<bool> flags(mesh.n_vertices(), false);
  for (const Edge& edge : mesh.edges) {
    if (edge.is_boundary) {
      flags[edge.vertex_ids[0]] = true;
      flags[edge.vertex_ids[1]] = true;
    }
  }
  return flags;
}

/// Plain-text dump of vertices and elements, one entity per line.
inline void export_mesh(const Mesh& mesh, std::ostream& out) {
  out << "vertices " << mesh.n_vertices() << "\n";
  for (const Vertex& v : mesh.vertices) out << v.x << " " << v.y << "\n";
  out << "elements " << mesh.n_elements() << "\n";
  for (const QuadElement& e : mesh.elements)
    out << e.vertex_ids[0] << " " << e.vertex_ids[1] << " " << e.vertex_ids[2] << " "
        << e.vertex_ids[3] << "\n";
}

}  // namespace dpgplate

#endif
