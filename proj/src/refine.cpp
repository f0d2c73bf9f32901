#include "maxlag2d/refine.hpp"

#include <algorithm>
#include <stdexcept>

namespace maxlag {

Point2 incenter(Point2 p0, Point2 p1, Point2 p2) {
  if (signed_area2(p0, p1, p2) <= 0.0)
    throw std::invalid_argument("incenter of a degenerate triangle");
  const double a = dist(p1, p2);  // side opposite p0
  const double b = dist(p2, p0);
  const double c = dist(p0, p1);
  return (a * p0 + b * p1 + c * p2) / (a + b + c);
}

namespace {

Point2 barycenter(Point2 p0, Point2 p1, Point2 p2) {
  return (p0 + p1 + p2) / 3.0;
}

// Crossing of segment (c0, c1) with edge (a, b); the parameter along the
// edge must be strictly interior.
Point2 edge_crossing(Point2 a, Point2 b, Point2 c0, Point2 c1) {
  const double denom = cross(b - a, c1 - c0);
  if (denom == 0.0) throw std::runtime_error("degenerate PS geometry");
  const double t = cross(b - a, a - c0) / denom;  // position along c0->c1
  const Point2 x = c0 + t * (c1 - c0);
  const double s = dot(x - a, b - a) / dot(b - a, b - a);
  if (!(t > 0.0 && t < 1.0 && s > 0.0 && s < 1.0))
    throw std::runtime_error("degenerate PS geometry");
  return x;
}

void push_child(RefinedMesh& rm, int parent, int v0, int v1, int v2) {
  if (signed_area2(rm.mesh.vertices[v0], rm.mesh.vertices[v1],
                   rm.mesh.vertices[v2]) <= 0.0)
    throw std::runtime_error("degenerate child triangle of parent " +
                             std::to_string(parent));
  rm.mesh.triangles.push_back({v0, v1, v2});
  rm.parent.push_back(parent);
}

}  // namespace

RefinedMesh powell_sabin(const Mesh& mesh) {
  validate_mesh(mesh);
  const MeshTopology topo = build_topology(mesh);
  const int nv = int(mesh.vertices.size());
  const int nt = int(mesh.triangles.size());
  const int ne = int(topo.edges.size());

  RefinedMesh rm;
  rm.split_kind = SplitKind::PowellSabin;
  rm.mesh.vertices = mesh.vertices;

  // Vertex numbering: parent vertices, then incenters by parent triangle
  // index, then edge points in (sorted) edge order.
  rm.interior_points.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    rm.interior_points[t] = nv + t;
    rm.mesh.vertices.push_back(incenter(
        mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]));
  }
  std::vector<int> edge_point(ne);
  for (int e = 0; e < ne; ++e) {
    const auto& edge = topo.edges[e];
    const Point2 pa = mesh.vertices[edge.a], pb = mesh.vertices[edge.b];
    Point2 x;
    if (topo.is_boundary_edge(e)) {
      x = 0.5 * (pa + pb);
    } else {
      x = edge_crossing(pa, pb, rm.mesh.vertices[nv + edge.tri0],
                        rm.mesh.vertices[nv + edge.tri1]);
    }
    edge_point[e] = nv + nt + e;
    rm.mesh.vertices.push_back(x);
    rm.constructed_singular_points.push_back(edge_point[e]);
  }

  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    const int c = rm.interior_points[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      const int m = edge_point[topo.tri_edges[t][k]];
      push_child(rm, t, a, m, c);
      push_child(rm, t, m, b, c);
    }
  }

  finalize_mesh(rm.mesh);
  return rm;
}

RefinedMesh clough_tocher(const Mesh& mesh) {
  validate_mesh(mesh);
  const int nv = int(mesh.vertices.size());
  const int nt = int(mesh.triangles.size());

  RefinedMesh rm;
  rm.split_kind = SplitKind::CloughTocher;
  rm.mesh.vertices = mesh.vertices;
  rm.interior_points.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    rm.interior_points[t] = nv + t;
    rm.mesh.vertices.push_back(barycenter(
        mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]));
  }
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    const int g = rm.interior_points[t];
    for (int k = 0; k < 3; ++k)
      push_child(rm, t, tri[k], tri[(k + 1) % 3], g);
  }

  finalize_mesh(rm.mesh);
  return rm;
}

RefinedMesh no_split(const Mesh& mesh) {
  RefinedMesh rm;
  rm.split_kind = SplitKind::None;
  rm.mesh = mesh;
  rm.parent.resize(mesh.triangles.size());
  for (int t = 0; t < int(mesh.triangles.size()); ++t) rm.parent[t] = t;
  return rm;
}

}  // namespace maxlag
