#include "maxlag2d/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "maxlag2d/rng.hpp"

namespace maxlag {

namespace {

std::string tri_name(int t) { return "triangle " + std::to_string(t); }

// Directed edge record used to pair half-edges.
struct HalfEdge {
  int a, b;   // directed a -> b
  int tri;
};

}  // namespace

int MeshTopology::find_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{a, b},
                             [](const Edge& e, std::pair<int, int> k) {
                               return std::pair{e.a, e.b} < k;
                             });
  if (it == edges.end() || it->a != a || it->b != b) return -1;
  return int(it - edges.begin());
}

MeshTopology build_topology(const Mesh& mesh) {
  MeshTopology topo;
  const int nt = int(mesh.triangles.size());
  const int nv = int(mesh.vertices.size());

  std::vector<HalfEdge> halves;
  halves.reserve(3 * size_t(nt));
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k)
      halves.push_back({tri[k], tri[(k + 1) % 3], t});
  }
  std::sort(halves.begin(), halves.end(), [](const HalfEdge& x, const HalfEdge& y) {
    const int xa = std::min(x.a, x.b), xb = std::max(x.a, x.b);
    const int ya = std::min(y.a, y.b), yb = std::max(y.a, y.b);
    return std::tie(xa, xb, x.a) < std::tie(ya, yb, y.a);
  });

  topo.tri_edges.assign(nt, {-1, -1, -1});
  for (size_t i = 0; i < halves.size();) {
    const int a = std::min(halves[i].a, halves[i].b);
    const int b = std::max(halves[i].a, halves[i].b);
    size_t j = i;
    MeshTopology::Edge edge{a, b, -1, -1};
    while (j < halves.size() &&
           std::min(halves[j].a, halves[j].b) == a &&
           std::max(halves[j].a, halves[j].b) == b) {
      if (halves[j].a == a)
        edge.tri0 = (edge.tri0 < 0) ? halves[j].tri : -2;
      else
        edge.tri1 = (edge.tri1 < 0) ? halves[j].tri : -2;
      ++j;
    }
    if (j - i > 2 || edge.tri0 == -2 || edge.tri1 == -2)
      throw std::runtime_error("non-manifold edge (" + std::to_string(a) +
                               "," + std::to_string(b) + ")");
    topo.edges.push_back(edge);
    i = j;
  }
  for (int eid = 0; eid < int(topo.edges.size()); ++eid) {
    auto& e = topo.edges[eid];
    if (e.tri0 < 0 || e.tri1 < 0) ++topo.n_boundary_edges;
    for (int tri : {e.tri0, e.tri1}) {
      if (tri < 0) continue;
      const auto& tv = mesh.triangles[tri];
      for (int k = 0; k < 3; ++k) {
        const int u = tv[k], v = tv[(k + 1) % 3];
        if (std::minmax(u, v) == std::minmax(e.a, e.b)) topo.tri_edges[tri][k] = eid;
      }
    }
  }

  // CSR vertex -> triangles.
  topo.vertex_tri_offset.assign(nv + 1, 0);
  for (const auto& tri : mesh.triangles)
    for (int v : tri) {
      if (v < 0 || v >= nv) throw std::runtime_error("dangling index");
      ++topo.vertex_tri_offset[v + 1];
    }
  for (int v = 0; v < nv; ++v)
    topo.vertex_tri_offset[v + 1] += topo.vertex_tri_offset[v];
  topo.vertex_tri.assign(3 * size_t(nt), -1);
  std::vector<int> cursor(topo.vertex_tri_offset.begin(),
                          topo.vertex_tri_offset.end() - 1);
  for (int t = 0; t < nt; ++t)
    for (int v : mesh.triangles[t]) topo.vertex_tri[cursor[v]++] = t;

  return topo;
}

namespace {

// Boundary edges (oriented as in their owning triangle) and boundary flags.
std::vector<BoundaryEdge> derive_boundary(const Mesh& mesh,
                                          const MeshTopology& topo) {
  std::map<std::pair<int, int>, int> old_markers;
  for (const auto& be : mesh.boundary_edges)
    old_markers[std::minmax(be.a, be.b)] = be.marker;

  std::vector<BoundaryEdge> out;
  for (const auto& e : topo.edges) {
    if (e.tri0 >= 0 && e.tri1 >= 0) continue;
    BoundaryEdge be;
    // Orient along the owning triangle's CCW traversal (domain on the left).
    if (e.tri0 >= 0) {
      be.a = e.a;
      be.b = e.b;
    } else {
      be.a = e.b;
      be.b = e.a;
    }
    auto it = old_markers.find(std::minmax(e.a, e.b));
    be.marker = (it != old_markers.end()) ? it->second : 1;
    out.push_back(be);
  }
  return out;
}

std::vector<int> detect_corners(const Mesh& mesh,
                                const std::vector<BoundaryEdge>& boundary) {
  // Each boundary vertex must have exactly one incoming and one outgoing
  // boundary edge; the corner test compares their directions.
  const int nv = int(mesh.vertices.size());
  std::vector<int> in_edge(nv, -1), out_edge(nv, -1);
  for (int i = 0; i < int(boundary.size()); ++i) {
    const auto& be = boundary[i];
    if (out_edge[be.a] != -1 || in_edge[be.b] != -1)
      throw std::runtime_error("non-manifold boundary at vertex " +
                               std::to_string(out_edge[be.a] != -1 ? be.a : be.b));
    out_edge[be.a] = i;
    in_edge[be.b] = i;
  }
  std::vector<int> corners;
  for (int v = 0; v < nv; ++v) {
    if (in_edge[v] < 0 && out_edge[v] < 0) continue;
    if (in_edge[v] < 0 || out_edge[v] < 0)
      throw std::runtime_error("open boundary at vertex " + std::to_string(v));
    const auto& ein = boundary[in_edge[v]];
    const auto& eout = boundary[out_edge[v]];
    const Point2 din = mesh.vertices[ein.b] - mesh.vertices[ein.a];
    const Point2 dout = mesh.vertices[eout.b] - mesh.vertices[eout.a];
    const double turn = std::atan2(std::abs(cross(din, dout)), dot(din, dout));
    if (turn > 1e-9) corners.push_back(v);
  }
  return corners;
}

}  // namespace

void validate_mesh(const Mesh& mesh) {
  const int nv = int(mesh.vertices.size());
  for (int v = 0; v < nv; ++v) {
    const Point2 p = mesh.vertices[v];
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::runtime_error("non-finite vertex " + std::to_string(v));
  }
  for (int t = 0; t < int(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int v : tri)
      if (v < 0 || v >= nv) throw std::runtime_error("dangling index in " + tri_name(t));
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw std::runtime_error("repeated vertex in " + tri_name(t));
    if (signed_area2(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                     mesh.vertices[tri[2]]) <= 0.0)
      throw std::runtime_error("non-positive area in " + tri_name(t));
  }

  const MeshTopology topo = build_topology(mesh);
  const long long V = nv, E = (long long)topo.edges.size(),
                  T = (long long)mesh.triangles.size();
  if (V - E + T != 1)
    throw std::runtime_error("Euler relation violated: V-E+T = " +
                             std::to_string(V - E + T));

  const auto boundary = derive_boundary(mesh, topo);
  if (boundary.size() != mesh.boundary_edges.size())
    throw std::runtime_error("boundary edge set inconsistent with incidence");
  std::map<std::pair<int, int>, int> declared;
  for (const auto& be : mesh.boundary_edges) declared[std::minmax(be.a, be.b)]++;
  for (const auto& be : boundary)
    if (!declared.count(std::minmax(be.a, be.b)))
      throw std::runtime_error("missing boundary edge (" + std::to_string(be.a) +
                               "," + std::to_string(be.b) + ")");

  const auto corners = detect_corners(mesh, boundary);
  if (corners != mesh.corner_vertices)
    throw std::runtime_error("corner vertex set inconsistent with geometry");
}

void finalize_mesh(Mesh& mesh) {
  const int nv = int(mesh.vertices.size());
  for (int t = 0; t < int(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int v : tri)
      if (v < 0 || v >= nv) throw std::runtime_error("dangling index in " + tri_name(t));
  }
  const MeshTopology topo = build_topology(mesh);
  mesh.boundary_edges = derive_boundary(mesh, topo);
  mesh.corner_vertices = detect_corners(mesh, mesh.boundary_edges);
  validate_mesh(mesh);
}

Mesh generate_structured(int n, MeshPattern pattern, MeshDomain domain) {
  if (n < 1) throw std::invalid_argument("grid subdivision must be >= 1");

  // Grid extent and cell admission per domain.
  const double pi = std::numbers::pi;
  int cells_x, cells_y;
  double x0, y0, cell;
  if (domain == MeshDomain::UnitSquare) {
    cells_x = cells_y = n;
    x0 = y0 = 0.0;
    cell = 1.0 / n;
  } else {
    cells_x = cells_y = 2 * n;
    x0 = y0 = -pi;
    cell = pi / n;
  }
  auto cell_kept = [&](int i, int j) {
    if (domain == MeshDomain::UnitSquare) return true;
    // Remove the quadrant [0,pi] x [-pi,0].
    return !(i >= n && j < n);
  };

  Mesh mesh;
  std::vector<int> grid_id((cells_x + 1) * size_t(cells_y + 1), -1);
  auto grid_vertex = [&](int i, int j) {
    int& id = grid_id[size_t(j) * (cells_x + 1) + i];
    if (id < 0) {
      id = int(mesh.vertices.size());
      mesh.vertices.push_back({x0 + i * cell, y0 + j * cell});
    }
    return id;
  };

  for (int j = 0; j < cells_y; ++j)
    for (int i = 0; i < cells_x; ++i) {
      if (!cell_kept(i, j)) continue;
      const int v00 = grid_vertex(i, j), v10 = grid_vertex(i + 1, j);
      const int v11 = grid_vertex(i + 1, j + 1), v01 = grid_vertex(i, j + 1);
      if (pattern == MeshPattern::RightSplit) {
        mesh.triangles.push_back({v00, v10, v01});
        mesh.triangles.push_back({v10, v11, v01});
      } else {
        const int c = int(mesh.vertices.size());
        mesh.vertices.push_back(
            {x0 + (i + 0.5) * cell, y0 + (j + 0.5) * cell});
        mesh.triangles.push_back({v00, v10, c});
        mesh.triangles.push_back({v10, v11, c});
        mesh.triangles.push_back({v11, v01, c});
        mesh.triangles.push_back({v01, v00, c});
      }
    }

  finalize_mesh(mesh);
  return mesh;
}

double mesh_size(const Mesh& mesh) {
  double h = 0.0;
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const double len =
          dist(mesh.vertices[tri[k]], mesh.vertices[tri[(k + 1) % 3]]);
      h = std::max(h, len);
    }
  }
  return h;
}

VertexStar vertex_star(const Mesh& mesh, int z, const MeshTopology& topo) {
  if (z < 0 || z >= int(mesh.vertices.size()))
    throw std::invalid_argument("vertex index out of range");

  // Rotate each incident triangle so z comes first: (z, p, q) spans the CCW
  // wedge from ray z->p to ray z->q; the CCW neighbor shares edge (z, q).
  struct Wedge { int tri, p, q; };
  std::vector<Wedge> wedges;
  for (int k = topo.vertex_tri_offset[z]; k < topo.vertex_tri_offset[z + 1]; ++k) {
    const int t = topo.vertex_tri[k];
    const auto& tv = mesh.triangles[t];
    for (int i = 0; i < 3; ++i)
      if (tv[i] == z) {
        wedges.push_back({t, tv[(i + 1) % 3], tv[(i + 2) % 3]});
        break;
      }
  }
  if (wedges.empty()) throw std::runtime_error("isolated vertex " + std::to_string(z));

  std::unordered_map<int, int> by_first_ray;  // p -> wedge index
  for (int i = 0; i < int(wedges.size()); ++i)
    if (!by_first_ray.emplace(wedges[i].p, i).second)
      throw std::runtime_error("non-manifold star at vertex " + std::to_string(z));

  // Boundary stars start at the wedge whose first ray is not any wedge's
  // second ray; interior stars start at the lowest triangle index.
  int start = -1;
  bool is_boundary = false;
  {
    std::unordered_map<int, int> by_second_ray;
    for (int i = 0; i < int(wedges.size()); ++i)
      if (!by_second_ray.emplace(wedges[i].q, i).second)
        throw std::runtime_error("non-manifold star at vertex " + std::to_string(z));
    for (int i = 0; i < int(wedges.size()); ++i)
      if (!by_second_ray.count(wedges[i].p)) {
        if (start != -1)
          throw std::runtime_error("disconnected star at vertex " + std::to_string(z));
        start = i;
        is_boundary = true;
      }
  }
  if (!is_boundary) {
    start = 0;
    for (int i = 1; i < int(wedges.size()); ++i)
      if (wedges[i].tri < wedges[start].tri) start = i;
  }

  VertexStar star;
  star.center = z;
  star.is_boundary = is_boundary;
  int cur = start;
  for (size_t step = 0; step < wedges.size(); ++step) {
    const Wedge& w = wedges[cur];
    star.triangles.push_back(w.tri);
    star.angles.push_back(wedge_angle(mesh.vertices[z], mesh.vertices[w.p],
                                      mesh.vertices[w.q]));
    auto it = by_first_ray.find(w.q);
    if (it == by_first_ray.end()) {
      if (!is_boundary || step + 1 != wedges.size())
        throw std::runtime_error("disconnected star at vertex " + std::to_string(z));
      break;
    }
    cur = it->second;
    if (is_boundary && step + 1 == wedges.size())
      throw std::runtime_error("non-manifold star at vertex " + std::to_string(z));
  }
  if (star.triangles.size() != wedges.size())
    throw std::runtime_error("disconnected star at vertex " + std::to_string(z));
  return star;
}

VertexStar vertex_star(const Mesh& mesh, int z) {
  return vertex_star(mesh, z, build_topology(mesh));
}

std::vector<VertexStar> all_vertex_stars(const Mesh& mesh,
                                         const MeshTopology& topo) {
  std::vector<VertexStar> stars;
  stars.reserve(mesh.vertices.size());
  for (int z = 0; z < int(mesh.vertices.size()); ++z)
    stars.push_back(vertex_star(mesh, z, topo));
  return stars;
}

std::vector<VertexStar> all_vertex_stars(const Mesh& mesh) {
  return all_vertex_stars(mesh, build_topology(mesh));
}

double theta_of_star(const VertexStar& star) {
  const int n = int(star.angles.size());
  if (star.is_boundary && n == 1) return 0.0;
  double best = 0.0;
  const int pairs = star.is_boundary ? n - 1 : n;
  for (int j = 0; j < pairs; ++j) {
    const double s = star.angles[j] + star.angles[(j + 1) % n];
    best = std::max(best, std::abs(std::sin(s)));
  }
  return best;
}

Mesh perturb_vertices(const Mesh& mesh, const PerturbOptions& opts) {
  if (opts.alpha < 0.0 || opts.alpha > 0.25)
    throw std::invalid_argument("perturbation alpha must lie in [0, 0.25]");

  const double h = mesh_size(mesh);
  const MeshTopology topo = build_topology(mesh);

  std::vector<char> on_boundary(mesh.vertices.size(), 0);
  for (const auto& be : mesh.boundary_edges)
    on_boundary[be.a] = on_boundary[be.b] = 1;
  std::vector<char> is_corner(mesh.vertices.size(), 0);
  for (int c : mesh.corner_vertices) is_corner[c] = 1;

  std::vector<int> selected;
  switch (opts.selector) {
    case PerturbSelector::SingularVertices: {
      const auto stars = all_vertex_stars(mesh, topo);
      for (int z = 0; z < int(mesh.vertices.size()); ++z) {
        if (theta_of_star(stars[z]) >= opts.singular_tol) continue;
        if (on_boundary[z] && !opts.include_boundary) continue;
        selected.push_back(z);
      }
      break;
    }
    case PerturbSelector::InteriorValence4: {
      const auto stars = all_vertex_stars(mesh, topo);
      for (int z = 0; z < int(mesh.vertices.size()); ++z)
        if (!on_boundary[z] && stars[z].triangles.size() == 4)
          selected.push_back(z);
      break;
    }
    case PerturbSelector::Explicit: {
      selected = opts.explicit_vertices;
      std::sort(selected.begin(), selected.end());
      selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
      for (int z : selected)
        if (z < 0 || z >= int(mesh.vertices.size()))
          throw std::invalid_argument("explicit vertex index out of range");
      break;
    }
  }

  // Tangent of the boundary line through a non-corner boundary vertex.
  auto boundary_tangent = [&](int z) {
    if (is_corner[z])
      throw std::invalid_argument("cannot slide corner vertex " + std::to_string(z));
    for (const auto& be : mesh.boundary_edges)
      if (be.a == z || be.b == z)
        return normalized(mesh.vertices[be.b] - mesh.vertices[be.a]);
    throw std::logic_error("boundary vertex without boundary edge");
  };

  Mesh out = mesh;
  Xoshiro256ss rng(opts.seed);
  for (int z : selected) {
    const double s1 = rng.next_sign();
    const double s2 = rng.next_sign();
    if (on_boundary[z]) {
      const Point2 t = boundary_tangent(z);
      out.vertices[z] = out.vertices[z] + (s1 * opts.alpha * h) * t;
      (void)s2;  // second draw is consumed but unused on the boundary
    } else {
      out.vertices[z].x += s1 * opts.alpha * h;
      out.vertices[z].y += s2 * opts.alpha * h;
    }
  }

  for (int t = 0; t < int(out.triangles.size()); ++t) {
    const auto& tri = out.triangles[t];
    if (signed_area2(out.vertices[tri[0]], out.vertices[tri[1]],
                     out.vertices[tri[2]]) <= 0.0)
      throw std::runtime_error("perturbation inverted " + tri_name(t));
  }
  validate_mesh(out);
  return out;
}

}  // namespace maxlag
