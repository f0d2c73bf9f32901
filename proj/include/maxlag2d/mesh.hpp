#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "maxlag2d/geometry.hpp"

namespace maxlag {

/// Boundary edge, oriented so the domain lies on its left (counterclockwise
/// traversal of the boundary).
struct BoundaryEdge {
  int a = -1;
  int b = -1;
  int marker = 1;
};

/// A conforming triangulation of a polygonal domain.
///
/// Invariants (enforced by validate_mesh):
///  - every triangle is counterclockwise with strictly positive area,
///  - every edge is shared by exactly one (boundary) or two (interior)
///    triangles,
///  - V - E + T = 1 (simply connected domain),
///  - corner_vertices are boundary vertices whose two incident boundary
///    edges are non-collinear.
///
/// A Mesh is treated as immutable once finalized; all operations that
/// "modify" a mesh return a new one.
struct Mesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<int> corner_vertices;  // sorted ascending
};

enum class MeshPattern { RightSplit, CrissCross };
enum class MeshDomain { UnitSquare, LShape };

/// Cyclically ordered fan of triangles around a vertex.
///
/// Triangles are enumerated counterclockwise; for a boundary vertex the
/// first and last triangle carry a boundary edge through the center.
/// angles[j] is the wedge angle of triangles[j] at the center.
struct VertexStar {
  int center = -1;
  std::vector<int> triangles;
  std::vector<double> angles;
  bool is_boundary = false;
};

/// Edge-based adjacency derived from a mesh.
struct MeshTopology {
  // Undirected edges keyed (a, b) with a < b, sorted lexicographically.
  // tri0 is the triangle whose CCW traversal contains a->b, tri1 the one
  // containing b->a; exactly one of them is -1 on a boundary edge.
  struct Edge {
    int a, b;
    int tri0 = -1;
    int tri1 = -1;
  };
  std::vector<Edge> edges;
  std::vector<int> vertex_tri_offset;  // CSR vertex -> incident triangles
  std::vector<int> vertex_tri;
  std::vector<std::array<int, 3>> tri_edges;  // edge ids per triangle,
                                              // local edge i = (v_i, v_{i+1})

  int n_boundary_edges = 0;

  /// Index of edge (a,b) (unordered), or -1.
  int find_edge(int a, int b) const;
  bool is_boundary_edge(int e) const {
    return edges[e].tri0 < 0 || edges[e].tri1 < 0;
  }
};

MeshTopology build_topology(const Mesh& mesh);

/// Derives boundary edges and corner vertices from the triangle incidence
/// and checks all mesh invariants. Existing boundary markers (matched by
/// unordered edge key) are preserved. Throws std::runtime_error on an
/// invariant violation.
void finalize_mesh(Mesh& mesh);

/// Checks all Mesh invariants; throws std::runtime_error with a message
/// naming the offending entity.
void validate_mesh(const Mesh& mesh);

/// Structured generators.
///
/// RightSplit splits every grid cell along the (i+1,j)-(i,j+1) diagonal;
/// CrissCross splits every cell by both diagonals through a new center
/// vertex. The unit square uses an n x n grid. The L-shape is
/// [-pi,pi]^2 minus [0,pi]x[-pi,0], tiled with cells of side pi/n.
Mesh generate_structured(int n, MeshPattern pattern, MeshDomain domain);

/// Largest triangle diameter (longest edge over all triangles).
double mesh_size(const Mesh& mesh);

/// Star of vertex z. Throws on a non-manifold star.
VertexStar vertex_star(const Mesh& mesh, int z, const MeshTopology& topo);
VertexStar vertex_star(const Mesh& mesh, int z);

/// Stars of all vertices (single topology pass).
std::vector<VertexStar> all_vertex_stars(const Mesh& mesh);
std::vector<VertexStar> all_vertex_stars(const Mesh& mesh,
                                         const MeshTopology& topo);

/// Angle-sum singularity measure of a star: the maximum |sin| over sums of
/// consecutive wedge angles (cyclic for interior vertices). Zero exactly
/// when the edges through the center lie on at most two straight lines.
double theta_of_star(const VertexStar& star);

enum class PerturbSelector { SingularVertices, InteriorValence4, Explicit };

struct PerturbOptions {
  PerturbSelector selector = PerturbSelector::SingularVertices;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::vector<int> explicit_vertices;  // used with Explicit
  bool include_boundary = false;  // also slide boundary singular vertices
  double singular_tol = 1e-8;
};

/// Moves each selected vertex by (+-alpha*h, +-alpha*h) with seeded random
/// signs, h = mesh_size(mesh). Boundary vertices (only selected when
/// include_boundary is set) slide along their boundary line by +-alpha*h.
/// Throws if any triangle degenerates, naming it.
Mesh perturb_vertices(const Mesh& mesh, const PerturbOptions& opts);

}  // namespace maxlag
