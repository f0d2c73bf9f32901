#include "maxlag2d/fespace.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <stdexcept>

namespace maxlag {

Eigen::VectorXd FeSpace::raw_from_reduced(const Eigen::VectorXd& reduced) const {
  if (n_free < 0) throw std::logic_error("reduction not materialized");
  return reduction * reduced;
}

namespace {

// Continuity layout shared by the continuous spaces: vertex nodes first,
// then (k-1) nodes per edge ordered from the lower vertex id, then interior
// lattice nodes per triangle.
void build_continuous_nodes(FeSpace& space) {
  const Mesh& mesh = *space.mesh;
  const int k = space.degree;
  const RefBasis& basis = space.basis();
  const MeshTopology topo = build_topology(mesh);

  const int nv = int(mesh.vertices.size());
  const int ne = int(topo.edges.size());
  const int nt = int(mesh.triangles.size());
  const int per_edge = k - 1;
  const int per_tri = int(basis.interior_nodes().size());

  space.n_scalar_nodes = nv + ne * per_edge + nt * per_tri;
  space.node_pos.assign(space.n_scalar_nodes, Point2{});
  std::vector<char> pos_set(space.n_scalar_nodes, 0);
  space.tri_nodes.assign(nt, std::vector<int>(basis.size(), -1));

  for (int v = 0; v < nv; ++v) {
    space.node_pos[v] = mesh.vertices[v];
    pos_set[v] = 1;
  }

  for (int t = 0; t < nt; ++t) {
    const auto& tv = mesh.triangles[t];
    const Point2 p0 = mesh.vertices[tv[0]], p1 = mesh.vertices[tv[1]],
                 p2 = mesh.vertices[tv[2]];
    auto& local = space.tri_nodes[t];
    int interior_count = 0;
    for (int p = 0; p < basis.size(); ++p) {
      const auto [i, j] = basis.lattice()[p];
      int global = -1;
      if (i == 0 && j == 0) global = tv[0];
      else if (i == k && j == 0) global = tv[1];
      else if (i == 0 && j == k) global = tv[2];
      else if (j == 0) {  // local edge 0: (v0, v1), parameter s = i
        const int e = topo.tri_edges[t][0];
        const int s = (tv[0] < tv[1]) ? i : k - i;
        global = nv + e * per_edge + (s - 1);
      } else if (i + j == k) {  // local edge 1: (v1, v2), parameter s = j
        const int e = topo.tri_edges[t][1];
        const int s = (tv[1] < tv[2]) ? j : k - j;
        global = nv + e * per_edge + (s - 1);
      } else if (i == 0) {  // local edge 2: (v2, v0), parameter s = k - j
        const int e = topo.tri_edges[t][2];
        const int s = (tv[2] < tv[0]) ? (k - j) : j;
        global = nv + e * per_edge + (s - 1);
      } else {
        global = nv + ne * per_edge + t * per_tri + interior_count++;
      }
      local[p] = global;
      if (!pos_set[global]) {
        const double a = double(i) / k, b = double(j) / k;
        space.node_pos[global] =
            p0 + a * (p1 - p0) + b * (p2 - p0);
        pos_set[global] = 1;
      }
    }
  }
  space.raw_dim = space.components * space.n_scalar_nodes;
}

Eigen::SparseMatrix<double> identity_reduction(int n) {
  Eigen::SparseMatrix<double> r(n, n);
  r.setIdentity();
  return r;
}

}  // namespace

FeSpace build_scalar_space(const Mesh& mesh, int degree) {
  if (degree < 1 || degree > 4)
    throw std::invalid_argument("scalar space degree must be 1..4");
  FeSpace space;
  space.mesh = &mesh;
  space.kind = SpaceKind::ScalarLagrange;
  space.degree = degree;
  space.components = 1;
  build_continuous_nodes(space);
  space.reduction = identity_reduction(space.raw_dim);
  space.n_free = space.raw_dim;
  return space;
}

FeSpace build_vector_space(const Mesh& mesh, int degree, RotBC bc) {
  if (degree < 1 || degree > 4)
    throw std::invalid_argument("vector space degree must be 1..4");
  FeSpace space;
  space.mesh = &mesh;
  space.kind = SpaceKind::VectorLagrange;
  space.degree = degree;
  space.components = 2;
  space.bc = bc;
  build_continuous_nodes(space);

  if (bc == RotBC::None) {
    space.reduction = identity_reduction(space.raw_dim);
    space.n_free = space.raw_dim;
    return space;
  }

  // Tag boundary nodes with the direction of their boundary segment.
  const MeshTopology topo = build_topology(mesh);
  const int k = degree;
  const int nv = int(mesh.vertices.size());
  std::vector<char> has_dir(space.n_scalar_nodes, 0);
  std::vector<Point2> dir(space.n_scalar_nodes);
  std::vector<char> fixed(space.n_scalar_nodes, 0);
  for (int c : mesh.corner_vertices) fixed[c] = 1;

  auto tag = [&](int node, Point2 t) {
    if (fixed[node]) return;
    if (!has_dir[node]) {
      dir[node] = t;
      has_dir[node] = 1;
      return;
    }
    const double turn =
        std::atan2(std::abs(cross(dir[node], t)), dot(dir[node], t));
    if (turn > 1e-9)
      throw std::runtime_error(
          "non-collinear boundary edges at a non-corner node (vertex " +
          std::to_string(node) + ")");
  };

  for (const auto& be : mesh.boundary_edges) {
    const Point2 t = normalized(mesh.vertices[be.b] - mesh.vertices[be.a]);
    tag(be.a, t);
    tag(be.b, t);
    const int e = topo.find_edge(be.a, be.b);
    for (int s = 1; s < k; ++s) {
      const int node = nv + e * (k - 1) + (s - 1);
      tag(node, t);
    }
  }

  // Free columns: two per interior node, the outward-normal direction per
  // non-corner boundary node, none at corners.
  std::vector<Eigen::Triplet<double>> trips;
  space.node_kind.assign(space.n_scalar_nodes, 0);
  space.node_normal.assign(space.n_scalar_nodes, Point2{});
  space.node_col.assign(space.n_scalar_nodes, -1);
  int col = 0;
  for (int node = 0; node < space.n_scalar_nodes; ++node) {
    if (fixed[node]) {
      space.node_kind[node] = 2;
      continue;
    }
    if (!has_dir[node]) {
      space.node_col[node] = col;
      trips.emplace_back(space.dof(node, 0), col++, 1.0);
      trips.emplace_back(space.dof(node, 1), col++, 1.0);
    } else {
      const Point2 n = normalized({dir[node].y, -dir[node].x});  // outward
      space.node_kind[node] = 1;
      space.node_normal[node] = n;
      space.node_col[node] = col;
      trips.emplace_back(space.dof(node, 0), col, n.x);
      trips.emplace_back(space.dof(node, 1), col, n.y);
      ++col;
    }
  }
  space.reduction.resize(space.raw_dim, col);
  space.reduction.setFromTriplets(trips.begin(), trips.end());
  space.n_free = col;
  return space;
}

FeSpace build_dg_space(const Mesh& mesh, int degree) {
  if (degree < 0 || degree > 3)
    throw std::invalid_argument("dg space degree must be 0..3");
  FeSpace space;
  space.mesh = &mesh;
  space.kind = SpaceKind::ScalarDG;
  space.degree = degree;
  space.components = 1;
  const RefBasis& basis = space.basis();
  const int nloc = basis.size();
  const int nt = int(mesh.triangles.size());
  space.n_scalar_nodes = nt * nloc;
  space.raw_dim = space.n_scalar_nodes;
  space.tri_nodes.assign(nt, std::vector<int>(nloc, -1));
  space.node_pos.resize(space.n_scalar_nodes);
  for (int t = 0; t < nt; ++t) {
    const auto& tv = mesh.triangles[t];
    const Point2 p0 = mesh.vertices[tv[0]], p1 = mesh.vertices[tv[1]],
                 p2 = mesh.vertices[tv[2]];
    for (int p = 0; p < nloc; ++p) {
      const int node = t * nloc + p;
      space.tri_nodes[t][p] = node;
      if (degree == 0) {
        space.node_pos[node] = (p0 + p1 + p2) / 3.0;
      } else {
        const auto [i, j] = basis.lattice()[p];
        const double a = double(i) / degree, b = double(j) / degree;
        space.node_pos[node] = p0 + a * (p1 - p0) + b * (p2 - p0);
      }
    }
  }
  space.reduction = identity_reduction(space.raw_dim);
  space.n_free = space.raw_dim;
  return space;
}

FeSpace build_pressure_space(const Mesh& mesh, int degree,
                             const VertexClassification& classification,
                             int nullspace_cap) {
  FeSpace space = build_dg_space(mesh, degree);
  const RefBasis& basis = space.basis();
  const QuadratureRule& rule = triangle_rule_deg8();

  std::vector<Eigen::Triplet<double>> trips;
  int row = 0;

  // Global mean.
  for (int t = 0; t < int(mesh.triangles.size()); ++t) {
    const NodalBasisEval eval = eval_basis(space, t, rule);
    const Eigen::VectorXd integrals =
        eval.area * (eval.values * rule.weights);
    for (int p = 0; p < basis.size(); ++p)
      trips.emplace_back(row, space.tri_nodes[t][p], integrals[p]);
  }
  ++row;

  // Alternating one-sided values at interior singular vertices, in star
  // order.
  const MeshTopology topo = build_topology(mesh);
  auto local_vertex_values = [&](int t, int z) {
    const auto& tv = mesh.triangles[t];
    double xr = 0, yr = 0;
    if (tv[1] == z) xr = 1;
    else if (tv[2] == z) yr = 1;
    else if (tv[0] != z) throw std::logic_error("vertex not in triangle");
    return basis.values(xr, yr);
  };
  for (int z : classification.singular_interior) {
    const VertexStar star = vertex_star(mesh, z, topo);
    if (star.triangles.size() != 4)
      throw std::logic_error("interior singular vertex without 4 triangles");
    double sign = 1.0;
    for (int t : star.triangles) {
      const Eigen::VectorXd vals = local_vertex_values(t, z);
      for (int p = 0; p < basis.size(); ++p)
        if (vals[p] != 0.0)
          trips.emplace_back(row, space.tri_nodes[t][p], sign * vals[p]);
      sign = -sign;
    }
    ++row;
  }

  // Point values at singular corners (single-triangle stars).
  for (int z : classification.singular_corner) {
    const VertexStar star = vertex_star(mesh, z, topo);
    for (int t : star.triangles) {
      const Eigen::VectorXd vals = local_vertex_values(t, z);
      for (int p = 0; p < basis.size(); ++p)
        if (vals[p] != 0.0)
          trips.emplace_back(row, space.tri_nodes[t][p], vals[p]);
    }
    ++row;
  }

  space.constraints.resize(row, space.raw_dim);
  space.constraints.setFromTriplets(trips.begin(), trips.end());
  space.expected_constraint_rank = row;

  if (space.raw_dim <= nullspace_cap) {
    const Eigen::MatrixXd dense = Eigen::MatrixXd(space.constraints);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(dense);
    lu.setThreshold(1e-10);
    space.constraint_rank = int(lu.rank());
    if (space.constraint_rank != space.expected_constraint_rank)
      space.warnings.push_back(
          "constraint rank " + std::to_string(space.constraint_rank) +
          " differs from expected " +
          std::to_string(space.expected_constraint_rank));
    const Eigen::MatrixXd kernel = lu.kernel();
    // Orthonormalize for a well-conditioned reduced basis.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(kernel);
    const Eigen::MatrixXd q =
        qr.householderQ() * Eigen::MatrixXd::Identity(space.raw_dim, kernel.cols());
    space.reduction = q.sparseView(1.0, 1e-300);
    space.n_free = int(kernel.cols());
  } else {
    space.n_free = -1;
    space.reduction.resize(space.raw_dim, 0);
  }
  return space;
}

FeSpace build_pressure_space(const RefinedMesh& rm, int degree,
                             int nullspace_cap) {
  const VertexClassification cl =
      classify(rm.mesh, 1e-8, &rm.constructed_singular_points);
  return build_pressure_space(rm.mesh, degree, cl, nullspace_cap);
}

NodalBasisEval eval_basis(const FeSpace& space, int tri,
                          const QuadratureRule& rule) {
  const Mesh& mesh = *space.mesh;
  const auto& tv = mesh.triangles[tri];
  const Point2 p0 = mesh.vertices[tv[0]], p1 = mesh.vertices[tv[1]],
               p2 = mesh.vertices[tv[2]];
  const double det = signed_area2(p0, p1, p2);  // 2 * area, positive

  // J = [p1-p0 | p2-p0]; physical gradients are Gref * J^{-1}.
  const double j00 = p1.x - p0.x, j01 = p2.x - p0.x;
  const double j10 = p1.y - p0.y, j11 = p2.y - p0.y;
  const double i00 = j11 / det, i01 = -j01 / det;
  const double i10 = -j10 / det, i11 = j00 / det;

  const RefBasis& basis = space.basis();
  const int nloc = basis.size();
  const int nq = int(rule.points.rows());
  NodalBasisEval out;
  out.area = 0.5 * det;
  out.values.resize(nloc, nq);
  out.grad_x.resize(nloc, nq);
  out.grad_y.resize(nloc, nq);
  for (int q = 0; q < nq; ++q) {
    const double x = rule.points(q, 0), y = rule.points(q, 1);
    out.values.col(q) = basis.values(x, y);
    const Eigen::MatrixX2d g = basis.gradients(x, y);
    out.grad_x.col(q) = g.col(0) * i00 + g.col(1) * i10;
    out.grad_y.col(q) = g.col(0) * i01 + g.col(1) * i11;
  }
  return out;
}

Eigen::VectorXd eval_function(const FeSpace& space,
                              const Eigen::VectorXd& raw_coeffs, int tri,
                              double xref, double yref) {
  const Eigen::VectorXd vals = space.basis().values(xref, yref);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.components);
  for (int p = 0; p < space.local_size(); ++p) {
    const int node = space.tri_nodes[tri][p];
    for (int c = 0; c < space.components; ++c)
      out[c] += raw_coeffs[space.dof(node, c)] * vals[p];
  }
  return out;
}

Eigen::VectorXd rot_to_dg(const FeSpace& vspace, const FeSpace& dgspace,
                          const Eigen::VectorXd& v_raw) {
  if (vspace.mesh != dgspace.mesh)
    throw std::invalid_argument("rot_to_dg: spaces live on different meshes");
  if (dgspace.degree != vspace.degree - 1)
    throw std::invalid_argument("rot_to_dg: dg degree must be k-1");
  const Mesh& mesh = *vspace.mesh;
  const RefBasis& vbasis = vspace.basis();
  const RefBasis& qbasis = dgspace.basis();

  Eigen::VectorXd out(dgspace.raw_dim);
  for (int t = 0; t < int(mesh.triangles.size()); ++t) {
    for (int p = 0; p < qbasis.size(); ++p) {
      // Reference location of the DG node.
      double xr, yr;
      if (dgspace.degree == 0) {
        xr = yr = 1.0 / 3;
      } else {
        xr = double(qbasis.lattice()[p][0]) / dgspace.degree;
        yr = double(qbasis.lattice()[p][1]) / dgspace.degree;
      }
      // Physical gradients of the vector basis at that point.
      const auto& tv = mesh.triangles[t];
      const Point2 p0 = mesh.vertices[tv[0]], p1 = mesh.vertices[tv[1]],
                   p2 = mesh.vertices[tv[2]];
      const double det = signed_area2(p0, p1, p2);
      const double i00 = (p2.y - p0.y) / det, i01 = -(p2.x - p0.x) / det;
      const double i10 = -(p1.y - p0.y) / det, i11 = (p1.x - p0.x) / det;
      const Eigen::MatrixX2d g = vbasis.gradients(xr, yr);
      double rot = 0.0;
      for (int i = 0; i < vbasis.size(); ++i) {
        const double gx = g(i, 0) * i00 + g(i, 1) * i10;
        const double gy = g(i, 0) * i01 + g(i, 1) * i11;
        const int node = vspace.tri_nodes[t][i];
        rot += v_raw[vspace.dof(node, 1)] * gx - v_raw[vspace.dof(node, 0)] * gy;
      }
      out[dgspace.tri_nodes[t][p]] = rot;
    }
  }
  return out;
}

}  // namespace maxlag
