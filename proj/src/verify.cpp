#include "maxlag2d/verify.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <stdexcept>

#include "maxlag2d/eig.hpp"
#include "maxlag2d/quadrature.hpp"

namespace maxlag {

double check_exactness(const FeSpace& vspace, const FeSpace& qspace) {
  if (vspace.mesh != qspace.mesh)
    throw std::invalid_argument("exactness check: different meshes");
  if (qspace.degree != vspace.degree - 1)
    throw std::invalid_argument("exactness check: q degree must be k-1");
  if (qspace.constraints.rows() == 0) return 0.0;

  // Unconstrained DG carrier of rot V and its (block diagonal) mass.
  const FeSpace dg = build_dg_space(*qspace.mesh, qspace.degree);
  const SymmetricSparseMatrix mq = assemble_mass(dg);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> mass_solver(mq.full());
  if (mass_solver.info() != Eigen::Success)
    throw std::runtime_error("DG mass factorization failed");

  // Dual Gram matrix of the constraint functionals: G = C M^{-1} C^T.
  const Eigen::MatrixXd ct = Eigen::MatrixXd(qspace.constraints.transpose());
  const Eigen::MatrixXd minv_ct = mass_solver.solve(ct);
  const Eigen::MatrixXd G = ct.transpose() * minv_ct;
  Eigen::LLT<Eigen::MatrixXd> gram(G);
  if (gram.info() != Eigen::Success)
    throw std::runtime_error("constraint Gram factorization failed");

  // distance(rot v, Q)^2 = c^T G^{-1} c with c the constraint violations.
  double worst = 0.0;
  for (int j = 0; j < vspace.n_free; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(vspace.n_free);
    e[j] = 1.0;
    const Eigen::VectorXd r = rot_to_dg(vspace, dg, vspace.raw_from_reduced(e));
    const Eigen::VectorXd c = qspace.constraints * r;
    const double dist2 = c.dot(gram.solve(c));
    worst = std::max(worst, std::sqrt(std::max(0.0, dist2)));
  }
  return worst;
}

double infsup_constant(const FeSpace& vspace, const FeSpace& qspace,
                       int dense_cap) {
  if (vspace.n_free > dense_cap)
    throw std::invalid_argument("infsup_constant: problem above dense cap");
  const Eigen::MatrixXd B = Eigen::MatrixXd(assemble_mixed(vspace, qspace));
  const Eigen::MatrixXd Mv = Eigen::MatrixXd(assemble_mass(vspace).full());
  const Eigen::MatrixXd Mq = Eigen::MatrixXd(assemble_mass(qspace).full());

  Eigen::LLT<Eigen::MatrixXd> mv(Mv);
  if (mv.info() != Eigen::Success)
    throw std::runtime_error("velocity mass is numerically singular");
  const Eigen::MatrixXd S = B * mv.solve(B.transpose());

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
      S, Mq, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("inf-sup eigenproblem failed");
  return std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
}

SourceOperator::SourceOperator(const FeSpace& vspace, const FeSpace& qspace,
                               int dense_cap) {
  nv_ = vspace.n_free;
  nq_ = qspace.n_free;
  if (nv_ < 0 || nq_ < 0)
    throw std::invalid_argument("source operator needs materialized spaces");
  if (nv_ + nq_ > dense_cap)
    throw std::invalid_argument("source operator above dense cap");
  const Eigen::MatrixXd B = Eigen::MatrixXd(assemble_mixed(vspace, qspace));
  const Eigen::MatrixXd Mv = Eigen::MatrixXd(assemble_mass(vspace).full());
  mq_ = Eigen::MatrixXd(assemble_mass(qspace).full());

  Eigen::MatrixXd saddle = Eigen::MatrixXd::Zero(nv_ + nq_, nv_ + nq_);
  saddle.topLeftCorner(nv_, nv_) = Mv;
  saddle.topRightCorner(nv_, nq_) = B.transpose();
  saddle.bottomLeftCorner(nq_, nv_) = B;
  // Guard against a singular saddle before committing to the fast solver.
  Eigen::FullPivLU<Eigen::MatrixXd> probe(saddle);
  probe.setThreshold(1e-12);
  if (!probe.isInvertible())
    throw std::runtime_error(
        "singular saddle matrix: the pair is likely not inf-sup stable");
  saddle_ = Eigen::PartialPivLU<Eigen::MatrixXd>(saddle);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> SourceOperator::apply(
    const Eigen::VectorXd& f_reduced) const {
  return apply_rhs(mq_ * f_reduced);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> SourceOperator::apply_rhs(
    const Eigen::VectorXd& load_reduced) const {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv_ + nq_);
  rhs.tail(nq_) = load_reduced;
  const Eigen::VectorXd sol = saddle_.solve(rhs);
  return {sol.head(nv_), sol.tail(nq_)};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> solve_source(
    const FeSpace& vspace, const FeSpace& qspace,
    const Eigen::VectorXd& f_reduced) {
  return SourceOperator(vspace, qspace).apply(f_reduced);
}

namespace {

// integral over the edge (from, to) of (4 phi_from - 2 phi_to)/|e| * field,
// the dual weight that extracts the nodal value at `from` for linears.
Point2 edge_dual_integral(Point2 from, Point2 to,
                          const std::function<Point2(Point2)>& field) {
  static Eigen::VectorXd nodes, weights;
  if (nodes.size() == 0) gauss_legendre_01(8, nodes, weights);
  Point2 acc{0.0, 0.0};
  for (int q = 0; q < nodes.size(); ++q) {
    const double t = nodes[q];
    const Point2 x = from + t * (to - from);
    acc = acc + (weights[q] * (4.0 - 6.0 * t)) * field(x);
  }
  return acc;
}

}  // namespace

Eigen::VectorXd scott_zhang(const FeSpace& v_p1,
                            const std::function<Point2(Point2)>& field,
                            std::vector<Point2>* corner_values) {
  if (v_p1.kind != SpaceKind::VectorLagrange || v_p1.degree != 1 ||
      v_p1.bc != RotBC::H0Rot)
    throw std::invalid_argument(
        "scott_zhang expects the degree-1 vector space with H0(rot) bc");
  const Mesh& mesh = *v_p1.mesh;
  const MeshTopology topo = build_topology(mesh);

  // Chosen edge per vertex: lowest-index incident edge, restricted to
  // boundary edges for boundary vertices.
  const int nv = int(mesh.vertices.size());
  std::vector<int> chosen(nv, -1);
  for (int e = 0; e < int(topo.edges.size()); ++e) {
    const bool boundary = topo.is_boundary_edge(e);
    for (int v : {topo.edges[e].a, topo.edges[e].b}) {
      const bool v_boundary = (v_p1.node_kind[v] != 0);
      if (v_boundary != boundary) continue;
      if (chosen[v] < 0) chosen[v] = e;
    }
  }

  if (corner_values) corner_values->clear();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v_p1.n_free);
  for (int z = 0; z < nv; ++z) {
    if (v_p1.node_kind[z] == 2) {
      // Corner: combine the two boundary edges through z.
      std::vector<int> bedges;
      for (int e = 0; e < int(topo.edges.size()); ++e)
        if (topo.is_boundary_edge(e) &&
            (topo.edges[e].a == z || topo.edges[e].b == z))
          bedges.push_back(e);
      if (bedges.size() != 2)
        throw std::runtime_error("corner vertex without two boundary edges");
      Point2 n[2], t[2], integral[2];
      for (int i = 0; i < 2; ++i) {
        const auto& e = topo.edges[bedges[i]];
        // Orient with the owning triangle (domain on the left).
        const int a = (e.tri0 >= 0) ? e.a : e.b;
        const int b = (e.tri0 >= 0) ? e.b : e.a;
        t[i] = normalized(mesh.vertices[b] - mesh.vertices[a]);
        n[i] = {t[i].y, -t[i].x};
        const int other = (a == z) ? b : a;
        const Point2 ti = t[i];
        integral[i] = edge_dual_integral(
            mesh.vertices[z], mesh.vertices[other],
            [&](Point2 x) { return Point2{dot(field(x), ti), 0.0}; });
      }
      const double d0 = dot(n[1], t[0]), d1 = dot(n[0], t[1]);
      if (std::abs(d0) < 1e-12 || std::abs(d1) < 1e-12)
        throw std::runtime_error(
            "corner with collinear boundary edges: tangent frame degenerates");
      const Point2 beta = (integral[0].x / d0) * n[1] + (integral[1].x / d1) * n[0];
      if (corner_values) corner_values->push_back(beta);
      continue;  // corner coefficients are constrained to zero
    }

    const int e = chosen[z];
    if (e < 0) throw std::runtime_error("vertex without an admissible edge");
    const int other = (topo.edges[e].a == z) ? topo.edges[e].b : topo.edges[e].a;
    const Point2 value =
        edge_dual_integral(mesh.vertices[z], mesh.vertices[other], field);
    if (v_p1.node_kind[z] == 0) {
      out[v_p1.node_col[z]] = value.x;
      out[v_p1.node_col[z] + 1] = value.y;
    } else {
      // Boundary vertex: the free coefficient is the normal component; the
      // tangential part vanishes for admissible fields and is discarded.
      out[v_p1.node_col[z]] = dot(value, v_p1.node_normal[z]);
    }
  }
  return out;
}

VerificationReport run_verification(const RefinedMesh& rm, int degree) {
  VerificationReport report;
  const FeSpace vh = build_vector_space(rm, degree, RotBC::H0Rot);
  const FeSpace qh = build_pressure_space(rm, degree - 1);
  for (const auto& w : qh.warnings) report.notes.push_back(w);

  report.exactness_residual = check_exactness(vh, qh);

  if (vh.n_free <= 3000 && qh.n_free >= 1) {
    report.infsup_beta = infsup_constant(vh, qh);
  } else {
    report.notes.push_back("inf-sup skipped: above the dense verification cap");
  }

  if (vh.n_free <= 1500) {
    const SymmetricSparseMatrix K = assemble_rot_rot(vh);
    const SymmetricSparseMatrix M = assemble_mass(vh);
    SolveOpts opts;
    opts.force_dense = true;
    opts.want_vectors = false;
    const EigenResult res = solve_generalized(K, M, 1, 1.0, opts);
    report.kernel_dim = res.zero_count;
  } else {
    report.notes.push_back("kernel dimension skipped: above the dense cap");
  }
  return report;
}

}  // namespace maxlag
