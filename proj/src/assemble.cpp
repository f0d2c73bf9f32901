#include "maxlag2d/assemble.hpp"

#include <fstream>

namespace maxlag {

SymmetricSparseMatrix SymmetricSparseMatrix::from_full(
    const Eigen::SparseMatrix<double>& full) {
  SymmetricSparseMatrix out;
  out.lower_ = full.triangularView<Eigen::Lower>();
  out.lower_.makeCompressed();
  return out;
}

Eigen::SparseMatrix<double> SymmetricSparseMatrix::full() const {
  Eigen::SparseMatrix<double> strict =
      lower_.triangularView<Eigen::StrictlyLower>();
  Eigen::SparseMatrix<double> out = lower_ + Eigen::SparseMatrix<double>(strict.transpose());
  out.makeCompressed();
  return out;
}

Eigen::VectorXd SymmetricSparseMatrix::apply(const Eigen::VectorXd& x) const {
  return lower_.selfadjointView<Eigen::Lower>() * x;
}

double SymmetricSparseMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (int k = 0; k < lower_.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(lower_, k); it; ++it) {
      const double v2 = it.value() * it.value();
      sum += (it.row() == it.col()) ? v2 : 2.0 * v2;
    }
  return std::sqrt(sum);
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// rot(phi e_0) = -d phi/dy, rot(phi e_1) = d phi/dx.
void element_rot(const NodalBasisEval& eval, int q, int nloc,
                 Eigen::VectorXd& rot) {
  rot.resize(2 * nloc);
  for (int i = 0; i < nloc; ++i) {
    rot[2 * i] = -eval.grad_y(i, q);
    rot[2 * i + 1] = eval.grad_x(i, q);
  }
}

Eigen::SparseMatrix<double> reduce(const FeSpace& space,
                                   const Eigen::SparseMatrix<double>& raw) {
  if (space.n_free < 0)
    throw std::logic_error("space reduction not materialized");
  Eigen::SparseMatrix<double> out =
      space.reduction.transpose() * raw * space.reduction;
  out.makeCompressed();
  return out;
}

}  // namespace

SymmetricSparseMatrix assemble_rot_rot(const FeSpace& vspace) {
  if (vspace.kind != SpaceKind::VectorLagrange)
    throw std::invalid_argument("rot-rot form needs a vector space");
  const Mesh& mesh = *vspace.mesh;
  const QuadratureRule& rule = triangle_rule_deg8();
  const int nloc = vspace.local_size();
  const int nq = int(rule.points.rows());

  Triplets trips;
  trips.reserve(mesh.triangles.size() * size_t(2 * nloc) * size_t(2 * nloc));
  Eigen::VectorXd rot;
  Eigen::MatrixXd ke(2 * nloc, 2 * nloc);
  for (int t = 0; t < int(mesh.triangles.size()); ++t) {
    const NodalBasisEval eval = eval_basis(vspace, t, rule);
    ke.setZero();
    for (int q = 0; q < nq; ++q) {
      element_rot(eval, q, nloc, rot);
      ke.noalias() += (eval.area * rule.weights[q]) * rot * rot.transpose();
    }
    for (int i = 0; i < nloc; ++i)
      for (int ci = 0; ci < 2; ++ci)
        for (int j = 0; j < nloc; ++j)
          for (int cj = 0; cj < 2; ++cj)
            trips.emplace_back(vspace.dof(vspace.tri_nodes[t][i], ci),
                               vspace.dof(vspace.tri_nodes[t][j], cj),
                               ke(2 * i + ci, 2 * j + cj));
  }
  Eigen::SparseMatrix<double> raw(vspace.raw_dim, vspace.raw_dim);
  raw.setFromTriplets(trips.begin(), trips.end());
  return SymmetricSparseMatrix::from_full(reduce(vspace, raw));
}

SymmetricSparseMatrix assemble_mass(const FeSpace& space) {
  const Mesh& mesh = *space.mesh;
  const QuadratureRule& rule = triangle_rule_deg8();
  const int nloc = space.local_size();
  const int nc = space.components;

  Triplets trips;
  Eigen::MatrixXd me(nloc, nloc);
  for (int t = 0; t < int(mesh.triangles.size()); ++t) {
    const NodalBasisEval eval = eval_basis(space, t, rule);
    me.setZero();
    for (int q = 0; q < int(rule.points.rows()); ++q)
      me.noalias() += (eval.area * rule.weights[q]) * eval.values.col(q) *
                      eval.values.col(q).transpose();
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j)
        for (int c = 0; c < nc; ++c)
          trips.emplace_back(space.dof(space.tri_nodes[t][i], c),
                             space.dof(space.tri_nodes[t][j], c), me(i, j));
  }
  Eigen::SparseMatrix<double> raw(space.raw_dim, space.raw_dim);
  raw.setFromTriplets(trips.begin(), trips.end());
  return SymmetricSparseMatrix::from_full(reduce(space, raw));
}

Eigen::SparseMatrix<double> assemble_mixed(const FeSpace& vspace,
                                           const FeSpace& qspace) {
  if (vspace.mesh != qspace.mesh)
    throw std::invalid_argument("mixed form: spaces on different meshes");
  if (qspace.degree != vspace.degree - 1)
    throw std::invalid_argument("mixed form: q degree must be v degree - 1");
  const Mesh& mesh = *vspace.mesh;
  const QuadratureRule& rule = triangle_rule_deg8();
  const int nv = vspace.local_size();
  const int nq_loc = qspace.local_size();

  Triplets trips;
  Eigen::VectorXd rot;
  Eigen::MatrixXd be(nq_loc, 2 * nv);
  for (int t = 0; t < int(mesh.triangles.size()); ++t) {
    const NodalBasisEval veval = eval_basis(vspace, t, rule);
    const NodalBasisEval qeval = eval_basis(qspace, t, rule);
    be.setZero();
    for (int q = 0; q < int(rule.points.rows()); ++q) {
      element_rot(veval, q, nv, rot);
      be.noalias() += (veval.area * rule.weights[q]) * qeval.values.col(q) *
                      rot.transpose();
    }
    for (int m = 0; m < nq_loc; ++m)
      for (int i = 0; i < nv; ++i)
        for (int c = 0; c < 2; ++c)
          trips.emplace_back(qspace.tri_nodes[t][m],
                             vspace.dof(vspace.tri_nodes[t][i], c),
                             be(m, 2 * i + c));
  }
  Eigen::SparseMatrix<double> raw(qspace.raw_dim, vspace.raw_dim);
  raw.setFromTriplets(trips.begin(), trips.end());
  if (qspace.n_free < 0 || vspace.n_free < 0)
    throw std::logic_error("mixed form requires materialized reductions");
  Eigen::SparseMatrix<double> out =
      qspace.reduction.transpose() * raw * vspace.reduction;
  out.makeCompressed();
  return out;
}

namespace {

void write_mm(const Eigen::SparseMatrix<double>& m, const std::string& path,
              bool symmetric) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "%%MatrixMarket matrix coordinate real "
      << (symmetric ? "symmetric" : "general") << "\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  char buf[64];
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", int(it.row()) + 1,
                    int(it.col()) + 1, it.value());
      out << buf;
    }
}

}  // namespace

void write_matrix_market(const SymmetricSparseMatrix& matrix,
                         const std::string& path) {
  write_mm(matrix.lower(), path, true);
}

void write_matrix_market(const Eigen::SparseMatrix<double>& matrix,
                         const std::string& path) {
  write_mm(matrix, path, false);
}

}  // namespace maxlag
