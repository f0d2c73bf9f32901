#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "maxlag2d/basis.hpp"
#include "maxlag2d/mesh.hpp"
#include "maxlag2d/quadrature.hpp"
#include "maxlag2d/refine.hpp"
#include "maxlag2d/singular.hpp"

namespace maxlag {

enum class SpaceKind { VectorLagrange, ScalarLagrange, ScalarDG };
enum class RotBC { None, H0Rot };

/// Basis data of one triangle at a quadrature rule: values and physical
/// gradients per local (scalar) basis function and point.
struct NodalBasisEval {
  Eigen::MatrixXd values;  // nloc x nq
  Eigen::MatrixXd grad_x;  // nloc x nq, d/dx in physical coordinates
  Eigen::MatrixXd grad_y;  // nloc x nq
  double area = 0.0;
};

/// A scalar or vector finite element space with an affine reduction from
/// raw nodal coefficients to free coefficients.
///
/// Raw coefficients are indexed dof(node, comp) = components*node + comp.
/// All constraints are homogeneous, so raw = reduction * reduced with
/// the reduction's columns spanning the admissible subspace.
struct FeSpace {
  const Mesh* mesh = nullptr;
  SpaceKind kind = SpaceKind::ScalarLagrange;
  int degree = 1;
  RotBC bc = RotBC::None;
  int components = 1;

  int n_scalar_nodes = 0;
  std::vector<Point2> node_pos;
  std::vector<std::vector<int>> tri_nodes;  // local lattice -> global node

  int raw_dim = 0;
  int n_free = -1;  // -1: reduction not materialized (large DG spaces)
  Eigen::SparseMatrix<double> reduction;  // raw_dim x n_free

  // Per-node constraint metadata of continuous spaces:
  // kind 0 = interior (components free), 1 = boundary (normal component
  // free), 2 = fixed (corner). node_col is the first reduced column of the
  // node, -1 when fixed.
  std::vector<signed char> node_kind;
  std::vector<Point2> node_normal;  // outward unit normal, kind 1 only
  std::vector<int> node_col;

  // Constraint functionals of constrained DG (pressure) spaces, one row
  // per functional: mean value, alternating vertex jumps, corner values.
  Eigen::SparseMatrix<double> constraints;  // m x raw_dim
  int expected_constraint_rank = 0;
  int constraint_rank = 0;
  std::vector<std::string> warnings;

  const RefBasis& basis() const { return ref_basis(degree); }
  int local_size() const { return basis().size(); }
  int dof(int node, int comp) const { return components * node + comp; }

  Eigen::VectorXd raw_from_reduced(const Eigen::VectorXd& reduced) const;
};

/// Continuous vector Lagrange space of degree k (1..4). With RotBC::H0Rot,
/// the tangential component is eliminated at every boundary node and both
/// components at domain corners.
FeSpace build_vector_space(const Mesh& mesh, int degree, RotBC bc);
inline FeSpace build_vector_space(const RefinedMesh& rm, int degree, RotBC bc) {
  return build_vector_space(rm.mesh, degree, bc);
}

/// Continuous scalar Lagrange space (no constraints).
FeSpace build_scalar_space(const Mesh& mesh, int degree);

/// Discontinuous P_degree space with no constraints.
FeSpace build_dg_space(const Mesh& mesh, int degree);

/// Constrained discontinuous pressure space: one alternating-jump
/// functional per interior singular vertex, one point value per singular
/// corner, and the global mean. The nullspace basis (reduction) is
/// materialized by dense factorization when raw_dim <= nullspace_cap.
FeSpace build_pressure_space(const Mesh& mesh, int degree,
                             const VertexClassification& classification,
                             int nullspace_cap = 8192);

/// Pressure space of a refined mesh, classifying with provenance tags.
FeSpace build_pressure_space(const RefinedMesh& rm, int degree,
                             int nullspace_cap = 8192);

/// Values and physical gradients of the space's basis on one triangle.
NodalBasisEval eval_basis(const FeSpace& space, int tri,
                          const QuadratureRule& rule);

/// Value of each component of the raw-coefficient function at a reference
/// point of the given triangle.
Eigen::VectorXd eval_function(const FeSpace& space,
                              const Eigen::VectorXd& raw_coeffs, int tri,
                              double xref, double yref);

/// rot of a vector-space function, interpolated exactly into the nodal
/// coefficients of a DG space of degree (k-1) on the same mesh.
Eigen::VectorXd rot_to_dg(const FeSpace& vspace, const FeSpace& dgspace,
                          const Eigen::VectorXd& v_raw);

}  // namespace maxlag
