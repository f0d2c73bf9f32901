#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace maxlag {

/// Nodal Lagrange basis of degree k on the reference triangle, with nodes
/// on the equispaced lattice {(i/k, j/k) : i,j >= 0, i+j <= k} (a single
/// barycenter node for k = 0).
///
/// Lattice points are ordered row-major in (i, j); the helpers below locate
/// vertex and edge nodes within that ordering.
class RefBasis {
 public:
  explicit RefBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return int(lattice_.size()); }
  const std::vector<std::array<int, 2>>& lattice() const { return lattice_; }

  /// Values of all basis functions at reference point (x, y).
  Eigen::VectorXd values(double x, double y) const;
  /// Reference-coordinate gradients, one row per basis function.
  Eigen::MatrixX2d gradients(double x, double y) const;

  /// Lattice index of reference vertex v (0,1,2); requires degree >= 1.
  int vertex_node(int v) const;
  /// Lattice index of the s-th interior node (s = 1..k-1) of local edge
  /// le = 0,1,2 (edges (0,1), (1,2), (2,0)), counted from the first vertex.
  int edge_node(int le, int s) const;
  /// Lattice indices of interior (bubble) nodes, in lattice order.
  const std::vector<int>& interior_nodes() const { return interior_; }

 private:
  int degree_;
  std::vector<std::array<int, 2>> lattice_;
  Eigen::MatrixXd coeff_;  // monomial coefficients, column per basis fn
  std::vector<int> interior_;
  int lattice_index(int i, int j) const;
};

/// Shared instances (degrees 0..4).
const RefBasis& ref_basis(int degree);

}  // namespace maxlag
