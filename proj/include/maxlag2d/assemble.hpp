#pragma once

#include <Eigen/Sparse>
#include <string>

#include "maxlag2d/fespace.hpp"

namespace maxlag {

/// Symmetric sparse matrix stored as its lower triangle.
class SymmetricSparseMatrix {
 public:
  SymmetricSparseMatrix() = default;

  /// Keeps the lower triangle of `full` (which must be symmetric).
  static SymmetricSparseMatrix from_full(const Eigen::SparseMatrix<double>& full);

  int rows() const { return int(lower_.rows()); }
  const Eigen::SparseMatrix<double>& lower() const { return lower_; }

  /// Symmetric completion (lower + strict upper mirror).
  Eigen::SparseMatrix<double> full() const;

  /// y = A x using the symmetric view.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

  /// x' A x.
  double quadratic_form(const Eigen::VectorXd& x) const {
    return x.dot(apply(x));
  }

  double frobenius_norm() const;

 private:
  Eigen::SparseMatrix<double> lower_;
};

/// Stiffness of the scalar 2D curl: K[i][j] = integral rot(phi_j) rot(phi_i)
/// over the whole domain, in reduced coordinates.
SymmetricSparseMatrix assemble_rot_rot(const FeSpace& vspace);

/// Gram (mass) matrix in reduced coordinates.
SymmetricSparseMatrix assemble_mass(const FeSpace& space);

/// Mixed form B[q][v] = integral q * rot(v), reduced on both sides.
/// Requires q degree == v degree - 1 and the same mesh.
Eigen::SparseMatrix<double> assemble_mixed(const FeSpace& vspace,
                                           const FeSpace& qspace);

/// MatrixMarket coordinate output (symmetric or general).
void write_matrix_market(const SymmetricSparseMatrix& matrix,
                         const std::string& path);
void write_matrix_market(const Eigen::SparseMatrix<double>& matrix,
                         const std::string& path);

}  // namespace maxlag
