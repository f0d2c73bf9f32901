#pragma once

#include <Eigen/Dense>

namespace maxlag {

/// Quadrature rule on the reference triangle {(0,0),(1,0),(0,1)}.
///
/// Points are reference coordinates (x, y); barycentric coordinates are
/// (1-x-y, x, y). Weights are normalized to sum to 1, so that
/// integral_T f = area(T) * sum_q w_q f(x_q) for affine triangles.
struct QuadratureRule {
  Eigen::MatrixX2d points;
  Eigen::VectorXd weights;
  int degree = 0;  // exactness degree
};

/// Symmetric 16-point rule of exactness degree 8, used uniformly by the
/// assembly routines (sufficient for all forms up to degree-4 spaces).
const QuadratureRule& triangle_rule_deg8();

/// Tensor Gauss rule collapsed onto the triangle; exact to the given degree
/// by construction from 1D Gauss-Legendre. Serves as an independent
/// cross-check of the hard-coded symmetric rule.
QuadratureRule collapsed_triangle_rule(int degree);

/// Gauss-Legendre nodes and weights on [0, 1] (weights sum to 1).
void gauss_legendre_01(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

}  // namespace maxlag
