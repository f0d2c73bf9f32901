#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maxlag2d/assemble.hpp"
#include "maxlag2d/fespace.hpp"

namespace maxlag {

/// Largest L2 distance, over the vector-space basis, between the rot of a
/// basis function and the constrained pressure space. rot V lands inside
/// the unconstrained DG space exactly, so the distance is the dual-norm
/// size of the violated constraint functionals.
double check_exactness(const FeSpace& vspace, const FeSpace& qspace);

/// Smallest singular value of the scaled mixed form, from the dense
/// generalized problem (B M_V^{-1} B^T) q = beta^2 M_Q q. Desk scale only.
double infsup_constant(const FeSpace& vspace, const FeSpace& qspace,
                       int dense_cap = 3000);

/// Saddle-point source solver for the pair (vspace, qspace): given f in the
/// pressure space, returns the reduced coefficients of (A f, T f).
/// The factorization is reused across calls.
class SourceOperator {
 public:
  SourceOperator(const FeSpace& vspace, const FeSpace& qspace,
                 int dense_cap = 3000);
  std::pair<Eigen::VectorXd, Eigen::VectorXd> apply(
      const Eigen::VectorXd& f_reduced) const;
  /// Same solve with an explicit load vector (f, q_j) in place of M_Q f,
  /// for data given analytically rather than as a member of the space.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> apply_rhs(
      const Eigen::VectorXd& load_reduced) const;
  const Eigen::MatrixXd& pressure_mass() const { return mq_; }

 private:
  int nv_ = 0, nq_ = 0;
  Eigen::MatrixXd mq_;
  Eigen::PartialPivLU<Eigen::MatrixXd> saddle_;
};

std::pair<Eigen::VectorXd, Eigen::VectorXd> solve_source(
    const FeSpace& vspace, const FeSpace& qspace,
    const Eigen::VectorXd& f_reduced);

/// Modified Scott-Zhang interpolant onto the degree-1 vector space with
/// vanishing tangential trace. Nodal values are edge-dual integrals against
/// the chosen edge of each vertex (its lowest-index incident edge, a
/// boundary edge for boundary vertices); corners combine the two boundary
/// edges through the normal/tangent reconstruction and land on the
/// constrained (zero) corner value.
///
/// Returns reduced coefficients. corner_values receives the reconstructed
/// corner vectors (zero for admissible inputs) when non-null. Throws when a
/// corner has collinear boundary edges.
Eigen::VectorXd scott_zhang(
    const FeSpace& v_p1,
    const std::function<Point2(Point2)>& field,
    std::vector<Point2>* corner_values = nullptr);

struct VerificationReport {
  double exactness_residual = -1.0;
  double infsup_beta = -1.0;
  int kernel_dim = -1;
  std::vector<double> source_errors;
  std::vector<std::string> notes;
};

/// Exactness + inf-sup + kernel dimension for one mesh/split/degree, with
/// desk-scale caps (skipped parts are noted).
VerificationReport run_verification(const RefinedMesh& rm, int degree);

}  // namespace maxlag
