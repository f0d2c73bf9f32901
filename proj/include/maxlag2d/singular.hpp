#pragma once

#include <span>
#include <string>
#include <vector>

#include "maxlag2d/mesh.hpp"

namespace maxlag {

/// Per-vertex singularity classification.
///
/// theta[z] is the angle-sum measure in [0, 1]; a vertex is singular when
/// its incident edges lie on at most two straight lines (theta == 0).
/// Interior singular vertices have exactly 4 star triangles, boundary
/// singular ones 1 or 2, and singular corners exactly 1.
struct VertexClassification {
  std::vector<double> theta;
  std::vector<int> singular_interior;  // sorted
  std::vector<int> singular_boundary;  // sorted; includes singular corners
  std::vector<int> singular_corner;    // sorted, subset of singular_boundary
  std::vector<int> nearly_singular;    // nonsingular with theta < 0.05
  double theta_min = 0.0;              // over nonsingular vertices
  std::vector<std::string> warnings;

  bool is_singular(int z) const;
};

/// The angle-sum measure of vertex z (see theta_of_star).
double theta(const Mesh& mesh, int z);

/// Classifies every vertex. A vertex is singular when theta < tol_singular
/// or when it appears in `constructed` (provenance-tagged points from a
/// macro split, exempt from the numeric tolerance). Nearly singular
/// vertices are reported but never constrained.
VertexClassification classify(const Mesh& mesh, double tol_singular = 1e-8,
                              const std::vector<int>* constructed = nullptr);

/// Alternating sum v|T1 - v|T2 + v|T3 - v|T4 of the one-sided values of a
/// piecewise function at an interior vertex with a 4-triangle star, in star
/// order. Throws unless exactly 4 values are given.
double jump_theta(std::span<const double> one_sided_values);

}  // namespace maxlag
