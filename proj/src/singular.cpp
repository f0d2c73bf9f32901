#include "maxlag2d/singular.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace maxlag {

bool VertexClassification::is_singular(int z) const {
  return std::binary_search(singular_interior.begin(), singular_interior.end(), z) ||
         std::binary_search(singular_boundary.begin(), singular_boundary.end(), z);
}

double theta(const Mesh& mesh, int z) {
  return theta_of_star(vertex_star(mesh, z));
}

VertexClassification classify(const Mesh& mesh, double tol_singular,
                              const std::vector<int>* constructed) {
  const auto stars = all_vertex_stars(mesh);
  const int nv = int(mesh.vertices.size());

  std::vector<char> tagged(nv, 0);
  if (constructed)
    for (int z : *constructed) tagged.at(z) = 1;

  VertexClassification cl;
  cl.theta.resize(nv);
  cl.theta_min = std::numeric_limits<double>::infinity();

  for (int z = 0; z < nv; ++z) {
    const VertexStar& star = stars[z];
    cl.theta[z] = theta_of_star(star);
    const bool singular = tagged[z] || cl.theta[z] < tol_singular;
    const int n = int(star.triangles.size());
    if (!singular) {
      cl.theta_min = std::min(cl.theta_min, cl.theta[z]);
      if (cl.theta[z] < 0.05) cl.nearly_singular.push_back(z);
      continue;
    }
    if (star.is_boundary) {
      cl.singular_boundary.push_back(z);
      if (n == 1) cl.singular_corner.push_back(z);
      if (n > 2)
        cl.warnings.push_back("boundary singular vertex " + std::to_string(z) +
                              " has " + std::to_string(n) + " star triangles");
    } else {
      if (n != 4) {
        // An exactly singular interior vertex always has a 4-triangle star;
        // a tolerance hit with another valence is treated as nearly singular.
        cl.theta_min = std::min(cl.theta_min, cl.theta[z]);
        cl.nearly_singular.push_back(z);
        cl.warnings.push_back("interior vertex " + std::to_string(z) +
                              " within singular tolerance but valence " +
                              std::to_string(n) + "; left unconstrained");
        continue;
      }
      cl.singular_interior.push_back(z);
    }
  }
  return cl;
}

double jump_theta(std::span<const double> one_sided_values) {
  if (one_sided_values.size() != 4)
    throw std::invalid_argument("jump_theta expects exactly 4 one-sided values");
  return one_sided_values[0] - one_sided_values[1] + one_sided_values[2] -
         one_sided_values[3];
}

}  // namespace maxlag
