#pragma once

#include <string>
#include <vector>

#include "maxlag2d/mesh.hpp"

namespace maxlag {

/// Reference eigenvalues with multiplicity, ascending. On the L-shape only
/// the first value has a trusted reference; the rest are marked unknown and
/// never used in error columns.
struct ReferenceSpectrum {
  std::vector<double> values;
  std::vector<bool> known;
  std::string provenance;
};

/// Unit square: pi^2 (n^2 + m^2) over integer pairs (n, m) >= 0 with
/// n + m > 0, each ordered pair counted once. L-shape ([-pi,pi]-scaled):
/// first eigenvalue 0.149511749824251 from the corner-singularity
/// benchmark.
ReferenceSpectrum reference_spectrum(MeshDomain domain, int count);

/// First nonzero reference eigenvalue (used by the shift heuristic).
double reference_lambda1(MeshDomain domain);

}  // namespace maxlag
