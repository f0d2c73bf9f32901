#include "maxlag2d/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace maxlag {

namespace {
constexpr double kLShapeLambda1 = 0.149511749824251;
}

double reference_lambda1(MeshDomain domain) {
  return domain == MeshDomain::UnitSquare
             ? std::numbers::pi * std::numbers::pi
             : kLShapeLambda1;
}

ReferenceSpectrum reference_spectrum(MeshDomain domain, int count) {
  if (count < 1) throw std::invalid_argument("reference count must be >= 1");
  ReferenceSpectrum ref;
  if (domain == MeshDomain::UnitSquare) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    // (n, m) up to a box large enough for the requested count.
    const int box = int(std::ceil(std::sqrt(double(count)))) + 2;
    for (int n = 0; n <= box; ++n)
      for (int m = 0; m <= box; ++m)
        if (n + m > 0) ref.values.push_back(pi2 * (n * n + m * m));
    std::sort(ref.values.begin(), ref.values.end());
    ref.values.resize(count);
    ref.known.assign(count, true);
    ref.provenance = "pi^2 (n^2 + m^2), counted with multiplicity";
  } else {
    ref.values.assign(count, 0.0);
    ref.known.assign(count, false);
    ref.values[0] = kLShapeLambda1;
    ref.known[0] = true;
    ref.provenance =
        "L-shape corner-singularity benchmark (first eigenvalue only)";
  }
  return ref;
}

}  // namespace maxlag
