#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "maxlag2d/mesh.hpp"
#include "maxlag2d/refine.hpp"
#include "maxlag2d/rng.hpp"
#include "maxlag2d/singular.hpp"

using namespace maxlag;

namespace {

constexpr double kPi = std::numbers::pi;

// Fan mesh with one interior vertex at the origin whose star has the given
// wedge angles (must sum to 2*pi).
Mesh fan_mesh(const std::vector<double>& angles) {
  Mesh mesh;
  mesh.vertices.push_back({0, 0});
  double phi = 0.0;
  const int n = int(angles.size());
  for (int k = 0; k < n; ++k) {
    mesh.vertices.push_back({std::cos(phi), std::sin(phi)});
    phi += angles[k];
  }
  for (int k = 0; k < n; ++k)
    mesh.triangles.push_back({0, 1 + k, 1 + (k + 1) % n});
  finalize_mesh(mesh);
  return mesh;
}

}  // namespace

TEST_CASE("theta on canonical stars") {
  const Mesh cc = generate_structured(1, MeshPattern::CrissCross,
                                      MeshDomain::UnitSquare);
  CHECK(theta(cc, 4) < 1e-15);

  // All five cyclic pair sums of (pi/3, pi/3, pi/3, pi/2, pi/2): the
  // largest |sin| is sin(2*pi/3) = sqrt(3)/2.
  const Mesh fan = fan_mesh({kPi / 3, kPi / 3, kPi / 3, kPi / 2, kPi / 2});
  CHECK(theta(fan, 0) ==
        doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-13));

  // Boundary vertex with a single triangle.
  const Mesh rs = generate_structured(1, MeshPattern::RightSplit,
                                      MeshDomain::UnitSquare);
  int corner = -1;
  for (int v = 0; v < 4; ++v)
    if (dist(rs.vertices[v], {0, 0}) < 1e-14) corner = v;
  REQUIRE(corner >= 0);
  CHECK(vertex_star(rs, corner).angles.size() == 1);
  CHECK(theta(rs, corner) == 0.0);
}

TEST_CASE("theta is in [0,1] and invariant under rigid motion and scaling") {
  const Mesh base = generate_structured(3, MeshPattern::CrissCross,
                                        MeshDomain::UnitSquare);
  std::vector<double> ref;
  for (int v = 0; v < int(base.vertices.size()); ++v) {
    const double t = theta(base, v);
    CHECK(t >= 0.0);
    CHECK(t <= 1.0 + 1e-15);
    ref.push_back(t);
  }
  Xoshiro256ss rng(123);
  for (int trial = 0; trial < 3; ++trial) {
    const double phi = 2 * kPi * rng.next_unit();
    const double s = 0.1 + 5.0 * rng.next_unit();
    const Point2 shift{10 * rng.next_unit() - 5, 10 * rng.next_unit() - 5};
    Mesh moved = base;
    for (auto& p : moved.vertices) {
      const Point2 q{s * (p.x * std::cos(phi) - p.y * std::sin(phi)),
                     s * (p.x * std::sin(phi) + p.y * std::cos(phi))};
      p = q + shift;
    }
    finalize_mesh(moved);
    for (int v = 0; v < int(moved.vertices.size()); ++v)
      CHECK(theta(moved, v) == doctest::Approx(ref[v]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("classification of the criss-cross mesh") {
  const Mesh mesh = generate_structured(6, MeshPattern::CrissCross,
                                        MeshDomain::UnitSquare);
  const VertexClassification cl = classify(mesh);
  CHECK(cl.singular_interior.size() == 36);
  CHECK(cl.singular_boundary.empty());
  CHECK(cl.singular_corner.empty());
  CHECK(cl.theta_min > 0.9);  // grid vertices have right-angle pair sums
  for (int z : cl.singular_interior)
    CHECK(vertex_star(mesh, z).triangles.size() == 4);
}

TEST_CASE("classification of the perturbed criss-cross mesh") {
  const Mesh mesh = generate_structured(6, MeshPattern::CrissCross,
                                        MeshDomain::UnitSquare);
  PerturbOptions opts;
  opts.selector = PerturbSelector::SingularVertices;
  opts.alpha = 0.1;
  opts.seed = 42;
  const Mesh p = perturb_vertices(mesh, opts);
  const VertexClassification cl = classify(p);
  CHECK(cl.singular_interior.empty());
  // Regression values for the seeded fixture: the perturbed centers sit at
  // theta of the order of the perturbation size.
  CHECK(cl.theta_min > 0.05);
  CHECK(cl.theta_min < 0.6);
}

TEST_CASE("classification of Powell-Sabin refinements") {
  for (int n : {1, 2}) {
    const Mesh base = generate_structured(n, MeshPattern::RightSplit,
                                          MeshDomain::UnitSquare);
    const RefinedMesh rm = powell_sabin(base);
    const VertexClassification cl =
        classify(rm.mesh, 1e-8, &rm.constructed_singular_points);
    std::vector<int> all_singular;
    all_singular.insert(all_singular.end(), cl.singular_interior.begin(),
                        cl.singular_interior.end());
    all_singular.insert(all_singular.end(), cl.singular_boundary.begin(),
                        cl.singular_boundary.end());
    std::sort(all_singular.begin(), all_singular.end());
    CHECK(all_singular == rm.constructed_singular_points);
    CHECK(cl.theta_min > 1e-3);
    // Interior singular points have 4-triangle stars, boundary midpoints 2.
    for (int z : cl.singular_interior)
      CHECK(vertex_star(rm.mesh, z).triangles.size() == 4);
    for (int z : cl.singular_boundary)
      CHECK(vertex_star(rm.mesh, z).triangles.size() == 2);
  }
}

TEST_CASE("jump_theta") {
  const std::vector<double> ones{1, 1, 1, 1};
  CHECK(jump_theta(ones) == 0.0);
  const std::vector<double> ab{3.5, -2.0, 3.5, -2.0};
  CHECK(jump_theta(ab) == doctest::Approx(2 * (3.5 - (-2.0))));
  const std::vector<double> bad{1, 2, 3};
  CHECK_THROWS_AS(jump_theta(bad), std::invalid_argument);

  // Linearity.
  Xoshiro256ss rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> u(4), v(4), w(4);
    const double a = 2 * rng.next_unit() - 1, b = 2 * rng.next_unit() - 1;
    for (int i = 0; i < 4; ++i) {
      u[i] = rng.next_unit();
      v[i] = rng.next_unit();
      w[i] = a * u[i] + b * v[i];
    }
    CHECK(jump_theta(w) ==
          doctest::Approx(a * jump_theta(u) + b * jump_theta(v)).epsilon(1e-12));
  }
}
