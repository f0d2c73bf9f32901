#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>

#include "maxlag2d/assemble.hpp"
#include "maxlag2d/mesh.hpp"
#include "maxlag2d/refine.hpp"
#include "maxlag2d/rng.hpp"

using namespace maxlag;

namespace {

Mesh single_triangle() {
  Mesh mesh;
  mesh.vertices = {{0, 0}, {1, 0}, {0, 1}};
  mesh.triangles = {{0, 1, 2}};
  finalize_mesh(mesh);
  return mesh;
}

Eigen::VectorXd random_vec(int n, std::uint64_t seed) {
  Xoshiro256ss rng(seed);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = 2 * rng.next_unit() - 1;
  return v;
}

}  // namespace

TEST_CASE("single-element rot-rot entry") {
  const Mesh mesh = single_triangle();
  const FeSpace vh = build_vector_space(mesh, 1, RotBC::None);
  const SymmetricSparseMatrix K = assemble_rot_rot(vh);
  // v = (phi, 0) with phi = 1-x-y has rot v = -d phi/dy = 1, so the
  // quadratic form equals the triangle area.
  Eigen::VectorXd v = Eigen::VectorXd::Zero(vh.raw_dim);
  v[vh.dof(0, 0)] = 1.0;
  CHECK(K.quadratic_form(v) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("single-element mass matrix") {
  Mesh mesh = single_triangle();
  // Scale to area A = 2.
  for (auto& p : mesh.vertices) p = 2.0 * p;
  finalize_mesh(mesh);
  const double area = 2.0;
  const FeSpace sh = build_scalar_space(mesh, 1);
  const SymmetricSparseMatrix M = assemble_mass(sh);
  const Eigen::MatrixXd Md = Eigen::MatrixXd(M.full());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(Md(i, j) ==
            doctest::Approx(i == j ? area / 6 : area / 12).epsilon(1e-14));
}

TEST_CASE("partition of unity integrates to the domain area") {
  for (auto domain : {MeshDomain::UnitSquare, MeshDomain::LShape}) {
    const Mesh mesh = generate_structured(3, MeshPattern::CrissCross, domain);
    for (int k : {1, 2, 3}) {
      const FeSpace sh = build_scalar_space(mesh, k);
      const SymmetricSparseMatrix M = assemble_mass(sh);
      const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sh.raw_dim);
      const double expected = (domain == MeshDomain::UnitSquare)
                                  ? 1.0
                                  : 3.0 * M_PI * M_PI;
      CHECK(M.quadratic_form(ones) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("stiffness is positive semidefinite, mass positive definite") {
  const Mesh base = generate_structured(2, MeshPattern::RightSplit,
                                        MeshDomain::UnitSquare);
  const RefinedMesh ps = powell_sabin(base);
  const FeSpace vh = build_vector_space(ps, 1, RotBC::H0Rot);
  const SymmetricSparseMatrix K = assemble_rot_rot(vh);
  const SymmetricSparseMatrix M = assemble_mass(vh);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = random_vec(vh.n_free, 100 + trial);
    CHECK(K.quadratic_form(x) >= -1e-12 * x.squaredNorm());
    CHECK(M.quadratic_form(x) > 0.0);
  }
  const Eigen::MatrixXd Md = Eigen::MatrixXd(M.full());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Md);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("stiffness factorizes through the elementwise rot map") {
  // K = D^T M_Q D where D interpolates rot into the unconstrained DG space.
  const Mesh base = generate_structured(2, MeshPattern::RightSplit,
                                        MeshDomain::UnitSquare);
  for (auto [split, k] : {std::pair{SplitKind::PowellSabin, 1},
                          {SplitKind::CloughTocher, 2}}) {
    const RefinedMesh rm = (split == SplitKind::PowellSabin)
                               ? powell_sabin(base)
                               : clough_tocher(base);
    const FeSpace vh = build_vector_space(rm, k, RotBC::H0Rot);
    const FeSpace dg = build_dg_space(rm.mesh, k - 1);
    const SymmetricSparseMatrix K = assemble_rot_rot(vh);
    const SymmetricSparseMatrix Mq = assemble_mass(dg);

    Eigen::MatrixXd D(dg.raw_dim, vh.n_free);
    for (int j = 0; j < vh.n_free; ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(vh.n_free);
      e[j] = 1.0;
      D.col(j) = rot_to_dg(vh, dg, vh.raw_from_reduced(e));
    }
    const Eigen::MatrixXd lhs = Eigen::MatrixXd(K.full());
    const Eigen::MatrixXd rhs =
        D.transpose() * Eigen::MatrixXd(Mq.full()) * D;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <
          1e-12 * std::max(1.0, lhs.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("assembly does not depend on the triangle order") {
  const Mesh mesh = generate_structured(3, MeshPattern::CrissCross,
                                        MeshDomain::UnitSquare);
  Mesh permuted = mesh;
  std::reverse(permuted.triangles.begin(), permuted.triangles.end());
  finalize_mesh(permuted);

  const FeSpace a = build_vector_space(mesh, 1, RotBC::H0Rot);
  const FeSpace b = build_vector_space(permuted, 1, RotBC::H0Rot);
  REQUIRE(a.n_free == b.n_free);
  const Eigen::MatrixXd Ka = Eigen::MatrixXd(assemble_rot_rot(a).full());
  const Eigen::MatrixXd Kb = Eigen::MatrixXd(assemble_rot_rot(b).full());
  CHECK((Ka - Kb).cwiseAbs().maxCoeff() <=
        1e-15 * std::max(1.0, Ka.cwiseAbs().maxCoeff()));
}

TEST_CASE("mixed form against kernel vectors and the constant pressure") {
  const Mesh base = generate_structured(2, MeshPattern::RightSplit,
                                        MeshDomain::UnitSquare);
  const RefinedMesh ps = powell_sabin(base);
  const FeSpace vh = build_vector_space(ps, 1, RotBC::H0Rot);
  const FeSpace qh = build_pressure_space(ps, 0);
  const FeSpace dg = build_dg_space(ps.mesh, 0);

  const Eigen::SparseMatrix<double> B = assemble_mixed(vh, qh);
  const Eigen::SparseMatrix<double> Bdg = assemble_mixed(vh, dg);
  const SymmetricSparseMatrix K = assemble_rot_rot(vh);

  // Discrete rot-free fields are annihilated by B.
  const Eigen::MatrixXd Kd = Eigen::MatrixXd(K.full());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Kd);
  int checked = 0;
  for (int i = 0; i < vh.n_free && es.eigenvalues()[i] < 1e-10; ++i) {
    const Eigen::VectorXd x = es.eigenvectors().col(i);
    CHECK((B * x).norm() < 1e-10);
    ++checked;
  }
  CHECK(checked > 0);

  // Stokes: integral of rot v vanishes for tangential-zero fields. The sum
  // of all nodal DG basis functions is the constant 1.
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd v = random_vec(vh.n_free, 55 + trial);
    CHECK(std::abs((Bdg * v).sum()) < 1e-12 * v.norm());
  }

  // Surjectivity of rot onto the constrained pressure space.
  const Eigen::MatrixXd Bd = Eigen::MatrixXd(B);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Bd.transpose());
  qr.setThreshold(1e-10);
  CHECK(qr.rank() == qh.n_free);

  CHECK_THROWS_AS(assemble_mixed(vh, build_dg_space(base, 0)),
                  std::invalid_argument);
}

TEST_CASE("matrix market export") {
  const Mesh mesh = single_triangle();
  const FeSpace sh = build_scalar_space(mesh, 1);
  const SymmetricSparseMatrix M = assemble_mass(sh);
  write_matrix_market(M, "mass.mtx");
  std::ifstream in("mass.mtx");
  std::string header;
  std::getline(in, header);
  CHECK(header == "%%MatrixMarket matrix coordinate real symmetric");
  int rows, cols, nnz;
  in >> rows >> cols >> nnz;
  CHECK(rows == 3);
  CHECK(nnz == 6);  // lower triangle of a dense 3x3
  double sum = 0;
  for (int k = 0; k < nnz; ++k) {
    int i, j;
    double v;
    in >> i >> j >> v;
    sum += (i == j) ? v : 2 * v;
  }
  CHECK(sum == doctest::Approx(0.5).epsilon(1e-14));  // total area
  std::remove("mass.mtx");
}
