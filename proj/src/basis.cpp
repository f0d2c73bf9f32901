#include "maxlag2d/basis.hpp"

#include <stdexcept>

namespace maxlag {

RefBasis::RefBasis(int degree) : degree_(degree) {
  if (degree < 0 || degree > 8) throw std::invalid_argument("basis degree out of range");
  if (degree == 0) {
    lattice_.push_back({0, 0});  // node held at the barycenter
    coeff_ = Eigen::MatrixXd::Ones(1, 1);
    return;
  }
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; j <= degree - i; ++j) lattice_.push_back({i, j});

  const int n = size();
  // Monomials x^a y^b with a+b <= k, in the same (a, b) ordering.
  Eigen::MatrixXd vandermonde(n, n);
  for (int p = 0; p < n; ++p) {
    const double x = double(lattice_[p][0]) / degree;
    const double y = double(lattice_[p][1]) / degree;
    int m = 0;
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; b <= degree - a; ++b, ++m)
        vandermonde(p, m) = std::pow(x, a) * std::pow(y, b);
  }
  coeff_ = vandermonde.partialPivLu().inverse();

  for (int p = 0; p < n; ++p) {
    const auto [i, j] = lattice_[p];
    if (i > 0 && j > 0 && i + j < degree) interior_.push_back(p);
  }
}

int RefBasis::lattice_index(int i, int j) const {
  for (int p = 0; p < size(); ++p)
    if (lattice_[p][0] == i && lattice_[p][1] == j) return p;
  throw std::logic_error("lattice point not found");
}

int RefBasis::vertex_node(int v) const {
  if (degree_ == 0) throw std::logic_error("P0 has no vertex nodes");
  switch (v) {
    case 0: return lattice_index(0, 0);
    case 1: return lattice_index(degree_, 0);
    case 2: return lattice_index(0, degree_);
  }
  throw std::invalid_argument("vertex index");
}

int RefBasis::edge_node(int le, int s) const {
  if (s < 1 || s >= degree_) throw std::invalid_argument("edge node index");
  switch (le) {
    case 0: return lattice_index(s, 0);
    case 1: return lattice_index(degree_ - s, s);
    case 2: return lattice_index(0, degree_ - s);
  }
  throw std::invalid_argument("edge index");
}

Eigen::VectorXd RefBasis::values(double x, double y) const {
  const int n = size();
  if (degree_ == 0) return Eigen::VectorXd::Ones(1);
  Eigen::VectorXd monos(n);
  int m = 0;
  for (int a = 0; a <= degree_; ++a)
    for (int b = 0; b <= degree_ - a; ++b, ++m)
      monos[m] = std::pow(x, a) * std::pow(y, b);
  return coeff_.transpose() * monos;
}

Eigen::MatrixX2d RefBasis::gradients(double x, double y) const {
  const int n = size();
  if (degree_ == 0) return Eigen::MatrixX2d::Zero(1, 2);
  Eigen::VectorXd dx(n), dy(n);
  int m = 0;
  for (int a = 0; a <= degree_; ++a)
    for (int b = 0; b <= degree_ - a; ++b, ++m) {
      dx[m] = (a == 0) ? 0.0 : a * std::pow(x, a - 1) * std::pow(y, b);
      dy[m] = (b == 0) ? 0.0 : b * std::pow(x, a) * std::pow(y, b - 1);
    }
  Eigen::MatrixX2d out(n, 2);
  out.col(0) = coeff_.transpose() * dx;
  out.col(1) = coeff_.transpose() * dy;
  return out;
}

const RefBasis& ref_basis(int degree) {
  static const std::vector<RefBasis> cache = [] {
    std::vector<RefBasis> v;
    for (int k = 0; k <= 8; ++k) v.emplace_back(k);
    return v;
  }();
  return cache.at(degree);
}

}  // namespace maxlag
