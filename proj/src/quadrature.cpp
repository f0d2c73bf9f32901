#include "maxlag2d/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace maxlag {

void gauss_legendre_01(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1 || n > 64) throw std::invalid_argument("gauss_legendre_01: bad n");
  nodes.resize(n);
  weights.resize(n);
  // Newton iteration on P_n over [-1,1], then map to [0,1].
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * pp * pp);
  }
}

QuadratureRule collapsed_triangle_rule(int degree) {
  // Degree d integrands become degree d in u and d+1 in v after the
  // collapse x = u(1-v), y = v with Jacobian (1-v).
  const int n = (degree + 3) / 2 + 1;
  Eigen::VectorXd xu, wu;
  gauss_legendre_01(n, xu, wu);

  QuadratureRule rule;
  rule.degree = degree;
  rule.points.resize(n * n, 2);
  rule.weights.resize(n * n);
  int q = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j, ++q) {
      const double u = xu[i], v = xu[j];
      rule.points(q, 0) = u * (1.0 - v);
      rule.points(q, 1) = v;
      rule.weights[q] = 2.0 * wu[i] * wu[j] * (1.0 - v);
    }
  return rule;
}

const QuadratureRule& triangle_rule_deg8() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    r.degree = 8;
    r.points.resize(16, 2);
    r.weights.resize(16);
    int q = 0;
    auto add = [&](double b0, double b1, double b2, double w) {
      r.points(q, 0) = b1;
      r.points(q, 1) = b2;
      r.weights[q] = w;
      ++q;
    };
    auto add3 = [&](double a, double w) {
      const double b = 1.0 - 2.0 * a;
      add(b, a, a, w);
      add(a, b, a, w);
      add(a, a, b, w);
    };
    auto add6 = [&](double a, double b, double w) {
      const double c = 1.0 - a - b;
      add(a, b, c, w);
      add(a, c, b, w);
      add(b, a, c, w);
      add(b, c, a, w);
      add(c, a, b, w);
      add(c, b, a, w);
    };
    add(1.0 / 3, 1.0 / 3, 1.0 / 3, 0.14431560777105956166);
    add3(0.45929258834297358702, 0.095091634267077557099);
    add3(0.17056930775798799101, 0.10321737056388609514);
    add3(0.050547228296373675289, 0.032458497594435119004);
    add6(0.0083947774157020719011, 0.26311282944256952027,
         0.027230314158790687433);
    return r;
  }();
  return rule;
}

}  // namespace maxlag
