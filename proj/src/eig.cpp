#include "maxlag2d/eig.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <memory>

#include "maxlag2d/rng.hpp"

namespace maxlag {

double residual_scale(const SymmetricSparseMatrix& K,
                      const SymmetricSparseMatrix& M, double lambda) {
  const double n = double(K.rows());
  return K.frobenius_norm() / std::sqrt(n) +
         std::abs(lambda) * M.frobenius_norm() / std::sqrt(n);
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

Eigen::VectorXd random_vector(int n, std::uint64_t seed) {
  Xoshiro256ss rng(seed);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = 2.0 * rng.next_unit() - 1.0;
  return v;
}

// Factorization of (K - sigma M). SimplicialLDLT is tried first (cheap,
// symmetric); it has no pivoting, so an indefinite shift can silently
// degrade accuracy. A probe solve decides; SparseLU is the fallback.
class ShiftedSolver {
 public:
  ShiftedSolver(const SpMat& shifted) {
    ldlt_ = std::make_unique<Eigen::SimplicialLDLT<SpMat>>();
    ldlt_->compute(shifted);
    if (ldlt_->info() == Eigen::Success) {
      const Eigen::VectorXd b = random_vector(int(shifted.rows()), 0xb0b);
      const Eigen::VectorXd x = ldlt_->solve(b);
      const double rel = (shifted * x - b).norm() / b.norm();
      if (std::isfinite(rel) && rel < 1e-10) return;
    }
    ldlt_.reset();
    lu_ = std::make_unique<Eigen::SparseLU<SpMat>>();
    lu_->compute(shifted);
    if (lu_->info() != Eigen::Success)
      throw std::runtime_error("shifted factorization failed");
    const Eigen::VectorXd b = random_vector(int(shifted.rows()), 0xb0b);
    const Eigen::VectorXd x = lu_->solve(b);
    const double rel = (shifted * x - b).norm() / b.norm();
    if (!std::isfinite(rel) || rel > 1e-8)
      throw std::runtime_error("shifted factorization failed");
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    if (ldlt_) return ldlt_->solve(b);
    return lu_->solve(b);
  }

 private:
  std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt_;
  std::unique_ptr<Eigen::SparseLU<SpMat>> lu_;
};

EigenResult solve_dense(const SymmetricSparseMatrix& K,
                        const SymmetricSparseMatrix& M, int nev, double shift,
                        const SolveOpts& opts) {
  (void)nev;
  EigenResult res;
  res.dense_path = true;
  res.shift = shift;
  const Eigen::MatrixXd Kd = Eigen::MatrixXd(K.full());
  const Eigen::MatrixXd Md = Eigen::MatrixXd(M.full());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
      Kd, Md, opts.want_vectors ? (Eigen::ComputeEigenvectors | Eigen::Ax_lBx)
                                : (Eigen::EigenvaluesOnly | Eigen::Ax_lBx));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("dense generalized eigensolver failed");
  const int n = int(Kd.rows());
  res.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  if (opts.want_vectors) res.vectors = es.eigenvectors();
  res.residuals.resize(n, 0.0);
  if (opts.want_vectors) {
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd x = res.vectors.col(i);
      res.residuals[i] =
          (K.apply(x) - res.eigenvalues[i] * M.apply(x)).norm();
    }
  }
  res.zero_count = int(std::count_if(res.eigenvalues.begin(),
                                     res.eigenvalues.end(), [&](double l) {
                                       return l < opts.zero_tol;
                                     }));
  return res;
}

struct LockedSet {
  std::vector<double> values;
  Eigen::MatrixXd vectors;  // n x L, M-orthonormal

  void append(double lambda, const Eigen::VectorXd& x) {
    vectors.conservativeResize(x.size(), vectors.cols() + 1);
    vectors.col(vectors.cols() - 1) = x;
    values.push_back(lambda);
  }
  int size() const { return int(values.size()); }
};

}  // namespace

EigenResult solve_generalized(const SymmetricSparseMatrix& K,
                              const SymmetricSparseMatrix& M, int nev,
                              double shift, const SolveOpts& opts) {
  const int n = K.rows();
  if (M.rows() != n) throw std::invalid_argument("K and M sizes differ");
  if (nev < 1) throw std::invalid_argument("nev must be positive");

  if (opts.force_dense || (n <= opts.dense_threshold && !opts.force_iterative))
    return solve_dense(K, M, nev, shift, opts);

  EigenResult res;
  res.shift = shift;
  const SpMat Kf = K.full();
  const SpMat Mf = M.full();

  // Factorize (K - sigma M), retrying on a shift that hits an eigenvalue.
  std::unique_ptr<ShiftedSolver> solver;
  double sigma = shift;
  for (int attempt = 0; attempt < 4; ++attempt) {
    try {
      SpMat shifted = Kf - sigma * Mf;
      shifted.makeCompressed();
      solver = std::make_unique<ShiftedSolver>(shifted);
      break;
    } catch (const std::runtime_error&) {
      if (attempt == 3) throw;
      sigma = (sigma == 0.0) ? 1e-3 : sigma * (1.0 + 1e-3);
      res.warnings.push_back("factorization retry with shift " +
                             std::to_string(sigma));
    }
  }
  res.shift = sigma;

  LockedSet locked;
  auto nonzero_locked = [&] {
    return int(std::count_if(locked.values.begin(), locked.values.end(),
                             [&](double l) { return l > opts.zero_tol; }));
  };

  // M-inner-product helpers against the locked set.
  auto deflate = [&](Eigen::VectorXd& w, const Eigen::VectorXd& mw) {
    if (locked.size() == 0) return;
    w.noalias() -= locked.vectors * (locked.vectors.transpose() * mw);
  };

  const double theta_breakdown = 1e-14;
  int stagnant = 0;
  bool confirmed = false;

  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    if (nonzero_locked() >= nev && confirmed) break;
    const int remaining = std::max(1, nev - nonzero_locked());
    const int m_cap = std::min(opts.max_krylov, n - locked.size());
    // Confirmation restarts (target already met) use a short segment; they
    // exist to pick up missed copies of multiple eigenvalues.
    const int m_want = (nonzero_locked() >= nev)
                           ? std::min(m_cap, 40)
                           : std::min(m_cap, std::max(40, 10 * remaining + 20));
    if (m_want < 2) break;

    Eigen::MatrixXd V(n, m_want);
    Eigen::VectorXd alpha(m_want), beta(m_want);

    // Seeded start, deflated and M-normalized.
    Eigen::VectorXd v = random_vector(n, opts.seed + 0x9e37 * (restart + 1));
    for (int pass = 0; pass < 2; ++pass) deflate(v, Mf * v);
    double vnorm = std::sqrt(v.dot(Mf * v));
    if (!(vnorm > 0)) continue;
    v /= vnorm;
    V.col(0) = v;

    int m = 0;  // number of completed Lanczos steps
    bool breakdown = false;
    Eigen::VectorXd w, mw;
    for (int j = 0; j < m_want; ++j) {
      w = solver->solve(Mf * V.col(j));
      ++res.iterations;
      mw.noalias() = Mf * w;
      deflate(w, mw);
      if (j > 0) w.noalias() -= beta[j - 1] * V.col(j - 1);
      alpha[j] = V.col(j).dot(Mf * w);
      w.noalias() -= alpha[j] * V.col(j);
      // Full reorthogonalization (two passes).
      for (int pass = 0; pass < 2; ++pass) {
        mw.noalias() = Mf * w;
        w.noalias() -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * mw);
        if (locked.size() > 0)
          w.noalias() -=
              locked.vectors * (locked.vectors.transpose() * (Mf * w));
      }
      beta[j] = std::sqrt(std::max(0.0, w.dot(Mf * w)));
      m = j + 1;
      if (beta[j] < theta_breakdown) {
        breakdown = true;
        break;
      }
      if (j + 1 < m_want) V.col(j + 1) = w / beta[j];
    }

    // Ritz extraction from the tridiagonal.
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(T);
    const Eigen::VectorXd& theta = tes.eigenvalues();
    const Eigen::MatrixXd& S = tes.eigenvectors();

    const double theta_max = theta.cwiseAbs().maxCoeff();
    int newly_locked = 0;
    for (int i = 0; i < m; ++i) {
      const double th = theta[i];
      if (std::abs(th) < 1e-12 * theta_max) continue;  // spurious direction
      const double lambda = sigma + 1.0 / th;
      const double est = breakdown ? 0.0 : std::abs(beta[m - 1] * S(m - 1, i));
      // Residual estimate mapped to lambda units.
      const double lam_est = est / (th * th);
      if (lam_est > opts.tol * std::max(1.0, std::abs(lambda)) * 10.0) continue;

      Eigen::VectorXd x = V.leftCols(m) * S.col(i);
      deflate(x, Mf * x);
      const double xnorm = std::sqrt(std::max(0.0, x.dot(Mf * x)));
      if (xnorm < 1e-8) continue;  // collapsed onto the locked set
      x /= xnorm;
      const double true_res = (K.apply(x) - lambda * M.apply(x)).norm();
      if (true_res > opts.tol * residual_scale(K, M, lambda)) continue;
      locked.append(lambda, x);
      ++newly_locked;
    }

    if (nonzero_locked() >= nev) {
      // Stable when a whole confirmation pass finds nothing new.
      confirmed = (newly_locked == 0);
      stagnant = 0;
      continue;
    }
    stagnant = (newly_locked == 0) ? stagnant + 1 : 0;
    if (stagnant >= 2) break;
  }

  if (nonzero_locked() < nev) {
    res.converged = false;
    res.warnings.push_back(
        "iterative solver returned " + std::to_string(nonzero_locked()) +
        " of " + std::to_string(nev) + " requested nonzero eigenvalues");
  }

  // Sort ascending and assemble the result.
  std::vector<int> order(locked.size());
  for (int i = 0; i < locked.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return locked.values[a] < locked.values[b];
  });
  res.eigenvalues.reserve(order.size());
  if (opts.want_vectors) res.vectors.resize(n, int(order.size()));
  for (int k = 0; k < int(order.size()); ++k) {
    res.eigenvalues.push_back(locked.values[order[k]]);
    if (opts.want_vectors) res.vectors.col(k) = locked.vectors.col(order[k]);
    const Eigen::VectorXd x = locked.vectors.col(order[k]);
    res.residuals.push_back(
        (K.apply(x) - locked.values[order[k]] * M.apply(x)).norm());
  }
  res.zero_count = int(std::count_if(res.eigenvalues.begin(),
                                     res.eigenvalues.end(), [&](double l) {
                                       return l < opts.zero_tol;
                                     }));
  return res;
}

FilteredSpectrum filter_nonzero(const EigenResult& result, double zero_tol) {
  FilteredSpectrum out;
  for (int i = 0; i < int(result.eigenvalues.size()); ++i) {
    const double l = result.eigenvalues[i];
    if (l < zero_tol) {
      ++out.dropped;
      continue;
    }
    if (l < 10.0 * zero_tol)
      out.warnings.push_back("eigenvalue " + std::to_string(l) +
                             " suspiciously close to zero_tol cutoff");
    out.nonzero.push_back(l);
    out.kept_indices.push_back(i);
  }
  return out;
}

std::vector<double> spectrum_error(const std::vector<double>& computed,
                                   const std::vector<double>& reference) {
  const size_t n = std::min(computed.size(), reference.size());
  std::vector<double> err(n);
  for (size_t i = 0; i < n; ++i) err[i] = std::abs(computed[i] - reference[i]);
  return err;
}

}  // namespace maxlag
