#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "maxlag2d/assemble.hpp"

namespace maxlag {

struct SolveOpts {
  double tol = 1e-10;       // residual tolerance per mode
  int max_krylov = 300;     // Krylov dimension cap per restart
  int max_restarts = 10;
  int dense_threshold = 500;  // auto-select the dense path below this size
  bool force_dense = false;
  bool force_iterative = false;
  bool want_vectors = true;
  double zero_tol = 1e-6;  // zero-mode bookkeeping threshold
  std::uint64_t seed = 0x5eedUL;
};

/// Result of a generalized symmetric eigensolve K x = lambda M x.
///
/// eigenvalues are ascending. For the iterative path the zero eigenspace is
/// represented by the few converged copies the Krylov iteration saw, not by
/// its full multiplicity; zero_count counts the computed modes below
/// zero_tol.
struct EigenResult {
  std::vector<double> eigenvalues;
  Eigen::MatrixXd vectors;         // column per eigenvalue (M-orthonormal)
  std::vector<double> residuals;   // ||K x - lambda M x||_2
  int zero_count = 0;
  double shift = 0.0;
  int iterations = 0;  // operator applications (iterative path)
  bool converged = true;
  bool dense_path = false;
  std::vector<std::string> warnings;
};

/// Computes eigenvalues of K x = lambda M x near the lower end of the
/// spectrum: the dense path returns the full spectrum; the iterative path
/// runs shift-invert Lanczos with full reorthogonalization and locked
/// deflation until nev eigenvalues above zero_tol have converged.
///
/// K must be symmetric positive semidefinite and M symmetric positive
/// definite. The factorization of (K - shift M) is retried with
/// shift*(1+1e-3) up to 3 times.
EigenResult solve_generalized(const SymmetricSparseMatrix& K,
                              const SymmetricSparseMatrix& M, int nev,
                              double shift, const SolveOpts& opts = {});

struct FilteredSpectrum {
  std::vector<double> nonzero;    // ascending
  std::vector<int> kept_indices;  // positions within EigenResult::eigenvalues
  int dropped = 0;
  std::vector<std::string> warnings;
};

/// Drops eigenvalues below zero_tol; warns about values suspiciously close
/// to the cutoff (within [zero_tol, 10*zero_tol)).
FilteredSpectrum filter_nonzero(const EigenResult& result,
                                double zero_tol = 1e-6);

/// Elementwise |computed - reference| up to the shorter length.
std::vector<double> spectrum_error(const std::vector<double>& computed,
                                   const std::vector<double>& reference);

/// Residual scale of the convergence criterion:
/// ||K x - lambda M x|| <= tol * (||K||_F/sqrt(n) + |lambda| ||M||_F/sqrt(n)).
double residual_scale(const SymmetricSparseMatrix& K,
                      const SymmetricSparseMatrix& M, double lambda);

}  // namespace maxlag
