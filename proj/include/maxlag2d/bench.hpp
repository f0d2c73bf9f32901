#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maxlag2d/eig.hpp"
#include "maxlag2d/mesh.hpp"
#include "maxlag2d/refine.hpp"
#include "maxlag2d/reference.hpp"

namespace maxlag {

/// Vertex selection for the experiment driver; AllInterior and GridInterior
/// (interior vertices that are not valence-4) resolve to explicit lists
/// before calling the mesh-level perturbation.
enum class BenchSelector {
  SingularVertices,
  InteriorValence4,
  AllInterior,
  GridInterior,
};

struct PerturbationSpec {
  BenchSelector selector = BenchSelector::SingularVertices;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  bool include_boundary = false;
};

struct ExperimentConfig {
  MeshDomain domain = MeshDomain::UnitSquare;
  MeshPattern pattern = MeshPattern::RightSplit;
  SplitKind split = SplitKind::None;
  int degree = 1;
  std::vector<int> levels;  // grid subdivisions, one per level
  std::vector<PerturbationSpec> perturbations;
  int nev = 12;
  std::optional<double> shift;  // default: half the reference lambda_1
  double zero_tol = 1e-6;
  int target_index = 1;  // 1-based eigenvalue index for convergence runs
};

/// Degree/split compatibility advisories (e.g. unsplit meshes below
/// degree 4 may produce spurious eigenvalues).
std::vector<std::string> config_warnings(const ExperimentConfig& config);

/// Mesh of one level: structured generation plus the configured
/// perturbation steps, in order.
Mesh build_level_mesh(const ExperimentConfig& config, int n);

struct SpectrumRow {
  int index = 0;  // 1-based position among nonzero eigenvalues
  double lambda = 0.0;
  bool has_error = false;
  double error = 0.0;
  double residual = 0.0;
};

struct SpectrumRun {
  int n = 0;
  double h = 0.0;       // parent mesh size (before the macro split)
  int dofs = 0;
  int zero_dropped = 0;
  double theta_min = 0.0;
  std::vector<SpectrumRow> rows;
  std::vector<std::string> warnings;
};

SpectrumRun run_spectrum(const ExperimentConfig& config, int level_pos = 0);

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  int dofs = 0;
  double lambda = 0.0;
  double error = 0.0;
  double rate = 0.0;   // vs the previous level
  bool has_rate = false;
};

struct ConvergenceRun {
  int target_index = 1;
  std::vector<ConvergenceRow> rows;
  double ls_rate = 0.0;  // least-squares slope of log(error) vs log(h)
  std::vector<std::string> warnings;
};

ConvergenceRun run_convergence(const ExperimentConfig& config);

/// Deterministic CSV serializations (fixed %.12e formatting).
std::string spectrum_csv(const SpectrumRun& run);
std::string convergence_csv(const ConvergenceRun& run);

ExperimentConfig config_from_json_file(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text);

}  // namespace maxlag
