#include "maxlag2d/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "maxlag2d/assemble.hpp"
#include "maxlag2d/fespace.hpp"
#include "maxlag2d/singular.hpp"

namespace maxlag {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::vector<int> select_interior(const Mesh& mesh, bool exclude_valence4) {
  std::vector<char> on_boundary(mesh.vertices.size(), 0);
  for (const auto& be : mesh.boundary_edges)
    on_boundary[be.a] = on_boundary[be.b] = 1;
  const auto stars = all_vertex_stars(mesh);
  std::vector<int> out;
  for (int v = 0; v < int(mesh.vertices.size()); ++v) {
    if (on_boundary[v]) continue;
    if (exclude_valence4 && stars[v].triangles.size() == 4) continue;
    out.push_back(v);
  }
  return out;
}

RefinedMesh apply_split(const Mesh& mesh, SplitKind split) {
  switch (split) {
    case SplitKind::PowellSabin: return powell_sabin(mesh);
    case SplitKind::CloughTocher: return clough_tocher(mesh);
    case SplitKind::None: return no_split(mesh);
  }
  throw std::logic_error("unknown split");
}

}  // namespace

std::vector<std::string> config_warnings(const ExperimentConfig& config) {
  std::vector<std::string> out;
  if (config.split == SplitKind::CloughTocher && config.degree < 2)
    out.push_back("Clough-Tocher pairing expects degree >= 2");
  if (config.split == SplitKind::None && config.degree < 4)
    out.push_back(
        "unsplit meshes below degree 4 may produce spurious eigenvalues");
  return out;
}

Mesh build_level_mesh(const ExperimentConfig& config, int n) {
  Mesh mesh = generate_structured(n, config.pattern, config.domain);
  for (const auto& step : config.perturbations) {
    PerturbOptions opts;
    opts.alpha = step.alpha;
    opts.seed = step.seed;
    opts.include_boundary = step.include_boundary;
    switch (step.selector) {
      case BenchSelector::SingularVertices:
        opts.selector = PerturbSelector::SingularVertices;
        break;
      case BenchSelector::InteriorValence4:
        opts.selector = PerturbSelector::InteriorValence4;
        break;
      case BenchSelector::AllInterior:
        opts.selector = PerturbSelector::Explicit;
        opts.explicit_vertices = select_interior(mesh, false);
        break;
      case BenchSelector::GridInterior:
        opts.selector = PerturbSelector::Explicit;
        opts.explicit_vertices = select_interior(mesh, true);
        break;
    }
    mesh = perturb_vertices(mesh, opts);
  }
  return mesh;
}

SpectrumRun run_spectrum(const ExperimentConfig& config, int level_pos) {
  if (level_pos < 0 || level_pos >= int(config.levels.size()))
    throw std::invalid_argument("level position out of range");
  SpectrumRun out;
  out.warnings = config_warnings(config);
  out.n = config.levels[level_pos];

  const Mesh parent = build_level_mesh(config, out.n);
  out.h = mesh_size(parent);
  out.theta_min = classify(parent).theta_min;
  const RefinedMesh rm = apply_split(parent, config.split);

  const FeSpace vh = build_vector_space(rm, config.degree, RotBC::H0Rot);
  out.dofs = vh.n_free;
  const SymmetricSparseMatrix K = assemble_rot_rot(vh);
  const SymmetricSparseMatrix M = assemble_mass(vh);

  SolveOpts opts;
  opts.zero_tol = config.zero_tol;
  const double shift =
      config.shift.value_or(0.5 * reference_lambda1(config.domain));
  const EigenResult res = solve_generalized(K, M, config.nev, shift, opts);
  for (const auto& w : res.warnings) out.warnings.push_back(w);

  const FilteredSpectrum f = filter_nonzero(res, config.zero_tol);
  for (const auto& w : f.warnings) out.warnings.push_back(w);
  out.zero_dropped = f.dropped;

  const ReferenceSpectrum ref =
      reference_spectrum(config.domain, std::max<int>(1, int(f.nonzero.size())));
  for (int i = 0; i < int(f.nonzero.size()) && i < config.nev; ++i) {
    SpectrumRow row;
    row.index = i + 1;
    row.lambda = f.nonzero[i];
    if (i < int(ref.values.size()) && ref.known[i]) {
      row.has_error = true;
      row.error = std::abs(row.lambda - ref.values[i]);
    }
    row.residual = res.residuals.empty()
                       ? 0.0
                       : res.residuals[f.kept_indices[i]];
    out.rows.push_back(row);
  }
  return out;
}

ConvergenceRun run_convergence(const ExperimentConfig& config) {
  if (config.levels.size() < 2)
    throw std::invalid_argument("convergence run needs at least 2 levels");
  const int idx = config.target_index;
  if (idx < 1) throw std::invalid_argument("target index must be >= 1");
  const ReferenceSpectrum ref = reference_spectrum(config.domain, idx);
  if (!ref.known[idx - 1])
    throw std::invalid_argument(
        "no reference value for the requested eigenvalue index");
  const double target = ref.values[idx - 1];

  ConvergenceRun out;
  out.target_index = idx;
  out.warnings = config_warnings(config);

  ExperimentConfig level_config = config;
  level_config.nev = std::max(config.nev, idx + 2);
  for (int pos = 0; pos < int(config.levels.size()); ++pos) {
    const SpectrumRun run = run_spectrum(level_config, pos);
    if (int(run.rows.size()) < idx)
      throw std::runtime_error("level " + std::to_string(run.n) +
                               " returned fewer eigenvalues than requested");
    ConvergenceRow row;
    row.n = run.n;
    row.h = run.h;
    row.dofs = run.dofs;
    row.lambda = run.rows[idx - 1].lambda;
    row.error = std::abs(row.lambda - target);
    out.rows.push_back(row);
    for (const auto& w : run.warnings) {
      if (std::find(out.warnings.begin(), out.warnings.end(), w) ==
          out.warnings.end())
        out.warnings.push_back(w);
    }
  }

  // Pairwise rates and the least-squares slope over levels with nonzero
  // error (an exact hit reports an infinite rate and is excluded).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t i = 0; i < out.rows.size(); ++i) {
    auto& row = out.rows[i];
    if (i > 0) {
      const auto& prev = out.rows[i - 1];
      if (row.error > 0.0 && prev.error > 0.0) {
        row.rate = std::log(prev.error / row.error) / std::log(prev.h / row.h);
        row.has_rate = true;
      } else {
        row.rate = std::numeric_limits<double>::infinity();
      }
    }
    if (row.error > 0.0) {
      const double x = std::log(row.h), y = std::log(row.error);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
  }
  out.ls_rate = (m >= 2) ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
  return out;
}

std::string spectrum_csv(const SpectrumRun& run) {
  std::ostringstream os;
  os << "index,lambda,error_vs_reference,residual\n";
  for (const auto& row : run.rows) {
    os << row.index << ',' << fmt(row.lambda) << ',';
    if (row.has_error) os << fmt(row.error);
    os << ',' << fmt(row.residual) << '\n';
  }
  return os.str();
}

std::string convergence_csv(const ConvergenceRun& run) {
  std::ostringstream os;
  os << "n,h,error,rate\n";
  for (size_t i = 0; i < run.rows.size(); ++i) {
    const auto& row = run.rows[i];
    os << row.n << ',' << fmt(row.h) << ',' << fmt(row.error) << ',';
    if (i == 0)
      ;  // no rate on the first level
    else if (row.has_rate)
      os << fmt(row.rate);
    else
      os << "inf";
    os << '\n';
  }
  os << "# least_squares_rate," << fmt(run.ls_rate) << '\n';
  return os.str();
}

namespace {

MeshDomain parse_domain(const std::string& s) {
  if (s == "unit-square") return MeshDomain::UnitSquare;
  if (s == "l-shape") return MeshDomain::LShape;
  throw std::invalid_argument("unknown domain: " + s);
}

MeshPattern parse_pattern(const std::string& s) {
  if (s == "right-split" || s == "rightsplit") return MeshPattern::RightSplit;
  if (s == "criss-cross" || s == "crisscross") return MeshPattern::CrissCross;
  throw std::invalid_argument("unknown pattern: " + s);
}

SplitKind parse_split(const std::string& s) {
  if (s == "ps") return SplitKind::PowellSabin;
  if (s == "ct") return SplitKind::CloughTocher;
  if (s == "none") return SplitKind::None;
  throw std::invalid_argument("unknown split: " + s);
}

BenchSelector parse_selector(const std::string& s) {
  if (s == "singular-vertices") return BenchSelector::SingularVertices;
  if (s == "interior-valence-4") return BenchSelector::InteriorValence4;
  if (s == "all-interior") return BenchSelector::AllInterior;
  if (s == "grid-interior") return BenchSelector::GridInterior;
  throw std::invalid_argument("unknown perturbation selector: " + s);
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig config;
  if (j.contains("domain")) config.domain = parse_domain(j["domain"]);
  if (j.contains("pattern")) config.pattern = parse_pattern(j["pattern"]);
  if (j.contains("split")) config.split = parse_split(j["split"]);
  if (j.contains("degree")) config.degree = j["degree"].get<int>();
  if (j.contains("levels"))
    config.levels = j["levels"].get<std::vector<int>>();
  if (j.contains("nev")) config.nev = j["nev"].get<int>();
  if (j.contains("shift")) config.shift = j["shift"].get<double>();
  if (j.contains("zero_tol")) config.zero_tol = j["zero_tol"].get<double>();
  if (j.contains("target_index"))
    config.target_index = j["target_index"].get<int>();
  if (j.contains("perturbations")) {
    for (const auto& p : j["perturbations"]) {
      PerturbationSpec spec;
      spec.selector = parse_selector(p.at("selector"));
      spec.alpha = p.at("alpha").get<double>();
      spec.seed = p.at("seed").get<std::uint64_t>();
      if (p.contains("include_boundary"))
        spec.include_boundary = p["include_boundary"].get<bool>();
      config.perturbations.push_back(spec);
    }
  }
  return config;
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

}  // namespace maxlag
