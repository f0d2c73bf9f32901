#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "maxlag2d/assemble.hpp"
#include "maxlag2d/bench.hpp"
#include "maxlag2d/eig.hpp"
#include "maxlag2d/mesh.hpp"
#include "maxlag2d/mesh_io.hpp"
#include "maxlag2d/refine.hpp"
#include "maxlag2d/singular.hpp"
#include "maxlag2d/verify.hpp"

using namespace maxlag;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 2;
constexpr int kExitConfig = 3;

MeshPattern parse_pattern(const std::string& s) {
  if (s == "rightsplit" || s == "right-split") return MeshPattern::RightSplit;
  if (s == "crisscross" || s == "criss-cross") return MeshPattern::CrissCross;
  throw CLI::ValidationError("--pattern", "expected rightsplit or crisscross");
}

MeshDomain parse_domain(const std::string& s) {
  if (s == "unit-square") return MeshDomain::UnitSquare;
  if (s == "l-shape") return MeshDomain::LShape;
  throw CLI::ValidationError("--domain", "expected unit-square or l-shape");
}

SplitKind parse_split(const std::string& s) {
  if (s == "ps") return SplitKind::PowellSabin;
  if (s == "ct") return SplitKind::CloughTocher;
  if (s == "none") return SplitKind::None;
  throw CLI::ValidationError("--split", "expected ps, ct or none");
}

// "selector,alpha,seed[,boundary]"
PerturbationSpec parse_perturb_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() < 3 || parts.size() > 4)
    throw CLI::ValidationError("--perturb",
                               "expected selector,alpha,seed[,boundary]");
  PerturbationSpec spec;
  if (parts[0] == "singular-vertices")
    spec.selector = BenchSelector::SingularVertices;
  else if (parts[0] == "interior-valence-4")
    spec.selector = BenchSelector::InteriorValence4;
  else if (parts[0] == "all-interior")
    spec.selector = BenchSelector::AllInterior;
  else if (parts[0] == "grid-interior")
    spec.selector = BenchSelector::GridInterior;
  else
    throw CLI::ValidationError("--perturb", "unknown selector " + parts[0]);
  spec.alpha = std::stod(parts[1]);
  spec.seed = std::stoull(parts[2]);
  spec.include_boundary = parts.size() == 4 && parts[3] == "boundary";
  return spec;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int run(int argc, char** argv) {
  CLI::App app{"2D Maxwell eigenvalue computations with vector Lagrange "
               "elements on macro-element triangulations"};
  app.require_subcommand(1);

  // mesh-gen
  auto* gen = app.add_subcommand("mesh-gen", "generate a structured mesh");
  std::string gen_pattern = "rightsplit", gen_domain = "unit-square";
  int gen_n = 4;
  std::string gen_out = "mesh.tri";
  std::vector<std::string> gen_perturbs;
  gen->add_option("--pattern", gen_pattern, "rightsplit | crisscross");
  gen->add_option("--n", gen_n, "grid subdivisions")->required();
  gen->add_option("--domain", gen_domain, "unit-square | l-shape");
  gen->add_option("--perturb", gen_perturbs,
                  "perturbation step 'selector,alpha,seed[,boundary]'");
  gen->add_option("-o,--out", gen_out, "output .tri path");

  // refine
  auto* ref = app.add_subcommand("refine", "apply a macro-element split");
  std::string ref_split = "ps", ref_in, ref_out = "refined.tri", ref_prov;
  ref->add_option("--split", ref_split, "ps | ct")->required();
  ref->add_option("-i,--in", ref_in, "input .tri")->required();
  ref->add_option("-o,--out", ref_out, "output .tri");
  ref->add_option("--provenance", ref_prov, "JSON provenance output");

  // singular
  auto* sing = app.add_subcommand("singular", "vertex singularity report");
  std::string sing_in, sing_report = "-";
  double sing_tol = 1e-8;
  sing->add_option("-i,--in", sing_in, "input .tri")->required();
  sing->add_option("--tol", sing_tol, "singularity tolerance");
  sing->add_option("--report", sing_report, "JSON output path ('-' = stdout)");

  // spectrum
  auto* spec = app.add_subcommand("spectrum", "compute the eigenvalue table");
  std::string spec_in, spec_split = "none", spec_out = "spectrum.csv";
  std::string spec_reference = "none", spec_mm;
  int spec_degree = 1, spec_nev = 12;
  double spec_zero_tol = 1e-6;
  double spec_shift = -1.0;
  bool spec_have_shift = false;
  spec->add_option("-i,--in", spec_in, "input .tri")->required();
  spec->add_option("--split", spec_split, "ps | ct | none");
  spec->add_option("--degree", spec_degree, "polynomial degree 1..4")
      ->required();
  spec->add_option("--nev", spec_nev, "number of nonzero eigenvalues");
  spec->add_option("--shift", spec_shift, "shift-invert target")
      ->each([&](const std::string&) { spec_have_shift = true; });
  spec->add_option("--zero-tol", spec_zero_tol, "zero-mode cutoff");
  spec->add_option("--reference", spec_reference,
                   "error column reference: unit-square | l-shape | none");
  spec->add_option("--out", spec_out, "output CSV path");
  spec->add_option("--mm-out", spec_mm,
                   "MatrixMarket export prefix (writes <prefix>K.mtx, "
                   "<prefix>M.mtx)");

  // convergence
  auto* conv = app.add_subcommand("convergence", "eigenvalue convergence study");
  std::string conv_domain = "unit-square", conv_pattern = "rightsplit";
  std::string conv_split = "none", conv_out = "convergence.csv", conv_config;
  std::vector<int> conv_levels;
  std::vector<std::string> conv_perturbs;
  int conv_degree = 1, conv_target = 1, conv_nev = 6;
  conv->add_option("--config", conv_config, "JSON experiment config");
  conv->add_option("--domain", conv_domain, "unit-square | l-shape");
  conv->add_option("--pattern", conv_pattern, "rightsplit | crisscross");
  conv->add_option("--split", conv_split, "ps | ct | none");
  conv->add_option("--degree", conv_degree, "polynomial degree");
  conv->add_option("--levels", conv_levels, "grid subdivisions per level");
  conv->add_option("--target", conv_target, "eigenvalue index (1-based)");
  conv->add_option("--nev", conv_nev, "eigenvalues per level");
  conv->add_option("--perturb", conv_perturbs,
                   "perturbation step 'selector,alpha,seed[,boundary]'");
  conv->add_option("--out", conv_out, "output CSV path");

  // verify
  auto* ver = app.add_subcommand("verify", "structural verification report");
  std::string ver_in, ver_split = "ps", ver_report = "-";
  int ver_degree = 1;
  ver->add_option("-i,--in", ver_in, "input .tri")->required();
  ver->add_option("--split", ver_split, "ps | ct | none");
  ver->add_option("--degree", ver_degree, "polynomial degree");
  ver->add_option("--report", ver_report, "JSON output path ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (gen->parsed()) {
    ExperimentConfig config;
    config.pattern = parse_pattern(gen_pattern);
    config.domain = parse_domain(gen_domain);
    for (const auto& p : gen_perturbs)
      config.perturbations.push_back(parse_perturb_spec(p));
    const Mesh mesh = build_level_mesh(config, gen_n);
    write_mesh(mesh, gen_out);
    std::cerr << "wrote " << gen_out << " (" << mesh.vertices.size()
              << " vertices, " << mesh.triangles.size() << " triangles)\n";
    return kExitOk;
  }

  if (ref->parsed()) {
    std::vector<std::string> warnings;
    const Mesh mesh = read_mesh(ref_in, &warnings);
    print_warnings(warnings);
    const SplitKind kind = parse_split(ref_split);
    if (kind == SplitKind::None)
      throw CLI::ValidationError("--split", "expected ps or ct");
    const RefinedMesh rm = (kind == SplitKind::PowellSabin)
                               ? powell_sabin(mesh)
                               : clough_tocher(mesh);
    write_mesh(rm.mesh, ref_out);
    if (!ref_prov.empty()) {
      nlohmann::json j;
      j["split"] = ref_split;
      j["parent"] = rm.parent;
      j["interior_points"] = rm.interior_points;
      j["constructed_singular_points"] = rm.constructed_singular_points;
      write_file(ref_prov, j.dump(2) + "\n");
    }
    std::cerr << "wrote " << ref_out << " (" << rm.mesh.triangles.size()
              << " triangles)\n";
    return kExitOk;
  }

  if (sing->parsed()) {
    std::vector<std::string> warnings;
    const Mesh mesh = read_mesh(sing_in, &warnings);
    print_warnings(warnings);
    const VertexClassification cl = classify(mesh, sing_tol);
    print_warnings(cl.warnings);
    nlohmann::json j;
    j["theta"] = cl.theta;
    j["singular_interior"] = cl.singular_interior;
    j["singular_boundary"] = cl.singular_boundary;
    j["singular_corner"] = cl.singular_corner;
    j["nearly_singular"] = cl.nearly_singular;
    j["theta_min"] = cl.theta_min;
    if (sing_report == "-")
      std::cout << j.dump(2) << '\n';
    else
      write_file(sing_report, j.dump(2) + "\n");
    return kExitOk;
  }

  if (spec->parsed()) {
    std::vector<std::string> warnings;
    const Mesh mesh = read_mesh(spec_in, &warnings);
    print_warnings(warnings);
    const SplitKind kind = parse_split(spec_split);
    const RefinedMesh rm = (kind == SplitKind::PowellSabin)
                               ? powell_sabin(mesh)
                           : (kind == SplitKind::CloughTocher)
                               ? clough_tocher(mesh)
                               : no_split(mesh);
    const FeSpace vh = build_vector_space(rm, spec_degree, RotBC::H0Rot);
    const SymmetricSparseMatrix K = assemble_rot_rot(vh);
    const SymmetricSparseMatrix M = assemble_mass(vh);
    if (!spec_mm.empty()) {
      write_matrix_market(K, spec_mm + "K.mtx");
      write_matrix_market(M, spec_mm + "M.mtx");
    }
    SolveOpts opts;
    opts.zero_tol = spec_zero_tol;
    const double shift =
        spec_have_shift ? spec_shift
                        : 0.5 * reference_lambda1(MeshDomain::UnitSquare);
    const EigenResult res = solve_generalized(K, M, spec_nev, shift, opts);
    print_warnings(res.warnings);
    const FilteredSpectrum f = filter_nonzero(res, spec_zero_tol);
    print_warnings(f.warnings);

    SpectrumRun run;
    run.h = mesh_size(mesh);
    run.dofs = vh.n_free;
    run.zero_dropped = f.dropped;
    std::optional<ReferenceSpectrum> ref_values;
    if (spec_reference != "none")
      ref_values = reference_spectrum(parse_domain(spec_reference),
                                      std::max<int>(1, int(f.nonzero.size())));
    for (int i = 0; i < int(f.nonzero.size()) && i < spec_nev; ++i) {
      SpectrumRow row;
      row.index = i + 1;
      row.lambda = f.nonzero[i];
      if (ref_values && i < int(ref_values->values.size()) &&
          ref_values->known[i]) {
        row.has_error = true;
        row.error = std::abs(row.lambda - ref_values->values[i]);
      }
      row.residual = res.residuals[f.kept_indices[i]];
      run.rows.push_back(row);
    }
    write_file(spec_out, spectrum_csv(run));
    std::cerr << "wrote " << spec_out << " (" << run.rows.size()
              << " eigenvalues, " << f.dropped << " zero modes dropped)\n";
    if (!res.converged) return kExitNumerical;
    return kExitOk;
  }

  if (conv->parsed()) {
    ExperimentConfig config;
    if (!conv_config.empty()) {
      config = config_from_json_file(conv_config);
    } else {
      config.domain = parse_domain(conv_domain);
      config.pattern = parse_pattern(conv_pattern);
      config.split = parse_split(conv_split);
      config.degree = conv_degree;
      config.levels = conv_levels;
      config.target_index = conv_target;
      config.nev = conv_nev;
      for (const auto& p : conv_perturbs)
        config.perturbations.push_back(parse_perturb_spec(p));
    }
    if (config.levels.empty())
      throw CLI::ValidationError("--levels", "at least one level required");
    const ConvergenceRun run = run_convergence(config);
    print_warnings(run.warnings);
    write_file(conv_out, convergence_csv(run));
    std::cerr << "wrote " << conv_out << " (least-squares rate "
              << run.ls_rate << ")\n";
    return kExitOk;
  }

  if (ver->parsed()) {
    std::vector<std::string> warnings;
    const Mesh mesh = read_mesh(ver_in, &warnings);
    print_warnings(warnings);
    const SplitKind kind = parse_split(ver_split);
    const RefinedMesh rm = (kind == SplitKind::PowellSabin)
                               ? powell_sabin(mesh)
                           : (kind == SplitKind::CloughTocher)
                               ? clough_tocher(mesh)
                               : no_split(mesh);
    const VerificationReport report = run_verification(rm, ver_degree);
    nlohmann::json j;
    j["exactness_residual"] = report.exactness_residual;
    if (report.infsup_beta >= 0) j["infsup_beta"] = report.infsup_beta;
    if (report.kernel_dim >= 0) j["kernel_dim"] = report.kernel_dim;
    j["notes"] = report.notes;
    if (ver_report == "-")
      std::cout << j.dump(2) << '\n';
    else
      write_file(ver_report, j.dump(2) + "\n");
    return kExitOk;
  }

  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
