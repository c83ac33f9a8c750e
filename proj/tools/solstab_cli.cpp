// solstab: stability certificates for algebraic Ricci solitons.
//
//   solstab analyze  FILE [--extend] [--gaussian] [--mode paper|sharp] [--format human|json|csv]
//   solstab table    [DIR] [--format human|csv|json]
//   solstab flow     FILE [--eps E] [--t-max T] [--dt H] [--trials N] [--seed S]
//   solstab gaussian FILE [--mode paper|sharp] [--ignore-stability]

#include "solstab/analysis.hpp"
#include "solstab/curvature.hpp"
#include "solstab/errors.hpp"
#include "solstab/flow.hpp"
#include "solstab/soliton.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <map>

namespace {

using namespace solstab;

constexpr const char* kDataDirEnv = "SOLSTAB_DATA_DIR";

const std::map<std::string, GaussianMode> kModes{{"paper", GaussianMode::PaperBound},
                                                 {"sharp", GaussianMode::Sharp}};

int cmd_analyze(const std::string& path, const AnalysisOptions& options,
                const std::string& format) {
  const AnalysisRecord record = analyze_file(path, options);
  if (format == "json") {
    std::cout << render_json(record);
  } else if (format == "csv") {
    std::cout << csv_header() << "\n" << render_csv_row(TableEntry{record.name, record, ""}) << "\n";
  } else {
    std::cout << render_human(record);
  }
  return exit_code(record.outcome);
}

int cmd_table(std::string dir, const std::string& format) {
  if (dir.empty()) {
    const char* env = std::getenv(kDataDirEnv);
    if (env == nullptr) {
      std::cerr << "no directory given and " << kDataDirEnv << " is not set\n";
      return kExitInputError;
    }
    dir = env;
  }
  AnalysisOptions options;
  options.extend = true;
  const std::vector<TableEntry> entries = analyze_directory(dir, options);
  if (format == "csv") {
    std::cout << render_csv(entries);
  } else if (format == "json") {
    std::cout << render_json(entries);
  } else {
    std::cout << render_table(entries);
  }
  for (const auto& e : entries)
    if (!e.record) return kExitInputError;
  return 0;
}

int cmd_flow(const std::string& path, double eps, const FlowConfig& config, int trials,
             std::uint64_t seed) {
  const MetricLieAlgebra algebra = load_algebra(path);
  const JacobiDiagnostics diag = validate_algebra(algebra);
  if (!diag.ok) throw InvalidAlgebra("Jacobi identity violated");
  const FramedAlgebra framed = orthonormal_frame(algebra);
  const CurvatureSummary summary = curvature_summary(framed);
  const SolitonCertificate cert =
      solve_algebraic_soliton(framed, summary, derivation_basis(framed.c), algebra.lambda_hint);
  if (!cert.accepted()) {
    std::cerr << "not a soliton: residual " << cert.residual << "\n";
    return exit_code(Outcome::NotSoliton);
  }
  if (!cert.expanding()) {
    std::cerr << "not expanding: λ=" << cert.lambda << "\n";
    return exit_code(Outcome::NotSoliton);
  }

  const auto reports = perturbation_experiment(algebra, cert, eps, trials, seed, config);
  std::cout << "flow " << algebra.name << ": lambda " << cert.lambda << ", eps " << eps
            << ", t_max " << config.t_max << ", dt " << config.dt << "\n";
  std::cout << "trial  initial_residual  final_residual  ratio        violations  decayed\n";
  bool all = true;
  for (const auto& r : reports) {
    const double ratio = r.initial_residual > 0.0 ? r.final_residual / r.initial_residual : 0.0;
    std::cout << std::setw(5) << r.trial << "  " << std::scientific << std::setprecision(6)
              << std::setw(16) << r.initial_residual << "  " << std::setw(14) << r.final_residual
              << "  " << std::setw(11) << ratio << std::defaultfloat << "  " << std::setw(10)
              << r.monotonicity_violations << "  " << (r.decayed ? "yes" : "no") << "\n";
    all = all && r.decayed;
  }
  return all ? 0 : 2;
}

int cmd_gaussian(const std::string& path, GaussianMode mode, bool ignore_prior) {
  AnalysisOptions options;
  options.gaussian = true;
  options.mode = mode;
  options.ignore_prior_stability = ignore_prior;
  const AnalysisRecord record = analyze_file(path, options);
  if (!record.certificate.accepted()) {
    std::cerr << "not a soliton: residual " << record.certificate.residual << "\n";
    return exit_code(Outcome::NotSoliton);
  }
  if (!record.gaussian) {
    std::cerr << record.gaussian_note.value_or("no Gaussian plan") << "\n";
    return exit_code(Outcome::NotSoliton);
  }
  const auto& g = *record.gaussian;
  std::cout << "algebra   " << record.name << "\n"
            << "mode      " << to_string(g.mode) << "\n"
            << "lambda    " << g.lambda << "\n"
            << "C1        " << g.c1 << "\n"
            << "C2        " << g.c2 << "\n"
            << "k         " << g.k << (g.already_stable ? "  (already strictly stable)" : "") << "\n"
            << "bracket   " << g.bracket_value_at_k << "  (C1 + C2 + lambda k / 2)\n"
            << "product   residual " << record.gaussian_product_residual.value_or(0.0) << " on M x R^"
            << g.k << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear stability certificates for algebraic Ricci solitons"};
  app.require_subcommand(1);

  std::string path;
  std::string format = "human";
  std::string mode_name = "sharp";
  bool extend = false;
  bool gaussian = false;
  bool ignore_prior = false;

  auto* analyze_cmd = app.add_subcommand("analyze", "Certify one .alg file");
  analyze_cmd->add_option("file", path, ".alg input")->required();
  analyze_cmd->add_flag("--extend", extend, "Also analyze the rank-one Einstein extension");
  analyze_cmd->add_flag("--gaussian", gaussian, "Compute the Gaussian extension dimension");
  analyze_cmd->add_option("--mode", mode_name, "Gaussian bound: paper or sharp")
      ->check(CLI::IsMember({"paper", "sharp"}));
  analyze_cmd->add_flag("--ignore-stability", ignore_prior,
                        "Do not shortcut k = 0 for inputs already certified stable");
  analyze_cmd->add_option("--format", format, "human, json or csv")
      ->check(CLI::IsMember({"human", "json", "csv"}));

  std::string dir;
  auto* table_cmd = app.add_subcommand("table", "Tabulate every .alg file in a directory");
  table_cmd->add_option("dir", dir, "Directory (defaults to $SOLSTAB_DATA_DIR)");
  table_cmd->add_option("--format", format, "human, csv or json")
      ->check(CLI::IsMember({"human", "json", "csv"}));

  double eps = 1e-3;
  int trials = 10;
  std::uint64_t seed = 1;
  FlowConfig config;
  auto* flow_cmd = app.add_subcommand("flow", "Perturb a soliton and integrate the flow");
  flow_cmd->add_option("file", path, ".alg input")->required();
  flow_cmd->add_option("--eps", eps, "Perturbation size (<= 1e-2)");
  flow_cmd->add_option("--t-max", config.t_max, "Final time");
  flow_cmd->add_option("--dt", config.dt, "RK4 step");
  flow_cmd->add_option("--trials", trials, "Number of random perturbations");
  flow_cmd->add_option("--seed", seed, "Random seed");
  flow_cmd->add_option("--sample-every", config.sample_every, "Steps between samples");

  auto* gaussian_cmd = app.add_subcommand("gaussian", "Stabilizing Gaussian factor dimension");
  gaussian_cmd->add_option("file", path, ".alg input")->required();
  gaussian_cmd->add_option("--mode", mode_name, "paper or sharp")
      ->check(CLI::IsMember({"paper", "sharp"}));
  gaussian_cmd->add_flag("--ignore-stability", ignore_prior,
                         "Do not shortcut k = 0 for inputs already certified stable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInputError;
  }

  try {
    if (*analyze_cmd) {
      AnalysisOptions options;
      options.extend = extend;
      options.gaussian = gaussian;
      options.mode = kModes.at(mode_name);
      options.ignore_prior_stability = ignore_prior;
      return cmd_analyze(path, options, format);
    }
    if (*table_cmd) return cmd_table(dir, format);
    if (*flow_cmd) return cmd_flow(path, eps, config, trials, seed);
    if (*gaussian_cmd) return cmd_gaussian(path, kModes.at(mode_name), ignore_prior);
  } catch (const NotExpanding& e) {
    std::cerr << e.what() << "\n";
    return exit_code(Outcome::NotSoliton);
  } catch (const PreconditionViolated& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Blowup& e) {
    std::cerr << "flow blew up: " << e.what() << "\n";
    return 2;
  } catch (const PositivityLost& e) {
    std::cerr << "flow degenerated: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
