#pragma once

// End-to-end pipeline behind the command-line tool, plus the table, CSV and
// JSON renderings of its results.

#include "solstab/algebra.hpp"
#include "solstab/soliton.hpp"
#include "solstab/stability.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace solstab {

struct AnalysisOptions {
  bool extend = false;
  bool gaussian = false;
  GaussianMode mode = GaussianMode::Sharp;
  bool ignore_prior_stability = false;
};

enum class Outcome { Stable, Unstable, Inconclusive, NotSoliton };

std::string_view to_string(Outcome outcome) noexcept;

/// Exit codes: 0 stable, 2 unstable or inconclusive, 3 not a soliton.
/// Input errors (exit 1) never produce a record.
int exit_code(Outcome outcome) noexcept;
inline constexpr int kExitInputError = 1;

struct Timings {
  double curvature_ms = 0.0;
  double soliton_ms = 0.0;
  double stability_ms = 0.0;
  double total_ms = 0.0;
};

struct AnalysisRecord {
  std::string name;
  int dim = 0;
  StructureProfile profile;
  double jacobi_residual = 0.0;
  SolitonCertificate certificate;
  std::optional<StabilityReport> stability;  // absent for non-solitons
  std::optional<std::string> extension_note;  // why no extension was analyzed
  std::optional<GaussianExtensionPlan> gaussian;
  std::optional<double> gaussian_product_residual;
  std::optional<std::string> gaussian_note;
  Outcome outcome = Outcome::NotSoliton;
  Timings timings;
};

/// Throws InvalidAlgebra (naming the worst Jacobi triple) for non-Lie inputs.
AnalysisRecord analyze(const MetricLieAlgebra& algebra, const AnalysisOptions& options);
AnalysisRecord analyze_file(const std::filesystem::path& path, const AnalysisOptions& options);

/// One table line: either a record or the error that prevented it.
struct TableEntry {
  std::string name;
  std::optional<AnalysisRecord> record;
  std::string error;
};

/// All *.alg files in dir, sorted by file name, analyzed concurrently.
std::vector<TableEntry> analyze_directory(const std::filesystem::path& dir,
                                          const AnalysisOptions& options);

/// Round-half-even to three decimals, e.g. 7.8125 -> "7.812", -0.0001 -> "0.000".
std::string format_rounded(double value);

std::string verdict_mark(std::optional<Verdict> v);

std::string render_human(const AnalysisRecord& record);
std::string render_table(const std::vector<TableEntry>& entries);

std::string csv_header();
std::string render_csv_row(const TableEntry& entry);
std::string render_csv(const std::vector<TableEntry>& entries);

struct CsvRow {
  std::string name;
  std::string step, lambda, trace_d, max_q, q_mark, max_ro, ro_mark;
};
CsvRow parse_csv_row(std::string_view line);

std::string render_json(const AnalysisRecord& record);
std::string render_json(const std::vector<TableEntry>& entries);

/// Verdict-bearing subset of a record read back from render_json output.
struct ParsedRecord {
  std::string name;
  Outcome outcome = Outcome::NotSoliton;
  std::optional<Verdict> q_verdict;
  std::optional<Verdict> ro_verdict;
  double lambda = 0.0;
  double trace_d = 0.0;
  std::optional<double> max_q;
  std::optional<double> max_ro;
  std::optional<int> gaussian_k;
};
ParsedRecord parse_record_json(std::string_view text);

}  // namespace solstab
