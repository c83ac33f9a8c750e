#include "solstab/analysis.hpp"

#include "solstab/curvature.hpp"
#include "solstab/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <iomanip>
#include <sstream>

namespace solstab {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Outcome outcome_from(const AnalysisRecord& r) {
  if (!r.certificate.accepted() || !r.stability) return Outcome::NotSoliton;
  const auto& s = *r.stability;
  std::vector<Verdict> verdicts{s.q_verdict};
  if (s.ro_verdict) verdicts.push_back(*s.ro_verdict);
  if (std::any_of(verdicts.begin(), verdicts.end(), [](Verdict v) { return v == Verdict::Unstable; }))
    return Outcome::Unstable;
  if (std::any_of(verdicts.begin(), verdicts.end(),
                  [](Verdict v) { return v == Verdict::Inconclusive; }))
    return Outcome::Inconclusive;
  return Outcome::Stable;
}

std::optional<Verdict> verdict_from_string(const std::string& s) {
  for (Verdict v : {Verdict::Stable, Verdict::Unstable, Verdict::Inconclusive})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

Outcome outcome_from_string(const std::string& s) {
  for (Outcome o : {Outcome::Stable, Outcome::Unstable, Outcome::Inconclusive, Outcome::NotSoliton})
    if (to_string(o) == s) return o;
  throw ParseError("unknown outcome '" + s + "'");
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json record_json(const AnalysisRecord& r) {
  json j;
  j["name"] = r.name;
  j["dim"] = r.dim;
  j["outcome"] = std::string(to_string(r.outcome));
  j["structure"] = {{"step", r.profile.step},
                    {"nilpotent", r.profile.nilpotent},
                    {"unimodular", r.profile.unimodular},
                    {"jacobi_residual", r.jacobi_residual}};
  const auto& c = r.certificate;
  j["soliton"] = {{"lambda", c.lambda},         {"trace_D", c.trace_d},
                  {"div_X", c.div_x},           {"residual", c.residual},
                  {"accepted", c.accepted()},   {"degenerate", c.degenerate},
                  {"lambda_from_hint", c.lambda_from_hint},
                  {"derivation", matrix_json(c.derivation)}};
  if (r.stability) {
    const auto& s = *r.stability;
    json st = {{"step", s.step},
               {"max_q", s.max_q},
               {"threshold", s.threshold},
               {"q_margin", s.q_margin},
               {"q_verdict", std::string(to_string(s.q_verdict))}};
    if (s.max_ro) {
      st["max_Ro"] = *s.max_ro;
      st["einstein_threshold"] = *s.einstein_threshold;
      st["Ro_margin"] = *s.ro_margin;
      st["Ro_verdict"] = std::string(to_string(*s.ro_verdict));
    }
    j["stability"] = st;
  }
  if (r.extension_note) j["extension_note"] = *r.extension_note;
  if (r.gaussian) {
    const auto& g = *r.gaussian;
    j["gaussian"] = {{"mode", std::string(to_string(g.mode))},
                     {"C1", g.c1},
                     {"C2", g.c2},
                     {"lambda", g.lambda},
                     {"k", g.k},
                     {"bracket_value_at_k", g.bracket_value_at_k},
                     {"already_stable", g.already_stable}};
    if (r.gaussian_product_residual) j["gaussian"]["product_residual"] = *r.gaussian_product_residual;
  }
  if (r.gaussian_note) j["gaussian_note"] = *r.gaussian_note;
  j["timings_ms"] = {{"curvature", r.timings.curvature_ms},
                     {"soliton", r.timings.soliton_ms},
                     {"stability", r.timings.stability_ms},
                     {"total", r.timings.total_ms}};
  return j;
}

std::string join_csv(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
    if (quote) {
      out += '"';
      for (char ch : cells[i]) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    } else {
      out += cells[i];
    }
  }
  return out;
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cells.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.emplace_back();
    } else if (ch != '\n' && ch != '\r') {
      cells.back() += ch;
    }
  }
  return cells;
}

std::vector<std::string> row_cells(const TableEntry& e) {
  if (!e.record) return {e.name, "error: " + e.error, "", "", "", "", "", ""};
  const AnalysisRecord& r = *e.record;
  if (!r.stability)
    return {e.name, std::to_string(r.profile.step), "-", "-", "-", "not a soliton", "-", "-"};
  const auto& s = *r.stability;
  return {e.name,
          std::to_string(s.step),
          format_rounded(s.lambda),
          format_rounded(s.trace_d),
          format_rounded(s.max_q),
          verdict_mark(s.q_verdict),
          s.max_ro ? format_rounded(*s.max_ro) : "-",
          verdict_mark(s.ro_verdict)};
}

}  // namespace

std::string_view to_string(Outcome outcome) noexcept {
  switch (outcome) {
    case Outcome::Stable: return "stable";
    case Outcome::Unstable: return "unstable";
    case Outcome::Inconclusive: return "inconclusive";
    case Outcome::NotSoliton: return "not a soliton";
  }
  return "not a soliton";
}

int exit_code(Outcome outcome) noexcept {
  switch (outcome) {
    case Outcome::Stable: return 0;
    case Outcome::Unstable: return 2;
    case Outcome::Inconclusive: return 2;
    case Outcome::NotSoliton: return 3;
  }
  return 3;
}

AnalysisRecord analyze(const MetricLieAlgebra& algebra, const AnalysisOptions& options) {
  const auto start = Clock::now();
  const JacobiDiagnostics diag = validate_algebra(algebra);
  if (!diag.ok) {
    std::ostringstream os;
    os << "Jacobi identity violated for triple (" << diag.worst_triple[0] << ","
       << diag.worst_triple[1] << "," << diag.worst_triple[2] << "), residual "
       << diag.jacobi_residual;
    throw InvalidAlgebra(os.str());
  }

  AnalysisRecord r;
  r.name = algebra.name;
  r.dim = algebra.dim;
  r.jacobi_residual = diag.jacobi_residual;

  auto t0 = Clock::now();
  const FramedAlgebra framed = orthonormal_frame(algebra);
  r.profile = structure_profile(framed);
  const CurvatureSummary summary = curvature_summary(framed);
  r.timings.curvature_ms = ms_since(t0);

  t0 = Clock::now();
  r.certificate =
      solve_algebraic_soliton(framed, summary, derivation_basis(framed.c), algebra.lambda_hint);
  r.timings.soliton_ms = ms_since(t0);

  if (r.certificate.accepted()) {
    t0 = Clock::now();
    std::optional<CurvatureSummary> ext_summary;
    if (options.extend) {
      try {
        const MetricLieAlgebra ext = rank_one_extension(framed, r.certificate, algebra.name + "+A");
        ext_summary = curvature_summary(orthonormal_frame(ext));
      } catch (const PreconditionViolated& e) {
        r.extension_note = e.what();
      }
    }
    r.stability =
        stability_report(framed, summary, r.certificate, ext_summary ? &*ext_summary : nullptr);
    r.timings.stability_ms = ms_since(t0);

    if (options.gaussian) {
      try {
        const GaussianExtensionPlan plan = gaussian_extension_dimension(
            summary, r.certificate, r.stability->max_q, options.mode,
            options.ignore_prior_stability ? PriorStability::Ignore : PriorStability::Use);
        r.gaussian_product_residual = verify_gaussian_product(framed, r.certificate, plan.k).residual;
        r.gaussian = plan;
      } catch (const NotExpanding& e) {
        r.gaussian_note = e.what();
      }
    }
  }
  r.outcome = outcome_from(r);
  r.timings.total_ms = ms_since(start);
  return r;
}

AnalysisRecord analyze_file(const std::filesystem::path& path, const AnalysisOptions& options) {
  return analyze(load_algebra(path), options);
}

std::vector<TableEntry> analyze_directory(const std::filesystem::path& dir,
                                          const AnalysisOptions& options) {
  if (!std::filesystem::is_directory(dir)) throw ParseError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".alg") files.push_back(entry.path());
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });

  std::vector<std::future<TableEntry>> pending;
  for (const auto& file : files)
    pending.push_back(std::async(std::launch::async, [file, options] {
      TableEntry e;
      e.name = file.stem().string();
      try {
        e.record = analyze_file(file, options);
      } catch (const std::exception& ex) {
        e.error = ex.what();
      }
      return e;
    }));
  std::vector<TableEntry> out;
  out.reserve(pending.size());
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

std::string format_rounded(double value) {
  if (!std::isfinite(value)) return value != value ? "nan" : (value > 0 ? "inf" : "-inf");
  // nearbyint follows the default round-to-nearest-even mode.
  const double scaled = std::nearbyint(value * 1000.0);
  const bool negative = scaled < 0.0;
  const auto magnitude = static_cast<long long>(std::abs(scaled));
  std::ostringstream os;
  if (negative && magnitude != 0) os << '-';
  os << magnitude / 1000 << '.' << std::setw(3) << std::setfill('0') << magnitude % 1000;
  return os.str();
}

std::string verdict_mark(std::optional<Verdict> v) {
  if (!v) return "-";
  switch (*v) {
    case Verdict::Stable: return "✓";
    case Verdict::Unstable: return "✗";
    case Verdict::Inconclusive: return "?";
  }
  return "?";
}

std::string render_human(const AnalysisRecord& r) {
  std::ostringstream os;
  const auto& c = r.certificate;
  os << "algebra     " << r.name << " (dim " << r.dim << ")\n";
  os << "structure   step " << r.profile.step << (r.profile.nilpotent ? ", nilpotent" : "")
     << (r.profile.unimodular ? ", unimodular" : "") << ", Jacobi residual "
     << r.jacobi_residual << "\n";
  os << "soliton     lambda " << c.lambda << ", tr D " << c.trace_d << ", residual "
     << c.residual << (c.accepted() ? "" : "  (not a soliton)")
     << (c.degenerate ? (c.lambda_from_hint ? "  [lambda from hint]" : "  [lambda not determined]")
                      : "")
     << "\n";
  if (r.stability) {
    const auto& s = *r.stability;
    os << "stability   max q " << s.max_q << " vs tr D/2 = " << s.threshold << ", margin "
       << s.q_margin << "  " << to_string(s.q_verdict) << "\n";
    if (s.max_ro)
      os << "extension   max Ro " << *s.max_ro << " vs -lambda = " << *s.einstein_threshold
         << ", margin " << *s.ro_margin << "  " << to_string(*s.ro_verdict) << "\n";
  }
  if (r.extension_note) os << "extension   skipped: " << *r.extension_note << "\n";
  if (r.gaussian) {
    const auto& g = *r.gaussian;
    os << "gaussian    mode " << to_string(g.mode) << ", C1 " << g.c1 << ", C2 " << g.c2
       << ", k " << g.k << ", bracket " << g.bracket_value_at_k
       << (g.already_stable ? "  (already stable)" : "") << "\n";
    if (r.gaussian_product_residual)
      os << "            product soliton residual " << *r.gaussian_product_residual << "\n";
  }
  if (r.gaussian_note) os << "gaussian    skipped: " << *r.gaussian_note << "\n";
  os << "verdict     " << to_string(r.outcome) << "\n\n";
  std::vector<TableEntry> single{TableEntry{r.name, r, ""}};
  os << render_table(single);
  return os.str();
}

std::string render_table(const std::vector<TableEntry>& entries) {
  const std::vector<std::string> header{"#", "step", "λ", "trD", "maxq", "<?½trD", "maxRo", "<?−λ"};
  std::vector<std::vector<std::string>> rows{header};
  for (const auto& e : entries) rows.push_back(row_cells(e));

  // Column widths in code points, so multi-byte marks align.
  auto width = [](const std::string& s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char ch) { return (ch & 0xC0) != 0x80; }));
  };
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], width(row[i]));

  std::ostringstream os;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) os << "  ";
      const std::size_t pad = widths[i] - width(row[i]);
      if (i == 0) {
        os << row[i] << std::string(pad, ' ');
      } else {
        os << std::string(pad, ' ') << row[i];
      }
    }
    os << "\n";
  }
  return os.str();
}

std::string csv_header() { return "#,step,λ,trD,maxq,<?½trD,maxRo,<?−λ"; }

std::string render_csv_row(const TableEntry& entry) { return join_csv(row_cells(entry)); }

std::string render_csv(const std::vector<TableEntry>& entries) {
  std::string out = csv_header() + "\n";
  for (const auto& e : entries) out += render_csv_row(e) + "\n";
  return out;
}

CsvRow parse_csv_row(std::string_view line) {
  const auto cells = split_csv(line);
  if (cells.size() != 8) throw ParseError("CSV row must have 8 cells");
  return CsvRow{cells[0], cells[1], cells[2], cells[3], cells[4], cells[5], cells[6], cells[7]};
}

std::string render_json(const AnalysisRecord& record) { return record_json(record).dump(2) + "\n"; }

std::string render_json(const std::vector<TableEntry>& entries) {
  json list = json::array();
  for (const auto& e : entries) {
    if (e.record) {
      list.push_back(record_json(*e.record));
    } else {
      list.push_back({{"name", e.name}, {"error", e.error}});
    }
  }
  return list.dump(2) + "\n";
}

ParsedRecord parse_record_json(std::string_view text) {
  try {
    const json j = json::parse(text.begin(), text.end());
    ParsedRecord p;
    p.name = j.at("name").get<std::string>();
    p.outcome = outcome_from_string(j.at("outcome").get<std::string>());
    p.lambda = j.at("soliton").at("lambda").get<double>();
    p.trace_d = j.at("soliton").at("trace_D").get<double>();
    if (j.contains("stability")) {
      const json& s = j["stability"];
      p.max_q = s.at("max_q").get<double>();
      p.q_verdict = verdict_from_string(s.at("q_verdict").get<std::string>());
      if (s.contains("max_Ro")) {
        p.max_ro = s["max_Ro"].get<double>();
        p.ro_verdict = verdict_from_string(s.at("Ro_verdict").get<std::string>());
      }
    }
    if (j.contains("gaussian")) p.gaussian_k = j["gaussian"].at("k").get<int>();
    return p;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed record: ") + e.what());
  }
}

}  // namespace solstab
