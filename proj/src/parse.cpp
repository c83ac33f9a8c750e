#include "solstab/algebra.hpp"
#include "solstab/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace solstab {

using nlohmann::json;

namespace {

int as_index(const json& v) {
  if (!v.is_number_integer()) throw ParseError("bracket indices must be integers");
  return v.get<int>();
}

}  // namespace

MetricLieAlgebra parse_algebra(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("malformed document: top level must be an object");

  try {
    const std::string name = doc.value("name", std::string("unnamed"));
    if (!doc.contains("dim") || !doc["dim"].is_number_integer())
      throw ParseError("malformed document: integer 'dim' is required");
    const int dim = doc["dim"].get<int>();

    std::vector<BracketEntry> brackets;
    if (doc.contains("brackets")) {
      const json& list = doc["brackets"];
      if (!list.is_array()) throw ParseError("malformed document: 'brackets' must be a list");
      for (const json& e : list) {
        if (!e.is_array() || e.size() != 4 || !e[3].is_number())
          throw ParseError("malformed document: bracket entries are [i, j, k, value]");
        brackets.push_back({as_index(e[0]), as_index(e[1]), as_index(e[2]), e[3].get<double>()});
      }
    }

    Matrix metric;
    if (doc.contains("metric") && !doc["metric"].is_null()) {
      const json& rows = doc["metric"];
      if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
        throw ParseError("malformed document: 'metric' must have dim rows");
      metric.resize(dim, dim);
      for (int r = 0; r < dim; ++r) {
        if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != dim)
          throw ParseError("malformed document: 'metric' rows must have dim entries");
        for (int s = 0; s < dim; ++s) {
          if (!rows[r][s].is_number()) throw ParseError("malformed document: metric entry");
          metric(r, s) = rows[r][s].get<double>();
        }
      }
    }

    std::optional<double> lambda_hint;
    if (doc.contains("hints")) {
      const json& hints = doc["hints"];
      if (!hints.is_object()) throw ParseError("malformed document: 'hints' must be an object");
      if (hints.contains("lambda")) {
        if (!hints["lambda"].is_number()) throw ParseError("malformed document: hints.lambda");
        lambda_hint = hints["lambda"].get<double>();
      }
    }

    return make_algebra(name, dim, std::move(brackets), std::move(metric), lambda_hint,
                        kMaxInputDim);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
}

MetricLieAlgebra load_algebra(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_algebra(buffer.str());
}

std::string to_document(const MetricLieAlgebra& algebra) {
  json doc;
  doc["name"] = algebra.name;
  doc["dim"] = algebra.dim;
  json list = json::array();
  for (const auto& e : algebra.brackets) list.push_back({e.i, e.j, e.k, e.value});
  doc["brackets"] = list;
  if (!algebra.metric.isIdentity(0.0)) {
    json rows = json::array();
    for (int r = 0; r < algebra.dim; ++r) {
      json row = json::array();
      for (int s = 0; s < algebra.dim; ++s) row.push_back(algebra.metric(r, s));
      rows.push_back(row);
    }
    doc["metric"] = rows;
  }
  if (algebra.lambda_hint) doc["hints"] = {{"lambda", *algebra.lambda_hint}};
  return doc.dump(2) + "\n";
}

}  // namespace solstab
