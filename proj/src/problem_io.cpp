#include "hbl/problem_io.hpp"

#include "hbl/loop_parser.hpp"

#include <set>

namespace hbl {

void ProblemDocument::validate() const {
  if (dimension == 0) throw DocumentError("dimension must be at least 1");
  if (arrays.empty()) throw DocumentError("at least one array access is required");
  if (indices && indices->size() != dimension) {
    throw DocumentError("expected " + std::to_string(dimension) + " index names, got " +
                        std::to_string(indices->size()));
  }
  std::set<std::string> seen;
  for (const auto& a : arrays) {
    if (a.name.empty()) throw DocumentError("array names must be non-empty");
    if (!seen.insert(a.name).second) throw DocumentError("duplicate array name '" + a.name + "'");
    if (a.rows.empty()) throw DocumentError("array '" + a.name + "' has no subscripts");
    for (const auto& r : a.rows) {
      if (r.size() != dimension) {
        throw DocumentError("array '" + a.name + "': subscript row has " +
                            std::to_string(r.size()) + " coefficients, expected " +
                            std::to_string(dimension));
      }
    }
  }
}

HblProblem ProblemDocument::toProblem() const {
  validate();
  HblProblem p;
  p.dim = dimension;
  for (const auto& a : arrays) {
    p.maps.push_back(IntMatrix::fromRows(a.rows, dimension));
    p.names.push_back(a.name);
  }
  return p;
}

namespace {

Integer integerFrom(const nlohmann::json& v, const std::string& where) {
  if (v.is_number_integer()) {
    return v.is_number_unsigned() ? Integer(std::to_string(v.get<std::uint64_t>()))
                                  : Integer(std::to_string(v.get<std::int64_t>()));
  }
  if (v.is_string()) {
    try {
      return Integer(v.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  throw DocumentError(where + ": expected an integer");
}

}  // namespace

ProblemDocument parseProblemJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DocumentError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DocumentError("problem must be a JSON object");
  ProblemDocument doc;
  if (!j.contains("dimension") || !j["dimension"].is_number_unsigned()) {
    throw DocumentError("\"dimension\" must be a positive integer");
  }
  doc.dimension = j["dimension"].get<std::size_t>();
  if (j.contains("indices")) {
    if (!j["indices"].is_array()) throw DocumentError("\"indices\" must be a list of names");
    std::vector<std::string> names;
    for (const auto& n : j["indices"]) {
      if (!n.is_string()) throw DocumentError("\"indices\" must be a list of names");
      names.push_back(n.get<std::string>());
    }
    doc.indices = std::move(names);
  }
  if (!j.contains("maps") || !j["maps"].is_array()) throw DocumentError("\"maps\" must be a list");
  for (std::size_t i = 0; i < j["maps"].size(); ++i) {
    const auto& m = j["maps"][i];
    const std::string where = "maps[" + std::to_string(i) + "]";
    if (!m.is_object()) throw DocumentError(where + ": expected an object");
    ArrayAccess a;
    a.name = m.contains("name") && m["name"].is_string() ? m["name"].get<std::string>()
                                                         : "A" + std::to_string(i + 1);
    if (!m.contains("rows") || !m["rows"].is_array()) throw DocumentError(where + ": missing \"rows\"");
    for (const auto& row : m["rows"]) {
      if (!row.is_array()) throw DocumentError(where + ": each row must be a list");
      std::vector<Integer> r;
      for (const auto& v : row) r.push_back(integerFrom(v, where));
      a.rows.push_back(std::move(r));
    }
    doc.arrays.push_back(std::move(a));
  }
  doc.validate();
  return doc;
}

nlohmann::json problemToJson(const ProblemDocument& doc) {
  nlohmann::json j;
  j["dimension"] = doc.dimension;
  if (doc.indices) j["indices"] = *doc.indices;
  j["maps"] = nlohmann::json::array();
  for (const auto& a : doc.arrays) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : a.rows) {
      nlohmann::json row = nlohmann::json::array();
      for (const auto& v : r) {
        if (v.fits_slong_p()) {
          row.push_back(v.get_si());
        } else {
          row.push_back(v.get_str());
        }
      }
      rows.push_back(std::move(row));
    }
    j["maps"].push_back({{"name", a.name}, {"rows", std::move(rows)}});
  }
  return j;
}

ProblemDocument parseProblem(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parseProblemJson(text);
  return parseLoopNest(text);
}

}  // namespace hbl
