#include "hbl/report.hpp"

#include <sstream>

namespace hbl {

using nlohmann::json;

json rationalJson(const Rational& value) {
  return {{"exact", toString(value)}, {"decimal", toDecimal(value)}};
}

json integerJson(const Integer& value) {
  if (value.fits_slong_p()) return value.get_si();
  return value.get_str();
}

json vectorJson(const IntVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(integerJson(x));
  return out;
}

json subgroupJson(const Subgroup& h) {
  json basis = json::array();
  for (const auto& c : h.basis().columns()) basis.push_back(vectorJson(c));
  return {{"rank", h.rank()}, {"basis", std::move(basis)}};
}

Integer integerFromJson(const json& v) {
  if (v.is_number_unsigned()) return Integer(std::to_string(v.get<std::uint64_t>()));
  if (v.is_number_integer()) return Integer(std::to_string(v.get<std::int64_t>()));
  if (v.is_string()) return Integer(v.get<std::string>());
  throw std::invalid_argument("expected an integer, got " + v.dump());
}

namespace {

json vectorsJson(const std::vector<IntVector>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(vectorJson(v));
  return out;
}

json dualJson(const DualVector& y) {
  json out = json::array();
  for (const auto& [h, v] : y) {
    json entry = subgroupJson(h);
    entry["value"] = rationalJson(v);
    out.push_back(std::move(entry));
  }
  return out;
}

json rationalsJson(const std::vector<Rational>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(rationalJson(v));
  return out;
}

json constraintsJson(const ConstraintSet& e) {
  json out = {{"count", e.subgroups.size()},
              {"completeness", std::string(toString(e.completeness))},
              {"method", std::string(toString(e.method))}};
  out["cap"] = e.completeness == Completeness::Partial ? json(e.cap) : json(nullptr);
  return out;
}

json emptyReport() {
  return {{"s_hbl", nullptr},      {"primal", nullptr},       {"dual", nullptr},
          {"constraints", nullptr}, {"tile", nullptr},         {"translations", nullptr},
          {"verification", nullptr}, {"warnings", json::array()}};
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string tuple(const json& v) {
  std::vector<std::string> parts;
  for (const auto& x : v) parts.push_back(scalar(x));
  return "(" + join(parts, ", ") + ")";
}

std::string span(const json& h) {
  std::vector<std::string> parts;
  for (const auto& c : h["basis"]) parts.push_back(tuple(c));
  return "<" + join(parts, ", ") + ">";
}

}  // namespace

json analysisReport(const Analysis& a) {
  const HblProblem& p = a.problem;
  json r = emptyReport();
  r["s_hbl"] = rationalJson(a.sHbl());

  json s = json::array();
  for (std::size_t i = 0; i < p.mapCount(); ++i) {
    json entry = rationalJson(a.primal.s[i]);
    entry["map"] = p.nameOf(i);
    s.push_back(std::move(entry));
  }
  r["primal"] = {{"status", std::string(toString(a.primal.status))}, {"s", std::move(s)}};

  DualEvaluation ev = evalDual(a.flagDual, p);
  json flag = json::array();
  for (const auto& h : a.flag.chain) flag.push_back(subgroupJson(h));
  r["dual"] = {{"support", dualJson(a.dual)},
               {"flag_support", dualJson(a.flagDual)},
               {"flag", std::move(flag)},
               {"value", rationalJson(ev.value)},
               {"loads", rationalsJson(ev.load)}};

  r["constraints"] = constraintsJson(a.constraints);

  json tile = {{"path", std::string(toString(a.path))},
               {"memory_divisor", integerJson(a.memoryDivisor)}};
  json groups = json::array();
  json scalings = json::array();
  for (const auto& g : a.groups) {
    groups.push_back({{"scaling", rationalJson(g.scaling)}, {"elements", vectorsJson(g.elements)}});
    for (std::size_t k = 0; k < g.elements.size(); ++k) scalings.push_back(toString(g.scaling));
  }
  tile["groups"] = std::move(groups);
  tile["scalings"] = std::move(scalings);
  if (a.decomposition) {
    json ys = json::array();
    for (std::size_t i = 0; i < a.decomposition->ys.size(); ++i) {
      json y = subgroupJson(a.decomposition->ys[i]);
      y["scaling"] = rationalJson(a.decomposition->scalings[i]);
      ys.push_back(std::move(y));
    }
    tile["decomposition"] = std::move(ys);
  } else {
    tile["decomposition"] = nullptr;
  }
  if (a.gamma) {
    const GammaEstimate& g = *a.gamma;
    tile["gamma"] = {{"estimate", g.gamma},
                     {"lower", g.lower()},
                     {"upper", g.upper()},
                     {"singleton_face", g.singletonFace},
                     {"minimizer", g.minimizer}};
  } else {
    tile["gamma"] = nullptr;
  }
  tile["split"] = a.split.empty() ? json(nullptr) : rationalsJson(a.split);
  r["tile"] = std::move(tile);

  json warnings = json::array();
  for (const auto& w : a.warnings) warnings.push_back(w);
  r["warnings"] = std::move(warnings);
  return r;
}

json infeasibleReport(const HblProblem& p, const ConstraintSet& e, const InfeasiblePrimal& error) {
  json r = emptyReport();
  r["primal"] = {{"status", std::string(toString(LpStatus::Infeasible))},
                 {"reuse_witness", subgroupJson(error.witness())},
                 {"maps", p.names}};
  r["constraints"] = constraintsJson(e);
  r["warnings"] = json::array({error.what()});
  return r;
}

json tileJson(const TilingResult& t) {
  json sides = json::array();
  for (const auto& s : t.spec.sides()) sides.push_back(integerJson(s));
  json elements = json::array();
  for (const auto& c : t.spec.elementMatrix().columns()) elements.push_back(vectorJson(c));
  json scalings = json::array();
  for (const auto& s : t.spec.elementScalings()) scalings.push_back(toString(s));
  return {{"effective_memory", integerJson(t.spec.memory)},
          {"elements", std::move(elements)},
          {"scalings", std::move(scalings)},
          {"sides", std::move(sides)},
          {"point_count", integerJson(t.spec.pointCount())}};
}

json translationsJson(const TilingResult& t) {
  return {{"t1", vectorsJson(t.t1Generators)},
          {"t2", vectorsJson(t.t2Generators)},
          {"t3", vectorsJson(t.t3Reps)},
          {"snf_diagonal", vectorJson(t.snfDiagonal)}};
}

void addTiling(json& report, const Analysis& a, const Integer& memory, const TilingResult& t) {
  if (report["tile"].is_null()) report["tile"] = json::object();
  json& tile = report["tile"];
  tile["path"] = std::string(toString(a.path));
  tile["memory"] = integerJson(memory);
  json built = tileJson(t);
  for (auto& [key, value] : built.items()) tile[key] = value;
  report["translations"] = translationsJson(t);
}

json verificationJson(const VerificationReport& v, const HblProblem& p) {
  json samples = json::array();
  for (const auto& s : v.samples) {
    json images = json::object();
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < s.images.size(); ++i) {
      images[p.nameOf(i)] = s.images[i];
      total += s.images[i];
    }
    json entry = {{"memory", integerJson(s.memory)},
                  {"tile_points", s.tilePoints},
                  {"images", std::move(images)},
                  {"memory_sum", total},
                  {"hbl_bound_ok", s.hblBoundOk}};
    entry["memory_ok"] = s.memoryOk ? json(*s.memoryOk) : json(nullptr);
    entry["ratio"] = s.ratio ? json(*s.ratio) : json(nullptr);
    samples.push_back(std::move(entry));
  }
  json out = {{"passed", v.passed}, {"samples", std::move(samples)}};
  if (v.cover) {
    out["cover"] = {{"radius", v.coverRadius.value_or(0)},
                    {"exact", v.cover->exact},
                    {"window_points", v.cover->windowPoints},
                    {"uncovered", v.cover->uncovered},
                    {"overcovered", v.cover->overcovered}};
  } else {
    out["cover"] = nullptr;
  }
  json fits = {{"size", nullptr}, {"images", json::object()}};
  if (v.sizeFit) fits["size"] = {{"slope", v.sizeFit->slope}, {"residual", v.sizeFit->residual}};
  for (std::size_t i = 0; i < v.imageFits.size(); ++i) {
    fits["images"][p.nameOf(i)] = {{"slope", v.imageFits[i].slope},
                                   {"residual", v.imageFits[i].residual}};
  }
  out["fits"] = std::move(fits);
  out["notices"] = v.notices;
  out["failures"] = v.failures;
  return out;
}

TilingResult tilingFromReport(const json& report, std::size_t dim) {
  auto vectors = [dim](const json& list, const char* what) {
    if (!list.is_array()) throw std::invalid_argument(std::string(what) + " must be a list");
    std::vector<IntVector> out;
    for (const auto& v : list) {
      if (!v.is_array() || v.size() != dim) {
        throw std::invalid_argument(std::string(what) + ": every vector needs " +
                                    std::to_string(dim) + " entries");
      }
      IntVector x;
      for (const auto& e : v) x.push_back(integerFromJson(e));
      out.push_back(std::move(x));
    }
    return out;
  };
  if (!report.is_object() || !report.contains("tile") || !report.contains("translations") ||
      !report["tile"].is_object() || !report["translations"].is_object()) {
    throw std::invalid_argument("tiling needs \"tile\" and \"translations\" sections");
  }
  const json& tile = report["tile"];
  const json& tr = report["translations"];
  TilingResult t;
  t.spec.dim = dim;
  t.spec.memory = integerFromJson(tile.at("effective_memory"));
  if (!tile.contains("groups") || !tile["groups"].is_array()) {
    throw std::invalid_argument("tile needs \"groups\"");
  }
  for (const auto& g : tile["groups"]) {
    TileGroup group;
    group.scaling = parseRational(g.at("scaling").at("exact").get<std::string>());
    group.elements = vectors(g.at("elements"), "tile.groups.elements");
    t.spec.groups.push_back(std::move(group));
  }
  t.t1Generators = vectors(tr.at("t1"), "translations.t1");
  t.t2Generators = vectors(tr.at("t2"), "translations.t2");
  t.t3Reps = vectors(tr.at("t3"), "translations.t3");
  if (tr.contains("snf_diagonal")) {
    for (const auto& e : tr["snf_diagonal"]) t.snfDiagonal.push_back(integerFromJson(e));
  }
  try {
    t.spec.validate();
  } catch (const TilingPreconditionError& e) {
    throw std::invalid_argument(e.what());
  }
  return t;
}

std::string dumpReport(const json& report) { return report.dump(2) + "\n"; }

std::string renderText(const json& r) {
  std::ostringstream out;
  if (!r["s_hbl"].is_null()) {
    out << "s_HBL = " << r["s_hbl"]["exact"].get<std::string>() << " ("
        << r["s_hbl"]["decimal"].get<std::string>() << ")\n";
  }
  if (!r["constraints"].is_null()) {
    const json& c = r["constraints"];
    out << "constraints: " << c["count"].get<std::size_t>() << " subgroups, "
        << c["completeness"].get<std::string>() << " (" << c["method"].get<std::string>() << ")\n";
  }
  if (!r["primal"].is_null()) {
    const json& pr = r["primal"];
    out << "primal: " << pr["status"].get<std::string>() << "\n";
    if (pr.contains("s")) {
      for (const auto& s : pr["s"]) {
        out << "  s[" << s["map"].get<std::string>() << "] = " << s["exact"].get<std::string>() << "\n";
      }
    }
    if (pr.contains("reuse_witness")) out << "  every map collapses " << span(pr["reuse_witness"]) << "\n";
  }
  if (!r["dual"].is_null()) {
    out << "dual (on a flag):\n";
    for (const auto& h : r["dual"]["flag_support"]) {
      out << "  y = " << h["value"]["exact"].get<std::string>() << " on rank " << h["rank"].get<std::size_t>()
          << " " << span(h) << "\n";
    }
  }
  if (!r["tile"].is_null()) {
    const json& t = r["tile"];
    out << "tile: " << t["path"].get<std::string>() << " path";
    if (t.contains("memory")) {
      out << ", M = " << scalar(t["memory"]) << " (tile built at " << scalar(t["effective_memory"]) << ")";
    }
    out << "\n";
    for (const auto& g : t["groups"]) {
      std::vector<std::string> elems;
      for (const auto& e : g["elements"]) elems.push_back(tuple(e));
      out << "  scaling " << g["scaling"]["exact"].get<std::string>() << ": " << join(elems, " ") << "\n";
    }
    if (t.contains("sides")) {
      std::vector<std::string> sides;
      for (const auto& s : t["sides"]) sides.push_back(scalar(s));
      out << "  sides " << join(sides, " x ") << " = " << scalar(t["point_count"]) << " points\n";
    }
    if (!t["gamma"].is_null()) {
      out << "  gamma = " << t["gamma"]["estimate"].get<double>() << "\n";
    }
  }
  if (!r["translations"].is_null()) {
    const json& tr = r["translations"];
    auto list = [&](const char* key) {
      std::vector<std::string> parts;
      for (const auto& v : tr[key]) parts.push_back(tuple(v));
      return parts.empty() ? std::string("-") : join(parts, " ");
    };
    out << "translations:\n  T1 " << list("t1") << "\n  T2 " << list("t2") << "\n  T3 "
        << tr["t3"].size() << " coset representative(s)\n";
  }
  if (!r["verification"].is_null()) {
    const json& v = r["verification"];
    out << "verification: " << (v["passed"].get<bool>() ? "passed" : "FAILED") << "\n";
    for (const auto& s : v["samples"]) {
      out << "  M = " << scalar(s["memory"]) << ": |S| = " << s["tile_points"].get<std::uint64_t>()
          << ", sum of images = " << s["memory_sum"].get<std::uint64_t>() << "\n";
    }
    if (!v["cover"].is_null()) {
      out << "  cover of [-" << v["cover"]["radius"].get<std::int64_t>() << ", "
          << v["cover"]["radius"].get<std::int64_t>() << "]^d: "
          << (v["cover"]["exact"].get<bool>() ? "exact" : "NOT exact") << "\n";
    }
    if (!v["fits"]["size"].is_null()) {
      out << "  fitted |S| exponent " << v["fits"]["size"]["slope"].get<double>() << "\n";
    }
    for (const auto& n : v["notices"]) out << "  note: " << n.get<std::string>() << "\n";
    for (const auto& f : v["failures"]) out << "  failure: " << f.get<std::string>() << "\n";
  }
  for (const auto& w : r["warnings"]) out << "warning: " << w.get<std::string>() << "\n";
  return out.str();
}

}  // namespace hbl
