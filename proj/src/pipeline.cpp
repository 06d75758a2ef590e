#include "hbl/pipeline.hpp"

#include <algorithm>

namespace hbl {

using nlohmann::json;

namespace {

PlanOptions planOptions(const RunOptions& o) {
  PlanOptions p;
  p.maxClosureSize = o.maxClosureSize;
  return p;
}

// Runs the analysis, or fills `out` with the infinite-reuse report and returns nullopt.
std::optional<Analysis> analyze(const HblProblem& p, const RunOptions& options, RunResult& out) {
  try {
    return analyzeProblem(p, planOptions(options));
  } catch (const InfeasiblePrimal& e) {
    out.report = infeasibleReport(p, generateConstraints(p, options.maxClosureSize), e);
    out.code = ExitCode::Infeasible;
    out.diagnostics.push_back(e.what());
    return std::nullopt;
  }
}

void applyStrict(const Analysis& a, const RunOptions& options, RunResult& out) {
  if (out.code != ExitCode::Ok) return;
  if (options.strict && a.constraints.completeness == Completeness::Partial) {
    out.code = ExitCode::PartialStrict;
    out.diagnostics.push_back("constraint set is partial (--strict)");
  }
}

}  // namespace

std::vector<Integer> defaultVerifyMemories(const Analysis& a, std::uint64_t budget) {
  Integer lcm = 1;
  for (const auto& g : a.groups) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), g.scaling.get_den().get_mpz_t());
  const unsigned long l = lcm.fits_ulong_p() ? lcm.get_ui() : 1;
  auto memoryAt = [&](unsigned long n) -> Integer {
    Integer m;
    mpz_ui_pow_ui(m.get_mpz_t(), n, l);
    return m * a.memoryDivisor;
  };
  auto fits = [&](const Integer& m) { return tileSpecAt(a, m).pointCount() <= budget; };

  std::vector<Integer> out;
  for (unsigned long n : {2UL, 4UL, 8UL, 16UL}) {
    Integer m = memoryAt(n);
    if (fits(m)) out.push_back(m);
  }
  if (out.size() >= 4) return out;
  out.clear();
  for (unsigned long n = 2; n <= 16 && out.size() < 4; ++n) {
    Integer m = memoryAt(n);
    if (!fits(m)) break;
    out.push_back(m);
  }
  if (out.empty()) out.push_back(memoryAt(2));
  return out;
}

RunResult runAnalyze(const ProblemDocument& doc, const RunOptions& options) {
  RunResult out;
  auto a = analyze(doc.toProblem(), options, out);
  if (!a) return out;
  out.report = analysisReport(*a);
  applyStrict(*a, options, out);
  return out;
}

RunResult runTile(const ProblemDocument& doc, const Integer& memory, const RunOptions& options) {
  if (memory < 1) throw std::invalid_argument("memory must be at least 1");
  RunResult out;
  auto a = analyze(doc.toProblem(), options, out);
  if (!a) return out;
  out.report = analysisReport(*a);
  TilingResult t = buildTiling(tileSpecAt(*a, memory));
  addTiling(out.report, *a, memory, t);
  if (options.emitPoints) {
    try {
      json points = json::array();
      forEachTilePoint(t.spec, [&](const Point& x) { points.push_back(x); }, options.budget);
      out.report["tile"]["points"] = std::move(points);
    } catch (const BudgetExceeded& e) {
      out.code = ExitCode::BudgetExceeded;
      out.diagnostics.push_back(e.what());
      return out;
    }
  }
  applyStrict(*a, options, out);
  return out;
}

RunResult runVerify(const ProblemDocument& doc, const std::vector<Integer>& memories,
                    const RunOptions& options) {
  for (const auto& m : memories) {
    if (m < 1) throw std::invalid_argument("memory must be at least 1");
  }
  RunResult out;
  auto a = analyze(doc.toProblem(), options, out);
  if (!a) return out;
  std::vector<Integer> ms = memories.empty() ? defaultVerifyMemories(*a, options.budget) : memories;
  out.report = analysisReport(*a);
  const Integer smallest = *std::min_element(ms.begin(), ms.end());
  addTiling(out.report, *a, smallest, buildTiling(tileSpecAt(*a, smallest)));

  VerifyOptions vo;
  vo.budget = options.budget;
  vo.coverRadius = options.window;
  VerificationReport v = verifyAnalysis(*a, ms, vo);
  out.report["verification"] = verificationJson(v, a->problem);
  std::sort(ms.begin(), ms.end());
  const auto requested = static_cast<std::size_t>(std::distance(ms.begin(), std::unique(ms.begin(), ms.end())));
  if (!v.passed) {
    out.code = ExitCode::VerificationFailed;
    for (const auto& f : v.failures) out.diagnostics.push_back(f);
  } else if (v.samples.empty()) {
    out.code = ExitCode::BudgetExceeded;
    out.diagnostics.push_back("no memory size fits the enumeration budget");
  } else if (v.samples.size() < requested || !v.cover) {
    // Whatever ran passed, but the budget cut the check short.
    out.code = ExitCode::BudgetExceeded;
    for (const auto& n : v.notices) out.diagnostics.push_back(n);
  }
  applyStrict(*a, options, out);
  return out;
}

RunResult runVerifyTiling(const ProblemDocument& doc, const json& tiling, const RunOptions& options) {
  HblProblem p = doc.toProblem();
  TilingResult t = tilingFromReport(tiling, p.dim);
  RunResult out;
  out.report = {{"s_hbl", nullptr},        {"primal", nullptr},
                {"dual", nullptr},         {"constraints", nullptr},
                {"tile", tileJson(t)},     {"translations", translationsJson(t)},
                {"verification", nullptr}, {"warnings", json::array()}};
  out.report["tile"]["path"] = "external";
  json groups = json::array();
  for (const auto& g : t.spec.groups) {
    json elements = json::array();
    for (const auto& e : g.elements) elements.push_back(vectorJson(e));
    groups.push_back({{"scaling", rationalJson(g.scaling)}, {"elements", std::move(elements)}});
  }
  out.report["tile"]["groups"] = std::move(groups);

  VerifyOptions vo;
  vo.budget = options.budget;
  vo.coverRadius = options.window;
  VerificationReport v = verifyTiling(t, p, vo);
  out.report["verification"] = verificationJson(v, p);
  if (!v.passed) {
    out.code = ExitCode::VerificationFailed;
    for (const auto& f : v.failures) out.diagnostics.push_back(f);
  }
  return out;
}

}  // namespace hbl
