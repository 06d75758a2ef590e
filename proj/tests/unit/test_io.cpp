#include "doctest.h"

#include "fixtures.hpp"

#include "hbl/loop_parser.hpp"
#include "hbl/pipeline.hpp"

#include <fstream>
#include <sstream>

using namespace hbl;
using namespace hbl::testing;

namespace {

std::string readData(const std::string& name) {
  std::ifstream in(std::string(HBL_TEST_DATA_DIR) + "/" + name);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LoopParseError::Kind parseErrorKind(const std::string& text, std::size_t* line = nullptr,
                                    std::size_t* column = nullptr) {
  try {
    parseLoopNest(text);
  } catch (const LoopParseError& e) {
    if (line) *line = e.line();
    if (column) *column = e.column();
    return e.kind();
  }
  FAIL("parsed without error: " << text);
  return LoopParseError::Kind::SyntaxError;
}

std::vector<std::vector<Integer>> ints(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<std::vector<Integer>> out;
  for (const auto& r : rows) out.emplace_back(r.begin(), r.end());
  return out;
}

}  // namespace

TEST_CASE("loop nest: matrix multiplication") {
  ProblemDocument doc = parseLoopNest("loop (i, j, k) { C[i, j]; A[i, k]; B[k, j]; }");
  CHECK(doc.dimension == 3);
  REQUIRE(doc.indices);
  CHECK(*doc.indices == std::vector<std::string>{"i", "j", "k"});
  REQUIRE(doc.arrays.size() == 3);
  CHECK(doc.arrays[0].name == "C");
  CHECK(doc.arrays[0].rows == ints({{1, 0, 0}, {0, 1, 0}}));
  CHECK(doc.arrays[2].rows == ints({{0, 0, 1}, {0, 1, 0}}));
}

TEST_CASE("loop nest: coefficients, signs and comments") {
  ProblemDocument doc = parseLoopNest(
      "// header\n"
      "loop (x, y) {\n"
      "  A[3x - y];      // juxtaposed coefficient\n"
      "  B[x \xE2\x88\x92 2*y];   // unicode minus, explicit product\n"
      "  C[-x + y*4, 0*x + y];\n"
      "}\n");
  REQUIRE(doc.arrays.size() == 3);
  CHECK(doc.arrays[0].rows == ints({{3, -1}}));
  CHECK(doc.arrays[1].rows == ints({{1, -2}}));
  CHECK(doc.arrays[2].rows == ints({{-1, 4}, {0, 1}}));
  CHECK(doc.toProblem().maps[2] == rowsOf({{-1, 4}, {0, 1}}));
}

TEST_CASE("loop nest: errors carry kind and position") {
  using Kind = LoopParseError::Kind;
  std::size_t line = 0, column = 0;
  CHECK((parseErrorKind("loop (i) {\n  A[i + 1];\n}", &line, &column) == Kind::NonlinearSubscript));
  CHECK(line == 2);
  CHECK(column > 1);
  CHECK((parseErrorKind("loop (i, j) { A[i * j]; }") == Kind::NonlinearSubscript));
  CHECK((parseErrorKind("loop (i) { A[q]; }") == Kind::UnknownIndex));
  CHECK((parseErrorKind("loop (i) { A[i]; A[2i]; }") == Kind::DuplicateArray));
  CHECK((parseErrorKind("loop (i, i) { A[i]; }") == Kind::DuplicateIndex));
  CHECK((parseErrorKind("loop (i, j) { A[i j]; }") == Kind::SyntaxError));
  CHECK((parseErrorKind("loop (i) { A[i] }") == Kind::SyntaxError));
  CHECK((parseErrorKind("loop (i) { }") == Kind::SyntaxError));
  CHECK((parseErrorKind("for (i) { A[i]; }") == Kind::SyntaxError));
  // Unicode minus counts as one column.
  parseErrorKind("loop (i) { A[\xE2\x88\x92i $]; }", &line, &column);
  CHECK(column == 17);
}

TEST_CASE("JSON problems: parse, validate, round trip") {
  ProblemDocument doc = parseProblemJson(
      R"({"dimension": 2, "maps": [{"rows": [[3, -1]]}, {"name": "B", "rows": [["1", -2]]}]})");
  CHECK(doc.arrays[0].name == "A1");
  CHECK(doc.arrays[1].rows == ints({{1, -2}}));
  CHECK_FALSE(doc.indices);
  ProblemDocument again = parseProblemJson(problemToJson(doc).dump());
  CHECK(again.arrays[1].rows == doc.arrays[1].rows);
  CHECK(again.toProblem().maps == doc.toProblem().maps);

  // Entries beyond 64 bits survive as strings.
  ProblemDocument big = parseProblemJson(
      R"({"dimension": 1, "maps": [{"name": "A", "rows": [["123456789012345678901234567890"]]}]})");
  CHECK(big.arrays[0].rows[0][0] == Integer("123456789012345678901234567890"));
  CHECK(parseProblemJson(problemToJson(big).dump()).arrays[0].rows == big.arrays[0].rows);

  CHECK_THROWS_AS(parseProblemJson(R"({"dimension": 2, "maps": [{"rows": [[1, 2, 3]]}]})"), DocumentError);
  CHECK_THROWS_AS(parseProblemJson(R"({"dimension": 2, "maps": []})"), DocumentError);
  CHECK_THROWS_AS(parseProblemJson(R"({"maps": [{"rows": [[1]]}]})"), DocumentError);
  CHECK_THROWS_AS(parseProblemJson(R"({"dimension": 1, "maps": [{"rows": [[1.5]]}]})"), DocumentError);
  CHECK_THROWS_AS(parseProblemJson(
                      R"({"dimension": 1, "maps": [{"name": "A", "rows": [[1]]}, {"name": "A", "rows": [[2]]}]})"),
                  DocumentError);
  CHECK_THROWS_AS(parseProblemJson("{not json"), DocumentError);
}

TEST_CASE("format detection") {
  CHECK(parseProblem("  \n{\"dimension\": 1, \"maps\": [{\"rows\": [[1]]}]}").dimension == 1);
  CHECK(parseProblem("loop (i) { A[i]; }").dimension == 1);
}

TEST_CASE("loop nest and JSON inputs give identical reports") {
  for (const std::string base : {"rank_one", "multiple_tilings"}) {
    ProblemDocument fromLoop = parseProblem(readData(base + ".loop"));
    ProblemDocument fromJson = parseProblem(readData(base + ".json"));
    CHECK(fromLoop.toProblem().maps == fromJson.toProblem().maps);
    RunResult a = runAnalyze(fromLoop), b = runAnalyze(fromJson);
    CHECK(dumpReport(a.report) == dumpReport(b.report));
    RunResult ta = runTile(fromLoop, 16), tb = runTile(fromJson, 16);
    CHECK(dumpReport(ta.report) == dumpReport(tb.report));
  }
}

TEST_CASE("reports are byte-stable across runs") {
  ProblemDocument doc = parseProblem(readData("multiple_tilings.loop"));
  const std::string first = dumpReport(runVerify(doc, {}).report);
  for (int i = 0; i < 3; ++i) CHECK(dumpReport(runVerify(doc, {}).report) == first);
  CHECK(first.back() == '\n');
}

TEST_CASE("rational and integer JSON") {
  nlohmann::json r = rationalJson(Rational(3, 2));
  CHECK(r["exact"] == "3/2");
  CHECK(r["decimal"] == "1.5");
  CHECK(rationalJson(Rational(2))["exact"] == "2");
  CHECK(integerJson(Integer(-7)) == -7);
  Integer huge("99999999999999999999999");
  CHECK(integerJson(huge) == "99999999999999999999999");
  CHECK(integerFromJson(integerJson(huge)) == huge);
  CHECK(integerFromJson(nlohmann::json(-4)) == -4);
}

TEST_CASE("analysis report contents") {
  RunResult r = runAnalyze(parseProblem(readData("multiple_tilings.loop")));
  CHECK((r.code == ExitCode::Ok));
  const auto& j = r.report;
  CHECK(j["s_hbl"]["exact"] == "3/2");
  CHECK(j["primal"]["status"] == "optimal");
  CHECK(j["tile"]["path"] == "asymptotic");
  CHECK(j["tile"]["scalings"] == nlohmann::json({"1/2", "1/2", "1/4", "1/4"}));
  CHECK(j["dual"]["value"]["exact"] == "3/2");
  CHECK(j["constraints"]["completeness"] == "complete");
  CHECK(j["translations"].is_null());
  CHECK(j["verification"].is_null());
}

TEST_CASE("exit codes from the pipeline") {
  CHECK((runAnalyze(parseProblem(readData("unbounded_reuse.json"))).code == ExitCode::Infeasible));
  RunResult inf = runAnalyze(parseProblem(readData("unbounded_reuse.json")));
  CHECK(inf.report["primal"]["status"] == "infeasible");
  CHECK_FALSE(inf.report["primal"]["reuse_witness"].is_null());

  ProblemDocument four = parseProblem(
      "loop (x, y, z) { A[y, z]; B[x, z]; C[x, y]; D[x - y, y - z]; }");
  RunOptions strict;
  strict.maxClosureSize = 5;
  strict.strict = true;
  RunResult partial = runAnalyze(four, strict);
  REQUIRE(partial.report["constraints"]["completeness"] == "partial");
  CHECK(partial.report["constraints"]["cap"] == 5);
  CHECK((partial.code == ExitCode::PartialStrict));
  strict.strict = false;
  CHECK((runAnalyze(four, strict).code == ExitCode::Ok));

  RunOptions tight;
  tight.budget = 10;
  CHECK((runTile(parseProblem(readData("multiple_tilings.loop")), 10000, tight).code == ExitCode::Ok));
  tight.emitPoints = true;
  CHECK((runTile(parseProblem(readData("multiple_tilings.loop")), 10000, tight).code ==
         ExitCode::BudgetExceeded));
  tight.emitPoints = false;
  // Budget big enough for one tile but not for the cover window.
  RunResult cut = runVerify(parseProblem(readData("matmul.loop")), {}, tight);
  CHECK((cut.code == ExitCode::BudgetExceeded));
  CHECK(cut.report["verification"]["passed"] == true);
  CHECK(cut.report["verification"]["cover"].is_null());
  tight.budget = 1;
  CHECK((runVerify(parseProblem(readData("matmul.loop")), {}, tight).code == ExitCode::BudgetExceeded));
}

TEST_CASE("tiling reports read back and verify") {
  ProblemDocument doc = parseProblem(readData("rank_one.loop"));
  RunResult tiled = runTile(doc, 6);
  REQUIRE((tiled.code == ExitCode::Ok));
  TilingResult t = tilingFromReport(tiled.report, 2);
  CHECK(t.spec.pointCount() == 9);
  CHECK(t.t3Reps.size() == 5);
  CHECK((runVerifyTiling(doc, tiled.report).code == ExitCode::Ok));

  nlohmann::json broken = tiled.report;
  broken["translations"]["t3"].erase(broken["translations"]["t3"].begin());
  RunResult bad = runVerifyTiling(doc, broken);
  CHECK((bad.code == ExitCode::VerificationFailed));
  CHECK(bad.report["verification"]["passed"] == false);

  nlohmann::json garbage = tiled.report;
  garbage["tile"].erase("groups");
  CHECK_THROWS_AS(tilingFromReport(garbage, 2), std::invalid_argument);
}

TEST_CASE("text rendering mentions the essentials") {
  RunResult r = runTile(parseProblem(readData("rank_one.loop")), 6);
  std::string text = renderText(r.report);
  CHECK(text.find("s_HBL = 2") != std::string::npos);
  CHECK(text.find("exact-rank-one") != std::string::npos);
  CHECK(text.find("9 points") != std::string::npos);
}
