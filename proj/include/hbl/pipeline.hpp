#pragma once

#include "hbl/problem_io.hpp"
#include "hbl/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hbl {

enum class ExitCode : int {
  Ok = 0,
  Internal = 1,
  Usage = 2,
  Infeasible = 3,
  PartialStrict = 4,
  BudgetExceeded = 5,
  VerificationFailed = 6,
};

struct RunOptions {
  std::size_t maxClosureSize = kDefaultMaxClosureSize;
  std::uint64_t budget = kDefaultEnumerationBudget;
  bool strict = false;                 // Partial constraint sets become an error
  std::optional<std::int64_t> window;  // cover-check radius
  bool emitPoints = false;             // list tile points in `tile`
};

struct RunResult {
  nlohmann::json report;
  ExitCode code = ExitCode::Ok;
  std::vector<std::string> diagnostics;  // for the error stream
};

/// Memory sweep used when none is given: M = divisor * n^L with L the lcm of the scaling
/// denominators, so every side length is exact. Prefers n = 2, 4, 8, 16 and falls back to
/// consecutive n when tiles would exceed the budget.
std::vector<Integer> defaultVerifyMemories(const Analysis& a, std::uint64_t budget);

RunResult runAnalyze(const ProblemDocument& doc, const RunOptions& options = {});
RunResult runTile(const ProblemDocument& doc, const Integer& memory, const RunOptions& options = {});
RunResult runVerify(const ProblemDocument& doc, const std::vector<Integer>& memories,
                    const RunOptions& options = {});
/// Checks a tiling read back from a `tile` report instead of building one.
RunResult runVerifyTiling(const ProblemDocument& doc, const nlohmann::json& tiling,
                          const RunOptions& options = {});

}  // namespace hbl
