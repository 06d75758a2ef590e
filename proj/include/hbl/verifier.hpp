#pragma once

// Brute-force checks on enumerated point sets. Nothing here looks inside the tiler:
// inputs are tile specs (to enumerate), translation sets, and the problem's maps.

#include "hbl/problem.hpp"
#include "hbl/tiler.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace hbl {

/// |phi_i(S)| for every map, by dedup of the mapped points.
std::vector<std::uint64_t> countImages(const TileSpec& spec, const HblProblem& p,
                                       std::uint64_t budget = kDefaultEnumerationBudget);

struct CoverCheck {
  bool exact = false;            // every window point covered exactly once
  std::uint64_t windowPoints = 0;
  std::uint64_t uncovered = 0;
  std::uint64_t overcovered = 0;
  std::uint64_t translatesTried = 0;
};

/// Every point of [-R, R]^d must be covered by exactly one translate tau + S with
/// tau in T1 + T2 + T3. Translates are searched exhaustively in the box of radius
/// R + diam(S) + 1 around the origin.
CoverCheck checkCover(const TilingResult& t, std::int64_t radius,
                      std::uint64_t budget = kDefaultEnumerationBudget);

struct ExponentFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // root-mean-square residual in log space
};

/// Least-squares fit of log(count) against log(M). Throws std::invalid_argument with < 3 samples.
ExponentFit fitExponent(const std::vector<std::pair<double, double>>& samples);

struct OptimalitySample {
  Integer memory;
  std::uint64_t tilePoints = 0;
  std::vector<std::uint64_t> images;
  std::uint64_t memorySum = 0;
  bool memoryOk = false;  // sum_i |phi_i(S)| <= M, exact
  double ratio = 0;       // |S| / (gamma M^{s_HBL})
};

/// Sweeps M, rebuilding the tile with `tileAt`, and records the exact-optimality quantities.
std::vector<OptimalitySample> checkExactOptimality(
    const std::function<TileSpec(const Integer&)>& tileAt, const HblProblem& p, double gamma,
    const Rational& sHbl, const std::vector<Integer>& memories,
    std::uint64_t budget = kDefaultEnumerationBudget);

/// |S| <= prod_i |phi_i(S)|^{s_i}, compared exactly after clearing denominators.
bool checkHblBound(const TileSpec& spec, const HblProblem& p, const std::vector<Rational>& s,
                   std::uint64_t budget = kDefaultEnumerationBudget);

/// Same comparison on precomputed counts.
bool hblBoundHolds(std::uint64_t tilePoints, const std::vector<std::uint64_t>& images,
                   const std::vector<Rational>& s);

struct VerificationReport {
  struct Sample {
    Integer memory;
    std::uint64_t tilePoints = 0;
    std::vector<std::uint64_t> images;
    bool hblBoundOk = false;
    std::optional<bool> memoryOk;  // exact paths only
    std::optional<double> ratio;   // exact paths only
  };
  std::vector<Sample> samples;
  std::optional<CoverCheck> cover;
  std::optional<std::int64_t> coverRadius;
  std::optional<ExponentFit> sizeFit;
  std::vector<ExponentFit> imageFits;
  std::vector<std::string> notices;
  bool passed = true;
  std::vector<std::string> failures;
};

struct VerifyOptions {
  std::uint64_t budget = kDefaultEnumerationBudget;
  std::optional<std::int64_t> coverRadius;  // default: largest R with (2R+1)^d <= 20000, capped at 12
  double exponentTolerance = 0.1;
  std::size_t minFitSamples = 3;
};

/// Full verification sweep of an analysis over the given memory sizes.
VerificationReport verifyAnalysis(const Analysis& a, const std::vector<Integer>& memories,
                                  const VerifyOptions& options = {});

/// Cover and image checks on an externally supplied tiling.
VerificationReport verifyTiling(const TilingResult& t, const HblProblem& p,
                                const VerifyOptions& options = {});

}  // namespace hbl
