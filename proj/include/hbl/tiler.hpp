#pragma once

#include "hbl/flagify.hpp"
#include "hbl/hbl_lp.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hbl {

using Point = std::vector<std::int64_t>;

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TilingPreconditionError : public std::runtime_error {
 public:
  enum class Kind {
    NotRankOne,
    KernelsIntersect,
    FewerMapsThanDim,
    NotRankDMinusOne,
    KernelsDependent,
    DependentElements,
    InvalidSpec,
  };
  TilingPreconditionError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Independent elements e_1..e_h of one group, each stepped 0..floor(M^scaling)-1.
struct TileGroup {
  std::vector<IntVector> elements;
  Rational scaling;
};

/// A product parallelepiped: the Minkowski sum of the per-group boxes.
struct TileSpec {
  std::size_t dim = 0;
  std::vector<TileGroup> groups;
  Integer memory = 1;

  /// Jointly independent elements, positive non-increasing scalings, memory >= 1.
  void validate() const;
  std::size_t elementCount() const;
  /// d x m matrix of all elements, group by group.
  IntMatrix elementMatrix() const;
  /// floor(memory^scaling) for every element, in elementMatrix() order.
  std::vector<Integer> sides() const;
  std::vector<Rational> elementScalings() const;
  Integer pointCount() const;
};

/// Tile plus the translation set T = T1 + T2 + T3 that tiles Z^d.
struct TilingResult {
  TileSpec spec;
  std::vector<IntVector> t1Generators;  // side_j * e_j
  std::vector<IntVector> t2Generators;  // free directions complementing span(E)
  std::vector<IntVector> t3Reps;        // coset representatives of the torsion part
  IntVector snfDiagonal;                // nonzero invariant factors of E
};

/// Y_i complements of consecutive flag members with tail-sum scalings.
struct FlagDecomposition {
  Flag flag;
  std::vector<Subgroup> ys;
  std::vector<std::vector<IntVector>> elements;  // integer basis chosen for each Y_i
  std::vector<Rational> scalings;                // y'_i = y_{U_i} + ... + y_{U_t}
};

FlagDecomposition flagDecompose(const DualVector& yFlag, const Flag& flag);

TilingResult buildTiling(const TileSpec& spec);

/// Visits every tile point exactly once. Throws BudgetExceeded if |S| > budget.
void forEachTilePoint(const TileSpec& spec, const std::function<void(const Point&)>& visit,
                      std::uint64_t budget = kDefaultEnumerationBudget);
std::vector<Point> enumerateTile(const TileSpec& spec,
                                 std::uint64_t budget = kDefaultEnumerationBudget);

/// Primitive generators e_i of the intersection of all other kernels (rank-one maps).
std::vector<IntVector> rankOneElements(const HblProblem& p);
TilingResult rankOneTiling(const HblProblem& p, const Integer& memory);

/// Primitive kernel generators of rank d-1 maps with independent kernels.
std::vector<IntVector> rankDMinusOneElements(const HblProblem& p);
TilingResult rankDMinusOneTiling(const HblProblem& p, const Integer& memory);

enum class TilingPath { ExactRankOne, ExactRankDMinusOne, Asymptotic };
std::string_view toString(TilingPath path);

struct PlanOptions {
  std::size_t maxClosureSize = kDefaultMaxClosureSize;
  double gammaTolerance = kDefaultGammaTolerance;
};

/// Everything about a problem that does not depend on M.
struct Analysis {
  HblProblem problem;
  ConstraintSet constraints;
  PrimalSolution primal;
  DualVector dual;      // optimal dual as solved (or closed form on exact paths)
  DualVector flagDual;  // dual after moving onto a flag
  Flag flag;
  std::optional<FlagDecomposition> decomposition;
  TilingPath path = TilingPath::Asymptotic;
  std::vector<TileGroup> groups;
  Integer memoryDivisor = 1;  // tile built at floor(M / divisor)
  std::optional<GammaEstimate> gamma;
  std::vector<Rational> split;  // c_i on exact paths
  std::vector<std::string> warnings;

  const Rational& sHbl() const { return primal.objective; }
};

/// Throws InfeasiblePrimal when the data reuse is unbounded.
Analysis analyzeProblem(const HblProblem& p, const PlanOptions& options = {});
TileSpec tileSpecAt(const Analysis& a, const Integer& memory);

struct Plan {
  Analysis analysis;
  TilingResult tiling;
};

Plan planTiling(const HblProblem& p, const Integer& memory, const PlanOptions& options = {});

}  // namespace hbl
