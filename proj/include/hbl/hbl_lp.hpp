#pragma once

#include "hbl/constraints.hpp"
#include "hbl/intlinalg.hpp"
#include "hbl/problem.hpp"
#include "hbl/simplex.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hbl {

/// Raised when the primal LP has no feasible point: some nonzero subgroup is collapsed
/// by every map, so unboundedly many iterations reuse the same data.
class InfeasiblePrimal : public std::runtime_error {
 public:
  InfeasiblePrimal(const std::string& what, Subgroup witness)
      : std::runtime_error(what), witness_(std::move(witness)) {}
  const Subgroup& witness() const { return witness_; }

 private:
  Subgroup witness_;
};

struct PrimalSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> s;  // one per map
  Rational objective;       // s_HBL over the given constraints
  /// Intersection of all kernels when it is nontrivial (infinite-reuse diagnosis).
  std::optional<Subgroup> reuseWitness;

  bool optimal() const { return status == LpStatus::Optimal; }
};

/// Finitely supported nonnegative weights on subgroups. Zero entries are never stored.
class DualVector {
 public:
  using Map = std::map<Subgroup, Rational>;

  void set(const Subgroup& h, const Rational& value);
  void add(const Subgroup& h, const Rational& delta);
  Rational get(const Subgroup& h) const;

  bool empty() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }
  Map::const_iterator begin() const { return values_.begin(); }
  Map::const_iterator end() const { return values_.end(); }
  std::vector<Subgroup> support() const;
  Rational total() const;

  friend bool operator==(const DualVector&, const DualVector&) = default;

 private:
  Map values_;
};

struct DualEvaluation {
  Rational value;              // sum_H y_H rank(H)
  std::vector<Rational> load;  // C_i = sum_H y_H rank(phi_i(H))

  bool feasible() const;
};

PrimalSolution solvePrimal(const HblProblem& p, const ConstraintSet& e);

/// Optimal dual supported on members of E, solved as its own LP. Throws InfeasiblePrimal
/// when the dual is unbounded (primal infeasible).
DualVector solveDual(const HblProblem& p, const ConstraintSet& e);

/// Optimal dual that puts weight on Z^d when some optimal dual does, so the tile is full
/// dimensional. Among those, weight per rank is reverse-lexicographically largest (most on
/// Z^d, then on rank d-1, ...), solved as successive LPs. Otherwise returns solveDual.
DualVector solveDualPreferringFullRank(const HblProblem& p, const ConstraintSet& e,
                                const Rational& sHbl);

DualEvaluation evalDual(const DualVector& y, const HblProblem& p);

/// Memory split c_i = s_i / sum s. Throws std::invalid_argument for an all-zero or negative s.
std::vector<Rational> optimalSplit(const std::vector<Rational>& s);

/// Enclosure for gamma = min over the optimal face of prod s_i^{s_i}, divided by s_HBL^{s_HBL}.
struct GammaEstimate {
  double gamma = 0;
  double logGamma = 0;
  double logLower = 0;  // certified bracket on log(gamma), up to float rounding
  double logUpper = 0;
  bool singletonFace = false;
  std::vector<double> minimizer;  // s attaining the minimum
  std::vector<double> split;      // c_i = s_i / s_HBL at the minimizer
  std::size_t newtonSteps = 0;

  double lower() const;
  double upper() const;
};

inline constexpr double kDefaultGammaTolerance = 1e-9;

/// Minimizes sum s_i ln s_i over {s primal feasible, 1.s = sHbl} with a log-barrier
/// Newton method after exact detection of the face's affine hull.
GammaEstimate computeGamma(const HblProblem& p, const ConstraintSet& e, const Rational& sHbl,
                           double tolerance = kDefaultGammaTolerance);

/// rank(H) and rank(phi_i(H)) for every H in E.
struct RankTable {
  std::vector<std::size_t> rank;
  std::vector<std::vector<std::size_t>> image;  // image[h][i]

  static RankTable build(const HblProblem& p, const std::vector<Subgroup>& subgroups);
};

}  // namespace hbl
