#pragma once

#include "hbl/hbl_lp.hpp"

#include <functional>
#include <vector>

namespace hbl {

/// Strictly nested chain U_1 ⊂ ... ⊂ U_t. Need not end at Z^d.
struct Flag {
  std::vector<Subgroup> chain;

  /// True iff every step is a strict containment.
  bool isStrict() const;
  std::size_t length() const { return chain.size(); }
};

/// w_i = total dual weight on support members of rank i + 1 (index 0 is rank 1).
struct ExtremenessVector {
  std::vector<Rational> w;

  /// Compares from the highest rank downward.
  friend bool reverseLexLess(const ExtremenessVector& a, const ExtremenessVector& b);
};

ExtremenessVector extremeness(const DualVector& y, std::size_t dim);

/// True iff the support is totally ordered by inclusion.
bool isSupportedOnFlag(const DualVector& y);

/// Flag formed by sorting a totally ordered support by rank; throws if it is not a chain.
Flag flagOf(const DualVector& y);

struct FlagifyResult {
  DualVector y;
  Flag flag;
  std::size_t iterations = 0;
};

/// Moves a feasible dual onto a flag, preserving its value and feasibility.
/// Each step takes the first incomparable pair (V, W) in canonical order with y_V <= y_W
/// (ties: V is the canonically smaller) and shifts y_V from V, W onto V+W and V∩W.
/// `onStep` sees the vector after every iteration. Throws std::invalid_argument on an
/// infeasible input unless `requireFeasible` is false; the loads never increase either way.
FlagifyResult flagifyDual(const DualVector& y, const HblProblem& p,
                          const std::function<void(const DualVector&)>& onStep = {},
                          bool requireFeasible = true);

}  // namespace hbl
