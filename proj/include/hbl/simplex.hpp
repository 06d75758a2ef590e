#pragma once

#include "hbl/integer.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace hbl {

using RationalMatrix = std::vector<std::vector<Rational>>;

enum class Sense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string_view toString(LpStatus s);

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> x;
  Rational objective;
  std::size_t pivots = 0;
};

/// Exact two-phase tableau simplex with Bland's rule.
///   Minimize: min c.x  s.t. A x >= b, x >= 0
///   Maximize: max c.x  s.t. A x <= b, x >= 0
/// Infeasible and Unbounded are statuses, not errors.
LpResult simplexSolve(const std::vector<Rational>& c, const RationalMatrix& a,
                      const std::vector<Rational>& b, Sense sense);

}  // namespace hbl
