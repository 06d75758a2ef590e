#pragma once

#include "hbl/intlinalg.hpp"
#include "hbl/problem.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace hbl {

enum class Completeness { Complete, Partial };
enum class ConstraintMethod { CoordinateProjections, FewMaps, KernelClosure, FullSpaceOnly };

std::string_view toString(Completeness c);
std::string_view toString(ConstraintMethod m);

inline constexpr std::size_t kDefaultMaxClosureSize = 256;

/// Subgroups H whose rank constraints sum_i s_i rank(phi_i(H)) >= rank(H) form the primal LP.
/// Sorted canonically, no duplicates, never contains {0}, always contains Z^d.
struct ConstraintSet {
  std::vector<Subgroup> subgroups;
  Completeness completeness = Completeness::Complete;
  ConstraintMethod method = ConstraintMethod::FullSpaceOnly;
  /// Cap in force when completeness is Partial.
  std::size_t cap = 0;

  bool contains(const Subgroup& h) const;
};

/// True iff every row of phi is a standard basis vector and the rows are distinct.
bool isCoordinateProjection(const IntMatrix& phi);

/// Builds the constraint list:
///  - all maps coordinate projections: every nonzero coordinate subgroup;
///  - at most three maps: the full sum/intersection closure of the kernels;
///  - otherwise the closure truncated at maxClosureSize (Partial if truncated).
/// Throws std::invalid_argument if maxClosureSize < mapCount + 1.
ConstraintSet generateConstraints(const HblProblem& p,
                                  std::size_t maxClosureSize = kDefaultMaxClosureSize);

/// One round of pairwise sums and intersections of `subgroups`, excluding {0}.
std::vector<Subgroup> closureStep(const std::vector<Subgroup>& subgroups);

}  // namespace hbl
