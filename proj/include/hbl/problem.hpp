#pragma once

#include "hbl/int_matrix.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace hbl {

/// Array-access maps phi_i : Z^d -> Z^{d_i} of a loop nest, one matrix per array,
/// rows = output coordinates.
struct HblProblem {
  std::size_t dim = 0;
  std::vector<IntMatrix> maps;
  std::vector<std::string> names;

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
  std::size_t mapCount() const { return maps.size(); }
  std::string nameOf(std::size_t i) const;
};

}  // namespace hbl
