#pragma once

#include "hbl/intlinalg.hpp"
#include "hbl/problem.hpp"

#include <initializer_list>
#include <vector>

namespace hbl::testing {

inline IntMatrix rowsOf(std::initializer_list<std::initializer_list<long>> rows) {
  return IntMatrix(rows);
}

inline HblProblem makeProblem(std::size_t dim, std::vector<IntMatrix> maps) {
  HblProblem p;
  p.dim = dim;
  p.maps = std::move(maps);
  for (std::size_t i = 0; i < p.maps.size(); ++i) p.names.push_back("A" + std::to_string(i + 1));
  return p;
}

// Map determined by its kernel, given as generator rows.
inline IntMatrix mapFromKernelRows(std::initializer_list<std::initializer_list<long>> rows) {
  return mapWithKernel(Subgroup::span(IntMatrix(rows).transpose()));
}

// phi1 = 3x - y, phi2 = x - 2y.
inline HblProblem rankOneExample() {
  return makeProblem(2, {rowsOf({{3, -1}}), rowsOf({{1, -2}})});
}

// A1[e1,e3], A2[e2,e4], A3[e1,e2,e3+e4], A4[e1+e2,e3,e4].
inline HblProblem multipleTilingsExample() {
  return makeProblem(4, {
      rowsOf({{1, 0, 0, 0}, {0, 0, 1, 0}}),
      rowsOf({{0, 1, 0, 0}, {0, 0, 0, 1}}),
      rowsOf({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 1}}),
      rowsOf({{1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
  });
}

// Three maps on Z^8 given by their kernels.
inline HblProblem flagsExample() {
  return makeProblem(8, {
      mapFromKernelRows({{1, 0, 0, 0, 0, 0, 0, 0},
                         {0, 1, 0, 0, 0, 0, 0, 0},
                         {0, 0, 1, 0, 0, 0, 0, 0}}),
      mapFromKernelRows({{0, 1, 0, 0, 0, 0, 0, 1},
                         {0, 0, 1, 0, 1, 1, 0, 1},
                         {0, 0, 0, 0, 0, 1, 0, 1},
                         {1, 1, 0, 0, 0, 0, 1, 0}}),
      mapFromKernelRows({{1, 0, 1, 0, 0, 0, 0, 0},
                         {0, 1, 1, 1, 0, 0, 0, 0},
                         {0, 0, 0, 0, 0, 1, 0, 0},
                         {0, 0, 0, 0, 0, 0, 1, 1}}),
  });
}

// C[i,j] += A[i,k] * B[k,j].
inline HblProblem matmul() {
  return makeProblem(3, {
      rowsOf({{1, 0, 0}, {0, 1, 0}}),
      rowsOf({{1, 0, 0}, {0, 0, 1}}),
      rowsOf({{0, 0, 1}, {0, 1, 0}}),
  });
}

// phi(x, y) = x: the tile along e2 reuses one datum forever.
inline HblProblem unboundedReuse() { return makeProblem(2, {rowsOf({{1, 0}})}); }

}  // namespace hbl::testing
