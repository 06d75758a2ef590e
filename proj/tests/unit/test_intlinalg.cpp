#include "doctest.h"

#include "fixtures.hpp"
#include "oracles.hpp"

#include "hbl/intlinalg.hpp"

using namespace hbl;
using namespace hbl::testing;

namespace {

bool isUnimodular(const IntMatrix& m) {
  Integer det = determinant(m);
  return det == 1 || det == -1;
}

IntMatrix diagonalProduct(const SnfResult& s) { return s.u * s.d * inverseUnimodular(s.v); }

void checkHnfShape(const IntMatrix& h) {
  std::size_t lastPivot = 0;
  for (std::size_t c = 0; c < h.cols(); ++c) {
    std::size_t p = 0;
    while (p < h.rows() && h(p, c) == 0) ++p;
    REQUIRE(p < h.rows());
    CHECK(h(p, c) > 0);
    if (c > 0) CHECK(p > lastPivot);
    for (std::size_t left = 0; left < c; ++left) {
      CHECK(h(p, left) >= 0);
      CHECK(h(p, left) < h(p, c));
    }
    lastPivot = p;
  }
}

}  // namespace

TEST_CASE("hnf of the identity is the identity") {
  CHECK(hnf(IntMatrix::identity(3)) == IntMatrix::identity(3));
}

TEST_CASE("hnf keeps the lattice of (2,1),(1,3)") {
  IntMatrix a = IntMatrix({{2, 1}, {1, 3}});
  IntMatrix h = hnf(a);
  checkHnfShape(h);
  CHECK(determinant(h) * determinant(h) == 25);
  CHECK(latticePointsInBox(a, 6, 40) == latticePointsInBox(h, 6, 40));
}

TEST_CASE("hnf does not saturate a single column") {
  IntMatrix h = hnf(IntMatrix({{4}, {6}}));
  CHECK(h == IntMatrix({{4}, {6}}));
}

TEST_CASE("hnf drops dependent columns and keeps the lattice") {
  IntMatrix a = IntMatrix({{2, 4, 6}, {2, 0, 2}});
  IntMatrix h = hnf(a);
  CHECK(h.cols() == 2);
  checkHnfShape(h);
  CHECK(latticePointsInBox(a, 8, 12) == latticePointsInBox(h, 8, 12));
}

TEST_CASE("hnf on random matrices: echelon shape, same lattice") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    IntMatrix a = randomMatrix(rng, 2, static_cast<std::size_t>(uniform(rng, 1, 3)), -4, 4);
    IntMatrix h = hnf(a);
    CHECK(h.cols() == rationalRank(a));
    if (h.cols() == 0) continue;
    checkHnfShape(h);
    CHECK(latticePointsInBox(a, 5, 10) == latticePointsInBox(h, 5, 30));
  }
}

TEST_CASE("snf of the identity") {
  SnfResult s = snf(IntMatrix::identity(2));
  CHECK(s.d == IntMatrix::identity(2));
  CHECK(diagonalProduct(s) == IntMatrix::identity(2));
}

TEST_CASE("snf of (3 -1) exposes the kernel (1,3)") {
  IntMatrix a = IntMatrix({{3, -1}});
  SnfResult s = snf(a);
  CHECK(s.d == IntMatrix({{1, 0}}));
  CHECK(s.rank() == 1);
  IntVector k = s.v.column(1);
  bool plus = k == IntVector{1, 3};
  bool minus = k == IntVector{-1, -3};
  CHECK((plus || minus));
  CHECK(diagonalProduct(s) == a);
}

TEST_CASE("snf invariants on random rectangular matrices") {
  Rng rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t r = uniform(rng, 1, 4), c = uniform(rng, 1, 4);
    IntMatrix a = randomMatrix(rng, r, c);
    if (trial % 5 == 0) a = a * IntMatrix::fromRows({IntVector(c, Integer(1))}, c).transpose() *
                            IntMatrix::fromRows({IntVector(c, Integer(1))}, c);  // low rank
    SnfResult s = snf(a);
    REQUIRE(isUnimodular(s.u));
    REQUIRE(isUnimodular(s.v));
    CHECK(diagonalProduct(s) == a);
    IntVector diag = s.diagonal();
    CHECK(s.rank() == rationalRank(a));
    for (std::size_t i = 0; i < diag.size(); ++i) {
      if (i < s.rank()) {
        CHECK(diag[i] > 0);
        if (i + 1 < s.rank()) CHECK(diag[i + 1] % diag[i] == 0);
      } else {
        CHECK(diag[i] == 0);
      }
    }
    for (std::size_t i = 0; i < s.d.rows(); ++i)
      for (std::size_t j = 0; j < s.d.cols(); ++j)
        if (i != j) CHECK(s.d(i, j) == 0);
  }
}

TEST_CASE("kernelBasis examples") {
  Subgroup k = kernelBasis(IntMatrix({{1, -2}}));
  CHECK(k.rank() == 1);
  CHECK(k.basis().column(0) == IntVector{2, 1});

  CHECK(kernelBasis(IntMatrix::identity(3)).isTrivial());

  IntMatrix phi3 = multipleTilingsExample().maps[2];
  Subgroup k3 = kernelBasis(phi3);
  REQUIRE(k3.rank() == 1);
  CHECK(phi3.apply(k3.basis().column(0)) == IntVector{0, 0, 0});
  CHECK(k3.basis().column(0) == IntVector{0, 0, 1, -1});
}

TEST_CASE("kernel generators are primitive and saturated") {
  Rng rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    IntMatrix a = randomMatrix(rng, uniform(rng, 1, 3), 4, -5, 5);
    Subgroup k = kernelBasis(a);
    CHECK(k.rank() == 4 - rationalRank(a));
    CHECK((a * k.basis()).isZero());
    // Saturated: the basis has unit elementary divisors.
    if (k.rank() > 0) {
      for (const auto& v : snf(k.basis()).diagonal()) CHECK((v == 0 || v == 1));
    }
  }
}

TEST_CASE("sum and intersect examples") {
  Subgroup e1 = Subgroup::span(IntMatrix({{1}, {0}}));
  Subgroup e2 = Subgroup::span(IntMatrix({{0}, {1}}));
  CHECK(sum(e1, e2) == Subgroup::full(2));
  CHECK(sum(e1, e1) == e1);
  CHECK(intersect(e1, e2).isTrivial());
  CHECK(intersect(e1, e1) == e1);

  Subgroup y1 = Subgroup::span(IntMatrix({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}));
  Subgroup y2 = Subgroup::span(IntMatrix({{1, 0}, {0, 0}, {0, 1}, {0, 0}}));
  CHECK(sum(y1, y2).isFull());
  CHECK(intersect(y1, y2).isTrivial());
}

TEST_CASE("intersection of two rank-4 kernels in Z^8 against a membership scan") {
  HblProblem p = flagsExample();
  Subgroup k2 = Subgroup::kernelOf(p.maps[1]);
  Subgroup k3 = Subgroup::kernelOf(p.maps[2]);
  REQUIRE(k2.rank() == 4);
  REQUIRE(k3.rank() == 4);
  Subgroup meet = intersect(k2, k3);

  // Every combination of k2's generators with coefficients in [-3, 3] that also lies in
  // span(k3) is collected; their span is the intersection.
  std::vector<IntVector> hits;
  const IntMatrix& b = k2.basis();
  std::vector<long> a(4, -3);
  for (;;) {
    IntVector x(8, Integer(0));
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t r = 0; r < 8; ++r) x[r] += a[j] * b(r, j);
    if (inRationalSpan(k3.basis(), x)) {
      hits.push_back(x);
      CHECK(meet.contains(x));
    }
    std::size_t k = 0;
    while (k < 4 && ++a[k] > 3) a[k++] = -3;
    if (k == 4) break;
  }
  CHECK(meet.rank() == rationalRank(IntMatrix::fromColumns(hits, 8)));
}

TEST_CASE("imageRank examples") {
  HblProblem a1 = rankOneExample();
  CHECK(imageRank(a1.maps[0], Subgroup::span(IntMatrix({{1}, {3}}))) == 0);
  CHECK(imageRank(a1.maps[0], Subgroup::span(IntMatrix({{2}, {1}}))) == 1);

  Subgroup h = Subgroup::span(IntMatrix({{1, 0}, {2, 1}, {0, 0}}));
  CHECK(imageRank(IntMatrix::identity(3), h) == 2);

  HblProblem a3 = flagsExample();
  Subgroup y1 = Subgroup::span(
      IntMatrix({{1, 0, 0, 0, 0, 2, 1, 1}, {0, 0, 1, 0, 0, 2, 1, 1}, {0, 1, 0, 0, 0, -1, 0, 0}}).transpose());
  CHECK(y1.rank() == 3);
  CHECK(imageRank(a3.maps[2], y1) == 2);
}

TEST_CASE("canonical form ignores the choice of generators") {
  Rng rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t d = uniform(rng, 2, 5), r = uniform(rng, 1, d);
    IntMatrix g = randomMatrix(rng, d, r, -4, 4);
    IntMatrix rebased = g * randomUnimodular(rng, r);
    // Scaling a generator keeps the rational span.
    for (std::size_t i = 0; i < d; ++i) rebased(i, 0) *= 3;
    CHECK(Subgroup::span(g) == Subgroup::span(rebased));

    IntMatrix h = randomMatrix(rng, d, uniform(rng, 1, d), -4, 4);
    Subgroup v = Subgroup::span(g), w = Subgroup::span(h);
    Subgroup v2 = Subgroup::span(g * randomUnimodular(rng, r));
    CHECK(sum(v, w) == sum(v2, w));
    CHECK(intersect(v, w) == intersect(v2, w));
  }
}

TEST_CASE("rank modularity and the substitution inequality on random subgroups") {
  Rng rng(15);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t d = uniform(rng, 2, 5);
    Subgroup v = Subgroup::span(randomMatrix(rng, d, uniform(rng, 1, d), -3, 3));
    Subgroup w = Subgroup::span(randomMatrix(rng, d, uniform(rng, 1, d), -3, 3));
    Subgroup s = sum(v, w), m = intersect(v, w);
    CHECK(v.rank() + w.rank() == s.rank() + m.rank());
    CHECK(m.isSubsetOf(v));
    CHECK(v.isSubsetOf(s));
    IntMatrix l = randomMatrix(rng, uniform(rng, 1, d), d, -3, 3);
    CHECK(imageRank(l, v) + imageRank(l, w) >= imageRank(l, m) + imageRank(l, s));
  }
}

TEST_CASE("mapWithKernel has exactly the requested kernel") {
  Subgroup k = Subgroup::span(IntMatrix({{1, 0}, {0, 1}, {1, 1}}));
  IntMatrix phi = mapWithKernel(k);
  CHECK(phi.rows() == 1);
  CHECK(Subgroup::kernelOf(phi) == k);
}

TEST_CASE("contains and subset tests") {
  Subgroup h = Subgroup::span(IntMatrix({{2}, {4}}));
  CHECK(h.basis().column(0) == IntVector{1, 2});
  CHECK(h.contains({3, 6}));
  CHECK_FALSE(h.contains({1, 1}));
  CHECK(h.isSubsetOf(Subgroup::full(2)));
  CHECK(Subgroup::trivial(2).isSubsetOf(h));
  CHECK_THROWS_AS(h.contains({1, 2, 3}), std::invalid_argument);
}
