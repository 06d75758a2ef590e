#include "doctest.h"

#include "fixtures.hpp"
#include "oracles.hpp"

#include "hbl/tiler.hpp"

#include <set>

using namespace hbl;
using namespace hbl::testing;

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

IntVector vec(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

IntVector negated(IntVector v) {
  for (auto& x : v) x = -x;
  return v;
}

bool sameUpToSign(const IntVector& a, const IntVector& b) { return a == b || a == negated(b); }

TilingPreconditionError::Kind kindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const TilingPreconditionError& e) {
    return e.kind();
  }
  FAIL("no precondition error");
  return TilingPreconditionError::Kind::InvalidSpec;
}

// Random spec with jointly independent small elements and non-increasing scalings.
TileSpec randomSpec(Rng& rng, std::size_t dim, long memoryCap) {
  TileSpec spec;
  spec.dim = dim;
  spec.memory = uniform(rng, 1, memoryCap);
  const std::size_t m = uniform(rng, 1, dim);
  IntMatrix e;
  do e = randomMatrix(rng, dim, m, -2, 2);
  while (rationalRank(e) != m);
  std::vector<Rational> scalings;
  for (std::size_t g = 0, j = 0; j < m; ++g) {
    std::size_t size = uniform(rng, 1, m - j);
    TileGroup group;
    for (std::size_t k = 0; k < size; ++k, ++j) group.elements.push_back(e.column(j));
    const long den = uniform(rng, 1, 4);
    group.scaling = q(uniform(rng, 1, den), den);
    spec.groups.push_back(group);
  }
  std::sort(spec.groups.begin(), spec.groups.end(),
            [](const TileGroup& a, const TileGroup& b) { return a.scaling > b.scaling; });
  return spec;
}

std::set<IntVector> asSet(const std::vector<Point>& pts) {
  std::set<IntVector> out;
  for (const auto& p : pts) {
    IntVector v;
    for (auto x : p) v.emplace_back(static_cast<long>(x));
    out.insert(v);
  }
  return out;
}

}  // namespace

TEST_CASE("floorPow matches a naive search") {
  for (long m = 1; m <= 300; ++m) {
    for (const Rational& s : {q(1), q(1, 2), q(1, 3), q(1, 4), q(2, 3), q(3, 2), q(3, 4)}) {
      // Largest x with x^den <= m^num.
      const unsigned long num = s.get_num().get_ui(), den = s.get_den().get_ui();
      Integer target;
      mpz_ui_pow_ui(target.get_mpz_t(), m, num);
      Integer x = 0;
      for (;;) {
        Integer next = x + 1, pw;
        mpz_pow_ui(pw.get_mpz_t(), next.get_mpz_t(), den);
        if (pw > target) break;
        x = next;
      }
      CHECK(floorPow(Integer(m), s) == x);
    }
  }
}

TEST_CASE("spec validation") {
  using Kind = TilingPreconditionError::Kind;
  TileSpec spec;
  spec.dim = 2;
  spec.memory = 16;
  spec.groups = {{{vec({1, 0})}, q(1, 2)}, {{vec({0, 1})}, q(1, 4)}};
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.elementCount() == 2);
  CHECK(spec.sides() == std::vector<Integer>{4, 2});
  CHECK(spec.pointCount() == 8);

  TileSpec bad = spec;
  bad.groups[1].elements = {vec({2, 0})};
  CHECK((kindOf([&] { bad.validate(); }) == Kind::DependentElements));
  bad = spec;
  std::swap(bad.groups[0], bad.groups[1]);
  CHECK((kindOf([&] { bad.validate(); }) == Kind::InvalidSpec));
  bad = spec;
  bad.memory = 0;
  CHECK((kindOf([&] { bad.validate(); }) == Kind::InvalidSpec));
  bad = spec;
  bad.groups[1].scaling = 0;
  CHECK((kindOf([&] { bad.validate(); }) == Kind::InvalidSpec));
  bad = spec;
  bad.groups[0].elements = {vec({1, 0, 0})};
  CHECK((kindOf([&] { bad.validate(); }) == Kind::InvalidSpec));
}

TEST_CASE("enumeration matches nested loops on random specs") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    TileSpec spec = randomSpec(rng, uniform(rng, 1, 4), 12);
    auto brute = bruteTile(spec);
    auto pts = enumerateTile(spec);
    CHECK(pts.size() == brute.size());  // independence: no repeated points
    CHECK(asSet(pts) == brute);
    CHECK(spec.pointCount() == Integer(static_cast<unsigned long>(brute.size())));
  }
}

TEST_CASE("enumeration respects the budget") {
  TileSpec spec;
  spec.dim = 2;
  spec.memory = 100;
  spec.groups = {{{vec({1, 0}), vec({0, 1})}, q(1)}};
  CHECK_THROWS_AS(enumerateTile(spec, 9999), BudgetExceeded);
  CHECK(enumerateTile(spec, 10000).size() == 10000);
}

TEST_CASE("translation sets tile Z^d on random specs") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = uniform(rng, 1, 3);
    TileSpec spec = randomSpec(rng, dim, 9);
    TilingResult t = buildTiling(spec);
    CHECK(t.t1Generators.size() == spec.elementCount());
    CHECK(t.t1Generators.size() + t.t2Generators.size() == dim);
    Integer reps = 1;
    for (const auto& v : t.snfDiagonal) reps *= abs(v);
    CHECK(reps == Integer(static_cast<unsigned long>(t.t3Reps.size())));
    const long radius = dim == 3 ? 2 : 3;
    auto mult = bruteCoverMultiplicity(t, radius);
    REQUIRE(!mult.empty());
    bool exact = std::all_of(mult.begin(), mult.end(), [](long m) { return m == 1; });
    CHECK_MESSAGE(exact, "trial " << trial);
  }
}

TEST_CASE("rank-one elements of the two-map example") {
  HblProblem p = rankOneExample();
  auto e = rankOneElements(p);
  REQUIRE(e.size() == 2);
  // e1 spans ker(phi2) = <(2, 1)>, e2 spans ker(phi1) = <(1, 3)>.
  CHECK(sameUpToSign(e[0], vec({2, 1})));
  CHECK(sameUpToSign(e[1], vec({1, 3})));

  TilingResult t = rankOneTiling(p, 6);
  CHECK(t.spec.memory == 3);
  auto pts = bruteTile(t.spec);
  CHECK(pts.size() == 9);
  std::set<IntVector> expected;
  for (long a = 0; a < 3; ++a)
    for (long b = 0; b < 3; ++b) expected.insert(vec({2 * a + b, a + 3 * b}));
  CHECK(pts == expected);
  CHECK(t.t3Reps.size() == 5);
  CHECK(bruteImageCount(pts, p.maps[0]) == 3);
  CHECK(bruteImageCount(pts, p.maps[1]) == 3);
}

TEST_CASE("rank-one preconditions") {
  using Kind = TilingPreconditionError::Kind;
  CHECK((kindOf([] { rankOneElements(matmul()); }) == Kind::NotRankOne));
  CHECK((kindOf([] { rankOneElements(makeProblem(2, {rowsOf({{1, 1}})})); }) == Kind::FewerMapsThanDim));
  CHECK((kindOf([] { rankOneElements(makeProblem(2, {rowsOf({{1, 1}}), rowsOf({{2, 2}})})); }) ==
         Kind::KernelsIntersect));
  HblProblem three = makeProblem(2, {rowsOf({{1, 0}}), rowsOf({{0, 1}}), rowsOf({{1, 1}})});
  CHECK((kindOf([&] { rankOneElements(three); }) == Kind::FewerMapsThanDim));
  // More maps than dimensions still tile, with a unit cube and memory split n ways.
  TilingResult t = rankOneTiling(three, 30);
  CHECK(t.spec.memory == 10);
  CHECK(t.spec.pointCount() == 100);
}

TEST_CASE("rank d-1 tiling of matrix multiplication") {
  HblProblem p = matmul();
  auto e = rankDMinusOneElements(p);
  REQUIRE(e.size() == 3);
  CHECK(rationalRank(IntMatrix::fromColumns(e, 3)) == 3);
  for (Integer m : {Integer(12), Integer(48), Integer(300)}) {
    TilingResult t = rankDMinusOneTiling(p, m);
    CHECK(t.spec.groups.front().scaling == q(1, 2));
    auto pts = bruteTile(t.spec);
    std::size_t total = 0;
    for (const auto& phi : p.maps) total += bruteImageCount(pts, phi);
    CHECK(Integer(static_cast<unsigned long>(total)) <= m);
  }
  using Kind = TilingPreconditionError::Kind;
  CHECK((kindOf([] { rankDMinusOneElements(makeProblem(2, {rowsOf({{1, 1}}), rowsOf({{2, 2}})})); }) ==
         Kind::KernelsDependent));
  CHECK((kindOf([] { rankDMinusOneElements(makeProblem(2, {rowsOf({{1, 1}})})); }) ==
         Kind::KernelsDependent));
  CHECK((kindOf([] { rankDMinusOneElements(multipleTilingsExample()); }) == Kind::NotRankDMinusOne));
}

TEST_CASE("rank d-1 maps with fewer kernels than dimensions leave free directions") {
  // Kernels e1 and e2 in Z^3: the tile is two-dimensional and T2 supplies e3.
  HblProblem p = makeProblem(3, {rowsOf({{0, 1, 0}, {0, 0, 1}}), rowsOf({{1, 0, 0}, {0, 0, 1}})});
  TilingResult t = rankDMinusOneTiling(p, 20);
  CHECK(t.t2Generators.size() == 1);
  auto mult = bruteCoverMultiplicity(t, 3);
  CHECK(std::all_of(mult.begin(), mult.end(), [](long m) { return m == 1; }));
}

TEST_CASE("analysis picks the right path") {
  CHECK((analyzeProblem(rankOneExample()).path == TilingPath::ExactRankOne));
  CHECK((analyzeProblem(matmul()).path == TilingPath::ExactRankDMinusOne));
  Analysis a2 = analyzeProblem(multipleTilingsExample());
  CHECK((a2.path == TilingPath::Asymptotic));
  CHECK(a2.sHbl() == q(3, 2));
  REQUIRE(a2.groups.size() == 2);
  CHECK(a2.groups[0].scaling == q(1, 2));
  CHECK(a2.groups[1].scaling == q(1, 4));
  CHECK(a2.flag.isStrict());
  CHECK(a2.flag.chain.back() == Subgroup::full(4));
  Analysis a3 = analyzeProblem(flagsExample());
  CHECK((a3.path == TilingPath::Asymptotic));
  CHECK(a3.sHbl() == 2);
  CHECK(evalDual(a3.flagDual, a3.problem).feasible());
  CHECK_THROWS_AS(analyzeProblem(unboundedReuse()), InfeasiblePrimal);
}

TEST_CASE("asymptotic tile sizes scale like M^s_HBL") {
  Analysis a = analyzeProblem(multipleTilingsExample());
  for (long m : {16, 81, 256}) {
    TileSpec spec = tileSpecAt(a, m);
    auto pts = bruteTile(spec);
    double expected = std::pow(double(m) / double(a.memoryDivisor.get_si()), 1.5);
    CHECK(double(pts.size()) == doctest::Approx(expected));
    // Images are O(M) on this path, not bounded by M itself.
    for (const auto& phi : a.problem.maps) CHECK(bruteImageCount(pts, phi) <= std::size_t(2 * m));
  }
}

TEST_CASE("tileSpecAt divides the memory and clamps at one") {
  Analysis a = analyzeProblem(rankOneExample());
  CHECK(a.memoryDivisor == 2);
  CHECK(tileSpecAt(a, 7).memory == 3);
  CHECK(tileSpecAt(a, 1).memory == 1);
  CHECK_THROWS_AS(tileSpecAt(a, 0), std::invalid_argument);
}

TEST_CASE("planTiling returns a tiling of the analysed tile") {
  Plan plan = planTiling(multipleTilingsExample(), 16);
  CHECK(plan.tiling.spec.pointCount() == 64);
  auto mult = bruteCoverMultiplicity(plan.tiling, 1);
  CHECK(std::all_of(mult.begin(), mult.end(), [](long m) { return m == 1; }));
}
