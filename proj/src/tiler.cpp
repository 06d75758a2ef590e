#include "hbl/tiler.hpp"

#include <algorithm>
#include <set>

namespace hbl {

namespace {

using Kind = TilingPreconditionError::Kind;

std::int64_t toInt64(const Integer& v, const char* what) {
  if (!v.fits_slong_p()) throw BudgetExceeded(std::string(what) + " does not fit in 64 bits");
  return v.get_si();
}

IntMatrix stackMaps(const HblProblem& p, std::size_t skip) {
  IntMatrix stacked(0, p.dim);
  for (std::size_t j = 0; j < p.mapCount(); ++j) {
    if (j != skip) stacked = vstack(stacked, p.maps[j]);
  }
  return stacked;
}

}  // namespace

void TileSpec::validate() const {
  if (dim == 0) throw TilingPreconditionError(Kind::InvalidSpec, "tile dimension must be positive");
  if (memory < 1) throw TilingPreconditionError(Kind::InvalidSpec, "memory parameter must be >= 1");
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].scaling <= 0) {
      throw TilingPreconditionError(Kind::InvalidSpec, "group scalings must be positive");
    }
    if (g > 0 && groups[g].scaling > groups[g - 1].scaling) {
      throw TilingPreconditionError(Kind::InvalidSpec, "group scalings must be non-increasing");
    }
    for (const auto& e : groups[g].elements) {
      if (e.size() != dim) throw TilingPreconditionError(Kind::InvalidSpec, "element has wrong dimension");
    }
  }
  if (rank(elementMatrix()) != elementCount()) {
    throw TilingPreconditionError(Kind::DependentElements, "tile elements are not independent");
  }
}

std::size_t TileSpec::elementCount() const {
  std::size_t m = 0;
  for (const auto& g : groups) m += g.elements.size();
  return m;
}

IntMatrix TileSpec::elementMatrix() const {
  std::vector<IntVector> cols;
  for (const auto& g : groups)
    for (const auto& e : g.elements) cols.push_back(e);
  return IntMatrix::fromColumns(cols, dim);
}

std::vector<Integer> TileSpec::sides() const {
  std::vector<Integer> out;
  for (const auto& g : groups) {
    Integer side = floorPow(memory, g.scaling);
    for (std::size_t k = 0; k < g.elements.size(); ++k) out.push_back(side);
  }
  return out;
}

std::vector<Rational> TileSpec::elementScalings() const {
  std::vector<Rational> out;
  for (const auto& g : groups)
    for (std::size_t k = 0; k < g.elements.size(); ++k) out.push_back(g.scaling);
  return out;
}

Integer TileSpec::pointCount() const {
  Integer count = 1;
  for (const auto& s : sides()) count *= s;
  return count;
}

FlagDecomposition flagDecompose(const DualVector& yFlag, const Flag& flag) {
  if (!flag.isStrict()) throw std::invalid_argument("flagDecompose: flag is not strictly nested");
  std::set<Subgroup> chain(flag.chain.begin(), flag.chain.end());
  auto support = yFlag.support();
  if (support.size() != chain.size() ||
      !std::all_of(support.begin(), support.end(), [&](const Subgroup& h) { return chain.count(h); })) {
    throw std::invalid_argument("flagDecompose: dual support differs from the flag");
  }
  FlagDecomposition dec;
  dec.flag = flag;
  if (flag.chain.empty()) return dec;
  const std::size_t d = flag.chain.front().ambientDim();
  IntMatrix accumulated(d, 0);
  for (const auto& u : flag.chain) {
    std::vector<IntVector> chosen;
    for (const auto& col : u.basis().columns()) {
      IntMatrix trial = hstack(accumulated, IntMatrix::fromColumns({col}, d));
      if (rank(trial) > accumulated.cols()) {
        accumulated = std::move(trial);
        chosen.push_back(col);
      }
    }
    dec.ys.push_back(Subgroup::span(IntMatrix::fromColumns(chosen, d)));
    dec.elements.push_back(std::move(chosen));
  }
  Rational tail = 0;
  dec.scalings.assign(flag.chain.size(), Rational(0));
  for (std::size_t i = flag.chain.size(); i-- > 0;) {
    tail += yFlag.get(flag.chain[i]);
    dec.scalings[i] = tail;
  }
  return dec;
}

TilingResult buildTiling(const TileSpec& spec) {
  spec.validate();
  TilingResult out;
  out.spec = spec;
  const std::size_t d = spec.dim;
  const std::size_t m = spec.elementCount();
  IntMatrix e = spec.elementMatrix();
  auto sides = spec.sides();
  for (std::size_t j = 0; j < m; ++j) {
    IntVector g = e.column(j);
    for (auto& v : g) v *= sides[j];
    out.t1Generators.push_back(std::move(g));
  }
  SnfResult f = snf(e);
  for (std::size_t j = m; j < d; ++j) out.t2Generators.push_back(f.u.column(j));

  IntVector diag = f.diagonal();
  diag.resize(m);
  out.snfDiagonal = diag;
  Integer cosets = 1;
  for (const auto& v : diag) cosets *= v;
  if (cosets > kDefaultEnumerationBudget) {
    throw BudgetExceeded("too many torsion coset representatives: " + cosets.get_str());
  }
  IntVector b(m);
  for (;;) {
    IntVector rep(d);
    for (std::size_t j = 0; j < m; ++j) {
      if (b[j] == 0) continue;
      for (std::size_t r = 0; r < d; ++r) rep[r] += f.u(r, j) * b[j];
    }
    out.t3Reps.push_back(std::move(rep));
    std::size_t k = 0;
    while (k < m) {
      if (++b[k] < diag[k]) break;
      b[k] = 0;
      ++k;
    }
    if (k == m) break;
  }
  return out;
}

void forEachTilePoint(const TileSpec& spec, const std::function<void(const Point&)>& visit,
                      std::uint64_t budget) {
  spec.validate();
  Integer count = spec.pointCount();
  if (count > budget) throw BudgetExceeded("tile has " + count.get_str() + " points, budget is " +
                                           std::to_string(budget));
  const std::size_t d = spec.dim;
  IntMatrix e = spec.elementMatrix();
  const std::size_t m = e.cols();
  std::vector<Point> elems(m, Point(d));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t r = 0; r < d; ++r) elems[j][r] = toInt64(e(r, j), "tile element");
  std::vector<std::int64_t> sides;
  for (const auto& s : spec.sides()) sides.push_back(toInt64(s, "tile side"));

  std::vector<std::int64_t> coeff(m, 0);
  Point x(d, 0);
  for (;;) {
    visit(x);
    std::size_t k = 0;
    while (k < m) {
      if (++coeff[k] < sides[k]) {
        for (std::size_t r = 0; r < d; ++r) x[r] += elems[k][r];
        break;
      }
      for (std::size_t r = 0; r < d; ++r) x[r] -= (sides[k] - 1) * elems[k][r];
      coeff[k] = 0;
      ++k;
    }
    if (k == m) return;
  }
}

std::vector<Point> enumerateTile(const TileSpec& spec, std::uint64_t budget) {
  std::vector<Point> points;
  forEachTilePoint(spec, [&](const Point& x) { points.push_back(x); }, budget);
  return points;
}

std::vector<IntVector> rankOneElements(const HblProblem& p) {
  p.validate();
  for (std::size_t i = 0; i < p.mapCount(); ++i) {
    if (rank(p.maps[i]) != 1) {
      throw TilingPreconditionError(Kind::NotRankOne, "map " + p.nameOf(i) + " is not rank one");
    }
  }
  if (p.mapCount() < p.dim) {
    throw TilingPreconditionError(Kind::FewerMapsThanDim,
                                  "fewer rank-one maps than dimensions: kernels must intersect");
  }
  if (!kernelBasis(stackMaps(p, p.mapCount())).isTrivial()) {
    throw TilingPreconditionError(Kind::KernelsIntersect,
                                  "kernels intersect nontrivially: the primal LP is infeasible");
  }
  if (p.mapCount() > p.dim) {
    throw TilingPreconditionError(Kind::FewerMapsThanDim,
                                  "more rank-one maps than dimensions: no exact basis");
  }
  std::vector<IntVector> elements;
  for (std::size_t i = 0; i < p.dim; ++i) {
    Subgroup line = kernelBasis(stackMaps(p, i));
    elements.push_back(line.basis().column(0));
  }
  return elements;
}

TilingResult rankOneTiling(const HblProblem& p, const Integer& memory) {
  if (memory < 1) throw std::invalid_argument("memory must be >= 1");
  TileSpec spec;
  spec.dim = p.dim;
  try {
    spec.groups.push_back({rankOneElements(p), Rational(1)});
    spec.memory = memory / static_cast<unsigned long>(p.dim);
  } catch (const TilingPreconditionError& err) {
    if (err.kind() != Kind::FewerMapsThanDim || p.mapCount() < p.dim) throw;
    // More maps than dimensions with trivially intersecting kernels: asymptotic cube.
    std::vector<IntVector> unit;
    for (std::size_t i = 0; i < p.dim; ++i) {
      IntVector e(p.dim);
      e[i] = 1;
      unit.push_back(std::move(e));
    }
    spec.groups = {{std::move(unit), Rational(1)}};
    spec.memory = memory / static_cast<unsigned long>(p.mapCount());
  }
  if (spec.memory < 1) spec.memory = 1;
  return buildTiling(spec);
}

std::vector<IntVector> rankDMinusOneElements(const HblProblem& p) {
  p.validate();
  if (p.dim < 2) throw TilingPreconditionError(Kind::NotRankDMinusOne, "needs dimension >= 2");
  std::vector<IntVector> elements;
  for (std::size_t i = 0; i < p.mapCount(); ++i) {
    if (rank(p.maps[i]) != p.dim - 1) {
      throw TilingPreconditionError(Kind::NotRankDMinusOne,
                                    "map " + p.nameOf(i) + " is not of rank d-1");
    }
    elements.push_back(kernelBasis(p.maps[i]).basis().column(0));
  }
  if (p.mapCount() < 2) {
    throw TilingPreconditionError(Kind::KernelsDependent, "needs at least two maps");
  }
  if (rank(IntMatrix::fromColumns(elements, p.dim)) != elements.size()) {
    throw TilingPreconditionError(Kind::KernelsDependent, "kernels are not independent");
  }
  return elements;
}

TilingResult rankDMinusOneTiling(const HblProblem& p, const Integer& memory) {
  if (memory < 1) throw std::invalid_argument("memory must be >= 1");
  auto elements = rankDMinusOneElements(p);
  const auto k = static_cast<unsigned long>(elements.size());
  TileSpec spec;
  spec.dim = p.dim;
  spec.groups.push_back({std::move(elements), Rational(1, k - 1)});
  spec.memory = memory / k;
  if (spec.memory < 1) spec.memory = 1;
  return buildTiling(spec);
}

std::string_view toString(TilingPath path) {
  switch (path) {
    case TilingPath::ExactRankOne: return "exact-rank-one";
    case TilingPath::ExactRankDMinusOne: return "exact-rank-d-minus-one";
    case TilingPath::Asymptotic: return "asymptotic";
  }
  return "unknown";
}

namespace {

bool allRank(const HblProblem& p, std::size_t r) {
  return std::all_of(p.maps.begin(), p.maps.end(), [&](const IntMatrix& m) { return rank(m) == r; });
}

// Closed-form optimal dual y_H = 1/(k-1) on H = span of the kernels of rank d-1 maps.
std::optional<DualVector> rankDMinusOneDual(const HblProblem& p) {
  if (p.dim < 2 || !allRank(p, p.dim - 1)) return std::nullopt;
  Subgroup h = Subgroup::trivial(p.dim);
  for (const auto& phi : p.maps) h = sum(h, kernelBasis(phi));
  if (h.rank() < 2) return std::nullopt;
  DualVector y;
  y.set(h, Rational(1, static_cast<unsigned long>(h.rank() - 1)));
  return y;
}

}  // namespace

Analysis analyzeProblem(const HblProblem& p, const PlanOptions& options) {
  p.validate();
  Analysis a;
  a.problem = p;
  a.constraints = generateConstraints(p, options.maxClosureSize);
  if (a.constraints.completeness == Completeness::Partial) {
    a.warnings.push_back("constraint closure truncated at " + std::to_string(a.constraints.cap) +
                         " subgroups: s_HBL may be underestimated; the tiling is still valid but "
                         "optimality is not certified");
  }
  a.primal = solvePrimal(p, a.constraints);
  if (!a.primal.optimal()) {
    Subgroup witness = a.primal.reuseWitness.value_or(Subgroup::trivial(p.dim));
    throw InfeasiblePrimal("primal LP infeasible: every map collapses " + witness.toString() +
                               ", so data reuse is unbounded",
                           witness);
  }
  const Rational& sHbl = a.primal.objective;

  auto acceptDual = [&](const DualVector& y) {
    DualEvaluation ev = evalDual(y, p);
    return ev.feasible() && ev.value == sHbl;
  };

  std::optional<DualVector> exactDual;
  if (p.mapCount() == p.dim && allRank(p, 1)) {
    try {
      auto elements = rankOneElements(p);
      DualVector y;
      y.set(Subgroup::full(p.dim), Rational(1));
      if (acceptDual(y)) {
        a.path = TilingPath::ExactRankOne;
        a.groups = {{std::move(elements), Rational(1)}};
        a.memoryDivisor = static_cast<unsigned long>(p.dim);
        exactDual = std::move(y);
      }
    } catch (const TilingPreconditionError&) {
    }
  }
  if (!exactDual && p.dim >= 2 && allRank(p, p.dim - 1)) {
    try {
      auto elements = rankDMinusOneElements(p);
      auto y = rankDMinusOneDual(p);
      if (y && acceptDual(*y)) {
        const auto k = static_cast<unsigned long>(elements.size());
        a.path = TilingPath::ExactRankDMinusOne;
        a.groups = {{std::move(elements), Rational(1, k - 1)}};
        a.memoryDivisor = k;
        exactDual = std::move(y);
      }
    } catch (const TilingPreconditionError&) {
    }
  }

  if (exactDual) {
    a.dual = *exactDual;
    a.flagDual = *exactDual;
    a.flag = flagOf(a.flagDual);
    a.gamma = computeGamma(p, a.constraints, sHbl, options.gammaTolerance);
    a.split = optimalSplit(a.primal.s);
    return a;
  }

  a.path = TilingPath::Asymptotic;
  auto closedForm = rankDMinusOneDual(p);
  if (closedForm && acceptDual(*closedForm)) {
    a.dual = *closedForm;
  } else {
    a.dual = solveDualPreferringFullRank(p, a.constraints, sHbl);
  }
  FlagifyResult fl = flagifyDual(a.dual, p);
  a.flagDual = fl.y;
  a.flag = fl.flag;
  a.decomposition = flagDecompose(a.flagDual, a.flag);
  for (std::size_t i = 0; i < a.decomposition->ys.size(); ++i) {
    a.groups.push_back({a.decomposition->elements[i], a.decomposition->scalings[i]});
  }
  return a;
}

TileSpec tileSpecAt(const Analysis& a, const Integer& memory) {
  if (memory < 1) throw std::invalid_argument("memory must be >= 1");
  TileSpec spec;
  spec.dim = a.problem.dim;
  spec.groups = a.groups;
  spec.memory = memory / a.memoryDivisor;
  if (spec.memory < 1) spec.memory = 1;
  return spec;
}

Plan planTiling(const HblProblem& p, const Integer& memory, const PlanOptions& options) {
  Plan plan{analyzeProblem(p, options), {}};
  plan.tiling = buildTiling(tileSpecAt(plan.analysis, memory));
  return plan;
}

}  // namespace hbl
