#include "hbl/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace hbl {

namespace {

struct PointHash {
  std::size_t operator()(const Point& p) const {
    std::size_t h = 1469598103934665603ULL;
    for (auto v : p) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

std::vector<std::vector<std::int64_t>> mapEntries(const IntMatrix& phi) {
  std::vector<std::vector<std::int64_t>> rows(phi.rows(), std::vector<std::int64_t>(phi.cols()));
  for (std::size_t r = 0; r < phi.rows(); ++r) {
    for (std::size_t c = 0; c < phi.cols(); ++c) {
      if (!phi(r, c).fits_slong_p()) throw BudgetExceeded("map entry exceeds 64 bits");
      rows[r][c] = phi(r, c).get_si();
    }
  }
  return rows;
}

Point applyMap(const std::vector<std::vector<std::int64_t>>& rows, const Point& x) {
  Point y(rows.size(), 0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    __int128 acc = 0;
    for (std::size_t c = 0; c < x.size(); ++c) acc += static_cast<__int128>(rows[r][c]) * x[c];
    y[r] = static_cast<std::int64_t>(acc);
  }
  return y;
}

Point toPoint(const IntVector& v) {
  Point p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].fits_slong_p()) throw BudgetExceeded("coordinate exceeds 64 bits");
    p[i] = v[i].get_si();
  }
  return p;
}

std::uint64_t toU64(const Integer& v) {
  if (!v.fits_ulong_p()) throw BudgetExceeded("count exceeds 64 bits");
  return v.get_ui();
}

// Membership in the lattice generated by the columns of a square nonsingular G,
// tested as adj(G) x ≡ 0 (mod det G).
class LatticeMembership {
 public:
  explicit LatticeMembership(const IntMatrix& g) {
    const std::size_t d = g.rows();
    det_ = determinant(g);
    if (det_ < 0) det_ = -det_;
    IntMatrix inv(d, d);
    // adj(G) = det(G) * G^{-1}; built column by column from rational solves.
    std::vector<std::vector<Rational>> aug(d, std::vector<Rational>(2 * d));
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) aug[r][c] = g(r, c);
      aug[r][d + r] = 1;
    }
    for (std::size_t c = 0; c < d; ++c) {
      std::size_t p = c;
      while (aug[p][c] == 0) ++p;
      std::swap(aug[p], aug[c]);
      Rational f = 1 / aug[c][c];
      for (auto& v : aug[c]) v *= f;
      for (std::size_t r = 0; r < d; ++r) {
        if (r == c || aug[r][c] == 0) continue;
        Rational m = aug[r][c];
        for (std::size_t k = 0; k < 2 * d; ++k) aug[r][k] -= m * aug[c][k];
      }
    }
    adj_.assign(d, std::vector<std::int64_t>(d));
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        Rational v = aug[r][d + c] * det_;
        if (v.get_den() != 1 || !v.get_num().fits_slong_p()) {
          throw BudgetExceeded("translation lattice too large for the cover check");
        }
        adj_[r][c] = v.get_num().get_si();
      }
    }
    if (!det_.fits_slong_p()) throw BudgetExceeded("translation lattice index exceeds 64 bits");
    modulus_ = det_.get_si();
  }

  bool contains(const Point& x) const {
    for (const auto& row : adj_) {
      __int128 acc = 0;
      for (std::size_t c = 0; c < x.size(); ++c) acc += static_cast<__int128>(row[c]) * x[c];
      if (acc % modulus_ != 0) return false;
    }
    return true;
  }

 private:
  Integer det_;
  std::int64_t modulus_ = 1;
  std::vector<std::vector<std::int64_t>> adj_;
};

}  // namespace

std::vector<std::uint64_t> countImages(const TileSpec& spec, const HblProblem& p,
                                       std::uint64_t budget) {
  std::vector<std::vector<std::vector<std::int64_t>>> maps;
  for (const auto& phi : p.maps) maps.push_back(mapEntries(phi));
  std::vector<std::unordered_set<Point, PointHash>> images(p.mapCount());
  forEachTilePoint(
      spec,
      [&](const Point& x) {
        for (std::size_t i = 0; i < maps.size(); ++i) images[i].insert(applyMap(maps[i], x));
      },
      budget);
  std::vector<std::uint64_t> counts;
  for (const auto& s : images) counts.push_back(s.size());
  return counts;
}

CoverCheck checkCover(const TilingResult& t, std::int64_t radius, std::uint64_t budget) {
  const std::size_t d = t.spec.dim;
  CoverCheck out;
  std::vector<Point> tile = enumerateTile(t.spec, budget);

  std::vector<IntVector> gens = t.t1Generators;
  gens.insert(gens.end(), t.t2Generators.begin(), t.t2Generators.end());
  if (gens.size() != d) return out;
  IntMatrix g = IntMatrix::fromColumns(gens, d);
  if (rank(g) != d) return out;
  LatticeMembership lattice(g);

  std::vector<Point> reps;
  for (const auto& r : t.t3Reps) reps.push_back(toPoint(r));

  const double side = 2.0 * static_cast<double>(radius) + 1.0;
  const double windowD = std::pow(side, static_cast<double>(d));
  const double work = windowD * static_cast<double>(tile.size()) * static_cast<double>(reps.size());
  if (windowD > static_cast<double>(budget) || work > 50.0 * static_cast<double>(budget)) {
    throw BudgetExceeded("cover check window too large for the budget");
  }

  // Multiplicity of p = #{(s, tau) : s in S, tau in T, p = tau + s}; every translate
  // meeting the window is reached this way.
  Point p(d, -radius);
  Point diff(d);
  for (;;) {
    ++out.windowPoints;
    std::uint64_t multiplicity = 0;
    for (const auto& s : tile) {
      for (const auto& r : reps) {
        for (std::size_t k = 0; k < d; ++k) diff[k] = p[k] - s[k] - r[k];
        ++out.translatesTried;
        if (lattice.contains(diff)) ++multiplicity;
      }
    }
    if (multiplicity == 0) ++out.uncovered;
    if (multiplicity > 1) ++out.overcovered;
    std::size_t k = 0;
    while (k < d) {
      if (++p[k] <= radius) break;
      p[k] = -radius;
      ++k;
    }
    if (k == d) break;
  }
  out.exact = out.uncovered == 0 && out.overcovered == 0;
  return out;
}

ExponentFit fitExponent(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) throw std::invalid_argument("fitExponent: need at least 3 samples");
  const double n = static_cast<double>(samples.size());
  double sx = 0, sy = 0;
  for (const auto& [m, c] : samples) {
    if (m <= 0 || c <= 0) throw std::invalid_argument("fitExponent: samples must be positive");
    sx += std::log(m);
    sy += std::log(c);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [m, c] : samples) {
    double dx = std::log(m) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(c) - my);
  }
  if (sxx == 0) throw std::invalid_argument("fitExponent: memory sizes must differ");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  for (const auto& [m, c] : samples) {
    double e = std::log(c) - (fit.intercept + fit.slope * std::log(m));
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / n);
  return fit;
}

bool hblBoundHolds(std::uint64_t tilePoints, const std::vector<std::uint64_t>& images,
                   const std::vector<Rational>& s) {
  if (images.size() != s.size()) throw std::invalid_argument("hblBoundHolds: size mismatch");
  Integer common = 1;
  for (const auto& v : s) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), v.get_den().get_mpz_t());
  if (!common.fits_ulong_p()) throw BudgetExceeded("exponent denominators too large");
  Integer lhs;
  Integer base(static_cast<unsigned long>(tilePoints));
  mpz_pow_ui(lhs.get_mpz_t(), base.get_mpz_t(), common.get_ui());
  Integer rhs = 1;
  for (std::size_t i = 0; i < s.size(); ++i) {
    Rational e = s[i] * common;
    if (e < 0) throw std::invalid_argument("hblBoundHolds: negative exponent");
    Integer exp = e.get_num();
    if (!exp.fits_ulong_p()) throw BudgetExceeded("exponent too large");
    Integer term;
    Integer img(static_cast<unsigned long>(images[i]));
    mpz_pow_ui(term.get_mpz_t(), img.get_mpz_t(), exp.get_ui());
    rhs *= term;
  }
  return lhs <= rhs;
}

bool checkHblBound(const TileSpec& spec, const HblProblem& p, const std::vector<Rational>& s,
                   std::uint64_t budget) {
  std::uint64_t count = 0;
  forEachTilePoint(spec, [&](const Point&) { ++count; }, budget);
  return hblBoundHolds(count, countImages(spec, p, budget), s);
}

std::vector<OptimalitySample> checkExactOptimality(
    const std::function<TileSpec(const Integer&)>& tileAt, const HblProblem& p, double gamma,
    const Rational& sHbl, const std::vector<Integer>& memories, std::uint64_t budget) {
  std::vector<OptimalitySample> out;
  for (const auto& m : memories) {
    TileSpec spec = tileAt(m);
    OptimalitySample sample;
    sample.memory = m;
    forEachTilePoint(spec, [&](const Point&) { ++sample.tilePoints; }, budget);
    sample.images = countImages(spec, p, budget);
    for (auto c : sample.images) sample.memorySum += c;
    sample.memoryOk = Integer(static_cast<unsigned long>(sample.memorySum)) <= m;
    const long double logRatio = std::log(static_cast<long double>(sample.tilePoints)) -
                                 std::log(static_cast<long double>(gamma)) -
                                 static_cast<long double>(sHbl.get_d()) *
                                     std::log(static_cast<long double>(m.get_d()));
    sample.ratio = static_cast<double>(std::exp(logRatio));
    out.push_back(std::move(sample));
  }
  return out;
}

namespace {

std::int64_t defaultRadius(std::size_t d) {
  std::int64_t r = 1;
  while (r < 12 && std::pow(2.0 * static_cast<double>(r + 1) + 1.0, static_cast<double>(d)) <= 20000.0) ++r;
  return r;
}

void fail(VerificationReport& rep, std::string why) {
  rep.passed = false;
  rep.failures.push_back(std::move(why));
}

void runCover(VerificationReport& rep, const TilingResult& t, const VerifyOptions& options) {
  const std::int64_t radius = options.coverRadius.value_or(defaultRadius(t.spec.dim));
  try {
    rep.cover = checkCover(t, radius, options.budget);
    rep.coverRadius = radius;
    if (!rep.cover->exact) {
      fail(rep, "translates do not cover the window exactly once (" +
                    std::to_string(rep.cover->uncovered) + " uncovered, " +
                    std::to_string(rep.cover->overcovered) + " covered more than once)");
    }
  } catch (const BudgetExceeded& e) {
    rep.notices.push_back(std::string("cover check skipped: ") + e.what());
  }
}

}  // namespace

VerificationReport verifyAnalysis(const Analysis& a, const std::vector<Integer>& memories,
                                  const VerifyOptions& options) {
  VerificationReport rep;
  const bool exactPath = a.path != TilingPath::Asymptotic;
  std::vector<Integer> ms = memories;
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  const double gamma = a.gamma ? a.gamma->gamma : 0.0;

  for (const auto& m : ms) {
    VerificationReport::Sample sample;
    sample.memory = m;
    TileSpec spec = tileSpecAt(a, m);
    try {
      sample.images = countImages(spec, a.problem, options.budget);
      sample.tilePoints = toU64(spec.pointCount());
    } catch (const BudgetExceeded& e) {
      rep.notices.push_back("M = " + m.get_str() + " skipped: " + e.what());
      continue;
    }
    sample.hblBoundOk = hblBoundHolds(sample.tilePoints, sample.images, a.primal.s);
    if (!sample.hblBoundOk) fail(rep, "HBL bound violated at M = " + m.get_str());
    if (exactPath) {
      auto opt = checkExactOptimality([&](const Integer&) { return spec; }, a.problem, gamma,
                                      a.sHbl(), {m}, options.budget);
      sample.memoryOk = opt.front().memoryOk;
      sample.ratio = opt.front().ratio;
      if (!*sample.memoryOk) fail(rep, "memory footprint exceeds M = " + m.get_str());
    }
    rep.samples.push_back(std::move(sample));
  }

  if (!ms.empty()) {
    try {
      runCover(rep, buildTiling(tileSpecAt(a, ms.front())), options);
    } catch (const BudgetExceeded& e) {
      rep.notices.push_back(std::string("cover check skipped: ") + e.what());
    }
  }

  if (rep.samples.size() >= options.minFitSamples) {
    std::vector<std::pair<double, double>> sizes;
    for (const auto& s : rep.samples) sizes.emplace_back(s.memory.get_d(), static_cast<double>(s.tilePoints));
    rep.sizeFit = fitExponent(sizes);
    for (std::size_t i = 0; i < a.problem.mapCount(); ++i) {
      std::vector<std::pair<double, double>> imgs;
      for (const auto& s : rep.samples) imgs.emplace_back(s.memory.get_d(), static_cast<double>(s.images[i]));
      rep.imageFits.push_back(fitExponent(imgs));
    }
    if (rep.samples.size() >= 4) {
      const double target = a.sHbl().get_d();
      if (std::abs(rep.sizeFit->slope - target) > options.exponentTolerance) {
        fail(rep, "fitted |S| exponent " + std::to_string(rep.sizeFit->slope) +
                      " is not within tolerance of s_HBL");
      }
      for (std::size_t i = 0; i < rep.imageFits.size(); ++i) {
        if (rep.imageFits[i].slope > 1.0 + options.exponentTolerance) {
          fail(rep, "fitted image exponent of " + a.problem.nameOf(i) + " exceeds 1");
        }
      }
    } else {
      rep.notices.push_back("exponent fits reported but not asserted with fewer than 4 samples");
    }
  } else {
    rep.notices.push_back("no exponent fits: fewer than " + std::to_string(options.minFitSamples) +
                          " samples");
  }
  return rep;
}

VerificationReport verifyTiling(const TilingResult& t, const HblProblem& p,
                                const VerifyOptions& options) {
  VerificationReport rep;
  VerificationReport::Sample sample;
  sample.memory = t.spec.memory;
  try {
    sample.images = countImages(t.spec, p, options.budget);
    sample.tilePoints = toU64(t.spec.pointCount());
    sample.hblBoundOk = true;
    rep.samples.push_back(std::move(sample));
  } catch (const BudgetExceeded& e) {
    rep.notices.push_back(std::string("image counts skipped: ") + e.what());
  }
  runCover(rep, t, options);
  if (!rep.cover && rep.passed) fail(rep, "cover check could not run");
  return rep;
}

}  // namespace hbl
