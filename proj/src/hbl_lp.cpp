#include "hbl/hbl_lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace hbl {

void DualVector::set(const Subgroup& h, const Rational& value) {
  if (value < 0) throw std::invalid_argument("DualVector: negative value");
  if (value == 0) {
    values_.erase(h);
  } else {
    values_[h] = value;
  }
}

void DualVector::add(const Subgroup& h, const Rational& delta) { set(h, get(h) + delta); }

Rational DualVector::get(const Subgroup& h) const {
  auto it = values_.find(h);
  return it == values_.end() ? Rational(0) : it->second;
}

std::vector<Subgroup> DualVector::support() const {
  std::vector<Subgroup> out;
  out.reserve(values_.size());
  for (const auto& [h, v] : values_) out.push_back(h);
  return out;
}

Rational DualVector::total() const {
  Rational t = 0;
  for (const auto& [h, v] : values_) t += v;
  return t;
}

bool DualEvaluation::feasible() const {
  return std::all_of(load.begin(), load.end(), [](const Rational& c) { return c <= 1; });
}

RankTable RankTable::build(const HblProblem& p, const std::vector<Subgroup>& subgroups) {
  RankTable t;
  t.rank.reserve(subgroups.size());
  t.image.reserve(subgroups.size());
  for (const auto& h : subgroups) {
    t.rank.push_back(h.rank());
    std::vector<std::size_t> row;
    row.reserve(p.mapCount());
    for (const auto& phi : p.maps) row.push_back(imageRank(phi, h));
    t.image.push_back(std::move(row));
  }
  return t;
}

namespace {

Subgroup commonKernel(const HblProblem& p) {
  Subgroup k = Subgroup::full(p.dim);
  for (const auto& phi : p.maps) k = intersect(k, kernelBasis(phi));
  return k;
}

}  // namespace

PrimalSolution solvePrimal(const HblProblem& p, const ConstraintSet& e) {
  p.validate();
  if (e.subgroups.empty()) throw std::invalid_argument("solvePrimal: empty constraint set");
  const std::size_t n = p.mapCount();
  RankTable table = RankTable::build(p, e.subgroups);

  PrimalSolution sol;
  for (std::size_t h = 0; h < e.subgroups.size(); ++h) {
    bool collapsed = std::all_of(table.image[h].begin(), table.image[h].end(),
                                 [](std::size_t r) { return r == 0; });
    if (collapsed && table.rank[h] > 0) {
      sol.status = LpStatus::Infeasible;
      sol.reuseWitness = commonKernel(p);
      return sol;
    }
  }

  std::vector<Rational> cost(n, Rational(1));
  RationalMatrix a;
  std::vector<Rational> b;
  for (std::size_t h = 0; h < e.subgroups.size(); ++h) {
    std::vector<Rational> row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = static_cast<unsigned long>(table.image[h][i]);
    a.push_back(std::move(row));
    b.emplace_back(static_cast<unsigned long>(table.rank[h]));
  }
  LpResult lp = simplexSolve(cost, a, b, Sense::Minimize);
  sol.status = lp.status;
  if (lp.status == LpStatus::Optimal) {
    sol.s = std::move(lp.x);
    sol.objective = lp.objective;
  } else if (lp.status == LpStatus::Infeasible) {
    sol.reuseWitness = commonKernel(p);
  }
  return sol;
}

DualVector solveDual(const HblProblem& p, const ConstraintSet& e) {
  p.validate();
  const std::size_t n = p.mapCount();
  const std::size_t k = e.subgroups.size();
  RankTable table = RankTable::build(p, e.subgroups);

  std::vector<Rational> cost(k);
  for (std::size_t h = 0; h < k; ++h) cost[h] = static_cast<unsigned long>(table.rank[h]);
  RationalMatrix a(n, std::vector<Rational>(k));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t h = 0; h < k; ++h) a[i][h] = static_cast<unsigned long>(table.image[h][i]);
  std::vector<Rational> b(n, Rational(1));

  LpResult lp = simplexSolve(cost, a, b, Sense::Maximize);
  if (lp.status != LpStatus::Optimal) {
    throw InfeasiblePrimal("dual LP unbounded: the primal is infeasible (infinite data reuse)",
                           commonKernel(p));
  }
  DualVector y;
  for (std::size_t h = 0; h < k; ++h) y.set(e.subgroups[h], lp.x[h]);
  return y;
}

DualVector solveDualPreferringFullRank(const HblProblem& p, const ConstraintSet& e,
                                const Rational& sHbl) {
  p.validate();
  const std::size_t n = p.mapCount();
  const std::size_t k = e.subgroups.size();
  RankTable table = RankTable::build(p, e.subgroups);

  // Rows: C_i <= 1, then -val(y) <= -sHbl, then one row per rank already fixed.
  RationalMatrix a(n, std::vector<Rational>(k));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t h = 0; h < k; ++h) a[i][h] = static_cast<unsigned long>(table.image[h][i]);
  std::vector<Rational> b(n, Rational(1));
  a.emplace_back(k);
  for (std::size_t h = 0; h < k; ++h) a.back()[h] = -static_cast<long>(table.rank[h]);
  b.push_back(-sHbl);

  LpResult lp;
  for (std::size_t r = p.dim; r >= 1; --r) {
    std::vector<Rational> cost(k);
    for (std::size_t h = 0; h < k; ++h) cost[h] = table.rank[h] == r ? 1 : 0;
    lp = simplexSolve(cost, a, b, Sense::Maximize);
    if (lp.status != LpStatus::Optimal) {
      throw InfeasiblePrimal("dual LP unbounded: the primal is infeasible (infinite data reuse)",
                             commonKernel(p));
    }
    a.emplace_back(k);
    for (std::size_t h = 0; h < k; ++h) a.back()[h] = -cost[h];
    b.push_back(-lp.objective);
    if (r == p.dim && lp.objective == 0) return solveDual(p, e);
  }
  DualVector y;
  for (std::size_t h = 0; h < k; ++h) y.set(e.subgroups[h], lp.x[h]);
  return y;
}

DualEvaluation evalDual(const DualVector& y, const HblProblem& p) {
  DualEvaluation ev;
  ev.value = 0;
  ev.load.assign(p.mapCount(), Rational(0));
  for (const auto& [h, v] : y) {
    ev.value += v * static_cast<unsigned long>(h.rank());
    for (std::size_t i = 0; i < p.mapCount(); ++i) {
      ev.load[i] += v * static_cast<unsigned long>(imageRank(p.maps[i], h));
    }
  }
  return ev;
}

std::vector<Rational> optimalSplit(const std::vector<Rational>& s) {
  Rational total = 0;
  for (const auto& v : s) {
    if (v < 0) throw std::invalid_argument("optimalSplit: negative exponent");
    total += v;
  }
  if (total == 0) throw std::invalid_argument("optimalSplit: all exponents are zero");
  std::vector<Rational> c;
  c.reserve(s.size());
  for (const auto& v : s) c.push_back(v / total);
  return c;
}

double GammaEstimate::lower() const { return std::exp(logLower); }
double GammaEstimate::upper() const { return std::exp(logUpper); }

namespace {

struct Inequality {
  std::vector<Rational> a;  // a.s >= b
  Rational b;
  friend bool operator<(const Inequality& x, const Inequality& y) {
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  }
};

// Rational null space basis of the rows of m (each of length n).
std::vector<std::vector<Rational>> nullSpace(RationalMatrix m, std::size_t n) {
  std::vector<std::size_t> pivotCols;
  std::size_t row = 0;
  for (std::size_t c = 0; c < n && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    Rational inv = 1 / m[row][c];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      Rational f = m[r][c];
      for (std::size_t k = 0; k < n; ++k) m[r][k] -= f * m[row][k];
    }
    pivotCols.push_back(c);
    ++row;
  }
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (std::find(pivotCols.begin(), pivotCols.end(), free) != pivotCols.end()) continue;
    std::vector<Rational> v(n);
    v[free] = 1;
    for (std::size_t r = 0; r < pivotCols.size(); ++r) v[pivotCols[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

double entropy(const Eigen::VectorXd& s, const std::vector<bool>& fixedZero) {
  double f = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (fixedZero[static_cast<std::size_t>(i)]) continue;
    f += s[i] * std::log(s[i]);
  }
  return f;
}

}  // namespace

GammaEstimate computeGamma(const HblProblem& p, const ConstraintSet& e, const Rational& sHbl,
                           double tolerance) {
  const std::size_t n = p.mapCount();
  RankTable table = RankTable::build(p, e.subgroups);

  std::set<Inequality> unique;
  for (std::size_t h = 0; h < e.subgroups.size(); ++h) {
    Inequality q;
    q.a.resize(n);
    for (std::size_t i = 0; i < n; ++i) q.a[i] = static_cast<unsigned long>(table.image[h][i]);
    q.b = static_cast<unsigned long>(table.rank[h]);
    unique.insert(std::move(q));
  }
  for (std::size_t i = 0; i < n; ++i) {
    Inequality q;
    q.a.assign(n, Rational(0));
    q.a[i] = 1;
    q.b = 0;
    unique.insert(std::move(q));
  }
  std::vector<Inequality> ineqs(unique.begin(), unique.end());

  // Face {a.s >= b, s >= 0, 1.s = sHbl} in the simplex's maximize form.
  RationalMatrix faceA;
  std::vector<Rational> faceB;
  for (const auto& q : ineqs) {
    std::vector<Rational> row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = -q.a[i];
    faceA.push_back(std::move(row));
    faceB.push_back(-q.b);
  }
  faceA.emplace_back(n, Rational(1));
  faceB.push_back(sHbl);
  faceA.emplace_back(n, Rational(-1));
  faceB.push_back(-sHbl);

  std::vector<bool> implicitEq(ineqs.size(), false);
  std::vector<Rational> interior(n, Rational(0));
  std::size_t strictCount = 0;
  std::vector<Rational> anyPoint;
  for (std::size_t k = 0; k < ineqs.size(); ++k) {
    LpResult lp = simplexSolve(ineqs[k].a, faceA, faceB, Sense::Maximize);
    if (lp.status != LpStatus::Optimal) {
      throw std::invalid_argument("computeGamma: sHbl is not the optimum of the given constraints");
    }
    if (anyPoint.empty()) anyPoint = lp.x;
    if (lp.objective == ineqs[k].b) {
      implicitEq[k] = true;
    } else {
      for (std::size_t i = 0; i < n; ++i) interior[i] += lp.x[i];
      ++strictCount;
    }
  }
  if (strictCount == 0) {
    interior = anyPoint;
  } else {
    for (auto& v : interior) v /= static_cast<unsigned long>(strictCount);
  }

  RationalMatrix eq;
  for (std::size_t k = 0; k < ineqs.size(); ++k)
    if (implicitEq[k]) eq.push_back(ineqs[k].a);
  eq.emplace_back(n, Rational(1));
  auto kernel = nullSpace(eq, n);

  std::vector<bool> fixedZero(n, false);
  for (std::size_t k = 0; k < ineqs.size(); ++k) {
    if (!implicitEq[k] || ineqs[k].b != 0) continue;
    std::size_t nonzero = 0, where = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (ineqs[k].a[i] != 0) {
        ++nonzero;
        where = i;
      }
    }
    if (nonzero == 1) fixedZero[where] = true;
  }

  const double sH = sHbl.get_d();
  const double offset = sH * std::log(sH);
  Eigen::VectorXd s(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) s[static_cast<Eigen::Index>(i)] = interior[i].get_d();

  GammaEstimate out;
  if (kernel.empty()) {
    out.singletonFace = true;
    double f = entropy(s, fixedZero);
    out.logGamma = out.logLower = out.logUpper = f - offset;
  } else {
    const auto dimFace = static_cast<Eigen::Index>(kernel.size());
    Eigen::MatrixXd raw(static_cast<Eigen::Index>(n), dimFace);
    for (Eigen::Index c = 0; c < dimFace; ++c)
      for (std::size_t i = 0; i < n; ++i)
        raw(static_cast<Eigen::Index>(i), c) = kernel[static_cast<std::size_t>(c)][i].get_d();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(raw.rows(), dimFace);

    std::vector<Eigen::VectorXd> rowsA;
    std::vector<double> rowsB;
    for (std::size_t k = 0; k < ineqs.size(); ++k) {
      if (implicitEq[k]) continue;
      Eigen::VectorXd a(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) a[static_cast<Eigen::Index>(i)] = ineqs[k].a[i].get_d();
      rowsA.push_back(a);
      rowsB.push_back(ineqs[k].b.get_d());
    }
    const double m = static_cast<double>(rowsA.size());

    auto slacksPositive = [&](const Eigen::VectorXd& x) {
      for (std::size_t r = 0; r < rowsA.size(); ++r)
        if (rowsA[r].dot(x) - rowsB[r] <= 0) return false;
      return true;
    };
    auto barrierObjective = [&](const Eigen::VectorXd& x, double t) {
      double phi = t * entropy(x, fixedZero);
      for (std::size_t r = 0; r < rowsA.size(); ++r) phi -= std::log(rowsA[r].dot(x) - rowsB[r]);
      return phi;
    };

    double t = 1.0;
    const double tFinal = 2.0 * m / tolerance;
    for (;;) {
      for (int iter = 0; iter < 200; ++iter) {
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(s.size());
        Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(s.size(), s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i) {
          if (fixedZero[static_cast<std::size_t>(i)]) continue;
          grad[i] += t * (std::log(s[i]) + 1.0);
          hess(i, i) += t / s[i];
        }
        for (std::size_t r = 0; r < rowsA.size(); ++r) {
          double g = rowsA[r].dot(s) - rowsB[r];
          grad -= rowsA[r] / g;
          hess += rowsA[r] * rowsA[r].transpose() / (g * g);
        }
        Eigen::VectorXd gz = basis.transpose() * grad;
        Eigen::MatrixXd hz = basis.transpose() * hess * basis;
        Eigen::VectorXd dz = -hz.ldlt().solve(gz);
        double decrement = -gz.dot(dz);
        ++out.newtonSteps;
        if (decrement / 2 < 1e-13) break;
        Eigen::VectorXd ds = basis * dz;
        double alpha = 1.0;
        while (alpha > 1e-14 && !slacksPositive(s + alpha * ds)) alpha *= 0.5;
        double phi0 = barrierObjective(s, t);
        while (alpha > 1e-14 && barrierObjective(s + alpha * ds, t) > phi0 - 0.25 * alpha * decrement) {
          alpha *= 0.5;
        }
        if (alpha <= 1e-14) break;
        s += alpha * ds;
      }
      if (t >= tFinal) break;
      t = std::min(t * 8.0, tFinal);
    }
    double f = entropy(s, fixedZero);
    out.logUpper = f - offset;
    out.logLower = f - m / t - offset;
    out.logGamma = out.logUpper;
  }
  out.gamma = std::exp(out.logGamma);
  out.minimizer.assign(s.data(), s.data() + s.size());
  for (double v : out.minimizer) out.split.push_back(v / sH);
  return out;
}

}  // namespace hbl
