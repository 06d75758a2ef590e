#include "hbl/simplex.hpp"

#include <stdexcept>
#include <utility>

namespace hbl {

std::string_view toString(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : t_(rows, std::vector<Rational>(cols + 1)), basis_(rows) {}

  std::size_t rows() const { return t_.size(); }
  std::size_t cols() const { return t_.empty() ? 0 : t_[0].size() - 1; }
  Rational& at(std::size_t r, std::size_t c) { return t_[r][c]; }
  Rational& rhs(std::size_t r) { return t_[r].back(); }
  std::size_t& basic(std::size_t r) { return basis_[r]; }

  void pivot(std::size_t pr, std::size_t pc) {
    Rational inv = 1 / t_[pr][pc];
    for (auto& v : t_[pr]) v *= inv;
    for (std::size_t r = 0; r < t_.size(); ++r) {
      if (r == pr || t_[r][pc] == 0) continue;
      Rational f = t_[r][pc];
      for (std::size_t c = 0; c < t_[r].size(); ++c) {
        if (t_[pr][c] != 0) t_[r][c] -= f * t_[pr][c];
      }
    }
    basis_[pr] = pc;
    ++pivots_;
  }

  void eraseRow(std::size_t r) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  // Maximizes cost.x over columns [0, allowed); Bland's rule on entering and leaving.
  LpStatus optimize(const std::vector<Rational>& cost, std::size_t allowed) {
    for (;;) {
      std::size_t entering = allowed;
      for (std::size_t j = 0; j < allowed && entering == allowed; ++j) {
        if (isBasic(j)) continue;
        Rational reduced = cost[j];
        for (std::size_t i = 0; i < rows(); ++i) {
          if (t_[i][j] != 0) reduced -= cost[basis_[i]] * t_[i][j];
        }
        if (reduced > 0) entering = j;
      }
      if (entering == allowed) return LpStatus::Optimal;
      std::size_t leaving = rows();
      Rational best;
      for (std::size_t i = 0; i < rows(); ++i) {
        if (t_[i][entering] <= 0) continue;
        Rational ratio = t_[i].back() / t_[i][entering];
        if (leaving == rows() || ratio < best || (ratio == best && basis_[i] < basis_[leaving])) {
          leaving = i;
          best = std::move(ratio);
        }
      }
      if (leaving == rows()) return LpStatus::Unbounded;
      pivot(leaving, entering);
    }
  }

  bool isBasic(std::size_t j) const {
    for (auto b : basis_)
      if (b == j) return true;
    return false;
  }

  std::size_t pivots() const { return pivots_; }

 private:
  std::vector<std::vector<Rational>> t_;
  std::vector<std::size_t> basis_;
  std::size_t pivots_ = 0;
};

}  // namespace

LpResult simplexSolve(const std::vector<Rational>& c, const RationalMatrix& a,
                      const std::vector<Rational>& b, Sense sense) {
  const std::size_t n = c.size();
  const std::size_t m = a.size();
  if (b.size() != m) throw std::invalid_argument("simplexSolve: b size mismatch");
  for (const auto& row : a) {
    if (row.size() != n) throw std::invalid_argument("simplexSolve: A row size mismatch");
  }
  // Normalize to max c'.x, A' x <= b'.
  const Rational sign = sense == Sense::Maximize ? 1 : -1;

  std::size_t artificials = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (sign * b[i] < 0) ++artificials;
  }
  const std::size_t structural = n + m;
  Tableau t(m, structural + artificials);
  std::size_t nextArtificial = structural;
  for (std::size_t i = 0; i < m; ++i) {
    Rational rowSign = sign * b[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = rowSign * sign * a[i][j];
    t.at(i, n + i) = rowSign;
    t.rhs(i) = rowSign * sign * b[i];
    if (rowSign < 0) {
      t.at(i, nextArtificial) = 1;
      t.basic(i) = nextArtificial++;
    } else {
      t.basic(i) = n + i;
    }
  }

  LpResult result;
  if (artificials > 0) {
    std::vector<Rational> phase1(structural + artificials);
    for (std::size_t j = structural; j < phase1.size(); ++j) phase1[j] = -1;
    t.optimize(phase1, phase1.size());
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (t.basic(i) >= structural && t.rhs(i) != 0) {
        result.status = LpStatus::Infeasible;
        result.pivots = t.pivots();
        return result;
      }
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < t.rows();) {
      if (t.basic(i) < structural) {
        ++i;
        continue;
      }
      std::size_t col = structural;
      for (std::size_t j = 0; j < structural && col == structural; ++j) {
        if (t.at(i, j) != 0 && !t.isBasic(j)) col = j;
      }
      if (col == structural) {
        t.eraseRow(i);
      } else {
        t.pivot(i, col);
        ++i;
      }
    }
  }

  std::vector<Rational> phase2(structural + artificials);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = sign * c[j];
  LpStatus status = t.optimize(phase2, structural);
  result.pivots = t.pivots();
  if (status == LpStatus::Unbounded) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (t.basic(i) < n) result.x[t.basic(i)] = t.rhs(i);
  }
  result.objective = 0;
  for (std::size_t j = 0; j < n; ++j) result.objective += c[j] * result.x[j];
  return result;
}

}  // namespace hbl
