#include "hbl/intlinalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace hbl {

namespace {

// Replaces columns (i, j) of m by (s*ci + t*cj, p*ci + q*cj).
void combineColumns(IntMatrix& m, std::size_t i, std::size_t j, const Integer& s,
                    const Integer& t, const Integer& p, const Integer& q) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Integer ci = m(r, i);
    Integer cj = m(r, j);
    m(r, i) = s * ci + t * cj;
    m(r, j) = p * ci + q * cj;
  }
}

void combineRows(IntMatrix& m, std::size_t i, std::size_t j, const Integer& s, const Integer& t,
                 const Integer& p, const Integer& q) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    Integer ri = m(i, c);
    Integer rj = m(j, c);
    m(i, c) = s * ri + t * rj;
    m(j, c) = p * ri + q * rj;
  }
}

void swapColumns(IntMatrix& m, std::size_t i, std::size_t j) {
  for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m(r, i), m(r, j));
}

void swapRows(IntMatrix& m, std::size_t i, std::size_t j) {
  for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(i, c), m(j, c));
}

// Unimodular 2x2 (s t; p q) sending (x, y) to (gcd(x, y), 0).
struct Bezout {
  Integer s, t, p, q;
};

Bezout bezout(const Integer& x, const Integer& y) {
  Integer g, s, t;
  if (y % x == 0) {
    // Plain subtraction keeps entry growth down.
    return {1, 0, -(y / x), 1};
  }
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return {s, t, -(y / g), x / g};
}

// Tracks D = P A Q alongside U = P^{-1} and V = Q.
class SnfWorkspace {
 public:
  explicit SnfWorkspace(const IntMatrix& a)
      : d_(a), u_(IntMatrix::identity(a.rows())), v_(IntMatrix::identity(a.cols())) {}

  // Row op with matrix R = (s t; p q) on rows (i, j); U <- U R^{-1}, R^{-1} = (q -t; -p s).
  void rowOp(std::size_t i, std::size_t j, const Bezout& b) {
    combineRows(d_, i, j, b.s, b.t, b.p, b.q);
    combineColumns(u_, i, j, b.q, -b.p, -b.t, b.s);
  }
  void colOp(std::size_t i, std::size_t j, const Bezout& b) {
    combineColumns(d_, i, j, b.s, b.t, b.p, b.q);
    combineColumns(v_, i, j, b.s, b.t, b.p, b.q);
  }
  void rowSwap(std::size_t i, std::size_t j) {
    swapRows(d_, i, j);
    swapColumns(u_, i, j);
  }
  void colSwap(std::size_t i, std::size_t j) {
    swapColumns(d_, i, j);
    swapColumns(v_, i, j);
  }
  void negateRow(std::size_t i) {
    for (std::size_t c = 0; c < d_.cols(); ++c) d_(i, c) = -d_(i, c);
    for (std::size_t r = 0; r < u_.rows(); ++r) u_(r, i) = -u_(r, i);
  }

  IntMatrix& d() { return d_; }
  SnfResult finish() && { return {std::move(u_), std::move(d_), std::move(v_)}; }

 private:
  IntMatrix d_, u_, v_;
};

// Integer kernel columns of A from its Smith form (V columns at zero positions).
IntMatrix kernelColumns(const IntMatrix& a) {
  SnfResult f = snf(a);
  const std::size_t r = f.rank();
  return f.v.selectColumns(r, a.cols() - r);
}

IntMatrix annihilatorOf(const IntMatrix& generators) {
  // Rows w with w . g = 0 for every generator column g.
  IntMatrix k = kernelColumns(generators.transpose());
  return hnf(k).transpose();
}

}  // namespace

IntMatrix hnf(const IntMatrix& a) {
  IntMatrix h = a;
  const std::size_t rows = h.rows();
  const std::size_t cols = h.cols();
  std::size_t k = 0;
  for (std::size_t i = 0; i < rows && k < cols; ++i) {
    for (std::size_t j = k + 1; j < cols; ++j) {
      if (h(i, j) == 0) continue;
      if (h(i, k) == 0) {
        swapColumns(h, k, j);
        continue;
      }
      Bezout b = bezout(h(i, k), h(i, j));
      combineColumns(h, k, j, b.s, b.t, b.p, b.q);
    }
    if (h(i, k) == 0) continue;
    if (h(i, k) < 0) {
      for (std::size_t r = 0; r < rows; ++r) h(r, k) = -h(r, k);
    }
    for (std::size_t j = 0; j < k; ++j) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), h(i, j).get_mpz_t(), h(i, k).get_mpz_t());
      if (q == 0) continue;
      for (std::size_t r = i; r < rows; ++r) h(r, j) -= q * h(r, k);
    }
    ++k;
  }
  return h.selectColumns(0, k);
}

std::size_t SnfResult::rank() const {
  std::size_t r = 0;
  const std::size_t n = std::min(d.rows(), d.cols());
  while (r < n && d(r, r) != 0) ++r;
  return r;
}

IntVector SnfResult::diagonal() const {
  const std::size_t n = std::min(d.rows(), d.cols());
  IntVector diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = d(i, i);
  return diag;
}

SnfResult snf(const IntMatrix& a) {
  SnfWorkspace w(a);
  IntMatrix& d = w.d();
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    std::size_t pr = m, pc = n;
    for (std::size_t i = t; i < m; ++i) {
      for (std::size_t j = t; j < n; ++j) {
        if (d(i, j) == 0) continue;
        if (pr == m || mpz_cmpabs(d(i, j).get_mpz_t(), d(pr, pc).get_mpz_t()) < 0) {
          pr = i;
          pc = j;
        }
      }
    }
    if (pr == m) break;
    if (pr != t) w.rowSwap(pr, t);
    if (pc != t) w.colSwap(pc, t);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        w.rowOp(t, i, bezout(d(t, t), d(i, t)));
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        w.colOp(t, j, bezout(d(t, t), d(t, j)));
        clean = false;
      }
      if (!clean) {
        // Column ops may have refilled column t below the pivot.
        bool columnClear = true;
        for (std::size_t i = t + 1; i < m; ++i) columnClear = columnClear && d(i, t) == 0;
        if (!columnClear) continue;
      }
      std::size_t badRow = m;
      for (std::size_t i = t + 1; i < m && badRow == m; ++i) {
        for (std::size_t j = t + 1; j < n; ++j) {
          if (d(i, j) % d(t, t) != 0) {
            badRow = i;
            break;
          }
        }
      }
      if (badRow == m) break;
      w.rowOp(t, badRow, Bezout{1, 1, 0, 1});
    }
    if (d(t, t) < 0) w.negateRow(t);
  }
  return std::move(w).finish();
}

Subgroup Subgroup::span(const IntMatrix& generators) {
  const std::size_t dim = generators.rows();
  IntMatrix ann = annihilatorOf(generators);
  IntMatrix basis = ann.rows() == 0 ? IntMatrix::identity(dim) : hnf(kernelColumns(ann));
  return Subgroup(dim, std::move(basis), std::move(ann));
}

Subgroup Subgroup::full(std::size_t dim) {
  return Subgroup(dim, IntMatrix::identity(dim), IntMatrix(0, dim));
}

Subgroup Subgroup::trivial(std::size_t dim) {
  return Subgroup(dim, IntMatrix(dim, 0), IntMatrix::identity(dim));
}

Subgroup Subgroup::kernelOf(const IntMatrix& a) {
  const std::size_t dim = a.cols();
  IntMatrix basis = hnf(kernelColumns(a));
  IntMatrix ann = annihilatorOf(basis);
  return Subgroup(dim, std::move(basis), std::move(ann));
}

bool Subgroup::contains(const IntVector& x) const {
  if (x.size() != dim_) throw std::invalid_argument("Subgroup::contains: dimension mismatch");
  for (std::size_t r = 0; r < annihilator_.rows(); ++r) {
    Integer acc = 0;
    for (std::size_t c = 0; c < dim_; ++c) acc += annihilator_(r, c) * x[c];
    if (acc != 0) return false;
  }
  return true;
}

bool Subgroup::isSubsetOf(const Subgroup& other) const {
  if (other.dim_ != dim_) throw std::invalid_argument("Subgroup::isSubsetOf: dimension mismatch");
  if (rank() > other.rank()) return false;
  return (other.annihilator_ * basis_).isZero();
}

std::string Subgroup::toString() const {
  std::ostringstream os;
  os << '<';
  for (std::size_t c = 0; c < basis_.cols(); ++c) {
    if (c) os << ", ";
    os << '(';
    for (std::size_t r = 0; r < dim_; ++r) {
      if (r) os << ',';
      os << basis_(r, c).get_str();
    }
    os << ')';
  }
  os << '>';
  return os.str();
}

std::strong_ordering operator<=>(const Subgroup& a, const Subgroup& b) {
  if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
  if (auto c = a.rank() <=> b.rank(); c != 0) return c;
  for (std::size_t col = 0; col < a.rank(); ++col) {
    for (std::size_t r = 0; r < a.dim_; ++r) {
      int c = cmp(a.basis_(r, col), b.basis_(r, col));
      if (c < 0) return std::strong_ordering::less;
      if (c > 0) return std::strong_ordering::greater;
    }
  }
  return std::strong_ordering::equal;
}

bool operator==(const Subgroup& a, const Subgroup& b) { return (a <=> b) == 0; }

Subgroup kernelBasis(const IntMatrix& a) { return Subgroup::kernelOf(a); }

Subgroup sum(const Subgroup& v, const Subgroup& w) {
  if (v.ambientDim() != w.ambientDim()) throw std::invalid_argument("sum: dimension mismatch");
  if (v.isSubsetOf(w)) return w;
  if (w.isSubsetOf(v)) return v;
  return Subgroup::span(hstack(v.basis(), w.basis()));
}

Subgroup intersect(const Subgroup& v, const Subgroup& w) {
  if (v.ambientDim() != w.ambientDim()) throw std::invalid_argument("intersect: dimension mismatch");
  if (v.isSubsetOf(w)) return v;
  if (w.isSubsetOf(v)) return w;
  return Subgroup::kernelOf(vstack(v.annihilator(), w.annihilator()));
}

std::size_t imageRank(const IntMatrix& phi, const Subgroup& h) {
  if (phi.cols() != h.ambientDim()) throw std::invalid_argument("imageRank: dimension mismatch");
  if (h.isTrivial()) return 0;
  return rank(phi * h.basis());
}

IntMatrix mapWithKernel(const Subgroup& kernel) { return kernel.annihilator(); }

}  // namespace hbl
