#pragma once

#include "hbl/int_matrix.hpp"

#include <compare>
#include <cstddef>

namespace hbl {

/// Column Hermite normal form of A: a basis of the lattice spanned by A's columns,
/// in column echelon form. Each pivot (the first nonzero entry of a column) is positive,
/// pivot rows strictly increase, and entries left of a pivot in its row lie in [0, pivot).
/// Zero columns are dropped, so the result has rank(A) columns.
IntMatrix hnf(const IntMatrix& a);

/// A = U * D * V^{-1} with U, V unimodular and D diagonal. The nonzero diagonal
/// entries are positive, come first, and form a divisibility chain; zeros come last.
struct SnfResult {
  IntMatrix u;
  IntMatrix d;
  IntMatrix v;

  /// Number of nonzero diagonal entries.
  std::size_t rank() const;
  IntVector diagonal() const;
};

SnfResult snf(const IntMatrix& a);

/// A subgroup of Z^d identified with its rational span: stored as the saturated
/// lattice span_Q(H) ∩ Z^d with a column-HNF basis, so equal spans compare equal.
class Subgroup {
 public:
  Subgroup() = default;

  /// Saturated span of the given generator columns.
  static Subgroup span(const IntMatrix& generators);
  static Subgroup full(std::size_t dim);
  static Subgroup trivial(std::size_t dim);
  /// {x in Z^d : A x = 0}; A has d columns.
  static Subgroup kernelOf(const IntMatrix& a);

  std::size_t ambientDim() const { return dim_; }
  std::size_t rank() const { return basis_.cols(); }
  bool isTrivial() const { return rank() == 0; }
  bool isFull() const { return rank() == dim_; }

  /// d x r, saturated, column HNF.
  const IntMatrix& basis() const { return basis_; }
  /// (d - r) x d matrix whose rows span the integer vectors orthogonal to this subgroup.
  const IntMatrix& annihilator() const { return annihilator_; }

  bool contains(const IntVector& x) const;
  bool isSubsetOf(const Subgroup& other) const;

  std::string toString() const;

  /// Canonical order: ambient dimension, then rank, then basis entries column-major.
  friend std::strong_ordering operator<=>(const Subgroup& a, const Subgroup& b);
  friend bool operator==(const Subgroup& a, const Subgroup& b);

 private:
  Subgroup(std::size_t dim, IntMatrix basis, IntMatrix annihilator)
      : dim_(dim), basis_(std::move(basis)), annihilator_(std::move(annihilator)) {}

  std::size_t dim_ = 0;
  IntMatrix basis_;
  IntMatrix annihilator_;
};

/// Integer kernel of A via Smith normal form, as a saturated subgroup.
Subgroup kernelBasis(const IntMatrix& a);

Subgroup sum(const Subgroup& v, const Subgroup& w);
Subgroup intersect(const Subgroup& v, const Subgroup& w);

/// rank of phi(H) over the rationals.
std::size_t imageRank(const IntMatrix& phi, const Subgroup& h);

/// An integer map Z^d -> Z^{d-r} whose kernel is exactly `kernel`.
IntMatrix mapWithKernel(const Subgroup& kernel);

}  // namespace hbl
