#pragma once

#include "hbl/integer.hpp"

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace hbl {

/// Dense integer matrix, row-major, arbitrary precision entries.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix fromRows(const std::vector<IntVector>& rows, std::size_t cols);
  static IntMatrix fromColumns(const std::vector<IntVector>& columns, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVector row(std::size_t r) const;
  IntVector column(std::size_t c) const;
  std::vector<IntVector> columns() const;
  std::vector<IntVector> rowVectors() const;

  IntMatrix transpose() const;
  IntMatrix selectColumns(std::size_t first, std::size_t count) const;
  IntVector apply(const IntVector& x) const;

  bool isZero() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

  std::string toString() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);
IntMatrix vstack(const IntMatrix& a, const IntMatrix& b);

/// Rank over the rationals.
std::size_t rank(const IntMatrix& a);

/// Determinant of a square matrix.
Integer determinant(const IntMatrix& a);

/// Inverse of a unimodular matrix; throws std::domain_error otherwise.
IntMatrix inverseUnimodular(const IntMatrix& a);

}  // namespace hbl
