#pragma once

#include "hbl/problem_io.hpp"

#include <cstddef>
#include <string>
#include <string_view>

namespace hbl {

class LoopParseError : public DocumentError {
 public:
  enum class Kind { SyntaxError, NonlinearSubscript, UnknownIndex, DuplicateArray, DuplicateIndex };

  LoopParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message);

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

std::string_view toString(LoopParseError::Kind kind);

/// loop (i, j, k) { C[i, j]; A[i, k]; B[k, j]; }
/// Subscripts are integer linear combinations of the indices: `2i - j`, `3*k`, `-i + 4j`.
/// Constant offsets and products of indices are rejected. `//` starts a comment.
ProblemDocument parseLoopNest(std::string_view text);

}  // namespace hbl
