#pragma once

#include "hbl/problem.hpp"

#include "json.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hbl {

struct ArrayAccess {
  std::string name;
  std::vector<std::vector<Integer>> rows;  // one coefficient vector per subscript
};

/// A problem as read from a file, before it becomes matrices.
struct ProblemDocument {
  std::size_t dimension = 0;
  std::optional<std::vector<std::string>> indices;
  std::vector<ArrayAccess> arrays;

  /// Throws DocumentError when rows have the wrong length or names repeat.
  void validate() const;
  HblProblem toProblem() const;
};

class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"dimension": d, "maps": [{"name": "A1", "rows": [[...], ...]}, ...]}; "indices" optional.
ProblemDocument parseProblemJson(const std::string& text);
nlohmann::json problemToJson(const ProblemDocument& doc);

/// JSON when the first non-blank character is '{', the loop-nest language otherwise.
ProblemDocument parseProblem(const std::string& text);

}  // namespace hbl
