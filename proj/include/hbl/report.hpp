#pragma once

#include "hbl/tiler.hpp"
#include "hbl/verifier.hpp"

#include "json.hpp"

#include <string>

namespace hbl {

/// {"exact": "p/q", "decimal": "..."}
nlohmann::json rationalJson(const Rational& value);
/// JSON number when it fits in 64 bits, decimal string otherwise.
nlohmann::json integerJson(const Integer& value);
nlohmann::json vectorJson(const IntVector& v);
nlohmann::json subgroupJson(const Subgroup& h);

Integer integerFromJson(const nlohmann::json& v);

/// Report with every top-level key present; sections that were not computed are null.
nlohmann::json analysisReport(const Analysis& a);
nlohmann::json infeasibleReport(const HblProblem& p, const ConstraintSet& e,
                                const InfeasiblePrimal& error);

/// Fills "tile" and "translations".
void addTiling(nlohmann::json& report, const Analysis& a, const Integer& memory,
               const TilingResult& t);
nlohmann::json tileJson(const TilingResult& t);
nlohmann::json translationsJson(const TilingResult& t);
nlohmann::json verificationJson(const VerificationReport& v, const HblProblem& p);

/// Rebuilds a tiling from the "tile" and "translations" sections of a report.
/// Throws std::invalid_argument on malformed input.
TilingResult tilingFromReport(const nlohmann::json& report, std::size_t dim);

/// Canonical serialization: sorted keys, two-space indent, trailing newline.
std::string dumpReport(const nlohmann::json& report);
/// Human-readable summary of a report.
std::string renderText(const nlohmann::json& report);

}  // namespace hbl
