#include "hbl/flagify.hpp"

#include <algorithm>
#include <optional>
#include <utility>

namespace hbl {

bool Flag::isStrict() const {
  for (std::size_t i = 1; i < chain.size(); ++i) {
    if (chain[i - 1].rank() >= chain[i].rank() || !chain[i - 1].isSubsetOf(chain[i])) return false;
  }
  return true;
}

bool reverseLexLess(const ExtremenessVector& a, const ExtremenessVector& b) {
  const std::size_t n = std::max(a.w.size(), b.w.size());
  for (std::size_t k = n; k-- > 0;) {
    Rational av = k < a.w.size() ? a.w[k] : Rational(0);
    Rational bv = k < b.w.size() ? b.w[k] : Rational(0);
    if (av != bv) return av < bv;
  }
  return false;
}

ExtremenessVector extremeness(const DualVector& y, std::size_t dim) {
  ExtremenessVector e;
  e.w.assign(dim, Rational(0));
  for (const auto& [h, v] : y) {
    if (h.rank() == 0) continue;
    e.w.at(h.rank() - 1) += v;
  }
  return e;
}

namespace {

bool comparable(const Subgroup& a, const Subgroup& b) {
  return a.isSubsetOf(b) || b.isSubsetOf(a);
}

std::optional<std::pair<Subgroup, Subgroup>> firstIncomparablePair(const DualVector& y) {
  auto support = y.support();
  for (std::size_t i = 0; i < support.size(); ++i) {
    for (std::size_t j = i + 1; j < support.size(); ++j) {
      if (!comparable(support[i], support[j])) return std::make_pair(support[i], support[j]);
    }
  }
  return std::nullopt;
}

}  // namespace

bool isSupportedOnFlag(const DualVector& y) { return !firstIncomparablePair(y).has_value(); }

Flag flagOf(const DualVector& y) {
  Flag f;
  f.chain = y.support();
  std::stable_sort(f.chain.begin(), f.chain.end(),
                   [](const Subgroup& a, const Subgroup& b) { return a.rank() < b.rank(); });
  if (!f.isStrict()) throw std::invalid_argument("flagOf: support is not a chain");
  return f;
}

FlagifyResult flagifyDual(const DualVector& y, const HblProblem& p,
                          const std::function<void(const DualVector&)>& onStep,
                          bool requireFeasible) {
  if (requireFeasible && !evalDual(y, p).feasible()) throw std::invalid_argument("flagifyDual: input dual vector is infeasible");

  FlagifyResult out;
  out.y = y;
  while (auto pair = firstIncomparablePair(out.y)) {
    auto [v, w] = std::move(*pair);
    // Canonical order puts the first element first; it is V unless strictly heavier.
    if (out.y.get(v) > out.y.get(w)) std::swap(v, w);
    const Rational shift = out.y.get(v);
    out.y.set(w, out.y.get(w) - shift);
    out.y.add(sum(v, w), shift);
    Subgroup meet = intersect(v, w);
    if (!meet.isTrivial()) out.y.add(meet, shift);
    out.y.set(v, 0);
    ++out.iterations;
    if (onStep) onStep(out.y);
  }
  out.flag = flagOf(out.y);
  return out;
}

}  // namespace hbl
