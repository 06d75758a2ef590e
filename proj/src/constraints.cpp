#include "hbl/constraints.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace hbl {

void HblProblem::validate() const {
  if (dim == 0) throw std::invalid_argument("problem dimension must be at least 1");
  if (maps.empty()) throw std::invalid_argument("problem needs at least one map");
  if (!names.empty() && names.size() != maps.size()) {
    throw std::invalid_argument("problem names must match the number of maps");
  }
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (maps[i].cols() != dim) {
      throw std::invalid_argument("map " + nameOf(i) + " has " + std::to_string(maps[i].cols()) +
                                  " columns, expected " + std::to_string(dim));
    }
  }
}

std::string HblProblem::nameOf(std::size_t i) const {
  if (i < names.size() && !names[i].empty()) return names[i];
  return "phi" + std::to_string(i + 1);
}

std::string_view toString(Completeness c) {
  return c == Completeness::Complete ? "complete" : "partial";
}

std::string_view toString(ConstraintMethod m) {
  switch (m) {
    case ConstraintMethod::CoordinateProjections: return "coordinate-projections";
    case ConstraintMethod::FewMaps: return "few-maps";
    case ConstraintMethod::KernelClosure: return "kernel-closure";
    case ConstraintMethod::FullSpaceOnly: return "full-space-only";
  }
  return "unknown";
}

bool ConstraintSet::contains(const Subgroup& h) const {
  return std::binary_search(subgroups.begin(), subgroups.end(), h);
}

bool isCoordinateProjection(const IntMatrix& phi) {
  if (phi.rows() == 0) return false;
  std::set<std::size_t> seen;
  for (std::size_t r = 0; r < phi.rows(); ++r) {
    std::size_t ones = 0;
    std::size_t where = 0;
    for (std::size_t c = 0; c < phi.cols(); ++c) {
      if (phi(r, c) == 0) continue;
      if (phi(r, c) != 1) return false;
      ++ones;
      where = c;
    }
    if (ones != 1 || !seen.insert(where).second) return false;
  }
  return true;
}

std::vector<Subgroup> closureStep(const std::vector<Subgroup>& subgroups) {
  std::set<Subgroup> out(subgroups.begin(), subgroups.end());
  for (std::size_t i = 0; i < subgroups.size(); ++i) {
    for (std::size_t j = i + 1; j < subgroups.size(); ++j) {
      out.insert(sum(subgroups[i], subgroups[j]));
      Subgroup meet = intersect(subgroups[i], subgroups[j]);
      if (!meet.isTrivial()) out.insert(std::move(meet));
    }
  }
  return {out.begin(), out.end()};
}

namespace {

// Worklist closure under pairwise sums and intersections. Returns false if the cap was hit.
bool kernelClosure(const std::vector<Subgroup>& seeds, std::size_t cap, std::set<Subgroup>& out) {
  std::vector<Subgroup> all;
  std::vector<Subgroup> pending;
  for (const auto& s : seeds) {
    if (!s.isTrivial() && out.insert(s).second) pending.push_back(s);
  }
  if (out.size() > cap) return false;
  while (!pending.empty()) {
    Subgroup next = pending.front();
    pending.erase(pending.begin());
    for (const auto& other : all) {
      for (Subgroup candidate : {sum(next, other), intersect(next, other)}) {
        if (candidate.isTrivial() || out.count(candidate)) continue;
        if (out.size() >= cap) return false;
        out.insert(candidate);
        pending.push_back(std::move(candidate));
      }
    }
    all.push_back(std::move(next));
  }
  return true;
}

}  // namespace

ConstraintSet generateConstraints(const HblProblem& p, std::size_t maxClosureSize) {
  p.validate();
  if (maxClosureSize < p.mapCount() + 1) {
    throw std::invalid_argument("maxClosureSize must be at least the number of maps + 1");
  }
  const std::size_t d = p.dim;
  ConstraintSet result;
  std::set<Subgroup> found;

  const bool allCoordinate = std::all_of(p.maps.begin(), p.maps.end(), isCoordinateProjection);
  const bool coordinateFits =
      d < std::numeric_limits<std::size_t>::digits && ((std::size_t{1} << d) - 1) <= maxClosureSize;

  if (allCoordinate && coordinateFits) {
    result.method = ConstraintMethod::CoordinateProjections;
    for (std::size_t mask = 1; mask < (std::size_t{1} << d); ++mask) {
      std::vector<IntVector> cols;
      for (std::size_t i = 0; i < d; ++i) {
        if (!(mask >> i & 1U)) continue;
        IntVector e(d);
        e[i] = 1;
        cols.push_back(std::move(e));
      }
      found.insert(Subgroup::span(IntMatrix::fromColumns(cols, d)));
    }
  } else {
    std::vector<Subgroup> kernels;
    for (const auto& phi : p.maps) kernels.push_back(kernelBasis(phi));
    const bool anyKernel =
        std::any_of(kernels.begin(), kernels.end(), [](const Subgroup& k) { return !k.isTrivial(); });
    if (!anyKernel) {
      result.method = ConstraintMethod::FullSpaceOnly;
    } else if (p.mapCount() <= 3) {
      result.method = ConstraintMethod::FewMaps;
      kernelClosure(kernels, std::numeric_limits<std::size_t>::max(), found);
    } else {
      result.method = ConstraintMethod::KernelClosure;
      if (!kernelClosure(kernels, maxClosureSize, found)) {
        result.completeness = Completeness::Partial;
        result.cap = maxClosureSize;
      }
    }
  }
  found.insert(Subgroup::full(d));
  result.subgroups.assign(found.begin(), found.end());
  return result;
}

}  // namespace hbl
