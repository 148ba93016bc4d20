#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "fairway/error.hpp"

namespace fairway {

enum class ResourceKind { Delay, MonetaryCost };

// Per-individual shares of a burden: delays (time units) or monetary costs
// (euros). Larger value = worse off. All welfare and dispersion computations
// consume this type.
struct Allocation {
  std::vector<double> values;
  ResourceKind kind = ResourceKind::Delay;
};

inline void validate(const Allocation& a) {
  if (a.values.empty())
    throw Error("EmptyAllocation", "allocation has no individuals");
  for (double v : a.values) {
    if (!std::isfinite(v) || v < 0.0)
      throw Error("InvalidValue",
                  "allocation values must be finite and non-negative");
  }
}

// All aggregations run over an ascending copy so results are bit-identical
// under any reordering of individuals, not just equal up to rounding.
inline std::vector<double> sorted_values(const Allocation& a) {
  std::vector<double> xs = a.values;
  std::sort(xs.begin(), xs.end());
  return xs;
}

inline double sum(const Allocation& a) {
  double s = 0.0;
  for (double v : sorted_values(a)) s += v;
  return s;
}

inline double mean(const Allocation& a) {
  return sum(a) / static_cast<double>(a.values.size());
}

// population standard deviation (divisor n); exactly 0 for a constant
// allocation, so "perfectly even" is a bitwise-testable statement.
inline double population_stddev(const Allocation& a) {
  const std::vector<double> xs = sorted_values(a);
  if (xs.front() == xs.back()) return 0.0;
  double m = 0.0;
  for (double v : xs) m += v;
  m /= static_cast<double>(xs.size());
  double acc = 0.0;
  for (double v : xs) acc += (v - m) * (v - m);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

}  // namespace fairway
