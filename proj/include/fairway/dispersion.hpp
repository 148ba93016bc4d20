#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "fairway/allocation.hpp"

namespace fairway {

// Dispersion / concentration metrics over an allocation. StdDev and Range
// carry the allocation's unit; the rest are dimensionless. The relative
// metrics (CoV, Gini, Jain, Atkinson, Theil) need mean > 0; individual zero
// values are fine.
struct DispersionMetric {
  enum class Kind {
    StdDev,
    CoefficientOfVariation,
    Range,
    Gini,
    JainIndex,
    Atkinson,
    Theil,
  };

  Kind kind = Kind::StdDev;
  double atkinson_epsilon = 0.5;  // inequality aversion; > 0 and != 1

  static DispersionMetric std_dev() { return {Kind::StdDev, 0.0}; }
  static DispersionMetric cov() { return {Kind::CoefficientOfVariation, 0.0}; }
  static DispersionMetric range() { return {Kind::Range, 0.0}; }
  static DispersionMetric gini() { return {Kind::Gini, 0.0}; }
  static DispersionMetric jain() { return {Kind::JainIndex, 0.0}; }
  static DispersionMetric atkinson(double epsilon) {
    return {Kind::Atkinson, epsilon};
  }
  static DispersionMetric theil() { return {Kind::Theil, 0.0}; }
};

namespace detail {

inline double require_positive_mean(const Allocation& a, const char* metric) {
  const double m = mean(a);
  if (!(m > 0.0))
    throw Error("DegenerateMean",
                std::string(metric) + " needs mean > 0, got mean = 0");
  return m;
}

}  // namespace detail

// Aggregations iterate the ascending value order (see allocation.hpp), so
// every metric is bit-identical under permutation of individuals. Indices
// with hard mathematical bounds are clamped to them; rounding may otherwise
// land a hair outside (e.g. Atkinson of a singleton at -2e-16).
inline double dispersion(const Allocation& a, const DispersionMetric& metric) {
  validate(a);
  const double n = static_cast<double>(a.values.size());
  switch (metric.kind) {
    case DispersionMetric::Kind::StdDev:
      return population_stddev(a);
    case DispersionMetric::Kind::CoefficientOfVariation: {
      const double m = detail::require_positive_mean(a, "CoV");
      return population_stddev(a) / m;
    }
    case DispersionMetric::Kind::Range: {
      auto [lo, hi] = std::minmax_element(a.values.begin(), a.values.end());
      return *hi - *lo;
    }
    case DispersionMetric::Kind::Gini: {
      // sorted form: sum_i (2i - n - 1) x_(i) / (n^2 mu), i 1-based
      // ascending; equals the pairwise |x_i - x_j| sum over ordered pairs
      // divided by 2 n^2 mu (the O(n^2) oracle in the tests)
      const double m = detail::require_positive_mean(a, "Gini");
      const std::vector<double> xs = sorted_values(a);
      double acc = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i)
        acc += (2.0 * static_cast<double>(i + 1) - n - 1.0) * xs[i];
      return std::max(0.0, acc / (n * n * m));
    }
    case DispersionMetric::Kind::JainIndex: {
      detail::require_positive_mean(a, "Jain");
      double s = 0.0, sq = 0.0;
      for (double v : sorted_values(a)) {
        s += v;
        sq += v * v;
      }
      return std::clamp(s * s / (n * sq), 0.0, 1.0);
    }
    case DispersionMetric::Kind::Atkinson: {
      const double eps = metric.atkinson_epsilon;
      if (!(eps > 0.0) || eps == 1.0 || !std::isfinite(eps))
        throw Error("InvalidValue", "Atkinson epsilon must be > 0 and != 1");
      const double m = detail::require_positive_mean(a, "Atkinson");
      // equally-distributed-equivalent value; for eps > 1 a zero entry drives
      // the EDE to 0 and the index to its supremum 1
      double acc = 0.0;
      for (double v : sorted_values(a)) acc += std::pow(v, 1.0 - eps);
      const double ede = std::pow(acc / n, 1.0 / (1.0 - eps));
      return std::clamp(1.0 - ede / m, 0.0, 1.0);
    }
    case DispersionMetric::Kind::Theil: {
      const double m = detail::require_positive_mean(a, "Theil");
      double acc = 0.0;
      for (double v : sorted_values(a)) {
        if (v > 0.0) {
          const double r = v / m;
          acc += r * std::log(r);  // 0 * log 0 := 0
        }
      }
      return std::max(0.0, acc / n);
    }
  }
  throw Error("InvalidValue", "unknown dispersion metric");
}

// Optional nonlinear re-weighting of waiting time: perceived = delay^exponent.
// exponent 1 is the identity; exponent > 1 makes long waits loom larger.
inline double perceived_delay(double delay, double exponent = 1.0) {
  if (!std::isfinite(delay) || delay < 0.0)
    throw Error("InvalidValue", "delay must be finite and non-negative");
  if (!std::isfinite(exponent) || exponent < 1.0)
    throw Error("InvalidValue", "perception exponent must be finite and >= 1");
  return std::pow(delay, exponent);
}

}  // namespace fairway
