#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately written the slow, obvious way (pairwise
// loops, direct formula transcription) and must NOT call into fairway::.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline double sum(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

inline double mean(const std::vector<double>& xs) {
  return sum(xs) / static_cast<double>(xs.size());
}

inline double stddev_population(const std::vector<double>& xs) {
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

// ordered-pair double sum, the textbook Gini definition
inline double gini_pairwise(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) acc += std::fabs(xs[i] - xs[j]);
  return acc / (2.0 * static_cast<double>(n) * static_cast<double>(n) *
                mean(xs));
}

inline double jain_direct(const std::vector<double>& xs) {
  const double s = sum(xs);
  double sq = 0.0;
  for (double x : xs) sq += x * x;
  return s * s / (static_cast<double>(xs.size()) * sq);
}

inline double atkinson_direct(const std::vector<double>& xs, double eps) {
  const double n = static_cast<double>(xs.size());
  double acc = 0.0;
  for (double x : xs) acc += std::pow(x, 1.0 - eps);
  return 1.0 - std::pow(acc / n, 1.0 / (1.0 - eps)) / mean(xs);
}

inline double theil_direct(const std::vector<double>& xs) {
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs)
    if (x > 0.0) acc += (x / m) * std::log(x / m);
  return acc / static_cast<double>(xs.size());
}

inline double pearson_naive(const std::vector<double>& a,
                            const std::vector<double>& b) {
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace oracle
