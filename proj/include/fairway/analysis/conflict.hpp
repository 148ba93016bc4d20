#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fairway/analysis/metric_matrix.hpp"

namespace fairway {

// Pearson correlation; equals the cosine similarity of the z-scored columns.
inline double pearson(const std::vector<double>& a,
                      const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw Error("InvalidSpec", "pearson needs two equally sized columns, n >= 2");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0))
    throw Error("DegenerateMetric", "constant column has no correlation");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

// Alignment between a fairness goal and an efficiency goal across the whole
// evaluated parameter space. +1: improving one improves the other; -1: they
// pull in opposite directions.
inline double goal_conflict(const MetricMatrix& m,
                            const std::string& fairness_column,
                            const std::string& efficiency_column) {
  validate(m);
  return pearson(column(m, fairness_column), column(m, efficiency_column));
}

}  // namespace fairway
