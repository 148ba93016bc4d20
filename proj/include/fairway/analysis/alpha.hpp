#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "fairway/analysis/metric_matrix.hpp"

namespace fairway {

// Rows whose efficiency is within a relative slack alpha of the best row:
// value >= (1 - alpha) * max. alpha = 0 keeps only the argmax rows, alpha = 1
// keeps everything. Needs max > 0 for "within alpha of best" to mean
// anything.
inline std::vector<std::size_t> alpha_efficient_set(
    const MetricMatrix& m, const std::string& efficiency_column, double alpha) {
  if (!(alpha >= 0.0) || !(alpha <= 1.0))
    throw Error("InvalidValue", "alpha must lie in [0, 1]");
  validate(m);
  const std::vector<double> col = column(m, efficiency_column);
  const double best = *std::max_element(col.begin(), col.end());
  if (!(best > 0.0))
    throw Error("DegenerateEfficiency",
                "max of '" + efficiency_column + "' is not positive");
  const double threshold = (1.0 - alpha) * best;
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < col.size(); ++r)
    if (col[r] >= threshold) out.push_back(r);
  return out;
}

// Share of the evaluated parameter space that stays near-optimal; the gauge
// of how forgiving the tuning problem is.
inline double convexity_ratio(const MetricMatrix& m,
                              const std::string& efficiency_column,
                              double alpha) {
  return static_cast<double>(
             alpha_efficient_set(m, efficiency_column, alpha).size()) /
         static_cast<double>(m.values.size());
}

}  // namespace fairway
