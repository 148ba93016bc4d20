#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fairway/dispersion.hpp"
#include "fairway/welfare.hpp"

namespace fairway {

// The canonical fairness column block emitted into result tables. Jain is
// stored as its complement (1 - index) so that, like every other column in
// the block, larger means more uneven. Names are alphabetical; callers
// prepend a family prefix ("cost_", "delay_") where two allocations share a
// table.
inline std::vector<std::pair<std::string, double>> fairness_columns(
    const Allocation& a, const std::string& prefix = "",
    double atkinson_epsilon = 0.5) {
  std::vector<std::pair<std::string, double>> out;
  out.emplace_back(prefix + "atkinson",
                   dispersion(a, DispersionMetric::atkinson(atkinson_epsilon)));
  out.emplace_back(prefix + "cov", dispersion(a, DispersionMetric::cov()));
  out.emplace_back(prefix + "gini", dispersion(a, DispersionMetric::gini()));
  out.emplace_back(prefix + "jain_complement",
                   1.0 - dispersion(a, DispersionMetric::jain()));
  out.emplace_back(prefix + "range", dispersion(a, DispersionMetric::range()));
  out.emplace_back(prefix + "stddev",
                   dispersion(a, DispersionMetric::std_dev()));
  out.emplace_back(prefix + "theil", dispersion(a, DispersionMetric::theil()));
  out.emplace_back(prefix + "welfare_egalitarian",
                   welfare(a, Ideology::Egalitarian));
  out.emplace_back(prefix + "welfare_harsanyian",
                   welfare(a, Ideology::Harsanyian));
  out.emplace_back(prefix + "welfare_rawlsian",
                   welfare(a, Ideology::Rawlsian));
  out.emplace_back(prefix + "welfare_utilitarian",
                   welfare(a, Ideology::Utilitarian));
  return out;
}

}  // namespace fairway
