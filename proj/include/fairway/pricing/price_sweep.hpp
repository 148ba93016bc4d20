#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fairway/analysis/metric_matrix.hpp"
#include "fairway/metric_columns.hpp"
#include "fairway/pricing/split.hpp"

namespace fairway {

// One equilibrium per toll level, over a single sampled population so that
// rows differ only in the price. Cost totals are assembled as
// financial + delay so the decomposition is exact, not just close.
inline MetricMatrix price_sweep(const PricingScenario& sc,
                                const std::vector<double>& prices) {
  validate(sc);
  if (prices.empty())
    throw Error("InvalidValue", "price sweep needs at least one price");
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!std::isfinite(prices[i]) || prices[i] < 0.0)
      throw Error("InvalidValue", "prices must be finite and >= 0");
    if (i > 0 && prices[i] < prices[i - 1])
      throw Error("InvalidValue", "prices must be sorted ascending");
  }

  const std::vector<double> vots = sample_vot(sc.vot_population);
  MetricMatrix m;
  m.key_names = {"price_eur"};
  m.metric_names = {"share_a",          "time_a_min",
                    "time_b_min",       "total_time_veh_min",
                    "delay_cost_eur",   "financial_cost_eur",
                    "total_cost_eur"};
  m.provenance = "seed=" + std::to_string(sc.vot_population.seed);

  bool names_done = false;
  for (double p : prices) {
    PricingScenario at_price = sc;
    at_price.price_eur = p;
    SplitResult r;
    try {
      r = equilibrium_split(at_price, vots);
    } catch (const Error& e) {
      // re-tag with the row key so sweep callers see which price failed
      throw Error(e.code(),
                  "price_eur=" + format_double(p) + ": " + error_detail(e));
    }

    double delay_cost = 0.0;
    std::size_t users_on_a = 0;
    for (std::size_t i = 0; i < vots.size(); ++i) {
      delay_cost += vots[i] * (r.per_user_delays.values[i] / 60.0);
      users_on_a += r.on_a[i];
    }
    const double financial_cost = p * static_cast<double>(users_on_a);

    std::vector<double> row = {r.share_a,
                               r.time_a_min,
                               r.time_b_min,
                               total_time_veh_min(at_price, r.share_a),
                               delay_cost,
                               financial_cost,
                               financial_cost + delay_cost};
    const auto cost_block = fairness_columns(r.per_user_costs, "cost_");
    const auto delay_block = fairness_columns(r.per_user_delays, "delay_");
    for (const auto& [name, value] : cost_block) {
      if (!names_done) m.metric_names.push_back(name);
      row.push_back(value);
    }
    for (const auto& [name, value] : delay_block) {
      if (!names_done) m.metric_names.push_back(name);
      row.push_back(value);
    }
    names_done = true;
    m.keys.push_back({p});
    m.values.push_back(std::move(row));
  }
  validate(m);
  return m;
}

}  // namespace fairway
