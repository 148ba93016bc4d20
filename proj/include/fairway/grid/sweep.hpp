#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fairway/analysis/metric_matrix.hpp"
#include "fairway/grid/simulation.hpp"
#include "fairway/metric_columns.hpp"

namespace fairway {

namespace grid_detail {

// Column block for one evaluated plan; shared by the serial and threaded
// sweep paths so both produce the same matrix.
inline std::vector<std::pair<std::string, double>> sweep_cell(
    const Network& net, const DemandSpec& demand, int gs, int gt,
    int yellow_s) {
  SignalPlan plan;
  plan.green_straight_s = gs;
  plan.green_turn_s = gt;
  plan.yellow_s = yellow_s;
  validate(plan);
  DemandSpec row_demand = demand;
  row_demand.seed = mix_seed(demand.seed, static_cast<std::uint64_t>(gs),
                             static_cast<std::uint64_t>(gt));
  const SimulationResult res = run(net, plan, row_demand);
  const Allocation delays = censored_delay_allocation(res);
  auto cols = fairness_columns(delays);
  cols.emplace_back("mean_delay_s", mean(delays));
  cols.emplace_back("throughput_veh_per_h", res.throughput_veh_per_h);
  cols.emplace_back("total_delay_s", sum(delays));
  std::sort(cols.begin(), cols.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return cols;
}

}  // namespace grid_detail

// One simulation per (green_straight, green_turn) pair. Every cell reseeds
// from mix_seed(base, g_straight, g_turn), so any single cell reproduces
// bit-for-bit without running the rest of the sweep — which also makes the
// matrix independent of the worker count. Delay statistics use the censored
// sample (see censored_delay_allocation) so fairness columns stay defined on
// oversaturated plans where nobody finishes in time. A failing cell reports
// its (g_straight, g_turn) key in the error detail.
inline MetricMatrix sweep(const GridSpec& gspec, const DemandSpec& demand,
                          const std::vector<int>& greens_straight_s,
                          const std::vector<int>& greens_turn_s,
                          int yellow_s = 3, int threads = 1) {
  if (greens_straight_s.empty() || greens_turn_s.empty())
    throw Error("InvalidSpec", "sweep needs at least one green time per axis");
  if (threads < 1) throw Error("InvalidValue", "sweep needs threads >= 1");
  const Network net = build_network(gspec);
  validate(demand);

  std::vector<std::pair<int, int>> cells;
  cells.reserve(greens_straight_s.size() * greens_turn_s.size());
  for (int gs : greens_straight_s)
    for (int gt : greens_turn_s) cells.emplace_back(gs, gt);

  using Cols = std::vector<std::pair<std::string, double>>;
  std::vector<Cols> results(cells.size());
  std::vector<std::exception_ptr> failures(cells.size());
  const auto eval = [&](std::size_t i) {
    const auto [gs, gt] = cells[i];
    try {
      results[i] = grid_detail::sweep_cell(net, demand, gs, gt, yellow_s);
    } catch (const Error& e) {
      failures[i] = std::make_exception_ptr(Error(
          e.code(), "g_straight=" + std::to_string(gs) + " g_turn=" +
                        std::to_string(gt) + ": " + error_detail(e)));
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), cells.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) eval(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) eval(i);
      });
    for (auto& t : pool) t.join();
  }
  // first failing cell in row-major order wins, whatever the schedule was
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);

  MetricMatrix m;
  m.key_names = {"g_straight", "g_turn"};
  m.provenance = "seed=" + std::to_string(demand.seed);
  for (const auto& [name, value] : results.front())
    m.metric_names.push_back(name);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::vector<double> row;
    row.reserve(results[i].size());
    for (std::size_t c = 0; c < results[i].size(); ++c) {
      if (c >= m.metric_names.size() ||
          results[i][c].first != m.metric_names[c])
        throw Error("InvalidSpec", "sweep cells disagree on metric columns");
      row.push_back(results[i][c].second);
    }
    m.keys.push_back({static_cast<double>(cells[i].first),
                      static_cast<double>(cells[i].second)});
    m.values.push_back(std::move(row));
  }
  validate(m);
  return m;
}

}  // namespace fairway
