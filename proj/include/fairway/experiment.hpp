#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fairway/analysis/alpha.hpp"
#include "fairway/analysis/cluster.hpp"
#include "fairway/analysis/conflict.hpp"
#include "fairway/analysis/metric_matrix.hpp"
#include "fairway/config.hpp"
#include "fairway/grid/sweep.hpp"
#include "fairway/pricing/price_sweep.hpp"

namespace fairway {

// FAIRWAY_LOG (any value except empty/0/off/quiet) switches on progress notes
// on stderr. Result summaries always go to the run's output stream instead.
inline bool log_enabled() {
  const char* v = std::getenv("FAIRWAY_LOG");
  if (!v) return false;
  const std::string s(v);
  return !s.empty() && s != "0" && s != "off" && s != "quiet";
}

inline void log_note(const std::string& msg) {
  if (log_enabled()) std::cerr << "fairway: " << msg << "\n";
}

// Temp file + rename, so a crash never leaves a truncated file under the
// final name; a trailing newline is guaranteed.
inline void write_file_atomic(const std::filesystem::path& path,
                              std::string content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec)
      throw Error("IoError", "cannot create " + path.parent_path().string() +
                                 ": " + ec.message());
  }
  if (content.empty() || content.back() != '\n') content += '\n';
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error("IoError", "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error("IoError", "short write to " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw Error("IoError", "cannot rename " + tmp.string() + " to " +
                               path.string() + ": " + ec.message());
  }
}

// Names of the canonical fairness block, taken from the block itself so the
// two never drift apart.
inline const std::vector<std::string>& fairness_column_stems() {
  static const std::vector<std::string> kStems = [] {
    Allocation a;
    a.kind = ResourceKind::Delay;
    a.values = {1.0, 2.0};
    std::vector<std::string> out;
    for (const auto& [name, value] : fairness_columns(a)) out.push_back(name);
    return out;
  }();
  return kStems;
}

inline bool is_fairness_column(const std::string& name) {
  for (const auto& stem : fairness_column_stems())
    if (name == stem || name == "cost_" + stem || name == "delay_" + stem)
      return true;
  return false;
}

// Aggregate outcome columns a planner would optimize directly; the goal-
// conflict table correlates every fairness column against each of these.
inline const std::set<std::string>& efficiency_column_names() {
  static const std::set<std::string> kCols = {
      "throughput_veh_per_h", "total_delay_s", "total_time_veh_min",
      "total_cost_eur"};
  return kCols;
}

// Element-wise mean of same-shaped matrices: the canonical way to average
// sweep outputs across seeds. Inputs must agree on columns, row count, and
// row keys; `labels` names each input (usually file paths) for diagnostics.
// Mismatches are ConfigErrors: they mean the experiment listed the wrong
// files, not that a computation failed.
inline MetricMatrix merge_matrices(const std::vector<MetricMatrix>& inputs,
                                   const std::vector<std::string>& labels) {
  if (inputs.empty()) throw Error("InvalidSpec", "nothing to merge");
  if (labels.size() != inputs.size())
    throw Error("InvalidSpec", "merge needs one label per input");
  for (const auto& m : inputs) validate(m);
  const MetricMatrix& base = inputs.front();
  MetricMatrix out = base;

  const auto all_columns = [](const MetricMatrix& m) {
    std::vector<std::string> c = m.key_names;
    c.insert(c.end(), m.metric_names.begin(), m.metric_names.end());
    return c;
  };
  const auto base_cols = all_columns(base);
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    const auto cols = all_columns(inputs[i]);
    if (cols != base_cols) {
      const std::set<std::string> have(cols.begin(), cols.end());
      const std::set<std::string> want(base_cols.begin(), base_cols.end());
      std::string missing, extra;
      for (const auto& c : want)
        if (!have.count(c)) missing += (missing.empty() ? "" : ", ") + c;
      for (const auto& c : have)
        if (!want.count(c)) extra += (extra.empty() ? "" : ", ") + c;
      std::string diff;
      if (!missing.empty()) diff += " missing [" + missing + "]";
      if (!extra.empty()) diff += " extra [" + extra + "]";
      if (diff.empty()) diff = " same columns in a different order";
      throw Error("ConfigError",
                  labels[i] + ": columns do not match " + labels[0] + ":" + diff);
    }
    if (inputs[i].values.size() != base.values.size())
      throw Error("ConfigError",
                  labels[i] + ": " + std::to_string(inputs[i].values.size()) +
                      " rows, but " + labels[0] + " has " +
                      std::to_string(base.values.size()));
    for (std::size_t r = 0; r < base.keys.size(); ++r)
      if (inputs[i].keys[r] != base.keys[r])
        throw Error("ConfigError", labels[i] + ": row " +
                                       std::to_string(r + 1) +
                                       " keys differ from " + labels[0]);
  }

  const double k = static_cast<double>(inputs.size());
  for (std::size_t r = 0; r < out.values.size(); ++r)
    for (std::size_t c = 0; c < out.values[r].size(); ++c) {
      double s = 0.0;
      for (const auto& m : inputs) s += m.values[r][c];
      out.values[r][c] = s / k;
    }

  std::vector<std::string> lines;
  if (inputs.size() > 1)
    lines.push_back("mean of " + std::to_string(inputs.size()) + " inputs");
  for (const auto& m : inputs) {
    std::istringstream in(m.provenance);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  out.provenance.clear();
  for (const auto& l : lines)
    out.provenance += (out.provenance.empty() ? "" : "\n") + l;
  return out;
}

namespace detail {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// A metric selection that fails is a config mistake (the name came from
// output.metrics), so it must exit as one.
inline MetricMatrix select_or_config_error(
    const MetricMatrix& m, const std::vector<std::string>& names) {
  try {
    return select_metrics(m, names);
  } catch (const Error& e) {
    if (e.code() == "UnknownMetric")
      throw Error("ConfigError", "output.metrics: " + error_detail(e));
    throw;
  }
}

inline void write_matrix_csv(const std::filesystem::path& path,
                             const MetricMatrix& m, std::ostream& out) {
  std::ostringstream os;
  write_csv(m, os);
  write_file_atomic(path, os.str());
  out << "wrote " << path.string() << ": " << m.values.size() << " rows, "
      << m.key_names.size() + m.metric_names.size() << " columns\n";
}

inline void run_grid_sweep(const ExperimentConfig& ec,
                           const std::filesystem::path& dir,
                           std::ostream& out) {
  const int threads = resolve_threads(ec.threads);
  log_note("grid sweep: " + std::to_string(ec.plan_grid_straight.size()) +
           " x " + std::to_string(ec.plan_grid_turn.size()) + " plans, " +
           std::to_string(threads) + " worker(s)");
  const MetricMatrix m = select_or_config_error(
      sweep(ec.grid, ec.demand, ec.plan_grid_straight, ec.plan_grid_turn,
            ec.plan.yellow_s, threads),
      ec.metrics);
  write_matrix_csv(dir / "grid_sweep.csv", m, out);
}

inline void run_grid_single(const ExperimentConfig& ec,
                            const std::filesystem::path& dir,
                            std::ostream& out) {
  const Network net = build_network(ec.grid);
  const SimulationResult res = run(net, ec.plan, ec.demand);

  std::ostringstream os;
  os << "# seed=" << ec.demand.seed << "\n";
  os << "vehicle_id,route_id,entry_time_s,exit_time_s,free_flow_time_s,"
        "diverted,delay_s\n";
  for (const auto& rec : res.vehicle_records) {
    os << rec.vehicle_id << ',' << rec.route_id << ','
       << format_double(rec.entry_time_s) << ','
       << (rec.exit_time_s ? format_double(*rec.exit_time_s) : "") << ','
       << format_double(rec.free_flow_time_s) << ',' << (rec.diverted ? 1 : 0)
       << ',' << (rec.delay_s ? format_double(*rec.delay_s) : "") << "\n";
  }
  write_file_atomic(dir / "vehicles.csv", os.str());
  out << "wrote " << (dir / "vehicles.csv").string() << ": "
      << res.vehicle_records.size() << " rows, 7 columns\n";

  const Allocation delays = censored_delay_allocation(res);
  std::ostringstream ss;
  ss << "spawned = " << res.spawned << "\n"
     << "completed = " << res.completed << "\n"
     << "diverted = " << res.diverted << "\n"
     << "remaining = " << res.remaining << "\n"
     << "throughput_veh_per_h = " << format_double(res.throughput_veh_per_h)
     << "\n"
     << "mean_delay_s = " << format_double(mean(delays)) << "\n"
     << "total_delay_s = " << format_double(sum(delays)) << "\n";
  write_file_atomic(dir / "summary.txt", ss.str());
  out << "wrote " << (dir / "summary.txt").string() << ": 7 lines\n";
}

inline void run_price_sweep(const ExperimentConfig& ec,
                            const std::filesystem::path& dir,
                            std::ostream& out) {
  log_note("price sweep: " + std::to_string(ec.prices.size()) + " prices");
  const MetricMatrix m =
      select_or_config_error(price_sweep(ec.pricing, ec.prices), ec.metrics);
  write_matrix_csv(dir / "price_sweep.csv", m, out);
}

inline void run_equilibrium(const ExperimentConfig& ec,
                            const std::filesystem::path& dir,
                            std::ostream& out) {
  const std::vector<double> vots = sample_vot(ec.pricing.vot_population);
  const SplitResult r = equilibrium_split(ec.pricing, vots);
  std::size_t users_on_a = 0;
  for (unsigned char f : r.on_a) users_on_a += f;

  std::ostringstream os;
  os << "price_eur = " << format_double(ec.pricing.price_eur) << "\n"
     << "share_a = " << format_double(r.share_a) << "\n"
     << "time_a_min = " << format_double(r.time_a_min) << "\n"
     << "time_b_min = " << format_double(r.time_b_min) << "\n"
     << "residual = " << format_double(r.residual) << "\n"
     << "total_time_veh_min = "
     << format_double(total_time_veh_min(ec.pricing, r.share_a)) << "\n"
     << "users = " << vots.size() << "\n"
     << "users_on_a = " << users_on_a << "\n";
  write_file_atomic(dir / "equilibrium.txt", os.str());
  out << "wrote " << (dir / "equilibrium.txt").string() << ": 8 lines\n";

  if (ec.dump_users) {
    std::ostringstream us;
    us << "# seed=" << ec.pricing.vot_population.seed << "\n";
    us << "user_id,vot_eur_per_h,on_a,delay_min,cost_eur\n";
    for (std::size_t i = 0; i < vots.size(); ++i)
      us << i << ',' << format_double(vots[i]) << ','
         << static_cast<int>(r.on_a[i]) << ','
         << format_double(r.per_user_delays.values[i]) << ','
         << format_double(r.per_user_costs.values[i]) << "\n";
    write_file_atomic(dir / "users.csv", us.str());
    out << "wrote " << (dir / "users.csv").string() << ": " << vots.size()
        << " rows, 5 columns\n";
  }
}

inline void run_analyze(const ExperimentConfig& ec,
                        const std::filesystem::path& dir, std::ostream& out) {
  std::vector<MetricMatrix> inputs;
  inputs.reserve(ec.analyze_inputs.size());
  for (const auto& path : ec.analyze_inputs) {
    log_note("reading " + path);
    inputs.push_back(read_csv(path));
  }
  const MetricMatrix m = select_or_config_error(
      merge_matrices(inputs, ec.analyze_inputs), ec.metrics);
  write_matrix_csv(dir / "merged.csv", m, out);

  std::string eff = ec.efficiency_column;
  if (!eff.empty()) {
    try {
      (void)column_index(m, eff);
    } catch (const Error& e) {
      if (e.code() == "UnknownMetric")
        throw Error("ConfigError", "analyze.efficiency: " + error_detail(e));
      throw;
    }
  } else if (std::count(m.metric_names.begin(), m.metric_names.end(),
                        std::string("throughput_veh_per_h")) > 0) {
    eff = "throughput_veh_per_h";
  }
  if (eff.empty()) {
    // alpha-efficiency needs a bigger-is-better column; nothing suitable here
    log_note("no efficiency column requested or detected; no alpha report");
  } else {
    std::ostringstream os;
    os << "alpha,efficiency_column,efficient_rows,total_rows,convexity_ratio\n";
    for (double a : ec.alphas) {
      const auto rows = alpha_efficient_set(m, eff, a);
      os << format_double(a) << ',' << eff << ',' << rows.size() << ','
         << m.values.size() << ','
         << format_double(static_cast<double>(rows.size()) /
                          static_cast<double>(m.values.size()))
         << "\n";
    }
    write_file_atomic(dir / "alpha_report.csv", os.str());
    out << "wrote " << (dir / "alpha_report.csv").string() << ": "
        << ec.alphas.size() << " rows, 5 columns\n";
  }

  std::vector<std::string> fair, effs;
  for (const auto& n : m.metric_names) {
    if (is_fairness_column(n)) fair.push_back(n);
    if (efficiency_column_names().count(n) > 0 || (!eff.empty() && n == eff))
      effs.push_back(n);
  }
  if (fair.empty() || effs.empty()) {
    log_note("no fairness/efficiency column pair; no conflict table");
  } else {
    std::ostringstream os;
    os << "fairness_column";
    for (const auto& e : effs) os << ',' << e;
    os << "\n";
    for (const auto& f : fair) {
      os << f;
      for (const auto& e : effs) {
        try {
          os << ',' << format_double(goal_conflict(m, f, e));
        } catch (const Error& err) {
          if (err.code() == "DegenerateMetric")
            throw Error("DegenerateMetric",
                        f + " vs " + e + ": " + error_detail(err));
          throw;
        }
      }
      os << "\n";
    }
    write_file_atomic(dir / "conflict_table.csv", os.str());
    out << "wrote " << (dir / "conflict_table.csv").string() << ": "
        << fair.size() << " rows, " << effs.size() + 1 << " columns\n";
  }

  const Dendrogram d = cluster_metrics(m, {}, ec.linkage);
  write_file_atomic(dir / "dendrogram.json", dendrogram_json(d).dump(2));
  out << "wrote " << (dir / "dendrogram.json").string() << ": "
      << d.leaves.size() << " leaves, " << d.merges.size() << " merges\n";
  write_file_atomic(dir / "dendrogram.newick", to_newick(d));
  out << "wrote " << (dir / "dendrogram.newick").string() << ": 1 tree\n";
}

}  // namespace detail

// Executes a validated experiment; every result file is written atomically
// and announced with a one-line summary on `out`. Throws Error on failure.
inline void run_experiment(const ExperimentConfig& ec, std::ostream& out) {
  const std::filesystem::path dir(ec.out_dir);
  log_note(std::string("experiment ") + experiment_name(ec.kind) + " -> " +
           dir.string());
  switch (ec.kind) {
    case ExperimentKind::GridSweep: detail::run_grid_sweep(ec, dir, out); break;
    case ExperimentKind::GridSingle: detail::run_grid_single(ec, dir, out); break;
    case ExperimentKind::PriceSweep: detail::run_price_sweep(ec, dir, out); break;
    case ExperimentKind::Equilibrium: detail::run_equilibrium(ec, dir, out); break;
    case ExperimentKind::Analyze: detail::run_analyze(ec, dir, out); break;
  }
}

// File-to-exit-code entry point: 0 on success, 1 when the config (or the
// relationship between config and inputs) is at fault, 2 when a run or an
// output write failed.
inline int run_experiment(const std::string& config_path, std::ostream& out,
                          std::ostream& err) {
  try {
    const ExperimentConfig ec = load_experiment_config(config_path);
    run_experiment(ec, out);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == "ConfigError" ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace fairway
