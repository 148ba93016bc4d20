#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fairway/analysis/cluster.hpp"
#include "fairway/error.hpp"
#include "fairway/grid/simulation.hpp"
#include "fairway/grid/spec.hpp"
#include "fairway/pricing/scenario.hpp"

namespace fairway {

enum class ExperimentKind { GridSweep, GridSingle, PriceSweep, Equilibrium, Analyze };

inline const char* experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::GridSweep: return "grid-sweep";
    case ExperimentKind::GridSingle: return "grid-run";
    case ExperimentKind::PriceSweep: return "price-sweep";
    case ExperimentKind::Equilibrium: return "wardrop";
    case ExperimentKind::Analyze: return "analyze";
  }
  return "?";
}

// Raw key/value view of a config file. Keys are "section.key" (or bare "key"
// before any section header); every entry remembers its source line so later
// validation can point at it. Parsing is strict: malformed lines, duplicate
// keys, and (at extraction time) unknown keys are all ConfigErrors.
struct ConfigFile {
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
  };
  std::string path;  // for diagnostics; may be "<string>"
  std::map<std::string, Entry> entries;

  bool has(const std::string& key) const { return entries.count(key) != 0; }

  [[noreturn]] void fail(int line, const std::string& detail) const {
    throw Error("ConfigError",
                path + ":" + std::to_string(line) + ": " + detail);
  }
  [[noreturn]] void fail(const std::string& detail) const {
    throw Error("ConfigError", path + ": " + detail);
  }

  const Entry& require(const std::string& key) const {
    auto it = entries.find(key);
    if (it == entries.end()) fail("missing required key '" + key + "'");
    it->second.used = true;
    return it->second;
  }

  const Entry* find(const std::string& key) const {
    auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  int line_of(const std::string& key, int fallback = 0) const {
    auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second.line;
  }

  // Typed getters; each overwrites `out` only when the key is present.
  void get(const std::string& key, std::string& out) const {
    if (const Entry* e = find(key)) out = e->value;
  }
  void get(const std::string& key, bool& out) const {
    if (const Entry* e = find(key)) {
      if (e->value == "true" || e->value == "1") out = true;
      else if (e->value == "false" || e->value == "0") out = false;
      else fail(e->line, "'" + key + "' must be true or false, got '" + e->value + "'");
    }
  }
  void get(const std::string& key, double& out) const {
    if (const Entry* e = find(key)) out = parse_double(key, *e);
  }
  void get(const std::string& key, int& out) const {
    if (const Entry* e = find(key)) {
      double v = parse_double(key, *e);
      if (v != std::floor(v))
        fail(e->line, "'" + key + "' must be an integer, got '" + e->value + "'");
      out = static_cast<int>(v);
    }
  }
  void get(const std::string& key, std::uint64_t& out) const {
    if (const Entry* e = find(key)) {
      try {
        // stoull would silently wrap "-3" around; reject signs up front
        if (e->value.empty() || !std::isdigit(static_cast<unsigned char>(e->value[0])))
          throw std::invalid_argument("");
        size_t pos = 0;
        unsigned long long v = std::stoull(e->value, &pos);
        if (pos != e->value.size()) throw std::invalid_argument("");
        out = v;
      } catch (const std::exception&) {
        fail(e->line, "'" + key + "' must be a non-negative integer, got '" +
                          e->value + "'");
      }
    }
  }

  double parse_double(const std::string& key, const Entry& e) const {
    if (e.value == "inf" || e.value == "infinity")
      return std::numeric_limits<double>::infinity();
    try {
      size_t pos = 0;
      double v = std::stod(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      fail(e.line, "'" + key + "' must be a number, got '" + e.value + "'");
    }
  }
};

inline ConfigFile parse_config_text(const std::string& text,
                                    const std::string& path = "<string>") {
  ConfigFile cfg;
  cfg.path = path;
  std::istringstream in(text);
  std::string raw, section;
  int line_no = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3)
        cfg.fail(line_no, "malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) cfg.fail(line_no, "empty section name");
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos)
      cfg.fail(line_no, "expected 'key = value', got '" + s + "'");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty()) cfg.fail(line_no, "empty key");
    if (value.empty()) cfg.fail(line_no, "empty value for key '" + key + "'");
    std::string full = section.empty() ? key : section + "." + key;
    auto [it, inserted] = cfg.entries.emplace(
        full, ConfigFile::Entry{value, line_no, false});
    if (!inserted)
      cfg.fail(line_no, "duplicate key '" + full + "' (first on line " +
                            std::to_string(it->second.line) + ")");
  }
  return cfg;
}

inline ConfigFile parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("ConfigError", "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

// Comma lists and lo:hi / lo:hi:step ranges. Integer ranges default to step
// 1; real-valued ranges must spell the step out.
inline std::vector<double> parse_number_list(const ConfigFile& cfg,
                                             const std::string& key,
                                             const ConfigFile::Entry& e,
                                             bool integer, double def_step) {
  auto parse_one = [&](const std::string& tok) {
    try {
      size_t pos = 0;
      double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      cfg.fail(e.line, "'" + key + "': '" + tok + "' is not a number");
    }
  };
  std::vector<double> out;
  std::istringstream in(e.value);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto en = item.find_last_not_of(" \t");
    if (b == std::string::npos)
      cfg.fail(e.line, "'" + key + "': empty list element");
    item = item.substr(b, en - b + 1);
    auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_one(item));
      continue;
    }
    auto c2 = item.find(':', c1 + 1);
    double lo = parse_one(item.substr(0, c1));
    double hi, step;
    if (c2 == std::string::npos) {
      hi = parse_one(item.substr(c1 + 1));
      if (def_step <= 0.0)
        cfg.fail(e.line, "'" + key + "': range '" + item +
                             "' needs an explicit step (lo:hi:step)");
      step = def_step;
    } else {
      hi = parse_one(item.substr(c1 + 1, c2 - c1 - 1));
      step = parse_one(item.substr(c2 + 1));
    }
    if (!(step > 0.0)) cfg.fail(e.line, "'" + key + "': step must be > 0");
    if (hi < lo) cfg.fail(e.line, "'" + key + "': range '" + item + "' is empty");
    for (int i = 0;; ++i) {
      double v = lo + step * i;
      if (v > hi + 1e-9) break;
      out.push_back(v);
    }
  }
  if (out.empty()) cfg.fail(e.line, "'" + key + "' lists no values");
  if (integer)
    for (double v : out)
      if (v != std::floor(v))
        cfg.fail(e.line, "'" + key + "' must list integers");
  return out;
}

inline std::vector<std::string> parse_string_list(const ConfigFile::Entry& e) {
  std::vector<std::string> out;
  std::istringstream in(e.value);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto en = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, en - b + 1));
  }
  return out;
}

// Fully-typed experiment description. Exactly one kind; every stochastic
// experiment carries an explicit seed (there is deliberately no wall-clock
// fallback anywhere).
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::GridSweep;
  std::uint64_t seed = 0;

  GridSpec grid;
  SignalPlan plan;
  DemandSpec demand;
  std::vector<int> plan_grid_straight;
  std::vector<int> plan_grid_turn;

  PricingScenario pricing;
  std::vector<double> prices;
  bool dump_users = false;

  std::vector<std::string> analyze_inputs;
  std::vector<double> alphas;
  Linkage linkage = Linkage::Average;
  std::string efficiency_column;  // empty: pick throughput when present

  std::vector<std::string> metrics;  // optional column selection; empty = all
  std::string out_dir = "out";
  int threads = 0;  // 0: one worker per available core
};

namespace detail {

// Re-point a domain validation message at the config line that set the
// offending field. Domain messages name the field, so a substring match
// against the known keys finds the culprit.
[[noreturn]] inline void rethrow_with_line(const ConfigFile& cfg,
                                           const Error& err) {
  const std::string what = err.what();
  const auto sep = what.find(": ");
  const std::string detail =
      sep == std::string::npos ? what : what.substr(sep + 2);
  for (const auto& [key, entry] : cfg.entries) {
    auto dot = key.rfind('.');
    std::string leaf = dot == std::string::npos ? key : key.substr(dot + 1);
    if (detail.find(leaf) != std::string::npos && entry.used)
      throw Error("ConfigError", cfg.path + ":" + std::to_string(entry.line) +
                                     ": " + detail);
  }
  throw Error("ConfigError", cfg.path + ": " + detail);
}

inline void read_grid(const ConfigFile& cfg, GridSpec& g) {
  cfg.get("grid.rows", g.rows);
  cfg.get("grid.cols", g.cols);
  cfg.get("grid.link_length_m", g.link_length_m);
  cfg.get("grid.lanes_per_direction", g.lanes_per_direction);
  cfg.get("grid.free_flow_speed_mps", g.free_flow_speed_mps);
  cfg.get("grid.saturation_flow_veh_per_s_per_lane",
          g.saturation_flow_veh_per_s_per_lane);
  cfg.get("grid.turn_flow_factor", g.turn_flow_factor);
  cfg.get("grid.entrance_count", g.entrance_count);
  cfg.get("grid.stub_length_m", g.stub_length_m);
  cfg.get("grid.jam_spacing_m", g.jam_spacing_m);
  std::string pattern = "straight";
  cfg.get("grid.route_pattern", pattern);
  if (pattern == "straight")
    g.route_pattern = RoutePattern::StraightAcross;
  else if (pattern == "center-turn")
    g.route_pattern = RoutePattern::CenterTurn;
  else
    cfg.fail(cfg.line_of("grid.route_pattern"),
             "route_pattern must be 'straight' or 'center-turn', got '" +
                 pattern + "'");
}

inline void read_demand(const ConfigFile& cfg, DemandSpec& d) {
  cfg.get("demand.flow_per_entrance_veh_per_h", d.flow_per_entrance_veh_per_h);
  cfg.get("demand.warmup_s", d.warmup_s);
  cfg.get("demand.horizon_s", d.horizon_s);
  cfg.get("demand.patience_s", d.patience_s);
}

inline void read_route(const ConfigFile& cfg, const std::string& section,
                       RouteSpec& r) {
  cfg.get(section + ".free_flow_time_min", r.free_flow_time_min);
  cfg.get(section + ".capacity_veh_per_h", r.capacity_veh_per_h);
  cfg.get(section + ".bpr_alpha", r.bpr_alpha);
  cfg.get(section + ".bpr_beta", r.bpr_beta);
}

inline void read_vot(const ConfigFile& cfg, VotDistribution& v,
                     std::uint64_t seed) {
  std::string kind = "lognormal";
  cfg.get("vot.kind", kind);
  if (kind == "lognormal") {
    double mean = 30.0, sigma = 0.5;
    cfg.get("vot.mean_eur_per_h", mean);
    cfg.get("vot.sigma_log", sigma);
    v = VotDistribution::lognormal_from_mean(mean, sigma);
  } else if (kind == "uniform") {
    double lo = 10.0, hi = 50.0;
    cfg.get("vot.lo", lo);
    cfg.get("vot.hi", hi);
    v = VotDistribution::uniform(lo, hi);
  } else if (kind == "point") {
    double value = 30.0;
    cfg.get("vot.value", value);
    v = VotDistribution::point(value);
  } else {
    cfg.fail(cfg.line_of("vot.kind"),
             "'vot.kind' must be lognormal, uniform, or point, got '" + kind + "'");
  }
  cfg.get("vot.sample_count", v.sample_count);
  v.seed = seed;
}

}  // namespace detail

// Turn a parsed file into a validated ExperimentConfig. Throws ConfigError
// (with file:line where attributable) on every schema or domain violation.
inline ExperimentConfig make_experiment_config(const ConfigFile& cfg) {
  ExperimentConfig ec;

  const auto& kind_entry = cfg.require("experiment");
  const std::string kind = kind_entry.value;
  if (kind == "grid-sweep") ec.kind = ExperimentKind::GridSweep;
  else if (kind == "grid-run") ec.kind = ExperimentKind::GridSingle;
  else if (kind == "price-sweep") ec.kind = ExperimentKind::PriceSweep;
  else if (kind == "wardrop") ec.kind = ExperimentKind::Equilibrium;
  else if (kind == "analyze") ec.kind = ExperimentKind::Analyze;
  else
    cfg.fail(kind_entry.line,
             "'experiment' must be one of grid-sweep, grid-run, price-sweep, "
             "wardrop, analyze; got '" + kind + "'");

  if (ec.kind != ExperimentKind::Analyze) (void)cfg.require("seed");
  cfg.get("seed", ec.seed);

  cfg.get("output.dir", ec.out_dir);
  if (const auto* e = cfg.find("output.metrics")) ec.metrics = parse_string_list(*e);
  cfg.get("threads", ec.threads);
  if (ec.threads < 0)
    cfg.fail(cfg.line_of("threads"), "'threads' must be >= 0 (0 = all cores)");

  try {
    switch (ec.kind) {
      case ExperimentKind::GridSweep: {
        detail::read_grid(cfg, ec.grid);
        detail::read_demand(cfg, ec.demand);
        ec.demand.seed = ec.seed;
        auto axis = [&](const std::string& key, std::vector<int>& out) {
          if (const auto* e = cfg.find(key)) {
            for (double v : parse_number_list(cfg, key, *e, true, 1.0))
              out.push_back(static_cast<int>(v));
          } else {
            for (int g = 1; g <= 40; ++g) out.push_back(g);
          }
        };
        axis("plan_grid.green_straight_s", ec.plan_grid_straight);
        axis("plan_grid.green_turn_s", ec.plan_grid_turn);
        cfg.get("plan_grid.yellow_s", ec.plan.yellow_s);
        validate(ec.grid);
        validate(ec.demand);
        for (int g : ec.plan_grid_straight)
          validate(SignalPlan{g, 1, ec.plan.yellow_s});
        for (int g : ec.plan_grid_turn) validate(SignalPlan{1, g, ec.plan.yellow_s});
        break;
      }
      case ExperimentKind::GridSingle: {
        detail::read_grid(cfg, ec.grid);
        detail::read_demand(cfg, ec.demand);
        ec.demand.seed = ec.seed;
        cfg.get("plan.green_straight_s", ec.plan.green_straight_s);
        cfg.get("plan.green_turn_s", ec.plan.green_turn_s);
        cfg.get("plan.yellow_s", ec.plan.yellow_s);
        validate(ec.grid);
        validate(ec.demand);
        validate(ec.plan);
        break;
      }
      case ExperimentKind::PriceSweep:
      case ExperimentKind::Equilibrium: {
        detail::read_route(cfg, "route_a", ec.pricing.route_a);
        detail::read_route(cfg, "route_b", ec.pricing.route_b);
        cfg.get("pricing.demand_veh_per_h", ec.pricing.demand_veh_per_h);
        detail::read_vot(cfg, ec.pricing.vot_population, ec.seed);
        if (ec.kind == ExperimentKind::PriceSweep) {
          ec.prices = {};
          if (const auto* e = cfg.find("pricing.prices_eur")) {
            ec.prices = parse_number_list(cfg, "pricing.prices_eur", *e, false, 0.0);
          } else {
            for (int i = 0; i <= 24; ++i) ec.prices.push_back(0.25 * i);
          }
          for (double p : ec.prices)
            if (!(std::isfinite(p) && p >= 0.0))
              cfg.fail(cfg.line_of("pricing.prices_eur"),
                       "'pricing.prices_eur' must all be >= 0");
        } else {
          cfg.get("pricing.price_eur", ec.pricing.price_eur);
          cfg.get("pricing.dump_users", ec.dump_users);
        }
        validate(ec.pricing);
        break;
      }
      case ExperimentKind::Analyze: {
        const auto& in = cfg.require("analyze.inputs");
        ec.analyze_inputs = parse_string_list(in);
        if (ec.analyze_inputs.empty())
          cfg.fail(in.line, "'analyze.inputs' lists no files");
        ec.alphas = {0.1};
        if (const auto* e = cfg.find("analyze.alphas"))
          ec.alphas = parse_number_list(cfg, "analyze.alphas", *e, false, 0.0);
        for (double a : ec.alphas)
          if (!(a >= 0.0 && a <= 1.0))
            cfg.fail(cfg.line_of("analyze.alphas"),
                     "'analyze.alphas' must lie in [0,1]");
        std::string linkage = "average";
        cfg.get("analyze.linkage", linkage);
        if (linkage == "average") ec.linkage = Linkage::Average;
        else if (linkage == "single") ec.linkage = Linkage::Single;
        else if (linkage == "complete") ec.linkage = Linkage::Complete;
        else
          cfg.fail(cfg.line_of("analyze.linkage"),
                   "'analyze.linkage' must be average, single, or complete");
        cfg.get("analyze.efficiency", ec.efficiency_column);
        break;
      }
    }
  } catch (const Error& err) {
    if (err.code() == "ConfigError") throw;
    detail::rethrow_with_line(cfg, err);
  }

  if (!ec.metrics.empty() && (ec.kind == ExperimentKind::GridSingle ||
                              ec.kind == ExperimentKind::Equilibrium))
    cfg.fail(cfg.line_of("output.metrics"),
             "'output.metrics' does not apply to experiment '" +
                 std::string(experiment_name(ec.kind)) + "'");

  for (const auto& [key, entry] : cfg.entries)
    if (!entry.used)
      cfg.fail(entry.line, "unknown key '" + key + "' for experiment '" +
                               std::string(experiment_name(ec.kind)) + "'");
  return ec;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  return make_experiment_config(parse_config_file(path));
}

}  // namespace fairway
