#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fairway/error.hpp"
#include "fairway/rng.hpp"

namespace fairway {

enum class RouteName { A, B };

inline const char* route_name(RouteName n) {
  return n == RouteName::A ? "A" : "B";
}

// One alternative of the two-route corridor, congested via the BPR curve
// t = t0 * (1 + alpha * (q / capacity)^beta).
struct RouteSpec {
  RouteName name = RouteName::A;
  double free_flow_time_min = 0.0;
  double capacity_veh_per_h = 0.0;
  double bpr_alpha = 0.15;
  double bpr_beta = 4.0;
};

inline void validate(const RouteSpec& r) {
  const std::string who = std::string("route ") + route_name(r.name);
  if (!(std::isfinite(r.free_flow_time_min) && r.free_flow_time_min > 0.0))
    throw Error("InvalidSpec", who + ": free_flow_time_min must be > 0");
  if (!(std::isfinite(r.capacity_veh_per_h) && r.capacity_veh_per_h > 0.0))
    throw Error("InvalidSpec", who + ": capacity_veh_per_h must be > 0");
  if (!(std::isfinite(r.bpr_alpha) && r.bpr_alpha >= 0.0))
    throw Error("InvalidSpec", who + ": bpr_alpha must be >= 0");
  if (!(std::isfinite(r.bpr_beta) && r.bpr_beta >= 1.0))
    throw Error("InvalidSpec", who + ": bpr_beta must be >= 1");
}

inline double travel_time(const RouteSpec& r, double flow_veh_per_h) {
  if (!std::isfinite(flow_veh_per_h) || flow_veh_per_h < 0.0)
    throw Error("InvalidFlow", "flow must be finite and >= 0");
  return r.free_flow_time_min *
         (1.0 + r.bpr_alpha *
                    std::pow(flow_veh_per_h / r.capacity_veh_per_h, r.bpr_beta));
}

// Value-of-time population in euros per hour. Every draw must be > 0.
// Lognormal is parameterized in log space; the factory converts from an
// arithmetic mean.
struct VotDistribution {
  enum class Kind { Lognormal, Uniform, Point };

  Kind kind = Kind::Lognormal;
  double mu_log = 0.0, sigma_log = 0.0;  // Lognormal
  double lo = 0.0, hi = 0.0;             // Uniform
  double value = 0.0;                    // Point
  int sample_count = 10000;
  std::uint64_t seed = 7;

  static VotDistribution lognormal_from_mean(double mean_eur_per_h,
                                             double sigma_log) {
    VotDistribution d;
    d.kind = Kind::Lognormal;
    d.mu_log = std::log(mean_eur_per_h) - 0.5 * sigma_log * sigma_log;
    d.sigma_log = sigma_log;
    return d;
  }
  static VotDistribution uniform(double lo, double hi) {
    VotDistribution d;
    d.kind = Kind::Uniform;
    d.lo = lo;
    d.hi = hi;
    return d;
  }
  static VotDistribution point(double value) {
    VotDistribution d;
    d.kind = Kind::Point;
    d.value = value;
    return d;
  }
};

inline void validate(const VotDistribution& d) {
  if (d.sample_count < 1)
    throw Error("InvalidSpec", "vot sample_count must be >= 1");
  switch (d.kind) {
    case VotDistribution::Kind::Lognormal:
      if (!std::isfinite(d.mu_log) || !(d.sigma_log >= 0.0) ||
          !std::isfinite(d.sigma_log))
        throw Error("InvalidSpec", "lognormal vot needs finite mu, sigma >= 0");
      break;
    case VotDistribution::Kind::Uniform:
      if (!(d.lo > 0.0) || !(d.hi >= d.lo) || !std::isfinite(d.hi))
        throw Error("InvalidSpec", "uniform vot needs 0 < lo <= hi");
      break;
    case VotDistribution::Kind::Point:
      if (!std::isfinite(d.value) || !(d.value > 0.0))
        throw Error("InvalidSpec", "point vot must be > 0");
      break;
  }
}

inline std::vector<double> sample_vot(const VotDistribution& d) {
  validate(d);
  Rng rng(mix_seed(d.seed, 0x766f74));
  std::vector<double> out(static_cast<std::size_t>(d.sample_count));
  for (auto& v : out) {
    switch (d.kind) {
      case VotDistribution::Kind::Lognormal:
        v = std::exp(d.mu_log + d.sigma_log * rng.normal());
        break;
      case VotDistribution::Kind::Uniform:
        v = d.lo + (d.hi - d.lo) * rng.uniform();
        break;
      case VotDistribution::Kind::Point:
        v = d.value;
        break;
    }
  }
  return out;
}

// Two-route toll corridor study. Route A is the short crossing with a
// single-lane bottleneck; route B is the longer but robust detour. The toll
// applies to A only.
struct PricingScenario {
  RouteSpec route_a{RouteName::A, 3.0, 950.0, 0.6, 8.0};
  RouteSpec route_b{RouteName::B, 7.0, 2000.0, 0.15, 4.0};
  double demand_veh_per_h = 1500.0;
  double price_eur = 0.0;
  VotDistribution vot_population = VotDistribution::lognormal_from_mean(30.0, 0.5);
};

inline void validate(const PricingScenario& sc) {
  validate(sc.route_a);
  validate(sc.route_b);
  validate(sc.vot_population);
  if (!(std::isfinite(sc.demand_veh_per_h) && sc.demand_veh_per_h > 0.0))
    throw Error("InvalidSpec", "demand_veh_per_h must be > 0");
  if (!(std::isfinite(sc.price_eur) && sc.price_eur >= 0.0))
    throw Error("InvalidSpec", "price_eur must be >= 0");
}

}  // namespace fairway
