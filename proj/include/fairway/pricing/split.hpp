#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "fairway/allocation.hpp"
#include "fairway/error.hpp"
#include "fairway/format.hpp"
#include "fairway/opt.hpp"
#include "fairway/pricing/scenario.hpp"
#include "fairway/welfare.hpp"

namespace fairway {

struct SplitResult {
  double share_a = 0.0;
  double time_a_min = 0.0;
  double time_b_min = 0.0;
  // |implied share - share_a| at the returned point; for the price-0 path it
  // is the final bracket half-width around the equal-time split.
  double residual = 0.0;
  Allocation per_user_delays;  // minutes above the faster route's free-flow time
  Allocation per_user_costs;   // euros: toll (route A only) + VOT * delay hours
  std::vector<double> vots;    // euros/h, in sample order
  std::vector<unsigned char> on_a;
};

namespace pricing_detail {

inline double delta_t_min(const PricingScenario& sc, double share) {
  const double q = sc.demand_veh_per_h;
  return travel_time(sc.route_b, (1.0 - share) * q) -
         travel_time(sc.route_a, share * q);
}

// Fraction of sampled users whose value of time strictly exceeds c, linearly
// interpolated between order statistics. Interpolation keeps the implied
// share continuous in the cutoff, so bisection can resolve the fixed point
// below the 1/n sample granularity.
inline double survival_above(const std::vector<double>& sorted_vots, double c) {
  const double n = static_cast<double>(sorted_vots.size());
  if (c <= 0.0) return 1.0;
  if (c >= sorted_vots.back()) return 0.0;
  const auto it = std::upper_bound(sorted_vots.begin(), sorted_vots.end(), c);
  const auto j = static_cast<std::size_t>(it - sorted_vots.begin());
  if (j == 0) return 1.0 - (c / sorted_vots.front()) / n;
  const double lo = sorted_vots[j - 1];
  const double hi = sorted_vots[j];
  const double frac = (c - lo) / (hi - lo);
  return ((n - static_cast<double>(j)) - frac) / n;
}

inline void check_vots(const std::vector<double>& vots) {
  if (vots.empty()) throw Error("InvalidSpec", "vot sample is empty");
  for (double v : vots)
    if (!std::isfinite(v) || !(v > 0.0))
      throw Error("InvalidSpec", "vot draws must be finite and > 0");
}

}  // namespace pricing_detail

enum class SplitResource { Delay, TotalCost };

namespace pricing_detail {

// The burden allocation at a split without materializing per-user route
// flags: the k highest-value users ride A. Produces the same value multiset
// as make_split, bit for bit, just cheaper for optimizer inner loops.
inline Allocation split_allocation(const PricingScenario& sc,
                                   const std::vector<double>& vots_ascending,
                                   double share, SplitResource resource) {
  const std::size_t n = vots_ascending.size();
  const double time_a = travel_time(sc.route_a, share * sc.demand_veh_per_h);
  const double time_b =
      travel_time(sc.route_b, (1.0 - share) * sc.demand_veh_per_h);
  const double t0 =
      std::min(sc.route_a.free_flow_time_min, sc.route_b.free_flow_time_min);
  const long long k_raw = std::llround(share * static_cast<double>(n));
  const auto k = static_cast<std::size_t>(
      std::clamp<long long>(k_raw, 0, static_cast<long long>(n)));
  const double delay_a = time_a - t0;
  const double delay_b = time_b - t0;

  Allocation a;
  a.values.reserve(n);
  if (resource == SplitResource::Delay) {
    a.kind = ResourceKind::Delay;
    for (std::size_t i = 0; i + k < n; ++i) a.values.push_back(delay_b);
    for (std::size_t i = 0; i < k; ++i) a.values.push_back(delay_a);
  } else {
    a.kind = ResourceKind::MonetaryCost;
    for (std::size_t i = 0; i + k < n; ++i)
      a.values.push_back(vots_ascending[i] * (delay_b / 60.0));
    for (std::size_t i = n - k; i < n; ++i)
      a.values.push_back(sc.price_eur + vots_ascending[i] * (delay_a / 60.0));
  }
  return a;
}

}  // namespace pricing_detail

// Materialize the per-user picture at a given split: the top share_a*n users
// by value of time take route A (the threshold structure of the choice rule).
inline SplitResult make_split(const PricingScenario& sc,
                              const std::vector<double>& vots, double share,
                              double residual) {
  const std::size_t n = vots.size();
  SplitResult r;
  r.share_a = share;
  r.residual = residual;
  r.time_a_min = travel_time(sc.route_a, share * sc.demand_veh_per_h);
  r.time_b_min = travel_time(sc.route_b, (1.0 - share) * sc.demand_veh_per_h);
  const double t0 =
      std::min(sc.route_a.free_flow_time_min, sc.route_b.free_flow_time_min);

  const long long k_raw = std::llround(share * static_cast<double>(n));
  const auto k = static_cast<std::size_t>(
      std::clamp<long long>(k_raw, 0, static_cast<long long>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return vots[a] != vots[b] ? vots[a] > vots[b] : a < b;
  });
  r.on_a.assign(n, 0);
  for (std::size_t i = 0; i < k; ++i) r.on_a[order[i]] = 1;

  r.vots = vots;
  r.per_user_delays.kind = ResourceKind::Delay;
  r.per_user_costs.kind = ResourceKind::MonetaryCost;
  r.per_user_delays.values.reserve(n);
  r.per_user_costs.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double delay = (r.on_a[i] ? r.time_a_min : r.time_b_min) - t0;
    r.per_user_delays.values.push_back(delay);
    r.per_user_costs.values.push_back((r.on_a[i] ? sc.price_eur : 0.0) +
                                      vots[i] * (delay / 60.0));
  }
  return r;
}

// Fixed point of the toll-choice model: a user of value v takes route A iff
// v * (t_B - t_A) / 60 > price (ties go to the free route).
inline SplitResult equilibrium_split(const PricingScenario& sc,
                                     const std::vector<double>& vots) {
  validate(sc);
  pricing_detail::check_vots(vots);
  constexpr int kMaxSteps = 200;
  constexpr double kResidualTol = 1e-6;

  if (sc.price_eur == 0.0) {
    // Free corridor: everybody races for the faster route until times
    // equalize. The implied share is a step in the sign of t_B - t_A, so
    // bisect on that sign instead of on a residual.
    if (pricing_detail::delta_t_min(sc, 1.0) > 0.0)
      return make_split(sc, vots, 1.0, 0.0);
    if (pricing_detail::delta_t_min(sc, 0.0) <= 0.0)
      return make_split(sc, vots, 0.0, 0.0);
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < kMaxSteps && (hi - lo) > 1e-12; ++i) {
      const double mid = 0.5 * (lo + hi);
      (pricing_detail::delta_t_min(sc, mid) > 0.0 ? lo : hi) = mid;
    }
    return make_split(sc, vots, 0.5 * (lo + hi), 0.5 * (hi - lo));
  }

  std::vector<double> sorted_vots = vots;
  std::sort(sorted_vots.begin(), sorted_vots.end());
  const auto implied = [&](double s) {
    const double dt = pricing_detail::delta_t_min(sc, s);
    if (dt <= 0.0) return 0.0;  // A slower and tolled: nobody pays for it
    return pricing_detail::survival_above(sorted_vots, 60.0 * sc.price_eur / dt);
  };

  if (implied(0.0) <= 0.0) return make_split(sc, vots, 0.0, 0.0);
  if (implied(1.0) >= 1.0) return make_split(sc, vots, 1.0, 0.0);

  // implied(s) - s is continuous and strictly decreasing, positive at 0 and
  // negative at 1, so plain bisection converges to the unique fixed point.
  double lo = 0.0, hi = 1.0, g = 1.0;
  for (int i = 0; i < kMaxSteps; ++i) {
    const double mid = 0.5 * (lo + hi);
    g = implied(mid) - mid;
    if (std::fabs(g) <= kResidualTol) return make_split(sc, vots, mid, std::fabs(g));
    (g > 0.0 ? lo : hi) = mid;
  }
  throw Error("NoConvergence", "equilibrium bisection stalled at residual " +
                                   format_double(std::fabs(g)) +
                                   " after 200 steps");
}

inline SplitResult equilibrium_split(const PricingScenario& sc) {
  return equilibrium_split(sc, sample_vot(sc.vot_population));
}

// Total vehicle-minutes spent per hour of demand at a given split.
inline double total_time_veh_min(const PricingScenario& sc, double share) {
  const double q = sc.demand_veh_per_h;
  return q * (share * travel_time(sc.route_a, share * q) +
              (1.0 - share) * travel_time(sc.route_b, (1.0 - share) * q));
}

inline SplitResult system_optimal_split(const PricingScenario& sc,
                                        const std::vector<double>& vots) {
  validate(sc);
  pricing_detail::check_vots(vots);
  const auto total = [&](double s) { return total_time_veh_min(sc, s); };
  double s = golden_section_min(total, 0.0, 1.0, 1e-6);
  // Snap to an exact boundary when it is at least as good as the interior
  // bracket midpoint (ties prefer the smaller share).
  if (total(1.0) <= total(s)) s = 1.0;
  if (total(0.0) <= total(s)) s = 0.0;
  return make_split(sc, vots, s, 0.0);
}

inline SplitResult system_optimal_split(const PricingScenario& sc) {
  return system_optimal_split(sc, sample_vot(sc.vot_population));
}

inline SplitResult fairness_optimal_split(const PricingScenario& sc,
                                          Ideology ideology,
                                          SplitResource resource,
                                          const std::vector<double>& vots) {
  validate(sc);
  pricing_detail::check_vots(vots);
  std::vector<double> ascending = vots;
  std::sort(ascending.begin(), ascending.end());
  const auto welfare_at = [&](double s) {
    return welfare(pricing_detail::split_allocation(sc, ascending, s, resource),
                   ideology);
  };

  double best_s = 0.0;
  double best_w = welfare_at(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double s = static_cast<double>(i) / 1000.0;
    const double w = welfare_at(s);
    if (w > best_w) {
      best_w = w;
      best_s = s;
    }
  }
  const double refined =
      golden_section_max(welfare_at, std::max(0.0, best_s - 1e-3),
                         std::min(1.0, best_s + 1e-3), 1e-6);

  // Evaluate the exact boundaries alongside the scan results; scanning in
  // ascending order with a strict comparison breaks ties toward the smaller
  // share.
  double candidates[] = {0.0, best_s, refined, 1.0};
  std::sort(std::begin(candidates), std::end(candidates));
  double s_star = candidates[0];
  double w_star = welfare_at(candidates[0]);
  for (double c : candidates) {
    const double w = welfare_at(c);
    if (w > w_star) {
      w_star = w;
      s_star = c;
    }
  }
  return make_split(sc, vots, s_star, 0.0);
}

inline SplitResult fairness_optimal_split(const PricingScenario& sc,
                                          Ideology ideology,
                                          SplitResource resource) {
  return fairness_optimal_split(sc, ideology, resource,
                                sample_vot(sc.vot_population));
}

}  // namespace fairway
