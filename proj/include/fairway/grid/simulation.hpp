#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "fairway/allocation.hpp"
#include "fairway/error.hpp"
#include "fairway/grid/network.hpp"
#include "fairway/rng.hpp"

namespace fairway {

struct DemandSpec {
  double flow_per_entrance_veh_per_h = 300.0;
  std::uint64_t seed = 1;
  double warmup_s = 600.0;
  double horizon_s = 4200.0;
  // Longest total time lost (versus free flow) a driver tolerates before
  // giving up and diverting off the network. Infinity disables diversion.
  double patience_s = 240.0;
};

inline void validate(const DemandSpec& d) {
  if (!(std::isfinite(d.flow_per_entrance_veh_per_h) &&
        d.flow_per_entrance_veh_per_h > 0.0))
    throw Error("InvalidSpec", "flow_per_entrance_veh_per_h must be > 0");
  if (!std::isfinite(d.warmup_s) || d.warmup_s < 0.0)
    throw Error("InvalidSpec", "warmup_s must be >= 0");
  if (!std::isfinite(d.horizon_s) || !(d.horizon_s > d.warmup_s))
    throw Error("InvalidSpec", "horizon_s must exceed warmup_s");
  if (!(d.patience_s > 0.0))
    throw Error("InvalidSpec", "patience_s must be > 0");
}

struct VehicleRecord {
  std::int64_t vehicle_id = 0;
  int route_id = 0;
  double entry_time_s = 0.0;
  std::optional<double> exit_time_s;  // set for finished trips only
  double free_flow_time_s = 0.0;
  bool diverted = false;
  // Experienced delay. Finished: exit - entry - free_flow. Diverted: time
  // lost up to the moment of giving up. Unset while still en route.
  std::optional<double> delay_s;
};

// Spawn/complete/remain counts and records cover the measured population
// only: vehicles that entered at or after the warmup cutoff. `remaining`
// is every measured trip the network did not carry to its exit: drivers who
// diverted (counted separately in `diverted`) plus vehicles still en route
// at the horizon, so spawned = completed + remaining always holds.
struct SimulationResult {
  std::vector<VehicleRecord> vehicle_records;
  double throughput_veh_per_h = 0.0;
  std::int64_t spawned = 0;
  std::int64_t completed = 0;
  std::int64_t remaining = 0;
  std::int64_t diverted = 0;
  double warmup_s = 0.0;
  double horizon_s = 0.0;
};

// Delay sample over everyone with a known outcome: finished trips plus
// diverted drivers (their delay is real even though their trip is not).
inline Allocation delay_allocation(const SimulationResult& r) {
  Allocation a;
  a.kind = ResourceKind::Delay;
  for (const auto& rec : r.vehicle_records)
    if (rec.delay_s) a.values.push_back(*rec.delay_s);
  return a;
}

// Delay sample over the whole measured population. Vehicles still en route
// at the horizon contribute the delay they have accrued so far (censored
// from below, clamped at zero), so the sample stays defined even on plans
// where nothing moves.
inline Allocation censored_delay_allocation(const SimulationResult& r) {
  Allocation a;
  a.kind = ResourceKind::Delay;
  for (const auto& rec : r.vehicle_records) {
    if (rec.delay_s)
      a.values.push_back(*rec.delay_s);
    else
      a.values.push_back(std::max(
          0.0, r.horizon_s - rec.entry_time_s - rec.free_flow_time_s));
  }
  return a;
}

// Point-queue simulation at 1 s steps. Vehicles traverse stubs and links at
// free-flow speed, wait in FIFO stop-line queues, and cross during their
// movement's green at saturation rate times the lanes assigned to the
// movement. Each step: discharge every stop line (row-major nodes,
// approaches S/N/E/W, straight before turn), divert drivers whose wait exceeded
// their patience, spawn Poisson demand, then admit gate vehicles into
// entrance stubs that have storage left. Vehicles that find the stub full
// wait at a virtual gate; gate waits count toward delay and obey the same
// patience rule, so nothing is ever dropped silently: every driver either
// finishes, diverts on record, or is still en route at the horizon.
inline SimulationResult run(const Network& net, const SignalPlan& plan,
                            const DemandSpec& demand) {
  validate(net.spec);
  validate(plan);
  validate(demand);

  struct Traveler {
    std::int64_t id;
    int route;
    int leg;                  // index into route.nodes of the next signal
    double stopline_arrival;  // earliest moment it can cross that stop line
  };
  struct Lifetime {
    int route;
    double entry;
    double exit = -1.0;    // < 0: never finished
    double divert = -1.0;  // >= 0: gave up at this time
    double done = 0.0;     // free-flow time of the part traversed by then
  };

  const auto n_entrances = static_cast<int>(net.routes.size());
  const int n_nodes = net.spec.rows * net.spec.cols;
  const double lambda = demand.flow_per_entrance_veh_per_h / 3600.0;
  const double sat = net.spec.saturation_flow_veh_per_s_per_lane;

  Rng rng(mix_seed(demand.seed, 0x67726964));
  std::vector<Lifetime> lifetimes;
  std::vector<std::deque<Traveler>> queues(
      static_cast<std::size_t>(n_nodes) * 8);
  std::vector<std::deque<Traveler>> gates(n_entrances);
  std::vector<int> stub_count(n_entrances, 0);
  std::vector<double> offsets(n_nodes);
  for (int r = 0; r < net.spec.rows; ++r)
    for (int c = 0; c < net.spec.cols; ++c)
      offsets[node_id(net.spec, r, c)] = signal_offset_s(plan, r, c);

  const int steps = static_cast<int>(demand.horizon_s);
  for (int step = 0; step < steps; ++step) {
    const auto t = static_cast<double>(step);

    for (int node = 0; node < n_nodes; ++node) {
      const Phase phase = phase_at(plan, offsets[node], t);
      for (int h = 0; h < 4; ++h) {
        for (int mv = 0; mv < 2; ++mv) {
          const bool north_south = h < 2;
          const Phase green =
              north_south ? (mv ? Phase::NsTurn : Phase::NsStraight)
                          : (mv ? Phase::EwTurn : Phase::EwStraight);
          if (phase != green) continue;
          const auto q_idx =
              movement_index(node, static_cast<Heading>(h), mv == 1);
          auto& q = queues[q_idx];
          if (q.empty()) continue;
          const double rate = sat * net.movement_lanes[q_idx] *
                              (mv ? net.spec.turn_flow_factor : 1.0);
          const int quota_base = static_cast<int>(rate);
          const double quota_frac = rate - static_cast<double>(quota_base);
          int quota = quota_base;
          if (quota_frac > 0.0 && rng.bernoulli(quota_frac)) ++quota;
          while (quota > 0 && !q.empty() && q.front().stopline_arrival <= t) {
            Traveler v = q.front();
            q.pop_front();
            const Route& route = net.routes[v.route];
            if (v.leg == 0) --stub_count[v.route];
            if (v.leg + 1 == static_cast<int>(route.nodes.size())) {
              lifetimes[v.id].exit = t + net.stub_time_s;
            } else {
              ++v.leg;
              v.stopline_arrival = t + net.link_time_s;
              queues[movement_index(route.nodes[v.leg], route.approach[v.leg],
                                    route.turn[v.leg])]
                  .push_back(v);
            }
            --quota;
          }
        }
      }
    }

    // a driver's time lost so far is t - entry - free-flow time of the part
    // traversed; it can exceed patience only while waiting at a stop line,
    // and prior waits push different vehicles over at different moments, so
    // the whole queue is scanned rather than just its front
    for (std::size_t q_idx = 0; q_idx < queues.size(); ++q_idx) {
      std::erase_if(queues[q_idx], [&](const Traveler& v) {
        const double done =
            net.stub_time_s + static_cast<double>(v.leg) * net.link_time_s;
        if (t - lifetimes[v.id].entry - done <= demand.patience_s)
          return false;
        if (v.leg == 0) --stub_count[v.route];
        lifetimes[v.id].divert = t;
        lifetimes[v.id].done = done;
        return true;
      });
    }

    for (int e = 0; e < n_entrances; ++e) {
      const int k = rng.poisson(lambda);
      for (int i = 0; i < k; ++i) {
        const auto id = static_cast<std::int64_t>(lifetimes.size());
        lifetimes.push_back({e, t, -1.0, -1.0, 0.0});
        gates[e].push_back({id, e, 0, t});  // gate wait starts at spawn
      }
    }

    for (int e = 0; e < n_entrances; ++e) {
      auto& gate = gates[e];
      while (!gate.empty() &&
             t - gate.front().stopline_arrival > demand.patience_s) {
        const Traveler v = gate.front();
        gate.pop_front();
        lifetimes[v.id].divert = t;  // gave up before entering; done stays 0
      }
      const Route& route = net.routes[e];
      const auto first = movement_index(route.nodes.front(),
                                        route.approach.front(),
                                        route.turn.front());
      while (!gate.empty() && stub_count[e] < net.stub_capacity_veh) {
        Traveler v = gate.front();
        gate.pop_front();
        v.stopline_arrival = t + net.stub_time_s;
        queues[first].push_back(v);
        ++stub_count[e];
      }
    }
  }

  SimulationResult res;
  res.warmup_s = demand.warmup_s;
  res.horizon_s = demand.horizon_s;
  for (std::size_t id = 0; id < lifetimes.size(); ++id) {
    const Lifetime& life = lifetimes[id];
    if (life.entry < demand.warmup_s) continue;
    VehicleRecord rec;
    rec.vehicle_id = static_cast<std::int64_t>(id);
    rec.route_id = life.route;
    rec.entry_time_s = life.entry;
    rec.free_flow_time_s = net.routes[life.route].free_flow_time_s;
    if (life.exit >= 0.0 && life.exit <= demand.horizon_s) {
      rec.exit_time_s = life.exit;
      rec.delay_s = life.exit - life.entry - rec.free_flow_time_s;
      ++res.completed;
    } else if (life.divert >= 0.0) {
      rec.diverted = true;
      rec.delay_s = life.divert - life.entry - life.done;
      ++res.diverted;
      ++res.remaining;
    } else {
      ++res.remaining;
    }
    ++res.spawned;
    res.vehicle_records.push_back(std::move(rec));
  }
  res.throughput_veh_per_h =
      static_cast<double>(res.completed) /
      (demand.horizon_s - demand.warmup_s) * 3600.0;
  return res;
}

}  // namespace fairway
