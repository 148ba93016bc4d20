#pragma once

#include <cmath>
#include <string>

#include "fairway/error.hpp"

namespace fairway {

// Which paths drivers take through the grid. StraightAcross sends every
// entrance straight to the opposite exit, so only the straight phases carry
// demand. CenterTurn is the same except that the middle entrance of each
// side turns left at the central intersection and exits through the
// neighboring side, which puts real demand on the turn phases.
enum class RoutePattern { StraightAcross, CenterTurn };

// Geometry and flow constants of the signalized grid. Entrance/exit stubs
// are the boundary road pieces feeding the outermost intersections; their
// length bounds how many vehicles can physically wait outside the network.
struct GridSpec {
  int rows = 3;
  int cols = 3;
  double link_length_m = 100.0;
  int lanes_per_direction = 2;
  double free_flow_speed_mps = 13.9;  // 50 km/h
  double saturation_flow_veh_per_s_per_lane = 0.5;
  // turning vehicles clear the intersection slower than through traffic;
  // their saturation flow is scaled by this factor
  double turn_flow_factor = 0.5;
  int entrance_count = 12;
  double stub_length_m = 100.0;
  double jam_spacing_m = 7.0;  // storage length per queued vehicle
  RoutePattern route_pattern = RoutePattern::StraightAcross;
};

inline void validate(const GridSpec& g) {
  if (g.rows < 1 || g.cols < 1)
    throw Error("InvalidSpec", "grid needs rows >= 1 and cols >= 1");
  if (!(std::isfinite(g.link_length_m) && g.link_length_m > 0.0))
    throw Error("InvalidSpec", "link_length_m must be > 0");
  if (g.lanes_per_direction < 1)
    throw Error("InvalidSpec", "lanes_per_direction must be >= 1");
  if (!(std::isfinite(g.free_flow_speed_mps) && g.free_flow_speed_mps > 0.0))
    throw Error("InvalidSpec", "free_flow_speed_mps must be > 0");
  if (!(std::isfinite(g.saturation_flow_veh_per_s_per_lane) &&
        g.saturation_flow_veh_per_s_per_lane > 0.0))
    throw Error("InvalidSpec", "saturation_flow_veh_per_s_per_lane must be > 0");
  if (!(std::isfinite(g.turn_flow_factor) && g.turn_flow_factor > 0.0 &&
        g.turn_flow_factor <= 1.0))
    throw Error("InvalidSpec", "turn_flow_factor must be in (0,1]");
  if (!(std::isfinite(g.stub_length_m) && g.stub_length_m > 0.0))
    throw Error("InvalidSpec", "stub_length_m must be > 0");
  if (!(std::isfinite(g.jam_spacing_m) && g.jam_spacing_m > 0.0))
    throw Error("InvalidSpec", "jam_spacing_m must be > 0");
  if (g.entrance_count != 2 * (g.rows + g.cols))
    throw Error("InvalidSpec",
                "entrance_count must equal 2*(rows+cols) = " +
                    std::to_string(2 * (g.rows + g.cols)) + ", got " +
                    std::to_string(g.entrance_count));
  // the turning pattern needs a unique central intersection and a unique
  // middle entrance per side
  if (g.route_pattern == RoutePattern::CenterTurn &&
      (g.rows % 2 == 0 || g.cols % 2 == 0))
    throw Error("InvalidSpec",
                "center-turn route pattern needs odd rows and cols, got " +
                    std::to_string(g.rows) + "x" + std::to_string(g.cols));
}

// Fixed four-phase cycle: NS straight, NS turn, EW straight, EW turn, each
// followed by yellow. Neighboring intersections are offset by half the sum
// of the two green durations.
struct SignalPlan {
  int green_straight_s = 20;
  int green_turn_s = 20;
  int yellow_s = 3;
};

inline void validate(const SignalPlan& p) {
  if (p.green_straight_s < 1 || p.green_straight_s > 40)
    throw Error("InvalidSpec", "green_straight_s must be in [1,40], got " +
                                   std::to_string(p.green_straight_s));
  if (p.green_turn_s < 1 || p.green_turn_s > 40)
    throw Error("InvalidSpec", "green_turn_s must be in [1,40], got " +
                                   std::to_string(p.green_turn_s));
  if (p.yellow_s < 0)
    throw Error("InvalidSpec", "yellow_s must be >= 0");
}

inline int cycle_s(const SignalPlan& p) {
  return 2 * (p.green_straight_s + p.green_turn_s) + 4 * p.yellow_s;
}

inline double signal_offset_s(const SignalPlan& p, int row, int col) {
  return static_cast<double>(row + col) *
         (static_cast<double>(p.green_straight_s + p.green_turn_s) / 2.0);
}

enum class Phase { NsStraight, NsTurn, EwStraight, EwTurn, Yellow };

inline Phase phase_at(const SignalPlan& p, double offset_s, double t) {
  const auto c = static_cast<double>(cycle_s(p));
  double local = std::fmod(t - offset_s, c);
  if (local < 0.0) local += c;
  const auto gs = static_cast<double>(p.green_straight_s);
  const auto gt = static_cast<double>(p.green_turn_s);
  const auto y = static_cast<double>(p.yellow_s);
  if (local < gs) return Phase::NsStraight;
  local -= gs;
  if (local < y) return Phase::Yellow;
  local -= y;
  if (local < gt) return Phase::NsTurn;
  local -= gt;
  if (local < y) return Phase::Yellow;
  local -= y;
  if (local < gs) return Phase::EwStraight;
  local -= gs;
  if (local < y) return Phase::Yellow;
  local -= y;
  if (local < gt) return Phase::EwTurn;
  return Phase::Yellow;
}

}  // namespace fairway
