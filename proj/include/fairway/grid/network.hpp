#pragma once

#include <cstddef>
#include <vector>

#include "fairway/grid/spec.hpp"

namespace fairway {

enum class Heading { South, North, East, West };

// A path from a boundary entrance to a boundary exit. Route ids double as
// entrance ids: exactly one route starts per entrance. At each intersection
// the vehicle either continues straight or turns left; `approach[k]` is the
// travel heading into nodes[k] and `turn[k]` marks the movement there.
struct Route {
  int id = 0;
  Heading heading = Heading::South;  // heading at the entrance
  int cross_index = 0;      // entry column for N/S routes, entry row for E/W
  std::vector<int> nodes;   // intersection ids in travel order
  std::vector<Heading> approach;
  std::vector<bool> turn;
  double length_m = 0.0;    // entrance stub + interior links + exit stub
  double free_flow_time_s = 0.0;
};

// index of a (node, approach heading, straight-or-turn) movement; stop-line
// queues and lane assignments are keyed by this
inline std::size_t movement_index(int node, Heading h, bool turn) {
  return (static_cast<std::size_t>(node) * 4 +
          static_cast<std::size_t>(h)) * 2 + (turn ? 1 : 0);
}

struct Network {
  GridSpec spec;
  std::vector<Route> routes;
  // lanes serving each movement, indexed by movement_index; a movement no
  // route uses keeps zero lanes
  std::vector<int> movement_lanes;
  double link_time_s = 0.0;
  double stub_time_s = 0.0;
  int stub_capacity_veh = 0;
};

inline int node_id(const GridSpec& g, int row, int col) {
  return row * g.cols + col;
}

inline Network build_network(const GridSpec& g) {
  validate(g);
  Network net;
  net.spec = g;
  net.link_time_s = g.link_length_m / g.free_flow_speed_mps;
  net.stub_time_s = g.stub_length_m / g.free_flow_speed_mps;
  net.stub_capacity_veh =
      static_cast<int>(g.stub_length_m / g.jam_spacing_m) *
      g.lanes_per_direction;

  const auto add = [&](Heading entry, int cross, std::vector<int> nodes,
                       std::vector<Heading> approach, std::vector<bool> turn) {
    Route r;
    r.id = static_cast<int>(net.routes.size());
    r.heading = entry;
    r.cross_index = cross;
    r.length_m = 2.0 * g.stub_length_m +
                 static_cast<double>(nodes.size() - 1) * g.link_length_m;
    r.free_flow_time_s = r.length_m / g.free_flow_speed_mps;
    r.nodes = std::move(nodes);
    r.approach = std::move(approach);
    r.turn = std::move(turn);
    net.routes.push_back(std::move(r));
  };

  const auto add_straight = [&](Heading h, int cross, std::vector<int> nodes) {
    const std::size_t n = nodes.size();
    add(h, cross, std::move(nodes), std::vector<Heading>(n, h),
        std::vector<bool>(n, false));
  };

  // middle entrance of each side: straight to the central intersection, one
  // left turn there, straight out through the neighboring side
  const int mid_r = g.rows / 2;
  const int mid_c = g.cols / 2;
  const auto add_turned = [&](Heading entry) {
    std::vector<int> nodes;
    std::vector<Heading> approach;
    std::vector<bool> turn;
    const auto leg = [&](int row, int col, Heading h, bool turning) {
      nodes.push_back(node_id(g, row, col));
      approach.push_back(h);
      turn.push_back(turning);
    };
    switch (entry) {
      case Heading::South:  // down the middle column, then east
        for (int r = 0; r < mid_r; ++r) leg(r, mid_c, Heading::South, false);
        leg(mid_r, mid_c, Heading::South, true);
        for (int c = mid_c + 1; c < g.cols; ++c)
          leg(mid_r, c, Heading::East, false);
        break;
      case Heading::North:  // up the middle column, then west
        for (int r = g.rows - 1; r > mid_r; --r)
          leg(r, mid_c, Heading::North, false);
        leg(mid_r, mid_c, Heading::North, true);
        for (int c = mid_c - 1; c >= 0; --c)
          leg(mid_r, c, Heading::West, false);
        break;
      case Heading::East:  // along the middle row, then north
        for (int c = 0; c < mid_c; ++c) leg(mid_r, c, Heading::East, false);
        leg(mid_r, mid_c, Heading::East, true);
        for (int r = mid_r - 1; r >= 0; --r)
          leg(r, mid_c, Heading::North, false);
        break;
      case Heading::West:  // along the middle row, then south
        for (int c = g.cols - 1; c > mid_c; --c)
          leg(mid_r, c, Heading::West, false);
        leg(mid_r, mid_c, Heading::West, true);
        for (int r = mid_r + 1; r < g.rows; ++r)
          leg(r, mid_c, Heading::South, false);
        break;
    }
    const int cross =
        (entry == Heading::East || entry == Heading::West) ? mid_r : mid_c;
    add(entry, cross, std::move(nodes), std::move(approach), std::move(turn));
  };

  const bool turns = g.route_pattern == RoutePattern::CenterTurn;
  for (int c = 0; c < g.cols; ++c) {
    if (turns && c == mid_c) {
      add_turned(Heading::South);
      continue;
    }
    std::vector<int> nodes;
    for (int r = 0; r < g.rows; ++r) nodes.push_back(node_id(g, r, c));
    add_straight(Heading::South, c, std::move(nodes));
  }
  for (int c = 0; c < g.cols; ++c) {
    if (turns && c == mid_c) {
      add_turned(Heading::North);
      continue;
    }
    std::vector<int> nodes;
    for (int r = g.rows - 1; r >= 0; --r) nodes.push_back(node_id(g, r, c));
    add_straight(Heading::North, c, std::move(nodes));
  }
  for (int r = 0; r < g.rows; ++r) {
    if (turns && r == mid_r) {
      add_turned(Heading::East);
      continue;
    }
    std::vector<int> nodes;
    for (int c = 0; c < g.cols; ++c) nodes.push_back(node_id(g, r, c));
    add_straight(Heading::East, r, std::move(nodes));
  }
  for (int r = 0; r < g.rows; ++r) {
    if (turns && r == mid_r) {
      add_turned(Heading::West);
      continue;
    }
    std::vector<int> nodes;
    for (int c = g.cols - 1; c >= 0; --c) nodes.push_back(node_id(g, r, c));
    add_straight(Heading::West, r, std::move(nodes));
  }

  // Lane assignment per approach: movements nobody drives get no lanes; a
  // lone movement gets the full approach; where a turn shares an approach
  // with a straight movement it gets one reserved lane. Neither pattern
  // above mixes movements on an approach, so the reserved-lane split is
  // dormant for now.
  const int n_nodes = g.rows * g.cols;
  net.movement_lanes.assign(static_cast<std::size_t>(n_nodes) * 8, 0);
  std::vector<char> used(static_cast<std::size_t>(n_nodes) * 8, 0);
  for (const auto& r : net.routes)
    for (std::size_t k = 0; k < r.nodes.size(); ++k)
      used[movement_index(r.nodes[k], r.approach[k], r.turn[k])] = 1;
  for (int node = 0; node < n_nodes; ++node)
    for (int h = 0; h < 4; ++h) {
      const auto si = movement_index(node, static_cast<Heading>(h), false);
      const auto ti = movement_index(node, static_cast<Heading>(h), true);
      if (used[si] && used[ti]) {
        net.movement_lanes[ti] = 1;
        net.movement_lanes[si] = g.lanes_per_direction - 1;
      } else if (used[si]) {
        net.movement_lanes[si] = g.lanes_per_direction;
      } else if (used[ti]) {
        net.movement_lanes[ti] = g.lanes_per_direction;
      }
    }
  return net;
}

}  // namespace fairway
