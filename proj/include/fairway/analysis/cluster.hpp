#pragma once

#include <json.hpp>
#include <limits>
#include <string>
#include <vector>

#include "fairway/analysis/conflict.hpp"
#include "fairway/analysis/metric_matrix.hpp"

namespace fairway {

enum class Linkage { Single, Average, Complete };

// Agglomerative clustering of metric columns under the dissimilarity
// d = 1 - |pearson|. Leaves are numbered 0..n-1 in the order of `leaves`;
// each merge creates cluster id n + merge_index. Ties are broken by the
// lexicographically smallest member name, which makes the output canonical
// regardless of input column order.
struct Dendrogram {
  struct Merge {
    int left = 0, right = 0;
    double distance = 0.0;
    int id = 0;
  };
  std::vector<std::string> leaves;
  std::vector<Merge> merges;
};

inline Dendrogram cluster_metrics(const MetricMatrix& m,
                                  std::vector<std::string> names = {},
                                  Linkage linkage = Linkage::Average) {
  validate(m);
  if (names.empty()) names = m.metric_names;
  const std::size_t n = names.size();
  if (n < 2) throw Error("InvalidSpec", "need at least two metrics to cluster");

  std::vector<std::vector<double>> cols;
  cols.reserve(n);
  for (const auto& name : names) cols.push_back(column(m, name));

  // pairwise base distances; pearson throws DegenerateMetric on a constant
  // column, which is the right complaint here too
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dist[i][j] = dist[j][i] = 1.0 - std::fabs(pearson(cols[i], cols[j]));

  struct Cluster {
    int id;
    std::size_t size;
    std::string label;  // lexicographically smallest member name
  };
  std::vector<Cluster> active;
  for (std::size_t i = 0; i < n; ++i)
    active.push_back({static_cast<int>(i), 1, names[i]});

  Dendrogram out;
  out.leaves = names;
  int next_id = static_cast<int>(n);
  while (active.size() > 1) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double d = dist[i][j];
        const auto& lo = active[i].label < active[j].label ? active[i].label
                                                           : active[j].label;
        const auto& hi = active[i].label < active[j].label ? active[j].label
                                                           : active[i].label;
        const auto& blo = active[bi].label < active[bj].label
                              ? active[bi].label
                              : active[bj].label;
        const auto& bhi = active[bi].label < active[bj].label
                              ? active[bj].label
                              : active[bi].label;
        if (d < best || (d == best && (lo < blo || (lo == blo && hi < bhi)))) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }

    // left child = smaller canonical label
    const bool swap = active[bj].label < active[bi].label;
    const Cluster& a = swap ? active[bj] : active[bi];
    const Cluster& b = swap ? active[bi] : active[bj];
    out.merges.push_back({a.id, b.id, best, next_id});

    // fold row bj into bi under the chosen linkage, then drop bj
    const double sa = static_cast<double>(active[bi].size);
    const double sb = static_cast<double>(active[bj].size);
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (k == bi || k == bj) continue;
      double d;
      switch (linkage) {
        case Linkage::Single:
          d = std::min(dist[bi][k], dist[bj][k]);
          break;
        case Linkage::Complete:
          d = std::max(dist[bi][k], dist[bj][k]);
          break;
        case Linkage::Average:
        default:
          d = (sa * dist[bi][k] + sb * dist[bj][k]) / (sa + sb);
          break;
      }
      dist[bi][k] = dist[k][bi] = d;
    }
    active[bi] = {next_id, active[bi].size + active[bj].size,
                  a.label < b.label ? a.label : b.label};
    ++next_id;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    dist.erase(dist.begin() + static_cast<std::ptrdiff_t>(bj));
    for (auto& row : dist)
      row.erase(row.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return out;
}

inline nlohmann::json dendrogram_json(const Dendrogram& d) {
  nlohmann::json j;
  j["leaves"] = d.leaves;
  j["merges"] = nlohmann::json::array();
  for (const auto& mg : d.merges)
    j["merges"].push_back({{"left", mg.left},
                           {"right", mg.right},
                           {"distance", mg.distance},
                           {"id", mg.id}});
  return j;
}

// Newick with branch lengths derived from merge heights (leaf height 0).
inline std::string to_newick(const Dendrogram& d) {
  const int n = static_cast<int>(d.leaves.size());
  auto height = [&](int id) {
    return id < n ? 0.0 : d.merges[static_cast<std::size_t>(id - n)].distance;
  };
  std::string out;
  auto render = [&](auto&& self, int id) -> void {
    if (id < n) {
      out += d.leaves[static_cast<std::size_t>(id)];
      return;
    }
    const auto& mg = d.merges[static_cast<std::size_t>(id - n)];
    out += "(";
    self(self, mg.left);
    out += ":" + format_double(std::max(0.0, mg.distance - height(mg.left)));
    out += ",";
    self(self, mg.right);
    out += ":" + format_double(std::max(0.0, mg.distance - height(mg.right)));
    out += ")";
  };
  if (d.merges.empty()) {
    out = d.leaves.empty() ? "" : d.leaves[0];
  } else {
    render(render, d.merges.back().id);
  }
  return out + ";";
}

}  // namespace fairway
