#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <vector>

#include "fairway/analysis/alpha.hpp"
#include "fairway/analysis/cluster.hpp"
#include "fairway/analysis/conflict.hpp"
#include "fairway/analysis/metric_matrix.hpp"
#include "oracles.hpp"

using fairway::Dendrogram;
using fairway::Error;
using fairway::MetricMatrix;

namespace {

// single-key matrix from named columns, key = row index
MetricMatrix make_matrix(std::vector<std::string> names,
                         std::vector<std::vector<double>> columns) {
  MetricMatrix m;
  m.key_names = {"g_straight"};
  m.metric_names = std::move(names);
  const std::size_t rows = columns.at(0).size();
  for (std::size_t r = 0; r < rows; ++r) {
    m.keys.push_back({static_cast<double>(r)});
    std::vector<double> row;
    for (const auto& c : columns) row.push_back(c.at(r));
    m.values.push_back(std::move(row));
  }
  m.provenance = "seed=0";
  return m;
}

// merge sequence as name sets, independent of leaf numbering
std::vector<std::set<std::string>> merged_groups(const Dendrogram& d) {
  const int n = static_cast<int>(d.leaves.size());
  std::vector<std::set<std::string>> groups;
  auto members = [&](int id) -> std::set<std::string> {
    if (id < n) return {d.leaves[static_cast<std::size_t>(id)]};
    return groups[static_cast<std::size_t>(id - n)];
  };
  for (const auto& mg : d.merges) {
    std::set<std::string> g = members(mg.left);
    const auto r = members(mg.right);
    g.insert(r.begin(), r.end());
    groups.push_back(g);
  }
  return groups;
}

}  // namespace

TEST(AlphaEfficiency, HandComputedExample) {
  const auto m = make_matrix({"throughput"}, {{10, 9, 5}});
  const auto set = fairway::alpha_efficient_set(m, "throughput", 0.2);
  EXPECT_EQ(set, (std::vector<std::size_t>{0, 1}));
  EXPECT_NEAR(fairway::convexity_ratio(m, "throughput", 0.2), 2.0 / 3.0,
              1e-15);
}

TEST(AlphaEfficiency, EndpointsAndMonotonicity) {
  const auto m = make_matrix({"eff"}, {{4, 8, 8, 1, 0}});
  EXPECT_EQ(fairway::alpha_efficient_set(m, "eff", 0.0),
            (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(fairway::alpha_efficient_set(m, "eff", 1.0).size(), 5u);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> val(0.1, 50.0);
  for (int it = 0; it < 100; ++it) {
    std::vector<double> col(20);
    for (auto& v : col) v = val(gen);
    const auto mm = make_matrix({"eff"}, {col});
    std::size_t prev = 0;
    for (double alpha : {0.0, 0.1, 0.3, 0.7, 1.0}) {
      const auto s = fairway::alpha_efficient_set(mm, "eff", alpha);
      EXPECT_GE(s.size(), prev);
      prev = s.size();
    }
  }
}

TEST(AlphaEfficiency, Errors) {
  const auto m = make_matrix({"eff"}, {{-1, -5, 0}});
  try {
    fairway::alpha_efficient_set(m, "eff", 0.1);
    FAIL() << "expected DegenerateEfficiency";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "DegenerateEfficiency");
  }
  try {
    fairway::alpha_efficient_set(m, "nope", 0.1);
    FAIL() << "expected UnknownMetric";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "UnknownMetric");
  }
  EXPECT_THROW(fairway::alpha_efficient_set(m, "eff", -0.1), Error);
  EXPECT_THROW(fairway::alpha_efficient_set(m, "eff", 1.5), Error);
}

TEST(GoalConflict, HandComputedExample) {
  // pearson([1,2,3],[2,4,7]) = 5*sqrt(3) / (2*sqrt(19))
  const double expected = 5.0 * std::sqrt(3.0) / (2.0 * std::sqrt(19.0));
  const auto m = make_matrix({"f", "e"}, {{1, 2, 3}, {2, 4, 7}});
  EXPECT_NEAR(fairway::goal_conflict(m, "f", "e"), expected, 1e-12);
  EXPECT_NEAR(expected, 0.9934, 5e-5);
  EXPECT_NEAR(fairway::goal_conflict(m, "f", "e"),
              oracle::pearson_naive({1, 2, 3}, {2, 4, 7}), 1e-12);
}

TEST(GoalConflict, Properties) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int it = 0; it < 100; ++it) {
    std::vector<double> a(15), b(15);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = noise(gen);
      b[i] = noise(gen);
    }
    const auto m = make_matrix({"f", "e"}, {a, b});
    const double r = fairway::goal_conflict(m, "f", "e");
    EXPECT_GE(r, -1.0);
    EXPECT_LE(r, 1.0);
    // symmetry
    EXPECT_DOUBLE_EQ(r, fairway::goal_conflict(m, "e", "f"));
    // invariance under positive affine transform, sign flip under negation
    std::vector<double> a2(a);
    for (auto& v : a2) v = 3.5 * v + 11.0;
    std::vector<double> a3(a);
    for (auto& v : a3) v = -v;
    const auto m2 = make_matrix({"f", "e"}, {a2, b});
    const auto m3 = make_matrix({"f", "e"}, {a3, b});
    EXPECT_NEAR(fairway::goal_conflict(m2, "f", "e"), r, 1e-9);
    EXPECT_NEAR(fairway::goal_conflict(m3, "f", "e"), -r, 1e-9);
  }
}

TEST(GoalConflict, ConstantColumnIsDegenerate) {
  const auto m = make_matrix({"f", "e"}, {{1, 1, 1}, {2, 4, 7}});
  try {
    fairway::goal_conflict(m, "f", "e");
    FAIL() << "expected DegenerateMetric";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "DegenerateMetric");
  }
}

TEST(Cluster, DuplicatedColumnMergesFirstAtZero) {
  const auto m = make_matrix({"a", "a_copy", "c"},
                             {{1, 2, 3, 7}, {1, 2, 3, 7}, {5, 1, 4, 2}});
  const auto d = fairway::cluster_metrics(m);
  ASSERT_EQ(d.merges.size(), 2u);
  EXPECT_DOUBLE_EQ(d.merges[0].distance, 0.0);
  const auto groups = merged_groups(d);
  EXPECT_EQ(groups[0], (std::set<std::string>{"a", "a_copy"}));
}

TEST(Cluster, TwoCorrelatedPairsMergeBeforeCrossing) {
  const std::vector<double> f1 = {1, 2, 3, 4, 5, 6};
  const std::vector<double> f2 = {2.1, 3.9, 6.2, 7.8, 10.1, 11.9};  // ~2*f1
  const std::vector<double> g1 = {5, 1, 4, 2, 8, 3};
  std::vector<double> g2;
  for (double v : g1) g2.push_back(3.0 * v + 0.5);
  const auto m = make_matrix({"f1", "f2", "g1", "g2"}, {f1, f2, g1, g2});
  const auto d = fairway::cluster_metrics(m);
  ASSERT_EQ(d.merges.size(), 3u);
  const auto groups = merged_groups(d);
  // exact linear relation merges first at distance 0, then the noisy pair,
  // then everything
  EXPECT_EQ(groups[0], (std::set<std::string>{"g1", "g2"}));
  EXPECT_EQ(groups[1], (std::set<std::string>{"f1", "f2"}));
  EXPECT_EQ(groups[2].size(), 4u);
  for (std::size_t i = 1; i < d.merges.size(); ++i)
    EXPECT_GE(d.merges[i].distance, d.merges[i - 1].distance);
}

TEST(Cluster, CanonicalUnderColumnPermutation) {
  std::mt19937_64 gen(9);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::string> names = {"m1", "m2", "m3", "m4", "m5"};
  std::vector<std::vector<double>> cols(5, std::vector<double>(12));
  for (auto& c : cols)
    for (auto& v : c) v = noise(gen);
  const auto d1 = fairway::cluster_metrics(make_matrix(names, cols));
  std::vector<std::size_t> perm = {3, 0, 4, 1, 2};
  std::vector<std::string> names2;
  std::vector<std::vector<double>> cols2;
  for (auto i : perm) {
    names2.push_back(names[i]);
    cols2.push_back(cols[i]);
  }
  const auto d2 = fairway::cluster_metrics(make_matrix(names2, cols2));
  const auto g1 = merged_groups(d1);
  const auto g2 = merged_groups(d2);
  ASSERT_EQ(g1.size(), g2.size());
  for (std::size_t i = 0; i < g1.size(); ++i) {
    EXPECT_EQ(g1[i], g2[i]);
    EXPECT_DOUBLE_EQ(d1.merges[i].distance, d2.merges[i].distance);
  }
}

TEST(Cluster, OutputsAndErrors) {
  const auto m = make_matrix({"a", "b", "c"},
                             {{1, 2, 3, 7}, {4, 0, 3, 1}, {5, 1, 4, 2}});
  const auto d = fairway::cluster_metrics(m);
  const auto j = fairway::dendrogram_json(d);
  EXPECT_EQ(j["leaves"].size(), 3u);
  EXPECT_EQ(j["merges"].size(), 2u);
  const std::string nwk = fairway::to_newick(d);
  EXPECT_EQ(nwk.back(), ';');
  for (const auto& name : {"a", "b", "c"})
    EXPECT_NE(nwk.find(name), std::string::npos);
  EXPECT_THROW(fairway::cluster_metrics(m, {"a"}), Error);
  const auto constant = make_matrix({"a", "b"}, {{1, 1, 1}, {2, 4, 7}});
  EXPECT_THROW(fairway::cluster_metrics(constant), Error);
}

TEST(MetricMatrix, CsvRoundTrip) {
  MetricMatrix m;
  m.key_names = {"g_straight", "g_turn"};
  m.metric_names = {"gini", "throughput_veh_per_h"};
  m.keys = {{1, 2}, {3, 4}};
  m.values = {{0.125, 3600.25}, {1e-17, 0.1}};
  m.provenance = "seed=42\nflow=300";
  const std::string path = ::testing::TempDir() + "matrix_roundtrip.csv";
  {
    std::ofstream out(path);
    fairway::write_csv(m, out);
  }
  const auto r = fairway::read_csv(path);
  EXPECT_EQ(r.key_names, m.key_names);
  EXPECT_EQ(r.metric_names, m.metric_names);
  EXPECT_EQ(r.keys, m.keys);
  EXPECT_EQ(r.values, m.values);
  EXPECT_EQ(r.provenance, m.provenance);
  std::remove(path.c_str());
}

TEST(MetricMatrix, ValidationCatchesBadShapes) {
  MetricMatrix m;
  m.key_names = {"g_straight"};
  m.metric_names = {"gini", "gini"};
  m.keys = {{1}};
  m.values = {{0.1, 0.2}};
  EXPECT_THROW(fairway::validate(m), Error);
  m.metric_names = {"gini", "jain"};
  m.values = {{0.1, std::nan("")}};
  EXPECT_THROW(fairway::validate(m), Error);
  m.values = {{0.1}};
  EXPECT_THROW(fairway::validate(m), Error);
}
