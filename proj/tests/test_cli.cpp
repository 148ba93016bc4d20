#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fairway/analysis/metric_matrix.hpp"

namespace fs = std::filesystem;

namespace {

// Scratch directory per test; configs use relative paths and the binary is
// launched from inside it, so nothing leaks between tests.
struct TempDir {
  fs::path path;
  TempDir() {
    static std::atomic<int> counter{0};
    path = fs::temp_directory_path() /
           ("fairway_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

struct RunResult {
  int exit_code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
  ASSERT_TRUE(out.good());
}

RunResult run_cli(const TempDir& dir, const std::string& args,
                  const std::string& env = "") {
  const std::string cmd = "cd " + dir.path.string() + " && " +
                          (env.empty() ? "" : "env " + env + " ") +
                          std::string(FAIRWAY_BIN) + " " + args +
                          " >cli_stdout.txt 2>cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(dir.path / "cli_stdout.txt");
  r.err = slurp(dir.path / "cli_stderr.txt");
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

// data rows: lines that are neither '#' comments nor the header
int csv_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int rows = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.rfind("#", 0) == 0) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    ++rows;
  }
  return rows;
}

// a small grid sweep that finishes in well under a second per cell
const char* kSweepConfig =
    "experiment = grid-sweep\n"
    "seed = 3\n"
    "[demand]\n"
    "flow_per_entrance_veh_per_h = 300\n"
    "warmup_s = 120\n"
    "horizon_s = 600\n"
    "[plan_grid]\n"
    "green_straight_s = 10,30\n"
    "green_turn_s = 10,30\n";

}  // namespace

TEST(CliGrid, RestrictedSweepWritesFourRows) {
  TempDir dir;
  write_text(dir.path / "sweep.cfg", kSweepConfig);
  const RunResult r = run_cli(dir, "grid-sweep --config sweep.cfg");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "out/grid_sweep.csv: 4 rows, 16 columns"))
      << r.out;

  const std::string csv = slurp(dir.path / "out/grid_sweep.csv");
  EXPECT_EQ(csv_rows(csv), 4);  // row count must match the summary line
  EXPECT_TRUE(contains(csv, "# seed=3"));
  EXPECT_TRUE(contains(csv, "g_straight,g_turn,atkinson,"));
  ASSERT_FALSE(csv.empty());
  EXPECT_EQ(csv.back(), '\n');  // no silent truncation
  EXPECT_FALSE(fs::exists(dir.path / "out/grid_sweep.csv.tmp"));
}

TEST(CliGrid, InvalidPlanBoundExitsOne) {
  TempDir dir;
  write_text(dir.path / "bad.cfg",
             "experiment = grid-sweep\n"
             "seed = 1\n"
             "[plan_grid]\n"
             "green_straight_s = 0,5\n");
  const RunResult r = run_cli(dir, "grid-sweep --config bad.cfg");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(contains(r.err, "green_straight_s")) << r.err;
  EXPECT_TRUE(contains(r.err, "[1,40]")) << r.err;
  EXPECT_TRUE(contains(r.err, "bad.cfg:4")) << r.err;
}

TEST(CliGrid, ThreadsDoNotChangeTheSweep) {
  TempDir dir;
  write_text(dir.path / "sweep.cfg", kSweepConfig);
  ASSERT_EQ(
      run_cli(dir, "grid-sweep --config sweep.cfg --out t1 --threads 1")
          .exit_code,
      0);
  ASSERT_EQ(
      run_cli(dir, "grid-sweep --config sweep.cfg --out t4 --threads 4")
          .exit_code,
      0);
  EXPECT_EQ(slurp(dir.path / "t1/grid_sweep.csv"),
            slurp(dir.path / "t4/grid_sweep.csv"));
}

TEST(CliGrid, SingleRunWritesRecordsAndSummary) {
  TempDir dir;
  write_text(dir.path / "run.cfg",
             "experiment = grid-run\n"
             "seed = 4\n"
             "[demand]\n"
             "flow_per_entrance_veh_per_h = 200\n"
             "warmup_s = 120\n"
             "horizon_s = 600\n");
  const RunResult r = run_cli(dir, "grid-run --config run.cfg");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "out/vehicles.csv")) << r.out;
  EXPECT_TRUE(contains(r.out, "out/summary.txt: 7 lines")) << r.out;

  const std::string summary = slurp(dir.path / "out/summary.txt");
  long long spawned = -1, completed = -1, remaining = -1;
  std::istringstream in(summary);
  std::string key, eq;
  while (in >> key >> eq) {
    long long v = 0;
    if (key == "spawned") in >> spawned;
    else if (key == "completed") in >> completed;
    else if (key == "remaining") in >> remaining;
    else in >> std::ws, std::getline(in, eq), (void)v;
  }
  ASSERT_GT(spawned, 0);
  EXPECT_EQ(spawned, completed + remaining);

  const std::string csv = slurp(dir.path / "out/vehicles.csv");
  EXPECT_EQ(csv_rows(csv), static_cast<int>(spawned));
  std::ostringstream want;
  want << "out/vehicles.csv: " << spawned << " rows";
  EXPECT_TRUE(contains(r.out, want.str())) << r.out;
}

TEST(CliPricing, PriceSweepRerunsAreByteIdentical) {
  TempDir dir;
  write_text(dir.path / "price.cfg",
             "experiment = price-sweep\n"
             "seed = 7\n");
  const RunResult first = run_cli(dir, "price-sweep --config price.cfg --out p1");
  ASSERT_EQ(first.exit_code, 0) << first.err;
  EXPECT_TRUE(contains(first.out, "p1/price_sweep.csv: 25 rows")) << first.out;
  ASSERT_EQ(run_cli(dir, "price-sweep --config price.cfg --out p2").exit_code,
            0);
  const std::string a = slurp(dir.path / "p1/price_sweep.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(dir.path / "p2/price_sweep.csv"));
  EXPECT_EQ(csv_rows(a), 25);
}

TEST(CliPricing, WardropWritesLabeledSummaryAndUserDump) {
  TempDir dir;
  write_text(dir.path / "eq.cfg",
             "experiment = wardrop\n"
             "seed = 7\n"
             "[pricing]\n"
             "price_eur = 2\n"
             "dump_users = true\n"
             "[vot]\n"
             "sample_count = 50\n");
  const RunResult r = run_cli(dir, "wardrop --config eq.cfg");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "out/equilibrium.txt: 8 lines"));
  EXPECT_TRUE(contains(r.out, "out/users.csv: 50 rows"));

  const std::string eq = slurp(dir.path / "out/equilibrium.txt");
  EXPECT_TRUE(contains(eq, "price_eur = 2\n"));
  EXPECT_TRUE(contains(eq, "share_a = "));
  EXPECT_TRUE(contains(eq, "users = 50\n"));
  ASSERT_FALSE(eq.empty());
  EXPECT_EQ(eq.back(), '\n');
  EXPECT_EQ(csv_rows(slurp(dir.path / "out/users.csv")), 50);
}

TEST(CliMismatch, SubcommandMustMatchConfig) {
  TempDir dir;
  write_text(dir.path / "price.cfg",
             "experiment = price-sweep\n"
             "seed = 7\n");
  const RunResult r = run_cli(dir, "grid-sweep --config price.cfg");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(contains(r.err, "declares experiment 'price-sweep'")) << r.err;
}

TEST(CliMismatch, MissingConfigAndMissingSubcommand) {
  TempDir dir;
  EXPECT_EQ(run_cli(dir, "grid-sweep --config nope.cfg").exit_code, 1);
  EXPECT_EQ(run_cli(dir, "").exit_code, 1);
  EXPECT_EQ(run_cli(dir, "--help").exit_code, 0);
}

TEST(CliAnalyze, AlphaEndpointsAndConflictTable) {
  TempDir dir;
  write_text(dir.path / "m.csv",
             "# seed=1\n"
             "g_straight,g_turn,stddev,throughput_veh_per_h\n"
             "1,1,5,100\n"
             "1,2,4,200\n"
             "2,1,3,300\n"
             "2,2,2,400\n");
  write_text(dir.path / "an.cfg",
             "experiment = analyze\n"
             "[analyze]\n"
             "inputs = m.csv\n");
  const RunResult r = run_cli(dir, "analyze --config an.cfg --alpha 0,1");
  ASSERT_EQ(r.exit_code, 0) << r.err;

  const std::string report = slurp(dir.path / "out/alpha_report.csv");
  EXPECT_TRUE(contains(report, "0,throughput_veh_per_h,1,4,0.25")) << report;
  EXPECT_TRUE(contains(report, "1,throughput_veh_per_h,4,4,1")) << report;

  // stddev and throughput are exactly anti-aligned in this table
  const std::string conflict = slurp(dir.path / "out/conflict_table.csv");
  EXPECT_TRUE(contains(conflict, "fairness_column,throughput_veh_per_h"));
  EXPECT_TRUE(contains(conflict, "stddev,-1")) << conflict;
}

TEST(CliAnalyze, DuplicatedColumnMergesFirstAtZero) {
  TempDir dir;
  write_text(dir.path / "m.csv",
             "g_straight,a,a_copy,b\n"
             "1,1,1,5\n"
             "2,2,2,3\n"
             "3,4,4,2\n");
  write_text(dir.path / "an.cfg",
             "experiment = analyze\n"
             "[analyze]\n"
             "inputs = m.csv\n");
  const RunResult r = run_cli(dir, "analyze --config an.cfg");
  ASSERT_EQ(r.exit_code, 0) << r.err;

  const auto j = nlohmann::json::parse(slurp(dir.path / "out/dendrogram.json"));
  ASSERT_GE(j["merges"].size(), 1u);
  EXPECT_DOUBLE_EQ(j["merges"][0]["distance"].get<double>(), 0.0);
  const auto leaves = j["leaves"].get<std::vector<std::string>>();
  EXPECT_EQ(leaves.at(j["merges"][0]["left"].get<int>()), "a");
  EXPECT_EQ(leaves.at(j["merges"][0]["right"].get<int>()), "a_copy");

  const std::string newick = slurp(dir.path / "out/dendrogram.newick");
  EXPECT_TRUE(contains(newick, "a:0")) << newick;
  EXPECT_EQ(newick.back(), '\n');
}

TEST(CliAnalyze, SingleMetricInputFailsCleanly) {
  TempDir dir;
  write_text(dir.path / "m.csv", "price_eur,share_a\n0,0.5\n1,0.4\n");
  write_text(dir.path / "an.cfg",
             "experiment = analyze\n"
             "[analyze]\n"
             "inputs = m.csv\n");
  const RunResult r = run_cli(dir, "analyze --config an.cfg");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_TRUE(contains(r.err, "need at least two metrics")) << r.err;
}

TEST(CliAnalyze, SchemaMismatchListsTheColumnDiff) {
  TempDir dir;
  write_text(dir.path / "a.csv", "g_straight,x,y\n1,1,2\n2,3,4\n");
  write_text(dir.path / "b.csv", "g_straight,x,z\n1,1,2\n2,3,4\n");
  write_text(dir.path / "an.cfg",
             "experiment = analyze\n"
             "[analyze]\n"
             "inputs = a.csv, b.csv\n");
  const RunResult r = run_cli(dir, "analyze --config an.cfg");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(contains(r.err, "b.csv")) << r.err;
  EXPECT_TRUE(contains(r.err, "missing [y]")) << r.err;
  EXPECT_TRUE(contains(r.err, "extra [z]")) << r.err;
}

TEST(CliAnalyze, MergeAveragesAcrossSeeds) {
  TempDir dir;
  write_text(dir.path / "s1.csv",
             "# seed=1\ng_straight,x,y\n1,10,2\n2,20,4\n");
  write_text(dir.path / "s2.csv",
             "# seed=2\ng_straight,x,y\n1,30,2\n2,40,4\n");
  write_text(dir.path / "an.cfg",
             "experiment = analyze\n"
             "[analyze]\n"
             "inputs = s1.csv, s2.csv\n");
  const RunResult r = run_cli(dir, "analyze --config an.cfg");
  ASSERT_EQ(r.exit_code, 0) << r.err;

  const fairway::MetricMatrix merged =
      fairway::read_csv((dir.path / "out/merged.csv").string());
  ASSERT_EQ(merged.values.size(), 2u);
  EXPECT_DOUBLE_EQ(merged.values[0][fairway::column_index(merged, "x")], 20.0);
  EXPECT_DOUBLE_EQ(merged.values[1][fairway::column_index(merged, "x")], 30.0);
  EXPECT_TRUE(contains(merged.provenance, "mean of 2 inputs"));
  EXPECT_TRUE(contains(merged.provenance, "seed=1"));
  EXPECT_TRUE(contains(merged.provenance, "seed=2"));
}

TEST(CliAnalyze, MetricsFlagSelectsColumns) {
  TempDir dir;
  write_text(dir.path / "m.csv",
             "g_straight,stddev,gini,throughput_veh_per_h\n"
             "1,5,0.2,100\n"
             "2,4,0.3,200\n"
             "3,3,0.4,300\n");
  write_text(dir.path / "an.cfg",
             "experiment = analyze\n"
             "[analyze]\n"
             "inputs = m.csv\n");
  const RunResult keep = run_cli(
      dir, "analyze --config an.cfg --metrics stddev,throughput_veh_per_h");
  ASSERT_EQ(keep.exit_code, 0) << keep.err;
  const fairway::MetricMatrix merged =
      fairway::read_csv((dir.path / "out/merged.csv").string());
  EXPECT_EQ(merged.metric_names,
            (std::vector<std::string>{"stddev", "throughput_veh_per_h"}));

  const RunResult bad =
      run_cli(dir, "analyze --config an.cfg --metrics stddev,nope");
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_TRUE(contains(bad.err, "output.metrics")) << bad.err;
  EXPECT_TRUE(contains(bad.err, "'nope'")) << bad.err;
}

TEST(CliLogging, NotesGoToStderrOnly) {
  TempDir dir;
  write_text(dir.path / "sweep.cfg", kSweepConfig);
  const RunResult quiet = run_cli(dir, "grid-sweep --config sweep.cfg --out q");
  const RunResult loud = run_cli(dir, "grid-sweep --config sweep.cfg --out q",
                                 "FAIRWAY_LOG=debug");
  ASSERT_EQ(quiet.exit_code, 0);
  ASSERT_EQ(loud.exit_code, 0);
  EXPECT_EQ(quiet.out, loud.out);
  EXPECT_TRUE(quiet.err.empty()) << quiet.err;
  EXPECT_TRUE(contains(loud.err, "fairway:")) << loud.err;
}
