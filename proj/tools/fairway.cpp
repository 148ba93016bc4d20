#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "fairway/experiment.hpp"

namespace {

// --alpha and --metrics accept the same comma-list syntax the config file
// uses, so the flag can override the key verbatim.
std::vector<double> parse_alpha_flag(const std::string& text) {
  fairway::ConfigFile synth;
  synth.path = "--alpha";
  const fairway::ConfigFile::Entry entry{text, 0, false};
  auto values = fairway::parse_number_list(synth, "alpha", entry, false, 0.0);
  for (double a : values)
    if (!(a >= 0.0 && a <= 1.0))
      throw fairway::Error("ConfigError", "--alpha values must lie in [0,1]");
  return values;
}

std::vector<std::string> parse_metrics_flag(const std::string& text) {
  const fairway::ConfigFile::Entry entry{text, 0, false};
  auto out = fairway::parse_string_list(entry);
  if (out.empty())
    throw fairway::Error("ConfigError", "--metrics lists no column names");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributive-fairness experiments for traffic engineering"};
  app.require_subcommand(1);

  std::string config_path, out_dir, alpha_list, metrics_list;
  int threads = -1;  // -1: keep whatever the config says

  const std::pair<const char*, const char*> kinds[] = {
      {"grid-sweep", "simulate every signal plan on the configured green axes"},
      {"grid-run", "simulate one signal plan and dump vehicle records"},
      {"wardrop", "solve one tolled equilibrium on the two-route corridor"},
      {"price-sweep", "solve the corridor equilibrium across a toll ladder"},
      {"analyze", "fairness reports over metric-matrix CSVs"},
  };
  for (const auto& [name, desc] : kinds) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "experiment config file")
        ->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--threads", threads,
                    "max parallel sweep workers, 0 = all cores")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--alpha", alpha_list,
                    "comma list of alpha levels (overrides config)");
    sub->add_option("--metrics", metrics_list,
                    "comma list of metric columns to keep (overrides config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    fairway::ExperimentConfig ec = fairway::load_experiment_config(config_path);
    if (fairway::experiment_name(ec.kind) != sub)
      throw fairway::Error(
          "ConfigError", config_path + ": declares experiment '" +
                             fairway::experiment_name(ec.kind) +
                             "', but the subcommand is '" + sub + "'");
    if (!out_dir.empty()) ec.out_dir = out_dir;
    if (threads >= 0) ec.threads = threads;
    if (!alpha_list.empty()) ec.alphas = parse_alpha_flag(alpha_list);
    if (!metrics_list.empty()) ec.metrics = parse_metrics_flag(metrics_list);
    fairway::run_experiment(ec, std::cout);
  } catch (const fairway::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == "ConfigError" ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
