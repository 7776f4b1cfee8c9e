#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace infomarket;
using namespace infomarket::cli;

struct Overrides {
  std::string config_path;
  std::string market;
  std::string weights;
  std::optional<double> k;
  bool exhaustive = false;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::string format;
  std::string output;
  std::vector<double> k_list;
  std::optional<std::size_t> grid_resolution;
  std::optional<std::size_t> strategy_resolution;
};

ExperimentConfig build_config(const Overrides& o) {
  ExperimentConfig config = load_config(o.config_path);
  if (!o.market.empty()) config.market = parse_market_kind(o.market);
  if (!o.weights.empty()) config.weights = parse_weight_scheme(o.weights);
  if (o.k) config.k = *o.k;
  if (o.exhaustive) config.exhaustive = true;
  if (o.trials) config.trials = *o.trials;
  if (o.seed) config.seed = *o.seed;
  if (!o.k_list.empty()) config.k_list = o.k_list;
  if (o.grid_resolution) config.grid_resolution = *o.grid_resolution;
  if (o.strategy_resolution) config.strategy_resolution = *o.strategy_resolution;
  if (o.format == "csv") config.format = OutputFormat::Csv;
  else if (o.format == "json") config.format = OutputFormat::Json;
  if (!o.output.empty()) config.output_path = o.output;
  return config;
}

int execute(const Overrides& o, Command command) {
  try {
    const ExperimentConfig config = build_config(o);
    const RenderedOutput out = run_command(config, command);
    if (config.output_path) {
      std::ofstream file(*config.output_path, std::ios::binary);
      if (!file) throw ValidationError("output.path: cannot write '" + *config.output_path + "'");
      file << out.text;
    } else {
      std::cout << out.text;
    }
    return out.exit_code;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information markets versus weighted-majority elections"};
  app.require_subcommand(1);
  Overrides o;

  const std::vector<std::pair<Command, std::string>> commands = {
      {Command::Solve, "Solve a market for its competitive equilibrium"},
      {Command::Vote, "Run weighted-majority elections on sincere votes"},
      {Command::CheckEquivalence, "Compare each election with its matching market"},
      {Command::Accuracy, "Group accuracy of elections and markets"},
      {Command::SweepK, "Taxed-market strategies over a list of k values"},
      {Command::Verify, "Cross-check solver prices against the grid oracle"},
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& [command, help] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(command)), help);
    sub->add_option("--config", o.config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--market", o.market, "naive|kelly|taxed_asymptotic|taxed_finite");
    sub->add_option("--weights", o.weights, "egalitarian|linear|log_odds");
    sub->add_option("--k", o.k, "Taxation parameter (taxed_finite only)");
    sub->add_flag("--exhaustive", o.exhaustive, "Use every signal profile");
    sub->add_option("--trials", o.trials, "Monte Carlo trials");
    sub->add_option("--seed", o.seed, "Monte Carlo seed");
    sub->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", o.output, "Output file (default: stdout)");
    sub->add_option("--k-list", o.k_list, "Comma-separated k values for sweep-k")->delimiter(',');
    sub->add_option("--grid-resolution", o.grid_resolution, "Oracle price grid points");
    sub->add_option("--strategy-resolution", o.strategy_resolution, "Oracle strategy grid points");
    subs.emplace_back(sub, command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  for (const auto& [sub, command] : subs)
    if (sub->parsed()) return execute(o, command);
  return kExitValidation;
}
