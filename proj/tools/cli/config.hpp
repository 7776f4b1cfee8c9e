#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "infomarket/infomarket.hpp"

namespace infomarket::cli {

enum class OutputFormat { Csv, Json };

enum class AgentInput { Competence, Belief };

enum class Command { Solve, Vote, CheckEquivalence, Accuracy, SweepK, Verify };

std::string_view to_string(Command c);

/// One experiment, as read from a config document and then overridden by
/// command-line flags.
struct ExperimentConfig {
  ModelConfig model;
  AgentInput input = AgentInput::Competence;
  /// Competences or beliefs, depending on `input`.
  std::vector<double> agents;
  std::optional<std::string> signals;
  std::optional<MarketKind> market;
  std::optional<double> k;
  std::optional<WeightScheme> weights;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> trials;
  std::vector<double> k_list;
  bool exhaustive = false;
  OutputFormat format = OutputFormat::Csv;
  std::optional<std::string> output_path;
  std::size_t grid_resolution = oracle::GridSpec{}.resolution;
  std::size_t strategy_resolution = oracle::GridSpec{}.strategy_resolution;

  std::size_t size() const { return agents.size(); }
  bool has_competences() const { return input == AgentInput::Competence; }
};

/// Parses a config document. Errors are ValidationError naming the field.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

/// Checks the cross-field rules that depend on the command being run.
void validate_for(const ExperimentConfig& config, Command command);

CompetenceProfile competences_of(const ExperimentConfig& config);
/// Beliefs given directly, or derived from competences and signals.
BeliefProfile beliefs_of(const ExperimentConfig& config);

/// Figure-2 parameter set used when no k list is configured.
std::vector<double> default_k_list();

}  // namespace infomarket::cli
