#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace infomarket::cli {

/// Empty cells are written as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// 17 significant digits; nan and infinities spelled out.
std::string format_number(double x);

std::string to_csv(const Table& table);
std::string to_json(const Table& table, Command command);

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitEquivalence = 3;

struct CommandResult {
  Table table;
  int exit_code = kExitOk;
};

CommandResult run_solve(const ExperimentConfig& config);
CommandResult run_vote(const ExperimentConfig& config);
CommandResult run_check_equivalence(const ExperimentConfig& config);
CommandResult run_accuracy(const ExperimentConfig& config);
CommandResult run_sweep_k(const ExperimentConfig& config);
CommandResult run_verify(const ExperimentConfig& config);

/// Validates the config for the command, runs it and renders the output.
struct RenderedOutput {
  std::string text;
  int exit_code = kExitOk;
};
RenderedOutput run_command(const ExperimentConfig& config, Command command);

/// Rebuilds the investment profile from the JSON output of `solve`.
InvestmentProfile investment_profile_from_json(const nlohmann::json& doc);

}  // namespace infomarket::cli
