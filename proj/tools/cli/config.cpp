#include "config.hpp"

#include <fstream>
#include <sstream>

namespace infomarket::cli {

using nlohmann::json;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Vote: return "vote";
    case Command::CheckEquivalence: return "check-equivalence";
    case Command::Accuracy: return "accuracy";
    case Command::SweepK: return "sweep-k";
    case Command::Verify: return "verify";
  }
  return "?";
}

std::vector<double> default_k_list() { return {0.1, 0.2, 1.0, 2.0, 10.0, 20.0}; }

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ValidationError(path + ": " + message);
}

double number_at(const json& value, const std::string& path) {
  if (!value.is_number()) fail(path, "expected a number");
  return value.get<double>();
}

std::uint64_t count_at(const json& value, const std::string& path) {
  if (!value.is_number_integer() || value.get<std::int64_t>() < 0) fail(path, "expected a non-negative integer");
  return value.get<std::uint64_t>();
}

std::string string_at(const json& value, const std::string& path) {
  if (!value.is_string()) fail(path, "expected a string");
  return value.get<std::string>();
}

template <class F>
auto rethrow_with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    // Library messages already start with the field name; keep them as-is.
    if (msg.rfind(path, 0) == 0) throw;
    fail(path, msg);
  }
}

void parse_agents(const json& agents, ExperimentConfig& config) {
  if (!agents.is_array() || agents.empty()) fail("agents", "expected a nonempty list");
  std::optional<AgentInput> kind;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string path = "agents[" + std::to_string(i) + "]";
    const json& entry = agents[i];
    if (!entry.is_object()) fail(path, "expected an object with 'competence' or 'belief'");
    const bool has_q = entry.contains("competence");
    const bool has_b = entry.contains("belief");
    if (has_q == has_b) fail(path, "expected exactly one of 'competence' or 'belief'");
    const AgentInput this_kind = has_q ? AgentInput::Competence : AgentInput::Belief;
    if (kind && *kind != this_kind) fail(path, "mixes competence and belief entries");
    kind = this_kind;
    if (has_q) {
      const double q = number_at(entry["competence"], path + ".competence");
      if (!(q > 0.5 && q < 1.0)) fail(path + ".competence", "must lie in (0.5, 1), got " + std::to_string(q));
      config.agents.push_back(q);
    } else {
      const double b = number_at(entry["belief"], path + ".belief");
      if (!(b > 0.0 && b < 1.0)) fail(path + ".belief", "must lie in (0, 1), got " + std::to_string(b));
      config.agents.push_back(b);
    }
  }
  config.input = *kind;
}

std::string parse_signals(const json& value) {
  std::string out;
  if (value.is_string()) {
    out = value.get<std::string>();
  } else if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i) {
      const std::string s = string_at(value[i], "signals[" + std::to_string(i) + "]");
      if (s.size() != 1) fail("signals[" + std::to_string(i) + "]", "expected \"A\" or \"B\"");
      out += s;
    }
  } else {
    fail("signals", "expected a list of \"A\"/\"B\" or a string such as \"ABBA\"");
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i] != 'A' && out[i] != 'B')
      fail("signals[" + std::to_string(i) + "]", std::string("expected A or B, got '") + out[i] + "'");
  return out;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config: expected a JSON object");
  ExperimentConfig config;
  if (doc.contains("prior")) config.model.prior = number_at(doc["prior"], "prior");
  if (doc.contains("endowment")) config.model.endowment = number_at(doc["endowment"], "endowment");
  config.model.validate();

  if (!doc.contains("agents")) fail("agents", "missing");
  parse_agents(doc["agents"], config);

  if (doc.contains("signals")) config.signals = parse_signals(doc["signals"]);
  if (doc.contains("market"))
    config.market = rethrow_with_path("market", [&] { return parse_market_kind(string_at(doc["market"], "market")); });
  if (doc.contains("k")) config.k = number_at(doc["k"], "k");
  if (doc.contains("weights"))
    config.weights =
        rethrow_with_path("weights", [&] { return parse_weight_scheme(string_at(doc["weights"], "weights")); });
  if (doc.contains("seed")) config.seed = count_at(doc["seed"], "seed");
  if (doc.contains("trials")) config.trials = count_at(doc["trials"], "trials");
  if (doc.contains("exhaustive")) {
    if (!doc["exhaustive"].is_boolean()) fail("exhaustive", "expected true or false");
    config.exhaustive = doc["exhaustive"].get<bool>();
  }
  if (doc.contains("k_list")) {
    const json& list = doc["k_list"];
    if (!list.is_array()) fail("k_list", "expected a list of numbers");
    for (std::size_t i = 0; i < list.size(); ++i)
      config.k_list.push_back(number_at(list[i], "k_list[" + std::to_string(i) + "]"));
  }
  if (doc.contains("output")) {
    const json& out = doc["output"];
    if (!out.is_object()) fail("output", "expected an object with 'path' and/or 'format'");
    if (out.contains("path")) config.output_path = string_at(out["path"], "output.path");
    if (out.contains("format")) {
      const std::string f = string_at(out["format"], "output.format");
      if (f == "csv")
        config.format = OutputFormat::Csv;
      else if (f == "json")
        config.format = OutputFormat::Json;
      else
        fail("output.format", "expected csv or json, got '" + f + "'");
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("--config: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("--config: " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

void validate_for(const ExperimentConfig& config, Command command) {
  config.model.validate();
  const std::size_t n = config.size();
  if (n == 0) fail("agents", "expected a nonempty list");

  if (config.signals && config.signals->size() != n)
    fail("signals", "length " + std::to_string(config.signals->size()) + " does not match agents length " +
                        std::to_string(n));
  if (config.signals && !config.has_competences()) fail("signals", "only allowed with competence agents");

  if (config.k && !(*config.k > 0.0)) fail("k", "must be > 0, got " + std::to_string(*config.k));
  for (std::size_t i = 0; i < config.k_list.size(); ++i)
    if (!(config.k_list[i] > 0.0))
      fail("k_list[" + std::to_string(i) + "]", "must be > 0, got " + std::to_string(config.k_list[i]));

  const bool taxed_finite = config.market == MarketKind::TaxedFinite;
  if (command == Command::SweepK) {
    if (config.market && *config.market != MarketKind::TaxedFinite && *config.market != MarketKind::TaxedAsymptotic)
      fail("market", "sweep-k needs a taxed market");
  } else {
    if (config.k && !taxed_finite) fail("k", "only allowed when market is taxed_finite");
    if (taxed_finite && !config.k) fail("k", "required when market is taxed_finite");
  }

  if (config.trials && *config.trials == 0) fail("trials", "must be >= 1");

  if (!config.has_competences()) {
    if (config.weights && *config.weights != WeightScheme::Egalitarian)
      fail("weights", "scheme '" + std::string(to_string(*config.weights)) + "' needs competences, agents give beliefs");
    if (command == Command::Accuracy) fail("agents", "accuracy needs competences, agents give beliefs");
    if (command == Command::CheckEquivalence) fail("agents", "check-equivalence needs competences");
  }

  const bool needs_beliefs = command == Command::Solve || command == Command::SweepK || command == Command::Verify ||
                             command == Command::Vote;
  if (needs_beliefs && config.has_competences() && !config.signals)
    fail("signals", "required to derive beliefs from competences");
  if (command == Command::CheckEquivalence && !config.signals && !config.exhaustive)
    fail("signals", "required unless --exhaustive is given");
  if (command == Command::Solve && !config.market) fail("market", "required for solve");
  if ((command == Command::CheckEquivalence || command == Command::Accuracy) && config.has_competences() &&
      n > kEnumerationCap && config.exhaustive)
    fail("agents", "too many agents to enumerate every signal profile");
  if (command == Command::Verify && n > oracle::kMaxGridAgents)
    fail("agents", "verify supports at most " + std::to_string(oracle::kMaxGridAgents) + " agents");
  if (command == Command::Verify && (config.grid_resolution < 3 || config.strategy_resolution < 3))
    fail("grid", "resolutions must be >= 3");
}

CompetenceProfile competences_of(const ExperimentConfig& config) {
  if (!config.has_competences()) fail("agents", "competences required");
  return CompetenceProfile(config.agents);
}

BeliefProfile beliefs_of(const ExperimentConfig& config) {
  if (!config.has_competences()) return BeliefProfile(config.agents);
  if (!config.signals) fail("signals", "required to derive beliefs from competences");
  return beliefs_from_signals(competences_of(config), SignalProfile::parse(*config.signals));
}

}  // namespace infomarket::cli
