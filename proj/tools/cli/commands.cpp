#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace infomarket::cli {

using nlohmann::json;

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::logic_error("table: row has " + std::to_string(row.size()) + " cells, expected " +
                           std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double x) const { return format_number(x); }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, cell);
}

std::string cell_json(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(double x) const { return std::isfinite(x) ? format_number(x) : "null"; }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return json(s).dump(); }
  };
  return std::visit(Visitor{}, cell);
}

Cell k_cell(const std::optional<TaxParams>& tax) {
  if (tax) return tax->k();
  return std::monostate{};
}

std::optional<TaxParams> tax_of(const ExperimentConfig& config) {
  if (config.k) return TaxParams(*config.k);
  return std::nullopt;
}

std::vector<WeightScheme> all_weight_schemes() {
  return {WeightScheme::Egalitarian, WeightScheme::Linear, WeightScheme::LogOdds};
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += csv_field(table.columns[c]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += csv_field(cell_text(row[c]));
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table, Command command) {
  std::string out = "{\"command\": " + json(std::string(to_string(command))).dump() + ", \"records\": [";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out += r ? ",\n  {" : "\n  {";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ", ";
      out += json(table.columns[c]).dump() + ": " + cell_json(table.rows[r][c]);
    }
    out += '}';
  }
  out += table.rows.empty() ? "]}\n" : "\n]}\n";
  return out;
}

CommandResult run_solve(const ExperimentConfig& config) {
  const BeliefProfile beliefs = beliefs_of(config);
  const MarketKind kind = *config.market;
  CommandResult result;
  result.table.columns = {"market", "k",          "price", "residual", "iterations",
                          "degenerate", "agent", "belief", "side", "fraction"};
  const std::string market(to_string(kind));

  if (kind == MarketKind::TaxedAsymptotic) {
    const double price = taxed_equilibrium_asymptotic(beliefs);
    for (std::size_t i = 0; i < beliefs.size(); ++i)
      result.table.add({market, std::monostate{}, price, std::monostate{}, std::int64_t{0}, false,
                        static_cast<std::int64_t>(i), beliefs[i], std::monostate{}, std::monostate{}});
    return result;
  }

  EquilibriumResult eq;
  switch (kind) {
    case MarketKind::Naive: eq = naive_equilibrium(beliefs); break;
    case MarketKind::Kelly: eq = kelly_equilibrium(beliefs); break;
    case MarketKind::TaxedFinite: eq = taxed_equilibrium_finite(beliefs, TaxParams(*config.k)); break;
    case MarketKind::TaxedAsymptotic: break;
  }
  for (std::size_t i = 0; i < beliefs.size(); ++i) {
    const Position pos = eq.profile.position(i);
    result.table.add({market, k_cell(eq.tax), eq.price, eq.diagnostics.residual,
                      static_cast<std::int64_t>(eq.diagnostics.iterations), eq.diagnostics.degenerate,
                      static_cast<std::int64_t>(i), beliefs[i], std::string(to_string(pos.side)), pos.fraction});
  }
  return result;
}

CommandResult run_vote(const ExperimentConfig& config) {
  const BeliefProfile beliefs = beliefs_of(config);
  const VotingProfile votes = VotingProfile::sincere(beliefs.values());
  std::vector<WeightScheme> schemes;
  if (config.weights)
    schemes = {*config.weights};
  else if (config.has_competences())
    schemes = all_weight_schemes();
  else
    schemes = {WeightScheme::Egalitarian};

  CommandResult result;
  result.table.columns = {"scheme", "agent", "weight", "vote", "margin", "decision"};
  for (WeightScheme scheme : schemes) {
    const WeightProfile w =
        config.has_competences() ? weights_for(scheme, competences_of(config)) : weights_egalitarian(beliefs.size());
    const double margin = weighted_margin(votes, w);
    const std::string decision(to_string(weighted_majority(votes, w)));
    for (std::size_t i = 0; i < beliefs.size(); ++i)
      result.table.add({std::string(to_string(scheme)), static_cast<std::int64_t>(i), w[i],
                        std::string(votes[i] ? "A" : "B"), margin, decision});
  }
  return result;
}

CommandResult run_check_equivalence(const ExperimentConfig& config) {
  const CompetenceProfile q = competences_of(config);
  std::vector<EquivalenceScheme> schemes;
  if (config.weights) {
    switch (*config.weights) {
      case WeightScheme::Egalitarian: schemes = {EquivalenceScheme::SimpleNaive}; break;
      case WeightScheme::Linear: schemes = {EquivalenceScheme::LinearKelly}; break;
      case WeightScheme::LogOdds: schemes = {EquivalenceScheme::LogOddsTaxed}; break;
    }
  } else if (config.market) {
    switch (*config.market) {
      case MarketKind::Naive: schemes = {EquivalenceScheme::SimpleNaive}; break;
      case MarketKind::Kelly: schemes = {EquivalenceScheme::LinearKelly}; break;
      default: schemes = {EquivalenceScheme::LogOddsTaxed}; break;
    }
  } else {
    schemes = {EquivalenceScheme::SimpleNaive, EquivalenceScheme::LinearKelly, EquivalenceScheme::LogOddsTaxed};
  }
  const std::optional<TaxParams> tax = tax_of(config);

  std::vector<SignalProfile> profiles;
  if (config.exhaustive)
    profiles = all_signal_profiles(q);
  else
    profiles.push_back(SignalProfile::parse(*config.signals));

  CommandResult result;
  result.table.columns = {"profile", "signals", "scheme",   "k",     "election",
                          "market",  "agree",   "guaranteed", "price", "weighted_margin"};
  for (std::size_t idx = 0; idx < profiles.size(); ++idx) {
    for (EquivalenceScheme scheme : schemes) {
      const EquivalenceReport r = check_equivalence(scheme, q, profiles[idx], tax);
      result.table.add({static_cast<std::int64_t>(idx), profiles[idx].str(), std::string(to_string(scheme)),
                        k_cell(r.tax), std::string(to_string(r.election)), std::string(to_string(r.market)), r.agree,
                        r.guaranteed, r.price, r.weighted_margin});
      if (r.guaranteed && !r.agree) result.exit_code = kExitEquivalence;
    }
  }
  return result;
}

CommandResult run_accuracy(const ExperimentConfig& config) {
  const CompetenceProfile q = competences_of(config);
  std::vector<Aggregator> aggregators;
  if (config.weights || !config.market) {
    if (config.weights)
      aggregators.push_back(election_aggregator(*config.weights));
    else
      for (WeightScheme s : all_weight_schemes()) aggregators.push_back(election_aggregator(s));
  }
  if (config.market || !config.weights) {
    if (config.market)
      aggregators.push_back(market_aggregator(*config.market, tax_of(config)));
    else
      for (MarketKind m : {MarketKind::Naive, MarketKind::Kelly, MarketKind::TaxedAsymptotic})
        aggregators.push_back(market_aggregator(m));
  }

  const bool exact = !config.trials && q.size() <= kMaxExactAgents;
  const std::uint64_t trials = config.trials.value_or(1'000'000);

  CommandResult result;
  result.table.columns = {"aggregator", "method", "value", "std_error", "trials", "tie_mass"};
  for (const Aggregator& agg : aggregators) {
    const AccuracyEstimate e = exact ? exact_accuracy(agg, q) : monte_carlo_accuracy(agg, q, trials, config.seed);
    if (exact)
      result.table.add({agg.name, std::string(to_string(e.method)), e.value, std::monostate{}, std::monostate{},
                        e.tie_mass});
    else
      result.table.add({agg.name, std::string(to_string(e.method)), e.value, e.std_error,
                        static_cast<std::int64_t>(e.trials), e.tie_mass});
  }
  return result;
}

CommandResult run_sweep_k(const ExperimentConfig& config) {
  const BeliefProfile beliefs = beliefs_of(config);
  std::vector<double> ks = config.k_list;
  if (ks.empty()) ks = config.k ? std::vector<double>{*config.k} : default_k_list();
  const double asymptotic_price = taxed_equilibrium_asymptotic(beliefs);

  struct Row {
    double k = 0.0;
    std::size_t agent = 0;
    double strategy = std::nan("");
    double asymptotic_strategy = std::nan("");
    double price = std::nan("");
    std::string error;
  };
  std::vector<Row> rows;
  bool any_error = false;
  for (double k : ks) {
    const TaxParams tax(k);
    try {
      const EquilibriumResult eq = taxed_equilibrium_finite(beliefs, tax);
      for (std::size_t i = 0; i < beliefs.size(); ++i) {
        Row row;
        row.k = k;
        row.agent = i;
        row.strategy = eq.profile.position(i).signed_fraction();
        row.asymptotic_strategy = taxed_asymptotic_strategy(beliefs[i], eq.price, tax);
        row.price = eq.price;
        rows.push_back(row);
      }
    } catch (const SolverError& e) {
      any_error = true;
      for (std::size_t i = 0; i < beliefs.size(); ++i) {
        Row row;
        row.k = k;
        row.agent = i;
        row.error = e.what();
        rows.push_back(row);
      }
    }
  }

  CommandResult result;
  result.table.columns = {"k", "agent", "belief", "strategy", "asymptotic_strategy", "price", "asymptotic_price"};
  if (any_error) result.table.columns.push_back("error");
  for (const Row& row : rows) {
    auto num = [&](double x) -> Cell {
      if (!row.error.empty()) return std::monostate{};
      return x;
    };
    std::vector<Cell> cells = {row.k,
                               static_cast<std::int64_t>(row.agent),
                               beliefs[row.agent],
                               num(row.strategy),
                               num(row.asymptotic_strategy),
                               num(row.price),
                               asymptotic_price};
    if (any_error) cells.emplace_back(row.error);
    result.table.add(std::move(cells));
  }
  return result;
}

CommandResult run_verify(const ExperimentConfig& config) {
  const BeliefProfile beliefs = beliefs_of(config);
  oracle::GridSpec grid;
  grid.resolution = config.grid_resolution;
  grid.strategy_resolution = config.strategy_resolution;

  std::vector<MarketKind> kinds;
  if (config.market) {
    if (*config.market == MarketKind::TaxedAsymptotic)
      throw ValidationError("market: verify needs a market with a finite utility (naive|kelly|taxed_finite)");
    kinds = {*config.market};
  } else {
    kinds = {MarketKind::Naive, MarketKind::Kelly};
  }
  const std::optional<TaxParams> tax = tax_of(config);

  CommandResult result;
  result.table.columns = {"market", "k", "solver_price", "candidates", "located", "contains_solver_price", "intervals"};
  for (MarketKind kind : kinds) {
    double price = 0.0;
    switch (kind) {
      case MarketKind::Naive: price = naive_equilibrium(beliefs).price; break;
      case MarketKind::Kelly: price = kelly_equilibrium(beliefs).price; break;
      case MarketKind::TaxedFinite: price = taxed_equilibrium_finite(beliefs, *tax).price; break;
      case MarketKind::TaxedAsymptotic: break;
    }
    const auto intervals = oracle::grid_equilibrium_search(beliefs, kind, grid, tax);
    bool located = !intervals.empty();
    bool contains = false;
    std::string text;
    for (const auto& iv : intervals) {
      located = located && oracle::is_located(iv, grid);
      contains = contains || iv.contains(price, grid.step());
      if (!text.empty()) text += ' ';
      text += "[" + format_number(iv.lo) + ";" + format_number(iv.hi) + "]";
    }
    result.table.add({std::string(to_string(kind)), kind == MarketKind::TaxedFinite ? k_cell(tax) : Cell{}, price,
                      static_cast<std::int64_t>(intervals.size()), located, contains, text});
    if (intervals.size() != 1 || !located || !contains) result.exit_code = kExitSolver;
  }
  return result;
}

RenderedOutput run_command(const ExperimentConfig& config, Command command) {
  validate_for(config, command);
  CommandResult r;
  switch (command) {
    case Command::Solve: r = run_solve(config); break;
    case Command::Vote: r = run_vote(config); break;
    case Command::CheckEquivalence: r = run_check_equivalence(config); break;
    case Command::Accuracy: r = run_accuracy(config); break;
    case Command::SweepK: r = run_sweep_k(config); break;
    case Command::Verify: r = run_verify(config); break;
  }
  RenderedOutput out;
  out.text = config.format == OutputFormat::Json ? to_json(r.table, command) : to_csv(r.table);
  out.exit_code = r.exit_code;
  return out;
}

InvestmentProfile investment_profile_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("records") || !doc["records"].is_array())
    throw ValidationError("records: expected the JSON output of solve");
  const json& records = doc["records"];
  std::vector<double> a(records.size(), 0.0), b(records.size(), 0.0);
  for (const json& rec : records) {
    const auto i = rec.at("agent").get<std::size_t>();
    if (i >= records.size()) throw ValidationError("records: agent index out of range");
    if (rec.at("side").is_null()) continue;
    const std::string side = rec.at("side").get<std::string>();
    const double fraction = rec.at("fraction").get<double>();
    if (side == "A") a[i] = fraction;
    if (side == "B") b[i] = fraction;
  }
  return InvestmentProfile(std::move(a), std::move(b));
}

}  // namespace infomarket::cli
