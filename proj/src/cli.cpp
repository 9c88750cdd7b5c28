#include "eliminax/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "eliminax/engine.hpp"
#include "eliminax/game.hpp"
#include "eliminax/operators.hpp"
#include "eliminax/ordinal.hpp"
#include "eliminax/symbolic.hpp"

namespace eliminax::cli {

namespace {

using nlohmann::json;

struct CliFailure {
  int code;
  std::string message;
};

// One command per invocation; everything the subcommands need, parsed.
struct CliConfig {
  std::string command;
  std::vector<std::string> operators;
  std::string beliefs = "point";
  bool beliefs_given = false;
  std::string game_path;
  std::string cap = "w*2";
  int trials = 20;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool expect_coincide = false;
  std::string example_name;
  bool list = false;
  std::string upto = "w+2";
  std::string property;
  std::string format = "text";
};

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diagonal = up;
    }
  }
  return row[b.size()];
}

[[noreturn]] void unknown_token(const std::string& what, const std::string& token,
                                const std::vector<std::string>& valid) {
  std::string best;
  std::size_t best_distance = token.size() + 8;
  std::string all;
  for (const std::string& v : valid) {
    if (!all.empty()) all += ", ";
    all += v;
    const std::size_t d = edit_distance(token, v);
    if (d < best_distance) {
      best_distance = d;
      best = v;
    }
  }
  std::string message = "unknown " + what + " '" + token + "'; valid: " + all;
  if (!best.empty()) message += " (closest: " + best + ")";
  throw CliFailure{2, message};
}

OperatorName parse_operator_or_fail(const std::string& token) {
  if (auto name = parse_operator_token(token)) return *name;
  std::vector<std::string> valid;
  for (OperatorName name : all_operator_names()) valid.emplace_back(operator_token(name));
  unknown_token("operator", token, valid);
}

BeliefKind parse_beliefs_or_fail(const std::string& token) {
  if (auto kind = parse_belief_token(token)) return *kind;
  unknown_token("belief structure", token, {"point", "correlated", "independent"});
}

Ordinal parse_ordinal_or_fail(const std::string& text, const std::string& what) {
  if (auto a = parse_ordinal(text)) return *a;
  throw CliFailure{2, "cannot parse " + what + " '" + text +
                          "'; use the forms 12, w, w+3 or w*2"};
}

Ordinal effective_cap(const CliConfig& config) {
  std::string text = config.cap;
  if (text == "w*2") {
    if (const char* env = std::getenv("ELIMINAX_CAP")) text = env;
  }
  return parse_ordinal_or_fail(text, "cap");
}

FiniteGame load_game(const CliConfig& config) {
  if (config.game_path.empty()) throw CliFailure{2, "a game file is required (--game)"};
  std::ifstream in(config.game_path);
  if (!in) throw CliFailure{2, "cannot open game file '" + config.game_path + "'"};
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_game(text.str());
  } catch (const ParseError& e) {
    throw CliFailure{2, config.game_path + ": " + e.what()};
  }
}

GameOperator build_operator(const std::string& token, const FiniteGame& game,
                            const CliConfig& config) {
  const OperatorName name = parse_operator_or_fail(token);
  const BeliefKind kind = parse_beliefs_or_fail(config.beliefs);
  try {
    if (is_rationalizability(name)) return make_operator(name, game, BeliefStructure{kind});
    if (config.beliefs_given)
      throw CliFailure{2, "operator '" + token + "' does not take a belief structure"};
    return make_operator(name, game);
  } catch (const UnsupportedBeliefs& e) {
    throw CliFailure{2, e.what()};
  }
}

json restriction_json(const FiniteGame& game, const Restriction& r) {
  json players = json::array();
  for (int i = 0; i < game.player_count(); ++i) {
    json labels = json::array();
    for (int s = 0; s < game.strategy_count(i); ++s) {
      if (r.contains(i, s)) labels.push_back(game.label(i, s));
    }
    players.push_back(std::move(labels));
  }
  return players;
}

void print_trace(const FiniteGame& game, const IterationTrace& trace, const std::string& format,
                 std::ostream& out) {
  for (const auto& [ordinal, value] : trace.stages) {
    if (format == "jsonl") {
      json line = {{"stage", to_string(ordinal)},
                   {"restriction", restriction_json(game, value)}};
      out << line.dump() << '\n';
    } else {
      out << "stage " << to_string(ordinal) << " : " << render_restriction(game, value) << '\n';
    }
  }
  if (format == "jsonl") {
    json line;
    switch (trace.verdict.kind) {
      case Verdict::Kind::FixpointAt:
        line = {{"verdict", "fixpoint"}, {"at", to_string(trace.verdict.at)}};
        break;
      case Verdict::Kind::CycleDetected:
        line = {{"verdict", "cycle"},
                {"period", trace.verdict.cycle_period},
                {"first", to_string(trace.verdict.cycle_first)}};
        break;
      case Verdict::Kind::CapReached:
        line = {{"verdict", "cap"}, {"at", to_string(trace.verdict.at)}};
        break;
    }
    out << line.dump() << '\n';
  } else {
    out << to_string(trace.verdict) << '\n';
  }
}

int run_eliminate(const CliConfig& config, std::ostream& out) {
  const FiniteGame game = load_game(config);
  const GameOperator op = build_operator(config.operators.at(0), game, config);
  const IterationTrace trace = iterate(op, effective_cap(config));
  print_trace(game, trace, config.format, out);
  return 0;
}

int run_compare(const CliConfig& config, std::ostream& out) {
  const FiniteGame game = load_game(config);
  std::vector<GameOperator> ops;
  for (const std::string& token : config.operators) ops.push_back(build_operator(token, game, config));
  if (ops.empty()) throw CliFailure{2, "at least one operator is required (--ops)"};
  const ComparisonReport report = compare_operators(ops, effective_cap(config));

  if (config.format == "jsonl") {
    json line;
    if (report.coincide) {
      line = {{"coincide", true}};
    } else if (report.first_divergence) {
      line = {{"coincide", false},
              {"stage", to_string(*report.first_divergence)},
              {"left", report.traces[report.divergent_pair.first].operator_name},
              {"right", report.traces[report.divergent_pair.second].operator_name}};
    } else {
      line = {{"coincide", false}, {"reason", "no common fixpoint within the cap"}};
    }
    out << line.dump() << '\n';
  } else {
    if (report.coincide) {
      out << "coincide through fixpoint\n";
    } else if (report.first_divergence) {
      out << "diverge at stage " << to_string(*report.first_divergence) << ": "
          << report.traces[report.divergent_pair.first].operator_name << " vs "
          << report.traces[report.divergent_pair.second].operator_name << '\n';
    } else {
      out << "no common fixpoint within the cap\n";
    }
  }
  return (config.expect_coincide && !report.coincide) ? 1 : 0;
}

int run_order_independence(const CliConfig& config, std::ostream& out) {
  if (!config.seed_given && config.trials > 0)
    throw CliFailure{2, "a seed is required when trials > 0 (--seed)"};
  const FiniteGame game = load_game(config);
  const GameOperator op = build_operator(config.operators.at(0), game, config);
  OrderIndependenceReport report;
  try {
    report = order_independence_trial(op, config.trials, config.seed, effective_cap(config));
  } catch (const NotContracting& e) {
    throw CliFailure{2, e.what()};
  }

  for (const OutcomeGroup& group : report.outcomes) {
    if (config.format == "jsonl") {
      json line = {{"outcome", restriction_json(game, group.outcome)},
                   {"count", group.count},
                   {"closure", to_string(group.closure)},
                   {"omega_outcome", group.omega_outcome}};
      out << line.dump() << '\n';
    } else {
      out << "outcome " << render_restriction(game, group.outcome) << " : count " << group.count
          << ", closure " << to_string(group.closure)
          << (group.omega_outcome ? ", w-outcome" : "") << '\n';
    }
  }
  if (config.format == "jsonl") {
    out << json{{"distinct_outcomes", report.outcomes.size()}, {"trials", report.trials}}.dump()
        << '\n';
  } else {
    out << "distinct outcomes: " << report.outcomes.size() << " over " << report.trials
        << " trials\n";
  }
  return 0;
}

int run_example(const CliConfig& config, std::ostream& out) {
  if (config.list) {
    for (const ExampleEntry& entry : list_examples()) {
      if (config.format == "jsonl") {
        json line = {{"name", entry.name},
                     {"operator", entry.operator_name},
                     {"closure", entry.expected_closure_text},
                     {"description", entry.description}};
        out << line.dump() << '\n';
      } else {
        out << entry.name << " (" << entry.operator_name
            << ", closure " << entry.expected_closure_text << "): " << entry.description << '\n';
      }
    }
    return 0;
  }

  std::vector<std::string> names;
  for (const ExampleEntry& entry : list_examples()) names.push_back(entry.name);
  if (std::find(names.begin(), names.end(), config.example_name) == names.end())
    unknown_token("example", config.example_name, names);

  const Ordinal upto = parse_ordinal_or_fail(config.upto, "--upto");
  ReplayOptions options;
  if (upto.is_finite()) {
    options.check_finite_upto = std::max<int>(2, static_cast<int>(upto.finite_part));
    options.check_past_limit = 2;
  } else {
    options.check_finite_upto = std::max<int>(8, static_cast<int>(upto.finite_part));
    options.check_past_limit = std::max<int>(2, static_cast<int>(upto.finite_part));
  }

  ReplayReport report;
  try {
    report = run_example(config.example_name, options);
  } catch (const StageMismatch& e) {
    if (config.format == "jsonl") {
      out << json{{"error", "stage_mismatch"}, {"message", e.what()}}.dump() << '\n';
    } else {
      out << "stage mismatch: " << e.what() << '\n';
    }
    return 1;
  }

  std::vector<SymbolicStage> shown;
  for (const SymbolicStage& stage : report.stages) {
    if (stage.ordinal < upto) shown.push_back(stage);
  }

  if (config.format == "jsonl") {
    for (const SymbolicStage& stage : shown) {
      out << json{{"stage", to_string(stage.ordinal)}, {"restriction", stage.rendered}}.dump()
          << '\n';
    }
    json summary;
    summary["closure"] = report.computed_closure ? to_string(*report.computed_closure) : "none";
    if (report.cycle) {
      summary["cycle_period"] = report.cycle->first;
      summary["cycle_first"] = to_string(report.cycle->second);
    }
    if (!report.outcome.empty()) summary["outcome"] = report.outcome;
    summary["validated"] = report.validated;
    if (!report.failures.empty()) summary["failures"] = report.failures;
    out << summary.dump() << '\n';
  } else {
    for (const SymbolicStage& stage : shown) {
      out << "stage " << to_string(stage.ordinal) << " : " << stage.rendered << '\n';
    }
    if (report.cycle) {
      out << "cycle of period " << report.cycle->first << " from stage "
          << to_string(report.cycle->second) << '\n';
    }
    out << "closure " << (report.computed_closure ? to_string(*report.computed_closure) : "none")
        << '\n';
    if (!report.outcome.empty()) out << "outcome " << report.outcome << '\n';
    for (const RelaxationNote& note : report.relaxations) {
      out << "relaxation " << note.name << ": outcome " << note.outcome
          << (note.valid_relaxation ? " (valid" : " (INVALID")
          << (note.outcome_differs_from_base ? ", differs from the operator's)" : ")") << '\n';
    }
    for (const std::string& n : report.notes) out << n << '\n';
    for (const std::string& f : report.failures) out << "failure: " << f << '\n';
    out << (report.validated ? "validated" : "validation failed") << '\n';
  }
  return report.validated ? 0 : 1;
}

int run_check(const CliConfig& config, std::ostream& out) {
  const FiniteGame game = load_game(config);
  const std::string property = config.property;
  if (property != "B" && property != "C" && property != "D" && property != "E")
    unknown_token("property", property, {"B", "C", "D", "E"});

  if (property == "B") {
    const bool holds =
        check_property_B(game, BeliefStructure{parse_beliefs_or_fail(config.beliefs)});
    if (config.format == "jsonl") {
      out << json{{"property", "B"}, {"holds", holds}}.dump() << '\n';
    } else {
      out << "property B: " << (holds ? "holds" : "fails") << '\n';
    }
    return 0;
  }

  if (config.operators.empty())
    throw CliFailure{2, "an operator is required to trace properties C, D and E (--op)"};
  const GameOperator op = build_operator(config.operators.at(0), game, config);
  const IterationTrace trace = iterate(op, effective_cap(config));
  const auto evaluate = [&](const Restriction& g) {
    if (property == "C") return check_property_C_at(game, g);
    if (property == "D") return check_property_D_at(game, g);
    return check_property_E_at(game, g);
  };
  for (const auto& [ordinal, value] : trace.stages) {
    const bool holds = evaluate(value);
    if (config.format == "jsonl") {
      out << json{{"stage", to_string(ordinal)}, {"property", property}, {"holds", holds}}.dump()
          << '\n';
    } else {
      out << "stage " << to_string(ordinal) << " : " << property
          << (holds ? " holds" : " fails") << '\n';
    }
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact iterated elimination of strategies in finite games, with replays of the "
               "built-in infinite examples"};
  app.require_subcommand(1);

  CliConfig config;
  std::string ops_csv;
  std::vector<CLI::Option*> belief_options;

  const auto add_common = [&](CLI::App* cmd, bool with_game) {
    if (with_game) cmd->add_option("--game", config.game_path, "game file");
    belief_options.push_back(cmd->add_option(
        "--beliefs", config.beliefs,
        "belief structure for rationalizability operators: point|correlated|independent"));
    cmd->add_option("--cap", config.cap, "iteration cap, an ordinal such as 12, w or w*2");
    cmd->add_option("--format", config.format, "output format: text|jsonl")
        ->check(CLI::IsMember({"text", "jsonl"}));
  };

  CLI::App* eliminate = app.add_subcommand("eliminate", "iterate one operator and print the trace");
  eliminate->add_option("--op", ops_csv, "operator token")->required();
  add_common(eliminate, true);

  CLI::App* compare = app.add_subcommand("compare", "iterate operators in lockstep");
  compare->add_option("--ops", ops_csv, "comma-separated operator tokens")->required();
  compare->add_flag("--expect-coincide", config.expect_coincide,
                    "exit with status 1 unless all operators coincide");
  add_common(compare, true);

  CLI::App* order =
      app.add_subcommand("order-independence", "sample relaxations and group their outcomes");
  order->add_option("--op", ops_csv, "contracting operator token")->required();
  order->add_option("--trials", config.trials, "number of sampled relaxations");
  CLI::Option* seed_option = order->add_option("--seed", config.seed, "64-bit trial seed");
  add_common(order, true);

  CLI::App* example = app.add_subcommand("example", "replay a built-in example");
  example->add_option("--name", config.example_name, "example name (see --list)");
  example->add_flag("--list", config.list, "list the built-in examples");
  example->add_option("--upto", config.upto, "highest stage to print, an ordinal");
  example->add_option("--format", config.format, "output format: text|jsonl")
      ->check(CLI::IsMember({"text", "jsonl"}));

  CLI::App* check = app.add_subcommand("check", "evaluate a property along an operator's trace");
  check->add_option("--property", config.property, "one of B, C, D, E")->required();
  check->add_option("--op", ops_csv, "operator token (for C, D and E)");
  add_common(check, true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help
      out << app.help() << std::flush;
      return 0;
    }
    err << e.what() << '\n';
    return 2;
  }

  config.command = app.get_subcommands().front()->get_name();
  config.seed_given = seed_option->count() > 0;
  for (const CLI::Option* option : belief_options) {
    if (option->count() > 0) config.beliefs_given = true;
  }
  if (!ops_csv.empty()) {
    std::stringstream in(ops_csv);
    std::string token;
    while (std::getline(in, token, ',')) {
      if (!token.empty()) config.operators.push_back(token);
    }
  }
  if (config.command == "example" && !config.list && config.example_name.empty()) {
    err << "an example name is required (--name), or use --list\n";
    return 2;
  }

  // Buffered so identical configurations produce byte-identical output.
  std::ostringstream buffer;
  int status = 0;
  try {
    if (config.command == "eliminate") status = run_eliminate(config, buffer);
    else if (config.command == "compare") status = run_compare(config, buffer);
    else if (config.command == "order-independence") status = run_order_independence(config, buffer);
    else if (config.command == "example") status = run_example(config, buffer);
    else status = run_check(config, buffer);
  } catch (const CliFailure& failure) {
    out << buffer.str() << std::flush;
    err << failure.message << '\n';
    return failure.code;
  } catch (const std::exception& e) {
    out << buffer.str() << std::flush;
    err << e.what() << '\n';
    return 2;
  }
  out << buffer.str() << std::flush;
  return status;
}

}  // namespace eliminax::cli
