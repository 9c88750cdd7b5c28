#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "eliminax/cli.hpp"
#include "eliminax/engine.hpp"
#include "eliminax/game.hpp"
#include "eliminax/operators.hpp"

using namespace eliminax;

namespace {

struct RunResult {
  int status;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

const char* kPdFile =
    "game pd\nplayers 2\nstrategies 1 C D\nstrategies 2 C D\n"
    "payoff C C : 2 2\npayoff C D : 0 3\npayoff D C : 3 0\npayoff D D : 1 1\n";

const char* kUdmFile =
    "game udm\nplayers 2\nstrategies 1 U D M\nstrategies 2 L R\n"
    "payoff U L : 3 0\npayoff U R : 0 0\npayoff D L : 0 0\npayoff D R : 3 0\n"
    "payoff M L : 1 0\npayoff M R : 1 0\n";

class TempGameFile {
 public:
  TempGameFile(const std::string& name, const std::string& text)
      : path_(std::filesystem::temp_directory_path() / name) {
    std::ofstream out(path_);
    out << text;
  }
  ~TempGameFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST_CASE("eliminate prints the trace and the verdict") {
  const TempGameFile pd("eliminax_pd.game", kPdFile);
  const RunResult result = run_cli({"eliminate", "--op", "gsbar", "--game", pd.path()});
  CHECK(result.status == 0);
  CHECK(result.out ==
        "stage 0 : {C,D} | {C,D}\n"
        "stage 1 : {D} | {D}\n"
        "fixpoint at 1\n");
}

TEST_CASE("json lines round-trip to the same restrictions") {
  const TempGameFile pd("eliminax_pd2.game", kPdFile);
  const RunResult result =
      run_cli({"eliminate", "--op", "gsbar", "--game", pd.path(), "--format", "jsonl"});
  REQUIRE(result.status == 0);

  const FiniteGame game = parse_game(kPdFile);
  const IterationTrace trace = iterate(make_operator(OperatorName::GSbar, game), Ordinal::omega(2));

  std::istringstream lines(result.out);
  std::string line;
  std::size_t stage = 0;
  while (std::getline(lines, line)) {
    const auto parsed = nlohmann::json::parse(line);
    if (!parsed.contains("stage")) continue;
    REQUIRE(stage < trace.stages.size());
    Restriction rebuilt = Restriction::empty_of(game);
    const auto& players = parsed.at("restriction");
    for (int i = 0; i < game.player_count(); ++i) {
      for (const auto& label : players.at(i)) {
        rebuilt.add(i, game.strategy_index(i, label.get<std::string>()));
      }
    }
    CHECK(rebuilt == trace.stages[stage].second);
    CHECK(parsed.at("stage").get<std::string>() == to_string(trace.stages[stage].first));
    ++stage;
  }
  CHECK(stage == trace.stages.size());
}

TEST_CASE("compare reports coincidence and honors --expect-coincide") {
  const TempGameFile pd("eliminax_pd3.game", kPdFile);
  const RunResult fine =
      run_cli({"compare", "--ops", "gs,gsbar,ls,lsbar", "--game", pd.path(), "--expect-coincide"});
  CHECK(fine.status == 0);
  CHECK(fine.out == "coincide through fixpoint\n");

  const TempGameFile udm("eliminax_udm.game", kUdmFile);
  const RunResult diverged =
      run_cli({"compare", "--ops", "gsbar,mgsbar", "--game", udm.path(), "--expect-coincide"});
  CHECK(diverged.status == 1);
  CHECK(diverged.out.find("diverge at stage 1") != std::string::npos);

  const RunResult tolerated = run_cli({"compare", "--ops", "gsbar,mgsbar", "--game", udm.path()});
  CHECK(tolerated.status == 0);
}

TEST_CASE("order-independence output is deterministic and requires a seed") {
  const TempGameFile pd("eliminax_pd4.game", kPdFile);
  const std::vector<std::string> args = {"order-independence", "--op",   "gsbar", "--game",
                                         pd.path(),            "--trials", "20",  "--seed", "42"};
  const RunResult first = run_cli(args);
  const RunResult second = run_cli(args);
  CHECK(first.status == 0);
  CHECK(first.out == second.out);  // byte-identical
  CHECK(first.out.find("outcome {D} | {D} : count 20") != std::string::npos);
  CHECK(first.out.find("distinct outcomes: 1") != std::string::npos);

  const RunResult missing_seed =
      run_cli({"order-independence", "--op", "gsbar", "--game", pd.path(), "--trials", "5"});
  CHECK(missing_seed.status == 2);
}

TEST_CASE("example subcommand lists and replays") {
  const RunResult listed = run_cli({"example", "--list"});
  CHECK(listed.status == 0);
  CHECK(listed.out.find("nat_minus_one_GRbar") != std::string::npos);
  CHECK(listed.out.find("finite_nonmonotone_LRbar") != std::string::npos);

  const RunResult replayed = run_cli({"example", "--name", "nat_minus_one_GRbar", "--upto", "w+2"});
  CHECK(replayed.status == 0);
  CHECK(replayed.out.find("stage w : {-1} | {-1}\n") != std::string::npos);
  CHECK(replayed.out.find("stage w+1 : {} | {}\n") != std::string::npos);
  CHECK(replayed.out.find("closure w+1\n") != std::string::npos);
  CHECK(replayed.out.find("validated\n") != std::string::npos);

  const RunResult unknown = run_cli({"example", "--name", "bertrand"});
  CHECK(unknown.status == 2);
  CHECK(unknown.err.find("closest:") != std::string::npos);
}

TEST_CASE("check evaluates properties along a trace") {
  const TempGameFile pd("eliminax_pd5.game", kPdFile);
  const RunResult b = run_cli({"check", "--property", "B", "--game", pd.path()});
  CHECK(b.status == 0);
  CHECK(b.out == "property B: holds\n");

  const RunResult d =
      run_cli({"check", "--property", "D", "--op", "lsbar", "--game", pd.path()});
  CHECK(d.status == 0);
  CHECK(d.out ==
        "stage 0 : D holds\n"
        "stage 1 : D holds\n");

  const RunResult no_op = run_cli({"check", "--property", "D", "--game", pd.path()});
  CHECK(no_op.status == 2);
}

TEST_CASE("input errors exit with status 2 and name the problem") {
  const RunResult missing = run_cli({"eliminate", "--op", "gsbar", "--game", "/no/such/file"});
  CHECK(missing.status == 2);
  CHECK(missing.err.find("cannot open") != std::string::npos);

  const TempGameFile bad("eliminax_bad.game",
                         "game g\nplayers 2\nstrategies 1 A\nstrategies 2 B\npayoff A B : 1 x\n");
  const RunResult malformed = run_cli({"eliminate", "--op", "gsbar", "--game", bad.path()});
  CHECK(malformed.status == 2);
  CHECK(malformed.err.find("line 5") != std::string::npos);

  const TempGameFile pd("eliminax_pd6.game", kPdFile);
  const RunResult unknown_op = run_cli({"eliminate", "--op", "gsx", "--game", pd.path()});
  CHECK(unknown_op.status == 2);
  CHECK(unknown_op.err.find("closest: gs") != std::string::npos);

  const RunResult beliefs_on_dominance =
      run_cli({"eliminate", "--op", "gsbar", "--beliefs", "banana", "--game", pd.path()});
  CHECK(beliefs_on_dominance.status == 2);

  const RunResult bad_cap =
      run_cli({"eliminate", "--op", "gsbar", "--cap", "x7", "--game", pd.path()});
  CHECK(bad_cap.status == 2);
}

TEST_CASE("the cap can come from the environment") {
  const TempGameFile pd("eliminax_pd7.game", kPdFile);
  setenv("ELIMINAX_CAP", "0", 1);
  const RunResult capped = run_cli({"eliminate", "--op", "gsbar", "--game", pd.path()});
  unsetenv("ELIMINAX_CAP");
  CHECK(capped.status == 0);
  CHECK(capped.out ==
        "stage 0 : {C,D} | {C,D}\n"
        "cap reached at 0\n");

  // an explicit flag wins over the environment
  setenv("ELIMINAX_CAP", "0", 1);
  const RunResult explicit_cap =
      run_cli({"eliminate", "--op", "gsbar", "--cap", "w", "--game", pd.path()});
  unsetenv("ELIMINAX_CAP");
  CHECK(explicit_cap.out.find("fixpoint at 1") != std::string::npos);
}
