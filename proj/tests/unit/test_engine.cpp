#include "doctest.h"

#include "eliminax/engine.hpp"
#include "eliminax/game.hpp"
#include "eliminax/operators.hpp"
#include "eliminax/ordinal.hpp"
#include "support/random_games.hpp"

using namespace eliminax;
using eliminax::testsupport::random_game;

namespace {

const char* kPdFile =
    "game pd\nplayers 2\nstrategies 1 C D\nstrategies 2 C D\n"
    "payoff C C : 2 2\npayoff C D : 0 3\npayoff D C : 3 0\npayoff D D : 1 1\n";

const char* kPenniesFile =
    "game pennies\nplayers 2\nstrategies 1 H T\nstrategies 2 H T\n"
    "payoff H H : 1 -1\npayoff H T : -1 1\npayoff T H : -1 1\npayoff T T : 1 -1\n";

const char* kUdmFile =
    "game udm\nplayers 2\nstrategies 1 U D M\nstrategies 2 L R\n"
    "payoff U L : 3 0\npayoff U R : 0 0\npayoff D L : 0 0\npayoff D R : 3 0\n"
    "payoff M L : 1 0\npayoff M R : 1 0\n";

Restriction make(const FiniteGame& game, const std::vector<std::vector<int>>& sets) {
  Restriction r = Restriction::empty_of(game);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (int s : sets[i]) r.add(static_cast<int>(i), s);
  }
  return r;
}

const Ordinal kCap = Ordinal::omega(2);

}  // namespace

TEST_CASE("ordinals order, render and parse") {
  CHECK(Ordinal::finite(3) < Ordinal::finite(4));
  CHECK(Ordinal::finite(400) < Ordinal::omega());
  CHECK(Ordinal::omega() < Ordinal::omega(1, 1));
  CHECK(Ordinal::omega(1, 7) < Ordinal::omega(2));
  CHECK(Ordinal::omega().is_limit());
  CHECK(!Ordinal::omega(1, 1).is_limit());
  CHECK(Ordinal::finite(3).successor() == Ordinal::finite(4));
  CHECK(Ordinal::omega().successor() == Ordinal::omega(1, 1));

  for (const char* text : {"0", "12", "w", "w+1", "w+3", "w*2", "w*2+5"}) {
    const auto parsed = parse_ordinal(text);
    REQUIRE(parsed.has_value());
    CHECK(to_string(*parsed) == text);
  }
  CHECK(!parse_ordinal("").has_value());
  CHECK(!parse_ordinal("w*0").has_value());
  CHECK(!parse_ordinal("3w").has_value());
  CHECK(!parse_ordinal("w+").has_value());
}

TEST_CASE("iterating the contracted global dominance step on the prisoner's dilemma") {
  const FiniteGame pd = parse_game(kPdFile);
  const int d = 1;
  const GameOperator gsbar = make_operator(OperatorName::GSbar, pd);
  const IterationTrace trace = iterate(gsbar, kCap);

  REQUIRE(trace.stages.size() == 2);
  CHECK(trace.stages[0].first == Ordinal::finite(0));
  CHECK(trace.stages[0].second == pd.full());
  CHECK(trace.stages[1].second == make(pd, {{d}, {d}}));
  CHECK(trace.verdict.kind == Verdict::Kind::FixpointAt);
  CHECK(closure_ordinal(trace) == Ordinal::finite(1));
}

TEST_CASE("the local and contracted local runs coincide on a finite game") {
  const FiniteGame pd = parse_game(kPdFile);
  const IterationTrace ls = iterate(make_operator(OperatorName::LS, pd), kCap);
  const IterationTrace lsbar = iterate(make_operator(OperatorName::LSbar, pd), kCap);
  REQUIRE(ls.stages.size() == lsbar.stages.size());
  for (std::size_t n = 0; n < ls.stages.size(); ++n) {
    CHECK(ls.stages[n].second == lsbar.stages[n].second);
  }
  CHECK(closure_ordinal(ls) == Ordinal::finite(1));
  CHECK(ls.stages.back().second == make(pd, {{1}, {1}}));
}

TEST_CASE("a game with no dominated strategies closes immediately") {
  const FiniteGame pennies = parse_game(kPenniesFile);
  const IterationTrace trace = iterate(make_operator(OperatorName::GSbar, pennies), kCap);
  CHECK(closure_ordinal(trace) == Ordinal::finite(0));
  CHECK(trace.stages.size() == 1);
}

TEST_CASE("cycles and caps are detected") {
  const FiniteGame pd = parse_game(kPdFile);
  const Restriction full = pd.full();
  const Restriction empty = pd.empty();

  const StepFn oscillate = [&](const Restriction& g) { return g == full ? empty : full; };
  const IterationTrace cycled = iterate_step("oscillator", oscillate, full, kCap);
  CHECK(cycled.verdict.kind == Verdict::Kind::CycleDetected);
  CHECK(cycled.verdict.cycle_period == 2);
  CHECK(cycled.verdict.cycle_first == Ordinal::finite(0));
  CHECK(!closure_ordinal(cycled).has_value());
  CHECK(cycled.at_finite(7) == cycled.stages[1].second);  // periodic extension

  const IterationTrace capped = iterate_step("oscillator", oscillate, full, Ordinal::finite(0));
  CHECK(capped.verdict.kind == Verdict::Kind::CapReached);
  CHECK(capped.stages.size() == 1);
}

TEST_CASE("sampled relaxations of the contracted dominance step") {
  const FiniteGame pd = parse_game(kPdFile);
  const GameOperator gsbar = make_operator(OperatorName::GSbar, pd);
  const IterationTrace base = iterate(gsbar, kCap);

  bool found_maximal_seed = false;
  for (std::uint64_t seed = 0; seed < 64 && !found_maximal_seed; ++seed) {
    const IterationTrace relaxed = iterate(sample_relaxation(gsbar, seed), kCap);
    REQUIRE(relaxed.verdict.kind == Verdict::Kind::FixpointAt);
    // every sampled run must end at the operator's own outcome
    CHECK(relaxed.stages.back().second == base.stages.back().second);
    if (relaxed.stages.size() == base.stages.size()) {
      bool equal = true;
      for (std::size_t n = 0; n < relaxed.stages.size(); ++n)
        equal = equal && relaxed.stages[n].second == base.stages[n].second;
      found_maximal_seed = equal;
    }
  }
  CHECK(found_maximal_seed);  // some seed removes everything the step removes

  // relaxing an operator already at its fixpoint changes nothing
  const FiniteGame pennies = parse_game(kPenniesFile);
  const GameOperator at_fixpoint = make_operator(OperatorName::GSbar, pennies);
  const RelaxationScript script = sample_relaxation(at_fixpoint, 5);
  CHECK(script.step_at(Ordinal::finite(0), pennies.full()) == pennies.full());

  CHECK_THROWS_AS((void)sample_relaxation(make_operator(OperatorName::GS, pd), 1), NotContracting);
}

TEST_CASE("relaxation validity is checked along the recorded trace") {
  const FiniteGame pd = parse_game(kPdFile);
  const GameOperator gsbar = make_operator(OperatorName::GSbar, pd);

  SUBCASE("sampled relaxations are valid") {
    SplitMix64 rng(41);
    for (int round = 0; round < 10; ++round) {
      const FiniteGame game = random_game(rng);
      const GameOperator op = make_operator(OperatorName::GSbar, game);
      const RelaxationScript script = sample_relaxation(op, rng.next());
      const RelaxationReport report = check_relaxation(script, iterate(script, kCap));
      CHECK(report.valid);
      CHECK(report.message == "valid");
    }
  }

  SUBCASE("a script that keeps a strategy the base removes, then adds one back") {
    RelaxationScript script;
    script.base_name = "gsbar";
    script.base_step = [gsbar](const Restriction& g) { return gsbar.step(g); };
    script.top = pd.full();
    script.provenance = RelaxationScript::Scripted{"keep_then_add"};
    const Restriction cc = make(pd, {{0}, {0}});
    script.choose = [cc](const Ordinal&, const Restriction& g, const Restriction& proposal) {
      return g == cc ? proposal : cc;
    };
    const IterationTrace trace = iterate(script, kCap);
    const RelaxationReport report = check_relaxation(script, trace);
    CHECK(!report.valid);
    CHECK(report.violated_condition == 1);
    CHECK(report.violation_stage == Ordinal::finite(0));
  }
}

TEST_CASE("order-independence trials group outcomes") {
  const FiniteGame pennies = parse_game(kPenniesFile);
  const OrderIndependenceReport immediate =
      order_independence_trial(make_operator(OperatorName::GSbar, pennies), 8, 99, kCap);
  REQUIRE(immediate.outcomes.size() == 1);
  CHECK(immediate.outcomes[0].outcome == pennies.full());
  CHECK(immediate.outcomes[0].count == 8);
  CHECK(immediate.outcomes[0].closure == Ordinal::finite(0));
  CHECK(immediate.outcomes[0].omega_outcome);

  const FiniteGame pd = parse_game(kPdFile);
  const OrderIndependenceReport report =
      order_independence_trial(make_operator(OperatorName::GSbar, pd), 20, 7, kCap);
  REQUIRE(report.outcomes.size() == 1);
  CHECK(report.outcomes[0].outcome == make(pd, {{1}, {1}}));

  // determinism: the same seed reproduces the same grouping
  const OrderIndependenceReport again =
      order_independence_trial(make_operator(OperatorName::GSbar, pd), 20, 7, kCap);
  REQUIRE(again.outcomes.size() == report.outcomes.size());
  CHECK(again.outcomes[0].count == report.outcomes[0].count);
  CHECK(again.outcomes[0].first_trial_seed == report.outcomes[0].first_trial_seed);

  CHECK_THROWS_AS(
      (void)order_independence_trial(make_operator(OperatorName::LS, pd), 3, 1, kCap),
      NotContracting);
}

TEST_CASE("operator comparisons in lockstep") {
  const FiniteGame pd = parse_game(kPdFile);
  SUBCASE("the four pure dominance operators coincide on a finite game") {
    const ComparisonReport report = compare_operators(
        {make_operator(OperatorName::GS, pd), make_operator(OperatorName::GSbar, pd),
         make_operator(OperatorName::LS, pd), make_operator(OperatorName::LSbar, pd)},
        kCap);
    CHECK(report.coincide);
  }
  SUBCASE("the rationalizability family coincides under point beliefs") {
    const BeliefStructure point{BeliefKind::PointBeliefs};
    const ComparisonReport report = compare_operators(
        {make_operator(OperatorName::GRbar, pd, point), make_operator(OperatorName::LRbar, pd, point),
         make_operator(OperatorName::LR, pd, point)},
        kCap);
    CHECK(report.coincide);
  }
  SUBCASE("the mixed dominance family coincides") {
    const FiniteGame udm = parse_game(kUdmFile);
    const ComparisonReport report = compare_operators(
        {make_operator(OperatorName::MGS, udm), make_operator(OperatorName::MGSbar, udm),
         make_operator(OperatorName::MLS, udm), make_operator(OperatorName::MLSbar, udm)},
        kCap);
    CHECK(report.coincide);
  }
  SUBCASE("a genuine divergence is located") {
    const FiniteGame udm = parse_game(kUdmFile);
    const ComparisonReport report = compare_operators(
        {make_operator(OperatorName::GSbar, udm), make_operator(OperatorName::MGSbar, udm)}, kCap);
    CHECK(!report.coincide);
    CHECK(report.first_divergence == Ordinal::finite(1));
  }
  SUBCASE("operators over different games cannot be compared") {
    const FiniteGame udm = parse_game(kUdmFile);
    CHECK_THROWS_AS((void)compare_operators({make_operator(OperatorName::GS, pd),
                                             make_operator(OperatorName::GS, udm)},
                                            kCap),
                    GameMismatch);
  }
}

TEST_CASE("a monotonic base step keeps its run below every relaxed run") {
  SplitMix64 rng(43);
  const BeliefStructure point{BeliefKind::PointBeliefs};
  for (int round = 0; round < 15; ++round) {
    const FiniteGame game = random_game(rng);
    for (const GameOperator& op : {make_operator(OperatorName::GSbar, game),
                                   make_operator(OperatorName::GRbar, game, point)}) {
      const IterationTrace base = iterate(op, kCap);
      const RelaxationScript script = sample_relaxation(op, rng.next());
      const IterationTrace relaxed = iterate(script, kCap);
      const std::uint32_t depth = static_cast<std::uint32_t>(
          std::max(base.stages.size(), relaxed.stages.size()));
      for (std::uint32_t n = 0; n < depth; ++n) {
        CHECK(restriction_leq(base.at_finite(n), relaxed.at_finite(n)));
      }
    }
  }
}

TEST_CASE("the outcome of a monotonic contracting operator is its largest fixpoint") {
  SplitMix64 rng(47);
  const BeliefStructure correlated{BeliefKind::CorrelatedMixed};
  for (int round = 0; round < 12; ++round) {
    const FiniteGame game = random_game(rng);
    for (const GameOperator& op : {make_operator(OperatorName::GSbar, game),
                                   make_operator(OperatorName::MGSbar, game),
                                   make_operator(OperatorName::GRbar, game, correlated)}) {
      const IterationTrace trace = iterate(op, kCap);
      const Restriction outcome = trace.stages.back().second;
      CHECK(op.step(outcome) == outcome);

      // no strictly larger restriction may be fixed
      const Restriction removed = restriction_difference(game.full(), outcome);
      for (int extra = 0; extra < 4; ++extra) {
        Restriction larger = outcome;
        std::vector<std::pair<int, int>> pool;
        for (int i = 0; i < game.player_count(); ++i)
          for (int s : removed.allowed(i)) pool.emplace_back(i, s);
        if (pool.empty()) break;
        const auto& [player, strategy] = pool[rng.below(pool.size())];
        larger.add(player, strategy);
        CHECK(op.step(larger) != larger);
      }
    }
  }
}

TEST_CASE("stages decrease weakly for contracting or monotonic operators") {
  SplitMix64 rng(53);
  const BeliefStructure point{BeliefKind::PointBeliefs};
  for (int round = 0; round < 12; ++round) {
    const FiniteGame game = random_game(rng);
    for (const GameOperator& op :
         {make_operator(OperatorName::GS, game), make_operator(OperatorName::GSbar, game),
          make_operator(OperatorName::MGS, game), make_operator(OperatorName::LSbar, game),
          make_operator(OperatorName::GR, game, point),
          make_operator(OperatorName::LRbar, game, point)}) {
      const IterationTrace trace = iterate(op, kCap);
      for (std::size_t n = 0; n + 1 < trace.stages.size(); ++n) {
        CHECK(restriction_leq(trace.stages[n + 1].second, trace.stages[n].second));
      }
    }
  }
}

TEST_CASE("memoized steps return the cached value") {
  const FiniteGame pd = parse_game(kPdFile);
  int calls = 0;
  const MemoizedStep memo(StepFn([&](const Restriction& g) {
    ++calls;
    return gs_step(pd, g);
  }));
  const Restriction full = pd.full();
  const Restriction a = memo(full);
  const Restriction b = memo(full);
  CHECK(a == b);
  CHECK(calls == 1);
}

TEST_CASE("trial seeds are reproducible in isolation") {
  CHECK(trial_seed(42, 0) == trial_seed(42, 0));
  CHECK(trial_seed(42, 0) != trial_seed(42, 1));
  CHECK(trial_seed(42, 5) != trial_seed(43, 5));
}
