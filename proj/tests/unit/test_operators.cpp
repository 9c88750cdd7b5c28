#include "doctest.h"

#include <functional>

#include "eliminax/engine.hpp"
#include "eliminax/game.hpp"
#include "eliminax/operators.hpp"
#include "support/random_games.hpp"

using namespace eliminax;
using eliminax::testsupport::random_game;
using eliminax::testsupport::random_nested_pair;
using eliminax::testsupport::random_restriction;

namespace {

const char* kPdFile =
    "game pd\nplayers 2\nstrategies 1 C D\nstrategies 2 C D\n"
    "payoff C C : 2 2\npayoff C D : 0 3\npayoff D C : 3 0\npayoff D D : 1 1\n";

const char* kPenniesFile =
    "game pennies\nplayers 2\nstrategies 1 H T\nstrategies 2 H T\n"
    "payoff H H : 1 -1\npayoff H T : -1 1\npayoff T H : -1 1\npayoff T T : 1 -1\n";

// Row payoffs (3,0), (0,3), (1,1); the column player is indifferent. The
// middle row is dominated by no pure strategy but by the even mixture of
// the outer rows, with margin 1/2.
const char* kUdmFile =
    "game udm\nplayers 2\nstrategies 1 U D M\nstrategies 2 L R\n"
    "payoff U L : 3 0\npayoff U R : 0 0\npayoff D L : 0 0\npayoff D R : 3 0\n"
    "payoff M L : 1 0\npayoff M R : 1 0\n";

// Player 1 is paid the index of their own strategy, player 2 is paid 1
// everywhere; with mixed beliefs only the top strategy of player 1 is ever
// a best response while everything of player 2 is.
const char* kLadderFile =
    "game ladder\nplayers 2\nstrategies 1 1 2 3\nstrategies 2 1 2 3\n"
    "payoff 1 1 : 1 1\npayoff 1 2 : 1 1\npayoff 1 3 : 1 1\n"
    "payoff 2 1 : 2 1\npayoff 2 2 : 2 1\npayoff 2 3 : 2 1\n"
    "payoff 3 1 : 3 1\npayoff 3 2 : 3 1\npayoff 3 3 : 3 1\n";

Restriction make(const FiniteGame& game, const std::vector<std::vector<int>>& sets) {
  Restriction r = Restriction::empty_of(game);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (int s : sets[i]) r.add(static_cast<int>(i), s);
  }
  return r;
}

// Brute-force re-derivation of one pure-dominance survivor set, written
// against the payoff tensor directly.
bool brute_dominates(const FiniteGame& game, const Restriction& g, int player, int dominator,
                     int dominated) {
  std::vector<std::vector<int>> allowed;
  for (int j = 0; j < game.player_count(); ++j) allowed.push_back(g.allowed(j));
  std::vector<std::size_t> odo(game.player_count(), 0);
  bool any_profile = false;
  const std::function<bool(int)> recurse = [&](int j) -> bool {
    if (j == game.player_count()) {
      any_profile = true;
      JointStrategy s(game.player_count());
      for (int k = 0; k < game.player_count(); ++k)
        s[k] = k == player ? dominator : allowed[k][odo[k]];
      const Rational hi = game.payoff(player, s);
      s[player] = dominated;
      return hi > game.payoff(player, s);
    }
    if (j == player) return recurse(j + 1);
    if (allowed[j].empty()) return true;
    for (odo[j] = 0; odo[j] < allowed[j].size(); ++odo[j]) {
      if (!recurse(j + 1)) return false;
    }
    return true;
  };
  const bool result = recurse(0);
  (void)any_profile;
  return result;
}

Restriction brute_pure_step(const FiniteGame& game, const Restriction& g, bool global) {
  Restriction out = Restriction::empty_of(game);
  for (int i = 0; i < game.player_count(); ++i) {
    std::vector<int> domain;
    if (global) {
      for (int s = 0; s < game.strategy_count(i); ++s) domain.push_back(s);
    } else {
      domain = g.allowed(i);
    }
    for (int s = 0; s < game.strategy_count(i); ++s) {
      bool dominated = false;
      for (int d : domain) {
        if (brute_dominates(game, g, i, d, s)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) out.add(i, s);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("strict dominance on the prisoner's dilemma") {
  const FiniteGame pd = parse_game(kPdFile);
  const Restriction full = pd.full();
  const int c = 0, d = 1;

  // exhaustive pairwise inequality check first
  CHECK(pd.payoff(0, {d, c}) > pd.payoff(0, {c, c}));
  CHECK(pd.payoff(0, {d, d}) > pd.payoff(0, {c, d}));
  CHECK(strictly_dominates(pd, full, 0, d, c));
  CHECK(!strictly_dominates(pd, full, 0, c, d));
  CHECK(brute_dominates(pd, full, 0, d, c));

  // a universal quantifier over an empty opponent set holds vacuously
  const Restriction no_opponent = make(pd, {{c, d}, {}});
  CHECK(strictly_dominates(pd, no_opponent, 0, d, c));
  CHECK(strictly_dominates(pd, no_opponent, 0, c, c));

  CHECK_THROWS_AS((void)strictly_dominates(pd, full, 0, 5, 0), UnknownStrategy);
}

TEST_CASE("pure dominance steps") {
  const FiniteGame pd = parse_game(kPdFile);
  const int d = 1;
  CHECK(gs_step(pd, pd.full()) == make(pd, {{d}, {d}}));
  CHECK(ls_step(pd, pd.full()) == make(pd, {{d}, {d}}));

  const FiniteGame pennies = parse_game(kPenniesFile);
  CHECK(gs_step(pennies, pennies.full()) == pennies.full());

  // with an empty own set the dominator quantifier is vacuously false
  CHECK(ls_step(pd, pd.empty()) == pd.full());
  // while the global step still removes everything, vacuously dominated
  CHECK(gs_step(pd, pd.empty()) == pd.empty());

  const FiniteGame other = parse_game(kUdmFile);
  CHECK_THROWS_AS((void)gs_step(pd, other.full()), GameMismatch);
}

TEST_CASE("mixed dominance steps remove the middle row") {
  const FiniteGame udm = parse_game(kUdmFile);
  const int u = 0, d = 1, l = 0, r = 1;
  const Restriction full = udm.full();

  const auto margin = mixed_domination_margin(udm, full, 0, 2, {u, d, 2});
  REQUIRE(margin.has_value());
  CHECK(*margin == Rational(1, 2));

  CHECK(mgs_step(udm, full) == make(udm, {{u, d}, {l, r}}));
  CHECK(mls_step(udm, full) == make(udm, {{u, d}, {l, r}}));
  // no pure dominator exists for the middle row
  CHECK(gs_step(udm, full) == full);

  // mixed dominators from an empty own set do not exist, so the row player
  // keeps everything; the column player faces an empty opponent set and is
  // vacuously dominated by any own mixture
  const Restriction empty_own = make(udm, {{}, {l, r}});
  CHECK(mls_step(udm, empty_own) == make(udm, {{u, d, 2}, {}}));
}

TEST_CASE("best responses to point and correlated beliefs") {
  const FiniteGame pd = parse_game(kPdFile);
  const int c = 0, d = 1;
  CHECK(is_best_response(pd, 0, d, PointBelief{{0, d}}, FullDomain{}));
  CHECK(!is_best_response(pd, 0, c, PointBelief{{0, d}}, FullDomain{}));

  const FiniteGame udm = parse_game(kUdmFile);
  const CorrelatedBelief half{{{{0, 0}, Rational(1, 2)}, {{0, 1}, Rational(1, 2)}}};
  // expected payoff of the middle row is 1, the outer rows give 3/2
  CHECK(!is_best_response(udm, 0, 2, half, FullDomain{}));
  CHECK(is_best_response(udm, 0, 0, half, FullDomain{}));

  // narrowing: a belief must be supported inside the restriction
  const Restriction narrowed = make(pd, {{c, d}, {c}});
  CHECK_THROWS_AS((void)is_best_response(pd, 0, c, PointBelief{{0, d}}, ResponseDomain{narrowed}),
                  SupportOutsideNarrowing);
  CHECK(is_best_response(pd, 0, d, PointBelief{{0, c}}, ResponseDomain{narrowed}));

  const CorrelatedBelief bad{{{{0, 0}, Rational(1, 3)}, {{0, 1}, Rational(1, 3)}}};
  CHECK_THROWS_AS((void)is_best_response(pd, 0, c, bad, FullDomain{}), std::invalid_argument);
}

TEST_CASE("rationalizability steps") {
  const FiniteGame pd = parse_game(kPdFile);
  const int d = 1;
  const BeliefStructure point{BeliefKind::PointBeliefs};
  const BeliefStructure correlated{BeliefKind::CorrelatedMixed};

  CHECK(gr_step(pd, point, pd.full()) == make(pd, {{d}, {d}}));
  CHECK(gr_step(pd, point, pd.empty()) == pd.empty());
  CHECK(gr_step(pd, correlated, pd.empty()) == pd.empty());

  // player 1's top strategy is the unique best response to every mixed
  // belief; everything of player 2 responds to anything
  const FiniteGame ladder = parse_game(kLadderFile);
  const Restriction expected = make(ladder, {{2}, {0, 1, 2}});
  CHECK(meet(lr_step(ladder, correlated, ladder.full()), ladder.full()) == expected);

  // the contracted local step fixes the bottom diagonal singleton, which
  // is not below its value at the full game
  const GameOperator lrbar = make_operator(OperatorName::LRbar, ladder, correlated);
  const Restriction low = make(ladder, {{0}, {0}});
  CHECK(lrbar.step(low) == low);
  CHECK(!restriction_leq(lrbar.step(low), lrbar.step(ladder.full())));

  CHECK_THROWS_AS((void)gr_step(pd, correlated, parse_game(kUdmFile).full()), GameMismatch);
}

TEST_CASE("make_operator wires steps and metadata") {
  const FiniteGame pd = parse_game(kPdFile);
  const int d = 1;
  const GameOperator gsbar = make_operator(OperatorName::GSbar, pd);
  CHECK(gsbar.contracting);
  CHECK(gsbar.monotone_by_theory);
  CHECK(gsbar.step(pd.full()) == make(pd, {{d}, {d}}));

  const GameOperator lsbar = make_operator(OperatorName::LSbar, pd);
  CHECK(!lsbar.monotone_by_theory);
  CHECK(lsbar.step(pd.empty()) == pd.empty());  // the meet repairs the empty-set rebound

  const GameOperator grbar =
      make_operator(OperatorName::GRbar, pd, BeliefStructure{BeliefKind::PointBeliefs});
  const Restriction dd = make(pd, {{d}, {d}});
  CHECK(grbar.step(dd) == dd);

  CHECK_THROWS_AS((void)make_operator(OperatorName::GR, pd), UnsupportedBeliefs);
  CHECK_THROWS_AS((void)make_operator(OperatorName::GS, pd, BeliefStructure{}), UnsupportedBeliefs);

  const FiniteGame three = parse_game(
      "game t\nplayers 3\nstrategies 1 a b\nstrategies 2 a b\nstrategies 3 a b\n"
      "payoff a a a : 0 0 0\npayoff a a b : 0 0 0\npayoff a b a : 0 0 0\n"
      "payoff a b b : 0 0 0\npayoff b a a : 0 0 0\npayoff b a b : 0 0 0\n"
      "payoff b b a : 0 0 0\npayoff b b b : 0 0 0\n");
  CHECK_THROWS_AS(
      (void)make_operator(OperatorName::GR, three, BeliefStructure{BeliefKind::IndependentMixed}),
      UnsupportedBeliefs);
  // for two players the independent structure coincides with the correlated one
  const GameOperator independent =
      make_operator(OperatorName::GRbar, pd, BeliefStructure{BeliefKind::IndependentMixed});
  CHECK(independent.step(pd.full()) == make(pd, {{d}, {d}}));
}

TEST_CASE("property B holds for finite games") {
  const FiniteGame pd = parse_game(kPdFile);
  CHECK(check_property_B(pd, BeliefStructure{BeliefKind::PointBeliefs}));
  CHECK(check_property_B(parse_game(kUdmFile), BeliefStructure{BeliefKind::CorrelatedMixed}));
  SplitMix64 rng(3);
  for (int round = 0; round < 10; ++round) {
    CHECK(check_property_B(random_game(rng), BeliefStructure{BeliefKind::PointBeliefs}));
  }
}

TEST_CASE("dominance properties C, D and E at concrete restrictions") {
  const FiniteGame pd = parse_game(kPdFile);
  const int c = 0, d = 1;
  CHECK(check_property_C_at(pd, pd.full()));  // D dominates C and is itself undominated
  CHECK(check_property_D_at(pd, pd.full()));
  CHECK(check_property_E_at(pd, pd.full()));

  // per definition: with an empty opponent set everything is vacuously
  // dominated, and any remaining own strategy vacuously dominates; the side
  // that still faces opponents is judged as usual
  const FiniteGame pennies = parse_game(
      "game pennies\nplayers 2\nstrategies 1 H T\nstrategies 2 H T\n"
      "payoff H H : 1 -1\npayoff H T : -1 1\npayoff T H : -1 1\npayoff T T : 1 -1\n");
  CHECK(check_property_D_at(pennies, make(pennies, {{0, 1}, {}})));
  CHECK(!check_property_D_at(pd, make(pd, {{d}, {}})));  // player 2's C has no dominator left
  CHECK(!check_property_D_at(pd, pd.empty()));
  // and away from reachable restrictions D may fail outright
  CHECK(!check_property_D_at(pd, make(pd, {{c}, {c}})));
}

TEST_CASE("the properties hold along elimination and relaxation traces") {
  SplitMix64 rng(17);
  for (int round = 0; round < 25; ++round) {
    const FiniteGame game = random_game(rng);
    const GameOperator lsbar = make_operator(OperatorName::LSbar, game);
    const IterationTrace trace = iterate(lsbar, Ordinal::omega(2));
    for (const auto& [ordinal, value] : trace.stages) {
      CHECK(check_property_C_at(game, value));
      CHECK(check_property_D_at(game, value));
      CHECK(check_property_E_at(game, value));
    }
    const RelaxationScript script = sample_relaxation(lsbar, rng.next());
    const IterationTrace relaxed = iterate(script, Ordinal::omega(2));
    for (const auto& [ordinal, value] : relaxed.stages) {
      CHECK(check_property_D_at(game, value));
    }
  }
}

TEST_CASE("steps agree with the brute-force dominance oracle on random games") {
  SplitMix64 rng(23);
  for (int round = 0; round < 30; ++round) {
    const FiniteGame game = random_game(rng);
    const Restriction g = random_restriction(rng, game);
    CHECK(gs_step(game, g) == brute_pure_step(game, g, true));
    CHECK(ls_step(game, g) == brute_pure_step(game, g, false));
  }
}

TEST_CASE("theory-level monotonicity is visible on random nested pairs") {
  SplitMix64 rng(29);
  const BeliefStructure point{BeliefKind::PointBeliefs};
  const BeliefStructure correlated{BeliefKind::CorrelatedMixed};
  for (int round = 0; round < 25; ++round) {
    const FiniteGame game = random_game(rng);
    const auto [small, large] = random_nested_pair(rng, game);
    REQUIRE(restriction_leq(small, large));
    CHECK(restriction_leq(gs_step(game, small), gs_step(game, large)));
    CHECK(restriction_leq(mgs_step(game, small), mgs_step(game, large)));
    CHECK(restriction_leq(gr_step(game, point, small), gr_step(game, point, large)));
    CHECK(restriction_leq(gr_step(game, correlated, small), gr_step(game, correlated, large)));
  }
}

TEST_CASE("pointwise inclusions between the step families") {
  SplitMix64 rng(31);
  const BeliefStructure point{BeliefKind::PointBeliefs};
  const BeliefStructure correlated{BeliefKind::CorrelatedMixed};
  for (int round = 0; round < 25; ++round) {
    const FiniteGame game = random_game(rng);
    const Restriction g = random_restriction(rng, game);
    CHECK(restriction_leq(gs_step(game, g), ls_step(game, g)));
    CHECK(restriction_leq(gr_step(game, point, g), lr_step(game, point, g)));
    CHECK(restriction_leq(gr_step(game, correlated, g), lr_step(game, correlated, g)));
    CHECK(restriction_leq(mgs_step(game, g), gs_step(game, g)));

    // bar variants are contracting
    for (OperatorName name : {OperatorName::GSbar, OperatorName::LSbar, OperatorName::MGSbar,
                              OperatorName::MLSbar}) {
      CHECK(restriction_leq(make_operator(name, game).step(g), g));
    }
    for (OperatorName name : {OperatorName::GRbar, OperatorName::LRbar}) {
      CHECK(restriction_leq(make_operator(name, game, point).step(g), g));
      CHECK(restriction_leq(make_operator(name, game, correlated).step(g), g));
    }
  }
}

// Never being a best response to a correlated belief and being strictly
// dominated by a mixture are decided by two different linear programs;
// they must complement each other, both in the global pairing (domains in
// the full game) and in the local pairing (domains in the restriction).
TEST_CASE("the two linear programs complement each other") {
  SplitMix64 rng(37);
  for (int round = 0; round < 20; ++round) {
    const FiniteGame game = random_game(rng);
    const Restriction g = random_restriction(rng, game);
    for (int i = 0; i < game.player_count(); ++i) {
      if (g.opponents_empty(i)) continue;
      std::vector<int> everything;
      for (int s = 0; s < game.strategy_count(i); ++s) everything.push_back(s);
      const std::vector<int> inside = g.allowed(i);
      for (int s = 0; s < game.strategy_count(i); ++s) {
        const bool response_global = correlated_best_response_exists(game, g, i, s, everything);
        const auto margin_global = mixed_domination_margin(game, g, i, s, everything);
        CHECK(response_global == !(*margin_global > 0));

        const bool response_local = correlated_best_response_exists(game, g, i, s, inside);
        const auto margin_local = mixed_domination_margin(game, g, i, s, inside);
        const bool dominated_local = margin_local.has_value() && *margin_local > 0;
        CHECK(response_local == !dominated_local);
      }
    }
  }
}
