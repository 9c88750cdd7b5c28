#include "eliminax/operators.hpp"

#include <algorithm>

#include "eliminax/lp.hpp"

namespace eliminax {

namespace {

// Applies fn to every joint opponent profile of `player` allowed by g.
// The JointStrategy passed to fn has the player's own slot unset; callers
// fill it per candidate strategy.
template <typename Fn>
void for_each_opponent_profile(const FiniteGame& game, const Restriction& g, int player, Fn&& fn) {
  const int n = game.player_count();
  std::vector<std::vector<int>> allowed;
  allowed.reserve(n - 1);
  for (int j = 0; j < n; ++j) {
    if (j == player) continue;
    auto a = g.allowed(j);
    if (a.empty()) return;
    allowed.push_back(std::move(a));
  }
  std::vector<std::size_t> odo(allowed.size(), 0);
  JointStrategy s(n, 0);
  for (;;) {
    int slot = 0;
    for (int j = 0; j < n; ++j) {
      if (j == player) continue;
      s[j] = allowed[slot][odo[slot]];
      ++slot;
    }
    fn(s);
    int k = static_cast<int>(odo.size()) - 1;
    while (k >= 0 && odo[k] + 1 == allowed[k].size()) odo[k--] = 0;
    if (k < 0) return;
    ++odo[k];
  }
}

std::vector<JointStrategy> opponent_profiles(const FiniteGame& game, const Restriction& g,
                                             int player) {
  std::vector<JointStrategy> out;
  for_each_opponent_profile(game, g, player, [&](const JointStrategy& s) { out.push_back(s); });
  return out;
}

void check_strategy(const FiniteGame& game, int player, int strategy) {
  if (player < 0 || player >= game.player_count())
    throw UnknownStrategy("player index " + std::to_string(player + 1) + " out of range");
  if (strategy < 0 || strategy >= game.strategy_count(player))
    throw UnknownStrategy("strategy index " + std::to_string(strategy) + " out of range for player " +
                          std::to_string(player + 1));
}

void check_same_game(const FiniteGame& game, const Restriction& g) {
  if (g.player_count() != game.player_count()) throw GameMismatch();
  for (int i = 0; i < game.player_count(); ++i) {
    if (static_cast<int>(g.set(i).size()) != game.strategy_count(i)) throw GameMismatch();
  }
}

}  // namespace

std::string_view belief_token(BeliefKind kind) {
  switch (kind) {
    case BeliefKind::PointBeliefs: return "point";
    case BeliefKind::CorrelatedMixed: return "correlated";
    case BeliefKind::IndependentMixed: return "independent";
  }
  return "point";
}

std::optional<BeliefKind> parse_belief_token(std::string_view token) {
  if (token == "point") return BeliefKind::PointBeliefs;
  if (token == "correlated") return BeliefKind::CorrelatedMixed;
  if (token == "independent") return BeliefKind::IndependentMixed;
  return std::nullopt;
}

std::string_view operator_token(OperatorName name) {
  switch (name) {
    case OperatorName::GR: return "gr";
    case OperatorName::GRbar: return "grbar";
    case OperatorName::LR: return "lr";
    case OperatorName::LRbar: return "lrbar";
    case OperatorName::GS: return "gs";
    case OperatorName::GSbar: return "gsbar";
    case OperatorName::LS: return "ls";
    case OperatorName::LSbar: return "lsbar";
    case OperatorName::MGS: return "mgs";
    case OperatorName::MGSbar: return "mgsbar";
    case OperatorName::MLS: return "mls";
    case OperatorName::MLSbar: return "mlsbar";
  }
  return "gs";
}

const std::vector<OperatorName>& all_operator_names() {
  static const std::vector<OperatorName> names = {
      OperatorName::GR,  OperatorName::GRbar,  OperatorName::LR,  OperatorName::LRbar,
      OperatorName::GS,  OperatorName::GSbar,  OperatorName::LS,  OperatorName::LSbar,
      OperatorName::MGS, OperatorName::MGSbar, OperatorName::MLS, OperatorName::MLSbar};
  return names;
}

std::optional<OperatorName> parse_operator_token(std::string_view token) {
  for (OperatorName name : all_operator_names()) {
    if (operator_token(name) == token) return name;
  }
  return std::nullopt;
}

bool is_rationalizability(OperatorName name) {
  switch (name) {
    case OperatorName::GR:
    case OperatorName::GRbar:
    case OperatorName::LR:
    case OperatorName::LRbar:
      return true;
    default:
      return false;
  }
}

bool is_bar_variant(OperatorName name) {
  switch (name) {
    case OperatorName::GRbar:
    case OperatorName::LRbar:
    case OperatorName::GSbar:
    case OperatorName::LSbar:
    case OperatorName::MGSbar:
    case OperatorName::MLSbar:
      return true;
    default:
      return false;
  }
}

OperatorName base_of(OperatorName name) {
  switch (name) {
    case OperatorName::GRbar: return OperatorName::GR;
    case OperatorName::LRbar: return OperatorName::LR;
    case OperatorName::GSbar: return OperatorName::GS;
    case OperatorName::LSbar: return OperatorName::LS;
    case OperatorName::MGSbar: return OperatorName::MGS;
    case OperatorName::MLSbar: return OperatorName::MLS;
    default: return name;
  }
}

bool is_monotone_by_theory(OperatorName name) {
  switch (base_of(name)) {
    case OperatorName::GR:
    case OperatorName::GS:
    case OperatorName::MGS:
      return true;
    default:
      return false;
  }
}

bool strictly_dominates(const FiniteGame& game, const Restriction& g, int player, int dominator,
                        int dominated) {
  check_same_game(game, g);
  check_strategy(game, player, dominator);
  check_strategy(game, player, dominated);
  bool dominates = true;
  for_each_opponent_profile(game, g, player, [&](const JointStrategy& profile) {
    if (!dominates) return;
    JointStrategy s = profile;
    s[player] = dominator;
    const Rational& hi = game.payoff(player, s);
    s[player] = dominated;
    if (!(hi > game.payoff(player, s))) dominates = false;
  });
  return dominates;
}

namespace {

// Shared core of GS and LS: survivors from T_i with dominators quantified
// over T_i (global) or over S_i (local).
Restriction pure_dominance_step(const FiniteGame& game, const Restriction& g, bool global) {
  check_same_game(game, g);
  Restriction out = Restriction::empty_of(game);
  for (int i = 0; i < game.player_count(); ++i) {
    const std::vector<int> domain =
        global ? [&] {
          std::vector<int> all(game.strategy_count(i));
          for (int s = 0; s < game.strategy_count(i); ++s) all[s] = s;
          return all;
        }()
               : g.allowed(i);
    for (int s = 0; s < game.strategy_count(i); ++s) {
      bool dominated = false;
      for (int d : domain) {
        if (strictly_dominates(game, g, i, d, s)) {
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

Restriction gs_step(const FiniteGame& game, const Restriction& g) {
  return pure_dominance_step(game, g, true);
}

Restriction ls_step(const FiniteGame& game, const Restriction& g) {
  return pure_dominance_step(game, g, false);
}

std::optional<Rational> mixed_domination_margin(const FiniteGame& game, const Restriction& g,
                                                int player, int dominated,
                                                const std::vector<int>& dominator_domain) {
  check_same_game(game, g);
  check_strategy(game, player, dominated);
  if (dominator_domain.empty()) return std::nullopt;
  const auto profiles = opponent_profiles(game, g, player);
  if (profiles.empty())
    throw std::invalid_argument("domination margin is undefined against an empty opponent set");

  // Variables: one weight per dominator, then the positive and negative
  // parts of the free margin. Maximize the margin subject to the mixture
  // beating the dominated strategy by at least that margin everywhere.
  const std::size_t d = dominator_domain.size();
  LinearProgram lp;
  lp.objective.assign(d + 2, Rational(0));
  lp.objective[d] = 1;
  lp.objective[d + 1] = -1;
  for (const JointStrategy& profile : profiles) {
    std::vector<Rational> row(d + 2, Rational(0));
    JointStrategy s = profile;
    for (std::size_t t = 0; t < d; ++t) {
      s[player] = dominator_domain[t];
      row[t] = game.payoff(player, s);
    }
    row[d] = -1;
    row[d + 1] = 1;
    s[player] = dominated;
    lp.rows.push_back(std::move(row));
    lp.senses.push_back(RowSense::Geq);
    lp.rhs.push_back(game.payoff(player, s));
  }
  std::vector<Rational> sum_row(d + 2, Rational(0));
  for (std::size_t t = 0; t < d; ++t) sum_row[t] = 1;
  lp.rows.push_back(std::move(sum_row));
  lp.senses.push_back(RowSense::Eq);
  lp.rhs.push_back(1);

  const LpResult result = lp_solve(lp);
  if (result.status != LpStatus::Optimal)
    throw std::logic_error("domination margin program must have an optimum");
  return result.value;
}

namespace {

Restriction mixed_dominance_step(const FiniteGame& game, const Restriction& g, bool global) {
  check_same_game(game, g);
  Restriction out = Restriction::empty_of(game);
  for (int i = 0; i < game.player_count(); ++i) {
    std::vector<int> domain;
    if (global) {
      domain.resize(game.strategy_count(i));
      for (int s = 0; s < game.strategy_count(i); ++s) domain[s] = s;
    } else {
      domain = g.allowed(i);
    }
    if (domain.empty()) {
      // No dominator mixture exists; everything survives.
      for (int s = 0; s < game.strategy_count(i); ++s) out.add(i, s);
      continue;
    }
    if (g.opponents_empty(i)) continue;  // vacuous domination removes all of T_i
    for (int s = 0; s < game.strategy_count(i); ++s) {
      const auto margin = mixed_domination_margin(game, g, i, s, domain);
      if (!(*margin > 0)) out.add(i, s);
    }
  }
  return out;
}

}  // namespace

Restriction mgs_step(const FiniteGame& game, const Restriction& g) {
  return mixed_dominance_step(game, g, true);
}

Restriction mls_step(const FiniteGame& game, const Restriction& g) {
  return mixed_dominance_step(game, g, false);
}

namespace {

std::vector<int> full_domain(const FiniteGame& game, int player) {
  std::vector<int> d(game.strategy_count(player));
  for (int s = 0; s < game.strategy_count(player); ++s) d[s] = s;
  return d;
}

}  // namespace

bool is_best_response(const FiniteGame& game, int player, int strategy, const BeliefValue& belief,
                      const ResponseDomain& domain) {
  check_strategy(game, player, strategy);
  std::vector<int> compare;
  const Restriction* narrowing = nullptr;
  if (const Restriction* r = std::get_if<Restriction>(&domain)) {
    check_same_game(game, *r);
    compare = r->allowed(player);
    narrowing = r;
  } else {
    compare = full_domain(game, player);
  }

  const auto check_profile = [&](const JointStrategy& profile) {
    for (int j = 0; j < game.player_count(); ++j) {
      if (j == player) continue;
      if (profile[j] < 0 || profile[j] >= game.strategy_count(j))
        throw UnknownStrategy("belief names an out-of-range strategy for player " +
                              std::to_string(j + 1));
      if (narrowing && !narrowing->contains(j, profile[j]))
        throw SupportOutsideNarrowing("belief support leaves the narrowed opponent set of player " +
                                      std::to_string(j + 1));
    }
  };

  if (const PointBelief* point = std::get_if<PointBelief>(&belief)) {
    check_profile(point->opponents);
    JointStrategy s = point->opponents;
    s[player] = strategy;
    const Rational mine = game.payoff(player, s);
    for (int candidate : compare) {
      s[player] = candidate;
      if (game.payoff(player, s) > mine) return false;
    }
    return true;
  }

  const auto& correlated = std::get<CorrelatedBelief>(belief);
  Rational total = 0;
  for (const auto& [profile, probability] : correlated.support) {
    if (probability < 0) throw std::invalid_argument("belief probabilities must be nonnegative");
    if (probability > 0) check_profile(profile);
    total += probability;
  }
  if (total != 1) throw std::invalid_argument("belief probabilities must sum to one");

  const auto expected = [&](int candidate) {
    Rational value = 0;
    for (const auto& [profile, probability] : correlated.support) {
      if (probability == 0) continue;
      JointStrategy s = profile;
      s[player] = candidate;
      value += probability * game.payoff(player, s);
    }
    return value;
  };

  const Rational mine = expected(strategy);
  for (int candidate : compare) {
    if (expected(candidate) > mine) return false;
  }
  return true;
}

bool correlated_best_response_exists(const FiniteGame& game, const Restriction& g, int player,
                                     int strategy, const std::vector<int>& compare_domain) {
  check_same_game(game, g);
  check_strategy(game, player, strategy);
  const auto profiles = opponent_profiles(game, g, player);
  if (profiles.empty()) return false;

  // Variables: one probability per opponent profile. Feasibility of the
  // system "strategy is at least as good as every comparison candidate in
  // expectation" over the probability simplex.
  std::vector<std::vector<Rational>> rows;
  std::vector<RowSense> senses;
  std::vector<Rational> rhs;
  for (int candidate : compare_domain) {
    std::vector<Rational> row(profiles.size());
    bool nontrivial = false;
    for (std::size_t p = 0; p < profiles.size(); ++p) {
      JointStrategy s = profiles[p];
      s[player] = strategy;
      Rational diff = game.payoff(player, s);
      s[player] = candidate;
      diff -= game.payoff(player, s);
      if (diff != 0) nontrivial = true;
      row[p] = std::move(diff);
    }
    if (!nontrivial) continue;
    rows.push_back(std::move(row));
    senses.push_back(RowSense::Geq);
    rhs.push_back(0);
  }
  rows.emplace_back(profiles.size(), Rational(1));
  senses.push_back(RowSense::Eq);
  rhs.push_back(1);
  return lp_feasible(rows, senses, rhs).has_value();
}

namespace {

// Shared core of GR and LR: survivors from T_i that are a best response,
// in the full game (global) or in g (local), to some belief narrowed to g.
Restriction rationalizability_step(const FiniteGame& game, const BeliefStructure& beliefs,
                                   const Restriction& g, bool global) {
  check_same_game(game, g);
  if (beliefs.kind == BeliefKind::IndependentMixed && game.player_count() > 2)
    throw UnsupportedBeliefs(
        "independent mixed beliefs are only supported for two players; use correlated beliefs");

  Restriction out = Restriction::empty_of(game);
  for (int i = 0; i < game.player_count(); ++i) {
    const std::vector<int> compare = global ? full_domain(game, i) : g.allowed(i);

    if (beliefs.kind == BeliefKind::PointBeliefs) {
      // A strategy survives iff it attains, at some allowed opponent
      // profile, the maximum payoff over the comparison domain.
      for_each_opponent_profile(game, g, i, [&](const JointStrategy& profile) {
        JointStrategy s = profile;
        std::optional<Rational> best;
        for (int candidate : compare) {
          s[i] = candidate;
          const Rational& v = game.payoff(i, s);
          if (!best || v > *best) best = v;
        }
        for (int candidate = 0; candidate < game.strategy_count(i); ++candidate) {
          if (out.contains(i, candidate)) continue;
          s[i] = candidate;
          if (!best || game.payoff(i, s) >= *best) out.add(i, candidate);
        }
      });
      continue;
    }

    // Correlated beliefs (independent coincides for two players).
    if (g.opponents_empty(i)) continue;
    for (int s = 0; s < game.strategy_count(i); ++s) {
      if (correlated_best_response_exists(game, g, i, s, compare)) out.add(i, s);
    }
  }
  return out;
}

}  // namespace

Restriction gr_step(const FiniteGame& game, const BeliefStructure& beliefs, const Restriction& g) {
  return rationalizability_step(game, beliefs, g, true);
}

Restriction lr_step(const FiniteGame& game, const BeliefStructure& beliefs, const Restriction& g) {
  return rationalizability_step(game, beliefs, g, false);
}

Restriction GameOperator::base_step(const Restriction& g) const {
  switch (base_of(name)) {
    case OperatorName::GR: return gr_step(*game, *beliefs, g);
    case OperatorName::LR: return lr_step(*game, *beliefs, g);
    case OperatorName::GS: return gs_step(*game, g);
    case OperatorName::LS: return ls_step(*game, g);
    case OperatorName::MGS: return mgs_step(*game, g);
    default: return mls_step(*game, g);
  }
}

Restriction GameOperator::step(const Restriction& g) const {
  Restriction base = base_step(g);
  return contracting ? meet(base, g) : base;
}

GameOperator make_operator(OperatorName name, const FiniteGame& game,
                           std::optional<BeliefStructure> beliefs) {
  if (is_rationalizability(name)) {
    if (!beliefs)
      throw UnsupportedBeliefs("operator '" + std::string(operator_token(name)) +
                               "' requires a belief structure");
    if (beliefs->kind == BeliefKind::IndependentMixed && game.player_count() > 2)
      throw UnsupportedBeliefs(
          "independent mixed beliefs are only supported for two players; use correlated beliefs");
  } else if (beliefs) {
    throw UnsupportedBeliefs("operator '" + std::string(operator_token(name)) +
                             "' does not take a belief structure");
  }
  GameOperator op;
  op.name = name;
  op.game = &game;
  op.beliefs = beliefs;
  op.contracting = is_bar_variant(name);
  op.monotone_by_theory = is_monotone_by_theory(name);
  return op;
}

bool check_property_B(const FiniteGame& game, const BeliefStructure& beliefs) {
  if (beliefs.kind != BeliefKind::PointBeliefs) {
    // Expected payoffs of mixtures are convex combinations of pure payoffs,
    // so the maximum over the finitely many pure strategies is attained.
    return true;
  }
  const Restriction full = game.full();
  for (int i = 0; i < game.player_count(); ++i) {
    bool all_have_best = true;
    for_each_opponent_profile(game, full, i, [&](const JointStrategy& profile) {
      JointStrategy s = profile;
      bool found = false;
      for (int candidate = 0; candidate < game.strategy_count(i) && !found; ++candidate) {
        s[i] = candidate;
        const Rational mine = game.payoff(i, s);
        bool best = true;
        for (int other = 0; other < game.strategy_count(i); ++other) {
          s[i] = other;
          if (game.payoff(i, s) > mine) {
            best = false;
            break;
          }
        }
        found = best;
      }
      if (!found) all_have_best = false;
    });
    if (!all_have_best) return false;
  }
  return true;
}

bool check_property_C_at(const FiniteGame& game, const Restriction& g) {
  check_same_game(game, g);
  for (int i = 0; i < game.player_count(); ++i) {
    for (int s = 0; s < game.strategy_count(i); ++s) {
      bool dominated = false;
      for (int d = 0; d < game.strategy_count(i) && !dominated; ++d)
        dominated = strictly_dominates(game, g, i, d, s);
      if (!dominated) continue;
      bool has_best_dominator = false;
      for (int d = 0; d < game.strategy_count(i) && !has_best_dominator; ++d) {
        if (!strictly_dominates(game, g, i, d, s)) continue;
        bool d_dominated = false;
        for (int e = 0; e < game.strategy_count(i) && !d_dominated; ++e)
          d_dominated = strictly_dominates(game, g, i, e, d);
        has_best_dominator = !d_dominated;
      }
      if (!has_best_dominator) return false;
    }
  }
  return true;
}

bool check_property_D_at(const FiniteGame& game, const Restriction& g) {
  check_same_game(game, g);
  for (int i = 0; i < game.player_count(); ++i) {
    const auto inside = g.allowed(i);
    for (int s = 0; s < game.strategy_count(i); ++s) {
      bool dominated = false;
      for (int d = 0; d < game.strategy_count(i) && !dominated; ++d)
        dominated = strictly_dominates(game, g, i, d, s);
      if (!dominated) continue;
      bool dominated_inside = false;
      for (int d : inside) {
        if (strictly_dominates(game, g, i, d, s)) {
          dominated_inside = true;
          break;
        }
      }
      if (!dominated_inside) return false;
    }
  }
  return true;
}

bool check_property_E_at(const FiniteGame& game, const Restriction& g) {
  check_same_game(game, g);
  for (int i = 0; i < game.player_count(); ++i) {
    const auto inside = g.allowed(i);
    for (int s : inside) {
      bool dominated = false;
      for (int d : inside) {
        if (strictly_dominates(game, g, i, d, s)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) continue;
      bool has_best_dominator = false;
      for (int d : inside) {
        if (!strictly_dominates(game, g, i, d, s)) continue;
        bool d_dominated = false;
        for (int e : inside) {
          if (strictly_dominates(game, g, i, e, d)) {
            d_dominated = true;
            break;
          }
        }
        if (!d_dominated) {
          has_best_dominator = true;
          break;
        }
      }
      if (!has_best_dominator) return false;
    }
  }
  return true;
}

}  // namespace eliminax
