#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "eliminax/game.hpp"

namespace eliminax {

// Belief structures over the opponents of a player. Point beliefs are
// joint pure opponent profiles; correlated beliefs are distributions over
// joint opponent profiles. Independent mixed beliefs (a product of
// per-opponent mixtures) are accepted for two-player games only, where
// they coincide with correlated beliefs; for three or more players the
// existence test is non-convex and is rejected rather than approximated.
enum class BeliefKind { PointBeliefs, CorrelatedMixed, IndependentMixed };

struct BeliefStructure {
  BeliefKind kind = BeliefKind::PointBeliefs;
};

std::string_view belief_token(BeliefKind kind);
std::optional<BeliefKind> parse_belief_token(std::string_view token);

struct UnsupportedBeliefs : std::invalid_argument {
  explicit UnsupportedBeliefs(const std::string& what) : std::invalid_argument(what) {}
};

struct SupportOutsideNarrowing : std::invalid_argument {
  explicit SupportOutsideNarrowing(const std::string& what) : std::invalid_argument(what) {}
};

struct NotContracting : std::invalid_argument {
  explicit NotContracting(const std::string& what) : std::invalid_argument(what) {}
};

// The twelve step functions. G-variants justify removals against the full
// game, L-variants against the current restriction; bar variants meet the
// base step with their argument. M-variants use mixed dominators.
enum class OperatorName { GR, GRbar, LR, LRbar, GS, GSbar, LS, LSbar, MGS, MGSbar, MLS, MLSbar };

std::string_view operator_token(OperatorName name);  // "grbar", "mls", ...
std::optional<OperatorName> parse_operator_token(std::string_view token);
const std::vector<OperatorName>& all_operator_names();

bool is_rationalizability(OperatorName name);  // GR/LR families
bool is_bar_variant(OperatorName name);
OperatorName base_of(OperatorName name);  // GSbar -> GS, GS -> GS
// GR, GS, MGS and their bar variants; a tested property, not an assumption.
bool is_monotone_by_theory(OperatorName name);

// s'_i strictly dominates s_i on G: strictly better at every joint
// opponent profile of G. Vacuously true when that profile set is empty.
// Both strategies must belong to T_i; neither needs to be in G.
bool strictly_dominates(const FiniteGame& game, const Restriction& g, int player, int dominator,
                        int dominated);

// Survivors are always selected from the full strategy sets T_i; none of
// the base steps intersects with its argument (the bar wrapper does).
Restriction gs_step(const FiniteGame& game, const Restriction& g);
Restriction ls_step(const FiniteGame& game, const Restriction& g);
Restriction mgs_step(const FiniteGame& game, const Restriction& g);
Restriction mls_step(const FiniteGame& game, const Restriction& g);

// A point belief: the joint opponent profile; the believer's own slot is
// ignored. A correlated belief: exact probabilities on opponent profiles,
// nonnegative and summing to one.
struct PointBelief {
  JointStrategy opponents;
};

struct CorrelatedBelief {
  std::vector<std::pair<JointStrategy, Rational>> support;
};

using BeliefValue = std::variant<PointBelief, CorrelatedBelief>;

// Best responses compared against the full game (BR_H) or a restriction
// (BR_G). The candidate strategy ranges over all of T_i either way.
struct FullDomain {};
using ResponseDomain = std::variant<FullDomain, Restriction>;

// When the domain is a restriction, the belief must be supported inside
// the corresponding opponent set (SupportOutsideNarrowing otherwise).
bool is_best_response(const FiniteGame& game, int player, int strategy, const BeliefValue& belief,
                      const ResponseDomain& domain);

Restriction gr_step(const FiniteGame& game, const BeliefStructure& beliefs, const Restriction& g);
Restriction lr_step(const FiniteGame& game, const BeliefStructure& beliefs, const Restriction& g);

// Margin of the best mixed dominator drawn from `dominator_domain` against
// `dominated` on G: the maximum over mixtures m of
// min over opponent profiles of (payoff(m) - payoff(dominated)).
// Strictly dominated by a mixture iff the margin is > 0. Returns nullopt
// when the domain is empty; requires a nonempty opponent profile set.
std::optional<Rational> mixed_domination_margin(const FiniteGame& game, const Restriction& g,
                                                int player, int dominated,
                                                const std::vector<int>& dominator_domain);

// Feasibility of a correlated belief over S_{-i}(g) to which `strategy` is
// a best response among `compare_domain`; decided by exact LP.
bool correlated_best_response_exists(const FiniteGame& game, const Restriction& g, int player,
                                     int strategy, const std::vector<int>& compare_domain);

// A named step function over restrictions of one game, with the metadata
// the engine relies on.
struct GameOperator {
  OperatorName name = OperatorName::GS;
  const FiniteGame* game = nullptr;
  std::optional<BeliefStructure> beliefs;
  bool contracting = false;
  bool monotone_by_theory = false;

  std::string token() const { return std::string(operator_token(name)); }
  // The unbarred step; bar variants share it.
  Restriction base_step(const Restriction& g) const;
  // The operator itself: base step, met with g for bar variants.
  Restriction step(const Restriction& g) const;
};

// Beliefs must be supplied exactly for rationalizability operators.
GameOperator make_operator(OperatorName name, const FiniteGame& game,
                           std::optional<BeliefStructure> beliefs = std::nullopt);

// Property B: every belief in the full game has a best response in it.
// Holds for every finite game: verified explicitly for point beliefs; for
// mixed beliefs the expected payoff maximum over the finitely many pure
// strategies is attained, so the check is constant true.
bool check_property_B(const FiniteGame& game, const BeliefStructure& beliefs);

// Per-restriction dominance predicates, evaluated at one restriction G of
// the game. The quantification over elimination traces that the theory
// wraps around them is discharged by evaluating these along concrete
// traces; away from reachable restrictions they can legitimately fail.
//
// C at G: every strategy dominated on G (dominator from T_i) has a
// dominator in T_i that is itself undominated on G.
bool check_property_C_at(const FiniteGame& game, const Restriction& g);
// D at G: every strategy dominated on G (dominator from T_i) has a
// dominator inside S_i.
bool check_property_D_at(const FiniteGame& game, const Restriction& g);
// E at G: every member of S_i dominated on G by a member of S_i has a
// dominator in S_i undominated on G by S_i.
bool check_property_E_at(const FiniteGame& game, const Restriction& g);

}  // namespace eliminax
