#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eliminax/engine.hpp"
#include "eliminax/ordinal.hpp"
#include "eliminax/rational.hpp"

namespace eliminax {

// Exactly representable strategy sets of the built-in infinite games:
// finite sets of rationals, cofinite subsets of N u {-1}, and left-open
// right-closed rational intervals. Membership, semantic equality, subset
// and emptiness are decidable across all pairs of variants; intersection
// is implemented for the combinations the replays need.
class SymbolicSet {
 public:
  enum class Kind { Empty, Finite, CofinNatMinus, IntervalLOC };

  static SymbolicSet empty();
  static SymbolicSet finite(std::vector<Rational> values);
  static SymbolicSet singleton(const Rational& v);
  // (N u {-1}) \ excluded; every excluded value must be an integer >= -1.
  static SymbolicSet cofinite_nat_minus(std::vector<Rational> excluded);
  // (lo, hi]; canonicalizes to Empty when lo >= hi.
  static SymbolicSet interval_loc(const Rational& lo, const Rational& hi);

  Kind kind() const { return kind_; }
  bool is_empty() const { return kind_ == Kind::Empty; }
  bool is_singleton() const { return kind_ == Kind::Finite && values_.size() == 1; }

  const std::vector<Rational>& finite_values() const { return values_; }
  const std::vector<Rational>& excluded_values() const { return values_; }
  const Rational& interval_lo() const { return lo_; }
  const Rational& interval_hi() const { return hi_; }

  bool contains(const Rational& x) const;
  bool subset_of(const SymbolicSet& other) const;
  SymbolicSet intersect(const SymbolicSet& other) const;

  // Representative members for membership sampling; finite sets yield
  // everything, cofinite sets their smallest members plus larger ones,
  // intervals an exact rational grid including the right endpoint.
  std::vector<Rational> sample_points(int budget) const;

  std::string render() const;

  friend bool operator==(const SymbolicSet& a, const SymbolicSet& b);
  friend bool operator!=(const SymbolicSet& a, const SymbolicSet& b) { return !(a == b); }

 private:
  SymbolicSet() = default;

  Kind kind_ = Kind::Empty;
  std::vector<Rational> values_;  // Finite: members; CofinNatMinus: excluded
  Rational lo_, hi_;              // IntervalLOC
};

struct SymbolicRestriction {
  std::vector<SymbolicSet> sets;

  bool subset_of(const SymbolicRestriction& other) const;
  bool all_empty() const;
  std::string render() const;

  friend bool operator==(const SymbolicRestriction& a, const SymbolicRestriction& b) {
    return a.sets == b.sets;
  }
  friend bool operator!=(const SymbolicRestriction& a, const SymbolicRestriction& b) {
    return !(a == b);
  }
};

struct StageMismatch : std::runtime_error {
  StageMismatch(const Ordinal& at, const std::string& what);
  Ordinal at;
};

// A scripted relaxation attached to a symbolic example; the step is only
// guaranteed along the script's own trace.
struct SymbolicRelaxation {
  std::string name;
  std::function<SymbolicRestriction(const SymbolicRestriction&)> step;
  std::function<SymbolicRestriction(const Ordinal&)> stage_formula;
  Ordinal expected_closure{};
  SymbolicRestriction expected_outcome;
};

// A closed-form replay of one infinite-game iteration: the hand-derived
// exact step function, a stage formula the engine validates one step at a
// time (including across the limit stage), and expectations.
struct SymbolicExample {
  std::string name;
  std::string description;
  std::string operator_name;
  int player_count = 2;
  SymbolicRestriction full;
  std::function<SymbolicRestriction(const SymbolicRestriction&)> step;
  std::function<SymbolicRestriction(const Ordinal&)> stage_formula;
  std::optional<Ordinal> expected_closure;
  std::optional<SymbolicRestriction> expected_outcome;
  std::optional<std::uint32_t> expected_cycle_period;
  bool decreasing = true;  // stages shrink, so an omega stage exists
  std::vector<SymbolicRelaxation> relaxations;

  // Exact payoff at a concrete joint strategy, straight from the game's
  // definition; drives the membership spot-checks.
  std::function<Rational(int, const std::vector<Rational>&)> payoff;
  // Direct evaluation of membership in step(G) with the quantifiers over
  // infinite sets replaced by the example's finite certificate sets.
  std::function<bool(int, const Rational&, const SymbolicRestriction&)> direct_member;
  std::vector<Rational> probe_strategies;
};

struct ReplayOptions {
  int check_finite_upto = 8;
  int check_past_limit = 2;
};

struct SymbolicStage {
  Ordinal ordinal{};
  std::string rendered;
};

struct RelaxationNote {
  std::string name;
  std::vector<SymbolicStage> stages;
  std::optional<Ordinal> closure;
  std::string outcome;
  bool valid_relaxation = false;
  bool outcome_differs_from_base = false;
};

struct ReplayReport {
  std::string name;
  std::string operator_name;
  std::vector<SymbolicStage> stages;
  std::optional<Ordinal> computed_closure;
  std::optional<Ordinal> expected_closure;
  std::string outcome;  // rendered outcome when a closure exists
  std::optional<std::pair<std::uint32_t, Ordinal>> cycle;  // (period, first stage)
  bool validated = false;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  std::vector<RelaxationNote> relaxations;
};

// Validates the stage formula against the step function at finite stages,
// across the limit stage (the omega stage must be the intersection of the
// finite stages, checked by membership sampling plus exact subset
// relations), and past it; replays scripted relaxations and checks their
// relaxation conditions; spot-checks step membership against the payoff
// definitions on sampled strategies.
ReplayReport replay(const SymbolicExample& example, const ReplayOptions& options = {});

enum class ExampleKind { Symbolic, FiniteEngine };

struct ExampleEntry {
  std::string name;
  std::string description;
  std::string operator_name;
  ExampleKind kind = ExampleKind::Symbolic;
  std::string expected_closure_text;
};

const std::vector<ExampleEntry>& list_examples();

// Runs a catalogue entry by name: symbolic entries through replay, finite
// entries through the finite engine. Throws std::invalid_argument for an
// unknown name.
ReplayReport run_example(std::string_view name, const ReplayOptions& options = {});

// Access to the symbolic catalogue entries themselves (tests drive the
// step functions and stage formulas directly).
const SymbolicExample* find_symbolic_example(std::string_view name);

}  // namespace eliminax
