#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "eliminax/game.hpp"
#include "eliminax/operators.hpp"
#include "eliminax/ordinal.hpp"

namespace eliminax {

// Deterministic, platform-independent randomness for relaxation sampling
// and trial seeding.
std::uint64_t splitmix64(std::uint64_t x);

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform in [0, n), n >= 1; rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

// Trial k of a run seeded with `seed` is reproducible in isolation:
// its private seed is splitmix64(seed + GOLDEN * (k + 1)).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t k);

struct Verdict {
  enum class Kind { FixpointAt, CycleDetected, CapReached };
  Kind kind = Kind::CapReached;
  Ordinal at{};  // fixpoint ordinal, or the cap
  std::uint32_t cycle_period = 0;
  Ordinal cycle_first{};

  static Verdict fixpoint(Ordinal a) { return {Kind::FixpointAt, a, 0, {}}; }
  static Verdict cycle(std::uint32_t period, Ordinal first) {
    return {Kind::CycleDetected, {}, period, first};
  }
  static Verdict cap(Ordinal a) { return {Kind::CapReached, a, 0, {}}; }
};

std::string to_string(const Verdict& v);

// Ordinal-indexed stages of one iteration run. Stage 0 is always the top
// element; a FixpointAt(a) verdict means stage(a+1) = stage(a) with a
// least such (the confirming repeat is not recorded).
template <typename State>
struct TraceOf {
  std::string operator_name;
  std::vector<std::pair<Ordinal, State>> stages;
  Verdict verdict{};

  // Whether the stage value at finite index n is determined by the trace
  // (recorded, constant past a fixpoint, or periodic inside a cycle).
  bool determined_at(std::uint32_t n) const {
    if (n < stages.size()) return true;
    return verdict.kind != Verdict::Kind::CapReached;
  }

  const State& at_finite(std::uint32_t n) const {
    if (n < stages.size()) return stages[n].second;
    if (verdict.kind == Verdict::Kind::FixpointAt) return stages.back().second;
    // cycle: periodic from its first stage
    const std::uint32_t first = verdict.cycle_first.finite_part;
    const std::uint32_t period = verdict.cycle_period;
    return stages[first + (n - first) % period].second;
  }
};

using IterationTrace = TraceOf<Restriction>;

// The ordinal from a FixpointAt verdict, else nullopt.
std::optional<Ordinal> closure_ordinal(const IterationTrace& trace);

using StepFn = std::function<Restriction(const Restriction&)>;

// Transparent memoization of a step function; copies share one cache.
class MemoizedStep {
 public:
  explicit MemoizedStep(StepFn inner)
      : inner_(std::move(inner)),
        cache_(std::make_shared<std::unordered_map<Restriction, Restriction, RestrictionHash>>()) {}

  Restriction operator()(const Restriction& g) const;

 private:
  StepFn inner_;
  std::shared_ptr<std::unordered_map<Restriction, Restriction, RestrictionHash>> cache_;
};

// Iterates `step` from `top` through successor stages until a fixpoint,
// a revisited restriction (cycle) or the cap. Weakly decreasing runs on a
// finite lattice must stabilize within 1 + total strategy count steps;
// the engine asserts this, so the omega stage of a decreasing run is the
// stabilized finite stage and is never materialized separately.
IterationTrace iterate_step(std::string name, const StepFn& step, const Restriction& top,
                            const Ordinal& cap);

IterationTrace iterate(const GameOperator& op, const Ordinal& cap);

// A relaxed elimination schedule for a contracting base operator: at each
// of its own stages it removes at least one, and only removable,
// strategies (a subset of what the base step removes), and stalls exactly
// where the base stalls.
struct RelaxationScript {
  struct Sampled {
    std::uint64_t seed;
  };
  struct Scripted {
    std::string name;
  };

  std::string base_name;
  StepFn base_step;
  Restriction top;
  // choice(stage, g, proposal) with proposal = base_step(g), proposal <= g.
  std::function<Restriction(const Ordinal&, const Restriction&, const Restriction&)> choose;
  std::variant<Sampled, Scripted> provenance;

  std::string name() const;
  Restriction step_at(const Ordinal& stage, const Restriction& g) const {
    return choose(stage, g, base_step(g));
  }
};

// Uniformly random relaxation: at each stage removes a uniform non-empty
// subset of the strategies the base step removes (everything when the
// base is already at a fixpoint removes nothing). Deterministic given the
// seed. Throws NotContracting unless the operator is a bar variant.
RelaxationScript sample_relaxation(const GameOperator& op, std::uint64_t seed);
RelaxationScript sample_relaxation(std::string base_name, StepFn base_step, bool base_contracting,
                                   Restriction top, std::uint64_t seed);

IterationTrace iterate(const RelaxationScript& script, const Ordinal& cap);

struct RelaxationReport {
  bool valid = true;
  std::optional<Ordinal> violation_stage;
  int violated_condition = 0;  // 1: approximation, 2: stalling, 3: fixpoint transfer
  std::string message = "valid";
};

// Verifies the three relaxation conditions at every recorded stage of the
// trace: the base step stays below the script's step there; if the base
// step contracts there, so does the script's; and fixpoints of the script
// are fixpoints of the base.
RelaxationReport check_relaxation(const RelaxationScript& script, const IterationTrace& trace);

struct OutcomeGroup {
  Restriction outcome;
  Ordinal closure{};
  bool omega_outcome = false;  // closure ordinal <= w
  int count = 0;
  std::uint64_t first_trial_seed = 0;
};

struct OrderIndependenceReport {
  std::string operator_name;
  int trials = 0;
  std::vector<OutcomeGroup> outcomes;  // in order of first appearance
};

// Runs `trials` sampled relaxations of a contracting operator and groups
// their outcomes. Trial k uses trial_seed(seed, k).
OrderIndependenceReport order_independence_trial(const GameOperator& op, int trials,
                                                 std::uint64_t seed, const Ordinal& cap);

struct ComparisonReport {
  bool coincide = false;
  std::optional<Ordinal> first_divergence;
  std::pair<int, int> divergent_pair{-1, -1};
  std::vector<IterationTrace> traces;
};

// Iterates all operators over the same game in lockstep and reports the
// first stage at which any two differ, or coincidence through the common
// fixpoint. Base steps shared between bar and unbarred variants are
// computed once per restriction.
ComparisonReport compare_operators(const std::vector<GameOperator>& ops, const Ordinal& cap);

}  // namespace eliminax
