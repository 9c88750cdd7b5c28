#include "eliminax/engine.hpp"

#include <algorithm>

namespace eliminax {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += kGolden;
  std::uint64_t x = state_;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t k) {
  return splitmix64(seed + kGolden * (k + 1));
}

std::string to_string(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::FixpointAt: return "fixpoint at " + to_string(v.at);
    case Verdict::Kind::CycleDetected:
      return "cycle of period " + std::to_string(v.cycle_period) + " from stage " +
             to_string(v.cycle_first);
    case Verdict::Kind::CapReached: return "cap reached at " + to_string(v.at);
  }
  return "";
}

std::optional<Ordinal> closure_ordinal(const IterationTrace& trace) {
  if (trace.verdict.kind == Verdict::Kind::FixpointAt) return trace.verdict.at;
  return std::nullopt;
}

Restriction MemoizedStep::operator()(const Restriction& g) const {
  auto it = cache_->find(g);
  if (it != cache_->end()) return it->second;
  Restriction value = inner_(g);
  cache_->emplace(g, value);
  return value;
}

namespace {

// Common iteration loop; `next` maps (stage ordinal, current) to the
// successor stage.
IterationTrace iterate_loop(std::string name,
                            const std::function<Restriction(const Ordinal&, const Restriction&)>& next,
                            const Restriction& top, const Ordinal& cap) {
  IterationTrace trace;
  trace.operator_name = std::move(name);
  trace.stages.emplace_back(Ordinal::finite(0), top);

  std::unordered_map<Restriction, std::uint32_t, RestrictionHash> seen;
  seen.emplace(top, 0);

  std::size_t decreasing_bound = 1;
  for (int i = 0; i < top.player_count(); ++i) decreasing_bound += top.set(i).size();

  bool decreasing = true;
  for (;;) {
    const auto& [ordinal, current] = trace.stages.back();
    const Ordinal next_ordinal = Ordinal::finite(static_cast<std::uint32_t>(trace.stages.size()));
    if (next_ordinal > cap) {
      trace.verdict = Verdict::cap(cap);
      return trace;
    }
    Restriction value = next(ordinal, current);
    if (value == current) {
      trace.verdict = Verdict::fixpoint(ordinal);
      return trace;
    }
    if (auto it = seen.find(value); it != seen.end()) {
      trace.verdict = Verdict::cycle(
          static_cast<std::uint32_t>(trace.stages.size()) - it->second, Ordinal::finite(it->second));
      return trace;
    }
    if (!restriction_leq(value, current)) decreasing = false;
    if (decreasing && trace.stages.size() > decreasing_bound)
      throw std::logic_error("a weakly decreasing iteration failed to stabilize in time");
    seen.emplace(value, static_cast<std::uint32_t>(trace.stages.size()));
    trace.stages.emplace_back(next_ordinal, std::move(value));
  }
}

}  // namespace

IterationTrace iterate_step(std::string name, const StepFn& step, const Restriction& top,
                            const Ordinal& cap) {
  return iterate_loop(std::move(name), [&step](const Ordinal&, const Restriction& g) { return step(g); },
                      top, cap);
}

IterationTrace iterate(const GameOperator& op, const Ordinal& cap) {
  return iterate_step(op.token(), [op](const Restriction& g) { return op.step(g); },
                      op.game->full(), cap);
}

IterationTrace iterate(const RelaxationScript& script, const Ordinal& cap) {
  return iterate_loop(script.name(),
                      [&script](const Ordinal& stage, const Restriction& g) {
                        return script.step_at(stage, g);
                      },
                      script.top, cap);
}

std::string RelaxationScript::name() const {
  if (const auto* sampled = std::get_if<Sampled>(&provenance))
    return base_name + "/relaxed#" + std::to_string(sampled->seed);
  return base_name + "/" + std::get<Scripted>(provenance).name;
}

RelaxationScript sample_relaxation(std::string base_name, StepFn base_step, bool base_contracting,
                                   Restriction top, std::uint64_t seed) {
  if (!base_contracting)
    throw NotContracting("relaxations are sampled from contracting operators only");

  RelaxationScript script;
  script.base_name = std::move(base_name);
  script.base_step = std::move(base_step);
  script.top = std::move(top);
  script.provenance = RelaxationScript::Sampled{seed};
  script.choose = [seed](const Ordinal& stage, const Restriction& g, const Restriction& proposal) {
    if (proposal == g) return g;
    const Restriction removable = restriction_difference(g, proposal);
    std::vector<std::pair<int, int>> pool;
    for (int i = 0; i < removable.player_count(); ++i) {
      for (int s : removable.allowed(i)) pool.emplace_back(i, s);
    }
    // Keyed by (seed, stage) so the choice at a stage is a pure function
    // of the script's inputs.
    SplitMix64 rng(splitmix64(seed + kGolden * (stage.finite_part + 2)));
    std::vector<char> take(pool.size(), 0);
    for (int attempt = 0; attempt < 64; ++attempt) {
      bool any = false;
      for (std::size_t p = 0; p < pool.size(); ++p) {
        take[p] = static_cast<char>(rng.next() & 1);
        any = any || take[p];
      }
      if (any) break;
      if (attempt == 63) take[rng.below(pool.size())] = 1;
    }
    Restriction out = g;
    for (std::size_t p = 0; p < pool.size(); ++p) {
      if (take[p]) out.remove(pool[p].first, pool[p].second);
    }
    return out;
  };
  return script;
}

RelaxationScript sample_relaxation(const GameOperator& op, std::uint64_t seed) {
  if (!op.contracting)
    throw NotContracting("operator '" + op.token() + "' is not contracting");
  return sample_relaxation(op.token(), [op](const Restriction& g) { return op.step(g); },
                           true, op.game->full(), seed);
}

RelaxationReport check_relaxation(const RelaxationScript& script, const IterationTrace& trace) {
  RelaxationReport report;
  for (std::size_t idx = 0; idx < trace.stages.size(); ++idx) {
    const auto& [ordinal, g] = trace.stages[idx];
    const std::uint32_t n = static_cast<std::uint32_t>(idx);
    if (!trace.determined_at(n + 1)) break;  // cap cut the trace; nothing to check here
    const Restriction r_of_g = trace.at_finite(n + 1);
    const Restriction t_of_g = script.base_step(g);

    if (!restriction_leq(t_of_g, r_of_g)) {
      report.valid = false;
      report.violation_stage = ordinal;
      report.violated_condition = 1;
      report.message = "stage " + to_string(ordinal) + ": base step is not below the relaxed step";
      return report;
    }
    if (restriction_leq(t_of_g, g) && !restriction_leq(r_of_g, g)) {
      report.valid = false;
      report.violation_stage = ordinal;
      report.violated_condition = 2;
      report.message = "stage " + to_string(ordinal) + ": base step contracts here but the relaxed step does not";
      return report;
    }
    if (r_of_g == g && t_of_g != g) {
      report.valid = false;
      report.violation_stage = ordinal;
      report.violated_condition = 3;
      report.message = "stage " + to_string(ordinal) + ": fixpoint of the relaxation is not a fixpoint of the base";
      return report;
    }
  }
  return report;
}

OrderIndependenceReport order_independence_trial(const GameOperator& op, int trials,
                                                 std::uint64_t seed, const Ordinal& cap) {
  if (!op.contracting)
    throw NotContracting("operator '" + op.token() + "' is not contracting");

  OrderIndependenceReport report;
  report.operator_name = op.token();
  report.trials = trials;

  const MemoizedStep memo(StepFn([op](const Restriction& g) { return op.step(g); }));
  const Restriction top = op.game->full();
  for (int k = 0; k < trials; ++k) {
    const std::uint64_t ts = trial_seed(seed, static_cast<std::uint64_t>(k));
    const RelaxationScript script =
        sample_relaxation(op.token(), StepFn(memo), true, top, ts);
    const IterationTrace trace = iterate(script, cap);
    if (trace.verdict.kind != Verdict::Kind::FixpointAt)
      throw std::invalid_argument("cap too small: a sampled relaxation did not reach its fixpoint");

    const Restriction& outcome = trace.stages.back().second;
    const Ordinal closure = trace.verdict.at;
    auto it = std::find_if(report.outcomes.begin(), report.outcomes.end(),
                           [&](const OutcomeGroup& group) { return group.outcome == outcome; });
    if (it == report.outcomes.end()) {
      report.outcomes.push_back(
          {outcome, closure, closure <= Ordinal::omega(), 1, ts});
    } else {
      ++it->count;
    }
  }
  return report;
}

ComparisonReport compare_operators(const std::vector<GameOperator>& ops, const Ordinal& cap) {
  if (ops.empty()) throw std::invalid_argument("nothing to compare");
  for (const GameOperator& op : ops) {
    if (op.game != ops.front().game) throw GameMismatch();
  }

  // Bar and unbarred variants share one memoized base step per family.
  std::unordered_map<std::string, MemoizedStep> bases;
  ComparisonReport report;
  for (const GameOperator& op : ops) {
    std::string key = std::string(operator_token(base_of(op.name)));
    if (op.beliefs) key += ":" + std::string(belief_token(op.beliefs->kind));
    auto it = bases.find(key);
    if (it == bases.end()) {
      it = bases.emplace(key, MemoizedStep(StepFn([op](const Restriction& g) {
                           return op.base_step(g);
                         })))
               .first;
    }
    const MemoizedStep base = it->second;
    const bool barred = op.contracting;
    StepFn step = [base, barred](const Restriction& g) {
      Restriction value = base(g);
      return barred ? meet(value, g) : value;
    };
    report.traces.push_back(iterate_step(op.token(), step, op.game->full(), cap));
  }

  std::uint32_t longest = 0;
  for (const auto& trace : report.traces)
    longest = std::max(longest, static_cast<std::uint32_t>(trace.stages.size()));

  for (std::uint32_t n = 0; n < longest; ++n) {
    for (std::size_t i = 0; i < report.traces.size(); ++i) {
      for (std::size_t j = i + 1; j < report.traces.size(); ++j) {
        if (!report.traces[i].determined_at(n) || !report.traces[j].determined_at(n)) continue;
        if (report.traces[i].at_finite(n) != report.traces[j].at_finite(n)) {
          report.coincide = false;
          report.first_divergence = Ordinal::finite(n);
          report.divergent_pair = {static_cast<int>(i), static_cast<int>(j)};
          return report;
        }
      }
    }
  }

  report.coincide = std::all_of(report.traces.begin(), report.traces.end(), [](const auto& t) {
    return t.verdict.kind == Verdict::Kind::FixpointAt;
  });
  return report;
}

}  // namespace eliminax
