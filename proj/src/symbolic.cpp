#include "eliminax/symbolic.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "eliminax/engine.hpp"
#include "eliminax/game.hpp"
#include "eliminax/operators.hpp"

namespace eliminax {

namespace {

bool is_integral(const Rational& x) { return denominator(x) == 1; }

long long to_ll(const Rational& x) { return numerator(x).convert_to<long long>(); }

Integer rational_floor(const Rational& q) {
  const Integer num = numerator(q);
  const Integer den = denominator(q);
  if (num >= 0) return num / den;
  return -((-num + den - 1) / den);
}

std::vector<Rational> sorted_unique(std::vector<Rational> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

}  // namespace

SymbolicSet SymbolicSet::empty() { return SymbolicSet(); }

SymbolicSet SymbolicSet::finite(std::vector<Rational> values) {
  SymbolicSet s;
  s.values_ = sorted_unique(std::move(values));
  s.kind_ = s.values_.empty() ? Kind::Empty : Kind::Finite;
  return s;
}

SymbolicSet SymbolicSet::singleton(const Rational& v) { return finite({v}); }

SymbolicSet SymbolicSet::cofinite_nat_minus(std::vector<Rational> excluded) {
  for (const Rational& e : excluded) {
    if (!is_integral(e) || e < -1)
      throw std::invalid_argument("excluded values must be integers >= -1");
  }
  SymbolicSet s;
  s.kind_ = Kind::CofinNatMinus;
  s.values_ = sorted_unique(std::move(excluded));
  return s;
}

SymbolicSet SymbolicSet::interval_loc(const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) return empty();
  SymbolicSet s;
  s.kind_ = Kind::IntervalLOC;
  s.lo_ = lo;
  s.hi_ = hi;
  return s;
}

bool SymbolicSet::contains(const Rational& x) const {
  switch (kind_) {
    case Kind::Empty: return false;
    case Kind::Finite: return std::binary_search(values_.begin(), values_.end(), x);
    case Kind::CofinNatMinus:
      return is_integral(x) && x >= -1 && !std::binary_search(values_.begin(), values_.end(), x);
    case Kind::IntervalLOC: return lo_ < x && x <= hi_;
  }
  return false;
}

bool SymbolicSet::subset_of(const SymbolicSet& other) const {
  if (kind_ == Kind::Empty) return true;
  switch (kind_) {
    case Kind::Finite:
      return std::all_of(values_.begin(), values_.end(),
                         [&](const Rational& v) { return other.contains(v); });
    case Kind::CofinNatMinus:
      // Infinite and unbounded above over the integers; only another
      // cofinite set can contain it.
      if (other.kind_ != Kind::CofinNatMinus) return false;
      return std::all_of(other.values_.begin(), other.values_.end(), [&](const Rational& e) {
        return std::binary_search(values_.begin(), values_.end(), e);
      });
    case Kind::IntervalLOC:
      // A nonempty interval is an uncountable set of rationals; only a
      // containing interval can hold it.
      if (other.kind_ != Kind::IntervalLOC) return false;
      return other.lo_ <= lo_ && hi_ <= other.hi_;
    default: return false;
  }
}

bool operator==(const SymbolicSet& a, const SymbolicSet& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case SymbolicSet::Kind::Empty: return true;
    case SymbolicSet::Kind::Finite:
    case SymbolicSet::Kind::CofinNatMinus: return a.values_ == b.values_;
    case SymbolicSet::Kind::IntervalLOC: return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }
  return false;
}

SymbolicSet SymbolicSet::intersect(const SymbolicSet& other) const {
  if (kind_ == Kind::Empty || other.kind_ == Kind::Empty) return empty();
  if (kind_ == Kind::Finite) {
    std::vector<Rational> kept;
    for (const Rational& v : values_)
      if (other.contains(v)) kept.push_back(v);
    return finite(std::move(kept));
  }
  if (other.kind_ == Kind::Finite) return other.intersect(*this);
  if (kind_ == Kind::CofinNatMinus && other.kind_ == Kind::CofinNatMinus) {
    std::vector<Rational> excluded = values_;
    excluded.insert(excluded.end(), other.values_.begin(), other.values_.end());
    return cofinite_nat_minus(std::move(excluded));
  }
  if (kind_ == Kind::IntervalLOC && other.kind_ == Kind::IntervalLOC) {
    return interval_loc(std::max(lo_, other.lo_), std::min(hi_, other.hi_));
  }
  // Cofinite-integer set against an interval: finitely many integers.
  const SymbolicSet& cof = kind_ == Kind::CofinNatMinus ? *this : other;
  const SymbolicSet& ivl = kind_ == Kind::IntervalLOC ? *this : other;
  std::vector<Rational> kept;
  for (Integer v = rational_floor(ivl.lo_) + 1; Rational(v) <= ivl.hi_; ++v) {
    const Rational x(v);
    if (cof.contains(x) && ivl.contains(x)) kept.push_back(x);
  }
  return finite(std::move(kept));
}

std::vector<Rational> SymbolicSet::sample_points(int budget) const {
  std::vector<Rational> out;
  switch (kind_) {
    case Kind::Empty: break;
    case Kind::Finite: out = values_; break;
    case Kind::CofinNatMinus: {
      Rational max_seen(-1);
      for (const Rational& e : values_) max_seen = std::max(max_seen, e);
      Rational candidate(-1);
      while (static_cast<int>(out.size()) + 2 < budget) {
        if (contains(candidate)) out.push_back(candidate);
        candidate += 1;
        if (candidate > max_seen + budget) break;
      }
      out.push_back(max_seen + 5);
      out.push_back(max_seen + 11);
      break;
    }
    case Kind::IntervalLOC: {
      out.push_back(hi_);
      const Rational width = hi_ - lo_;
      for (int j = 1; j < budget; ++j) {
        out.push_back(lo_ + width * j / budget);
      }
      break;
    }
  }
  return sorted_unique(std::move(out));
}

std::string SymbolicSet::render() const {
  switch (kind_) {
    case Kind::Empty: return "{}";
    case Kind::Finite: {
      std::string out = "{";
      for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i > 0) out += ',';
        out += to_string(values_[i]);
      }
      return out + "}";
    }
    case Kind::CofinNatMinus: {
      const bool over_naturals = contains(Rational(-1)) ? false : true;
      std::string base = over_naturals ? "N" : "N'";
      std::string removed;
      for (const Rational& e : values_) {
        if (e == -1) continue;
        if (!removed.empty()) removed += ',';
        removed += to_string(e);
      }
      return removed.empty() ? base : base + "\\{" + removed + "}";
    }
    case Kind::IntervalLOC:
      return "(" + to_string(lo_) + "," + to_string(hi_) + "]";
  }
  return "{}";
}

bool SymbolicRestriction::subset_of(const SymbolicRestriction& other) const {
  if (sets.size() != other.sets.size()) return false;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (!sets[i].subset_of(other.sets[i])) return false;
  }
  return true;
}

bool SymbolicRestriction::all_empty() const {
  return std::all_of(sets.begin(), sets.end(), [](const SymbolicSet& s) { return s.is_empty(); });
}

std::string SymbolicRestriction::render() const {
  std::string out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (i > 0) out += " | ";
    out += sets[i].render();
  }
  return out;
}

StageMismatch::StageMismatch(const Ordinal& at_, const std::string& what)
    : std::runtime_error("stage " + eliminax::to_string(at_) + ": " + what), at(at_) {}

namespace {

using SR = SymbolicRestriction;

SymbolicSet nat_prime() { return SymbolicSet::cofinite_nat_minus({}); }
SymbolicSet naturals() { return SymbolicSet::cofinite_nat_minus({Rational(-1)}); }

// {0..m} (empty when m < 0), optionally together with -1.
std::vector<Rational> initial_segment(long long m, bool with_minus_one) {
  std::vector<Rational> out;
  if (with_minus_one) out.emplace_back(-1);
  for (long long v = 0; v <= m; ++v) out.emplace_back(v);
  return out;
}

SymbolicSet sym_union(const SymbolicSet& a, const SymbolicSet& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  using K = SymbolicSet::Kind;
  if (a.kind() == K::Finite && b.kind() == K::Finite) {
    std::vector<Rational> values = a.finite_values();
    values.insert(values.end(), b.finite_values().begin(), b.finite_values().end());
    return SymbolicSet::finite(std::move(values));
  }
  if (a.kind() == K::CofinNatMinus && b.kind() == K::CofinNatMinus) {
    std::vector<Rational> excluded;
    for (const Rational& e : a.excluded_values())
      if (std::binary_search(b.excluded_values().begin(), b.excluded_values().end(), e))
        excluded.push_back(e);
    return SymbolicSet::cofinite_nat_minus(std::move(excluded));
  }
  if (a.kind() == K::Finite && b.kind() == K::CofinNatMinus) return sym_union(b, a);
  if (a.kind() == K::CofinNatMinus && b.kind() == K::Finite) {
    std::vector<Rational> excluded;
    for (const Rational& e : a.excluded_values())
      if (!b.contains(e)) excluded.push_back(e);
    return SymbolicSet::cofinite_nat_minus(std::move(excluded));
  }
  throw std::logic_error("union not defined for these symbolic set variants");
}

// {a + 1 | a in A, a >= 0} as a subset of N u {-1}.
SymbolicSet shift_up_naturals(const SymbolicSet& a) {
  using K = SymbolicSet::Kind;
  if (a.is_empty()) return SymbolicSet::empty();
  if (a.kind() == K::Finite) {
    std::vector<Rational> out;
    for (const Rational& v : a.finite_values())
      if (v >= 0) out.push_back(v + 1);
    return SymbolicSet::finite(std::move(out));
  }
  if (a.kind() == K::CofinNatMinus) {
    std::vector<Rational> excluded = {Rational(-1), Rational(0)};
    for (const Rational& e : a.excluded_values())
      if (e >= 0) excluded.push_back(e + 1);
    return SymbolicSet::cofinite_nat_minus(std::move(excluded));
  }
  throw std::logic_error("shift is only defined over integer ground sets");
}

bool has_natural_member(const SymbolicSet& a) {
  using K = SymbolicSet::Kind;
  if (a.kind() == K::CofinNatMinus) return true;  // cofinite in an infinite set
  if (a.kind() == K::Finite) {
    return std::any_of(a.finite_values().begin(), a.finite_values().end(),
                       [](const Rational& v) { return v >= 0; });
  }
  return false;
}

SymbolicSet with_minus_one(const SymbolicSet& a) {
  return sym_union(a, SymbolicSet::singleton(Rational(-1)));
}

SymbolicSet naturals_part(const SymbolicSet& a) {
  return a.intersect(naturals());
}

std::optional<Rational> max_natural_member(const SymbolicSet& a) {
  using K = SymbolicSet::Kind;
  if (a.kind() == K::Finite) {
    std::optional<Rational> best;
    for (const Rational& v : a.finite_values())
      if (v >= 0 && (!best || v > *best)) best = v;
    return best;
  }
  if (a.kind() == K::Empty) return std::nullopt;
  throw std::logic_error("an unbounded set has no maximum");
}

// ---------------------------------------------------------------------------
// Game with strategy sets N u {-1} for two players and pure beliefs.
// Payoffs: p1(k,l) = l+1 when k = l+1 (and when k = -1), p1(k,-1) = k for
// k >= 0, 0 otherwise; p2(k,l) = k when k = l or l = -1, p2(-1,l) = l for
// l >= 0, 0 otherwise. Best responses: to l >= 0 they are {l+1, -1} for
// player 1 and {k, -1} (everything when k = 0) for player 2; no best
// response to -1 exists in the full game.
// ---------------------------------------------------------------------------

Rational nat_minus_one_payoff(int player, const std::vector<Rational>& s) {
  const Rational& k = s[0];
  const Rational& l = s[1];
  if (player == 0) {
    if (k == -1) return l + 1;        // covers l = -1: payoff 0
    if (l == -1) return k;            // k >= 0 here
    return k == l + 1 ? l + 1 : Rational(0);
  }
  if (l == -1) return k;              // covers k = -1: payoff -1
  if (k == -1) return l;              // l >= 0 here
  return k == l ? k : Rational(0);
}

// GR: survivors of player 1 are the best responses in the full game to
// some opponent strategy in A2, i.e. {l+1 | l in A2, l >= 0} u {-1}
// whenever A2 has a natural member; player 2 symmetrically, except that
// every strategy responds to 0.
SR nat_minus_one_gr(const SR& g) {
  const SymbolicSet& a1 = g.sets[0];
  const SymbolicSet& a2 = g.sets[1];
  SymbolicSet s1 = has_natural_member(a2) ? with_minus_one(shift_up_naturals(a2))
                                          : SymbolicSet::empty();
  SymbolicSet s2 = SymbolicSet::empty();
  if (has_natural_member(a1)) {
    s2 = a1.contains(Rational(0)) ? nat_prime() : with_minus_one(naturals_part(a1));
  }
  return SR{{s1, s2}};
}

SR nat_minus_one_grbar(const SR& g) {
  SR base = nat_minus_one_gr(g);
  return SR{{base.sets[0].intersect(g.sets[0]), base.sets[1].intersect(g.sets[1])}};
}

// LR: as GR while the own set still contains -1 (the maximum payoff
// against a natural belief is then attained inside the restriction), plus
// the best responses to the belief -1 computed inside the restriction:
// none when the own set is unbounded, everything when its best own payoff
// against -1 is 0 or below.
SymbolicSet nat_minus_one_lr_player1(const SymbolicSet& a1, const SymbolicSet& a2) {
  if (a2.is_empty()) return SymbolicSet::empty();
  if (a1.is_empty()) return nat_prime();
  if (!a1.contains(Rational(-1)))
    throw std::logic_error("step derived only for own sets containing -1");
  SymbolicSet result = SymbolicSet::empty();
  if (has_natural_member(a2)) result = with_minus_one(shift_up_naturals(a2));
  if (a2.contains(Rational(-1)) && a1.kind() == SymbolicSet::Kind::Finite) {
    const auto m = max_natural_member(a1);
    if (!m || *m == 0) {
      result = nat_prime();
    } else {
      result = sym_union(result, SymbolicSet::cofinite_nat_minus(
                                     initial_segment(to_ll(*m) - 1, true)));
    }
  }
  return result;
}

SymbolicSet nat_minus_one_lr_player2(const SymbolicSet& a1, const SymbolicSet& a2) {
  if (a1.is_empty()) return SymbolicSet::empty();
  if (a2.is_empty()) return nat_prime();
  if (!a2.contains(Rational(-1)))
    throw std::logic_error("step derived only for own sets containing -1");
  SymbolicSet result = SymbolicSet::empty();
  if (has_natural_member(a1)) {
    if (a1.contains(Rational(0))) return nat_prime();
    result = with_minus_one(naturals_part(a1));
  }
  if (a1.contains(Rational(-1)) && a2.kind() == SymbolicSet::Kind::Finite) {
    const auto m = max_natural_member(a2);
    if (!m) {
      result = nat_prime();
    } else if (*m == 0) {
      result = sym_union(result, naturals());
    } else {
      result = sym_union(result, SymbolicSet::cofinite_nat_minus(
                                     initial_segment(to_ll(*m) - 1, true)));
    }
  }
  return result;
}

SR nat_minus_one_lr(const SR& g) {
  return SR{{nat_minus_one_lr_player1(g.sets[0], g.sets[1]),
             nat_minus_one_lr_player2(g.sets[0], g.sets[1])}};
}

// Finite stages shared by grbar and lr: the two players lose the initial
// segments of N in alternation.
SR nat_minus_one_finite_stage(std::uint32_t n) {
  if (n == 0) return SR{{nat_prime(), nat_prime()}};
  const long long k = n / 2;
  if (n % 2 == 0) {
    SymbolicSet s = SymbolicSet::cofinite_nat_minus(initial_segment(k - 1, false));
    return SR{{s, s}};
  }
  return SR{{SymbolicSet::cofinite_nat_minus(initial_segment(k, false)),
             SymbolicSet::cofinite_nat_minus(initial_segment(k - 1, false))}};
}

// ---------------------------------------------------------------------------
// Three players over N: p1(k,l,m) = l+1 when k = l+1, p2(k,l,m) = k when
// k = l, p3 = 0; pure beliefs. The best responses: l+1 to (l,m); k to
// (k,m) (everything when k = 0); everything to (k,l).
// ---------------------------------------------------------------------------

Rational three_player_payoff(int player, const std::vector<Rational>& s) {
  if (player == 0) return s[0] == s[1] + 1 ? s[1] + 1 : Rational(0);
  if (player == 1) return s[0] == s[1] ? s[0] : Rational(0);
  return Rational(0);
}

SR three_player_grbar(const SR& g) {
  const SymbolicSet& a1 = g.sets[0];
  const SymbolicSet& a2 = g.sets[1];
  const SymbolicSet& a3 = g.sets[2];
  SymbolicSet s1 = (!a2.is_empty() && !a3.is_empty()) ? shift_up_naturals(a2)
                                                      : SymbolicSet::empty();
  SymbolicSet s2 = SymbolicSet::empty();
  if (!a1.is_empty() && !a3.is_empty()) s2 = a1.contains(Rational(0)) ? naturals() : a1;
  SymbolicSet s3 = (!a1.is_empty() && !a2.is_empty()) ? naturals() : SymbolicSet::empty();
  if (s1.kind() == SymbolicSet::Kind::CofinNatMinus) s1 = s1.intersect(naturals());
  return SR{{s1.intersect(a1), s2.intersect(a2), s3.intersect(a3)}};
}

SR three_player_stage(std::uint32_t n) {
  if (n == 0) return SR{{naturals(), naturals(), naturals()}};
  const long long k = n / 2;
  const auto seg = [](long long m) {
    return SymbolicSet::cofinite_nat_minus(initial_segment(m, true));
  };
  if (n % 2 == 0) return SR{{seg(k - 1), seg(k - 1), naturals()}};
  return SR{{seg(k), seg(k - 1), naturals()}};
}

// ---------------------------------------------------------------------------
// Two players over N, each paid their own number; every strategy is
// strictly dominated by any larger one, regardless of the opponent.
// ---------------------------------------------------------------------------

Rational own_number_payoff(int player, const std::vector<Rational>& s) { return s[player]; }

SymbolicSet naturals_ls_component(const SymbolicSet& own, const SymbolicSet& opp) {
  if (opp.is_empty()) {
    // Domination is vacuous; any member of the own set removes everything.
    return own.is_empty() ? naturals() : SymbolicSet::empty();
  }
  if (own.is_empty()) return naturals();
  if (own.kind() == SymbolicSet::Kind::CofinNatMinus) return SymbolicSet::empty();
  const auto m = max_natural_member(own);
  return SymbolicSet::cofinite_nat_minus(initial_segment(to_ll(*m) - 1, true));
}

SR naturals_ls(const SR& g) {
  return SR{{naturals_ls_component(g.sets[0], g.sets[1]),
             naturals_ls_component(g.sets[1], g.sets[0])}};
}

SR naturals_lsbar(const SR& g) {
  SR base = naturals_ls(g);
  return SR{{base.sets[0].intersect(g.sets[0]), base.sets[1].intersect(g.sets[1])}};
}

// ---------------------------------------------------------------------------
// Price competition on (0, 100]: the lower price takes s(100-s), ties
// split it, the higher price takes 0. In the full game 50 is the unique
// best response to any price above 50 and nothing responds to a price of
// 50 or below (the supremum under an opponent's price is not attained).
// ---------------------------------------------------------------------------

Rational bertrand_payoff(int player, const std::vector<Rational>& s) {
  const Rational& own = s[player];
  const Rational& other = s[1 - player];
  if (own < other) return own * (100 - own);
  if (own == other) return own * (100 - own) / 2;
  return Rational(0);
}

bool has_member_above_50(const SymbolicSet& a) {
  using K = SymbolicSet::Kind;
  if (a.kind() == K::IntervalLOC) return a.interval_hi() > 50;
  if (a.kind() == K::Finite) {
    return std::any_of(a.finite_values().begin(), a.finite_values().end(),
                       [](const Rational& v) { return v > 50; });
  }
  return false;
}

SR bertrand_grbar(const SR& g) {
  const auto component = [&](int i) {
    const SymbolicSet& own = g.sets[i];
    const SymbolicSet& opp = g.sets[1 - i];
    SymbolicSet base = has_member_above_50(opp) ? SymbolicSet::singleton(Rational(50))
                                                : SymbolicSet::empty();
    return base.intersect(own);
  };
  return SR{{component(0), component(1)}};
}

SymbolicSet bertrand_lrbar_component(const SymbolicSet& own, const SymbolicSet& opp) {
  using K = SymbolicSet::Kind;
  if (own.is_empty() || opp.is_empty()) return SymbolicSet::empty();
  if (own.kind() == K::IntervalLOC && opp.kind() == K::IntervalLOC) {
    if (own.interval_lo() != 0 || own != opp)
      throw std::logic_error("step derived only for matching price intervals");
    // Against an opponent price above 50 the best response inside the
    // interval is exactly 50; against prices of at most 50 the supremum of
    // undercutting payoffs is not attained, so nothing is a best response.
    return own.interval_hi() > 50 ? SymbolicSet::singleton(Rational(50)) : SymbolicSet::empty();
  }
  if (own.kind() == K::Finite && opp.kind() == K::Finite) {
    std::vector<Rational> survivors;
    for (const Rational& a : own.finite_values()) {
      for (const Rational& b : opp.finite_values()) {
        bool best = true;
        for (const Rational& c : own.finite_values()) {
          if (bertrand_payoff(0, {a, b}) < bertrand_payoff(0, {c, b})) {
            best = false;
            break;
          }
        }
        if (best) {
          survivors.push_back(a);
          break;
        }
      }
    }
    return SymbolicSet::finite(std::move(survivors));
  }
  throw std::logic_error("step derived only for interval or finite price sets");
}

SR bertrand_lrbar(const SR& g) {
  return SR{{bertrand_lrbar_component(g.sets[0], g.sets[1]),
             bertrand_lrbar_component(g.sets[1], g.sets[0])}};
}

// ---------------------------------------------------------------------------
// Production game on (0, 100]: each player is paid their own choice except
// that (100, 100) pays both zero. Everything below 100 is dominated by any
// larger choice below 100; 100 itself is dominated only once the opponent
// set has shrunk to {100}.
// ---------------------------------------------------------------------------

Rational production_payoff(int player, const std::vector<Rational>& s) {
  if (s[0] == 100 && s[1] == 100) return Rational(0);
  return s[player];
}

SR production_gsbar(const SR& g) {
  const auto component = [&](int i) {
    const SymbolicSet& own = g.sets[i];
    const SymbolicSet& opp = g.sets[1 - i];
    if (opp.is_empty()) return SymbolicSet::empty();
    if (opp == SymbolicSet::singleton(Rational(100))) return SymbolicSet::empty();
    return SymbolicSet::singleton(Rational(100)).intersect(own);
  };
  return SR{{component(0), component(1)}};
}

// ---------------------------------------------------------------------------
// Direct membership evaluation with sampled quantifiers. The candidate
// sets below contain the hand-derived witnesses (the exact best response,
// an undercutting midpoint, a larger production choice, ...), so the
// sampled evaluation agrees exactly with the symbolic step on the probes.
// ---------------------------------------------------------------------------

constexpr int kSampleBudget = 16;

// Best-response membership for the integer games: `domain` restricts the
// comparison candidates (the own component for local operators, the whole
// ground set for global ones).
bool sampled_best_response_exists(
    const std::function<Rational(int, const std::vector<Rational>&)>& payoff, int players,
    int player, const Rational& s, const std::vector<std::vector<Rational>>& belief_samples,
    const std::function<std::vector<Rational>(const std::vector<Rational>&)>& candidates,
    const std::function<bool(const Rational&)>& in_domain) {
  for (const auto& belief : belief_samples) {
    std::vector<Rational> joint(players);
    int slot = 0;
    for (int j = 0; j < players; ++j) {
      if (j == player) continue;
      joint[j] = belief[slot++];
    }
    joint[player] = s;
    const Rational mine = payoff(player, joint);
    bool best = true;
    for (const Rational& c : candidates(belief)) {
      if (!in_domain(c)) continue;
      joint[player] = c;
      if (payoff(player, joint) > mine) {
        best = false;
        break;
      }
    }
    if (best) return true;
  }
  return false;
}

std::vector<std::vector<Rational>> belief_profiles(const SR& g, int player) {
  std::vector<std::vector<Rational>> profiles{{}};
  for (std::size_t j = 0; j < g.sets.size(); ++j) {
    if (static_cast<int>(j) == player) continue;
    std::vector<std::vector<Rational>> next;
    for (const auto& prefix : profiles) {
      for (const Rational& v : g.sets[j].sample_points(kSampleBudget)) {
        auto extended = prefix;
        extended.push_back(v);
        next.push_back(std::move(extended));
      }
    }
    profiles = std::move(next);
  }
  if (!profiles.empty() && profiles.front().empty()) return {};
  return profiles;
}

}  // namespace

// ---------------------------------------------------------------------------
// The catalogue.
// ---------------------------------------------------------------------------

namespace {

SymbolicExample make_nat_minus_one_grbar() {
  SymbolicExample ex;
  ex.name = "nat_minus_one_GRbar";
  ex.description =
      "chase-the-successor game on N u {-1}; the contracted global operator needs w+1 stages";
  ex.operator_name = "grbar";
  ex.player_count = 2;
  ex.full = SR{{nat_prime(), nat_prime()}};
  ex.step = nat_minus_one_grbar;
  ex.stage_formula = [](const Ordinal& a) -> SR {
    if (a.is_finite()) return nat_minus_one_finite_stage(a.finite_part);
    if (a == Ordinal::omega())
      return SR{{SymbolicSet::singleton(Rational(-1)), SymbolicSet::singleton(Rational(-1))}};
    return SR{{SymbolicSet::empty(), SymbolicSet::empty()}};
  };
  ex.expected_closure = Ordinal::omega(1, 1);
  ex.expected_outcome = SR{{SymbolicSet::empty(), SymbolicSet::empty()}};
  ex.payoff = nat_minus_one_payoff;
  ex.probe_strategies = {Rational(-1), Rational(0), Rational(1), Rational(2), Rational(3),
                         Rational(5), Rational(9)};
  ex.direct_member = [](int player, const Rational& s, const SR& g) {
    if (!g.sets[player].contains(s)) return false;  // contracted operator
    const auto candidates = [](const std::vector<Rational>& belief) {
      const Rational& b = belief[0];
      std::vector<Rational> out = {Rational(-1), Rational(0), Rational(1), b, Rational(29)};
      if (b >= 0) out.push_back(b + 1);
      return out;
    };
    return sampled_best_response_exists(
        nat_minus_one_payoff, 2, player, s, belief_profiles(g, player), candidates,
        [](const Rational&) { return true; });  // responses judged in the full game
  };
  return ex;
}

SymbolicExample make_nat_minus_one_lr() {
  SymbolicExample ex;
  ex.name = "nat_minus_one_LR";
  ex.description =
      "the local operator on the same game springs back to the full game right after stage w";
  ex.operator_name = "lr";
  ex.player_count = 2;
  ex.full = SR{{nat_prime(), nat_prime()}};
  ex.step = nat_minus_one_lr;
  ex.stage_formula = [](const Ordinal& a) -> SR {
    if (a.is_finite()) return nat_minus_one_finite_stage(a.finite_part);
    if (a.finite_part == 0)
      return SR{{SymbolicSet::singleton(Rational(-1)), SymbolicSet::singleton(Rational(-1))}};
    // past a limit stage the run repeats the finite stages
    return nat_minus_one_finite_stage(a.finite_part - 1);
  };
  ex.expected_closure = std::nullopt;
  ex.expected_outcome = std::nullopt;
  ex.payoff = nat_minus_one_payoff;
  ex.probe_strategies = {Rational(-1), Rational(0), Rational(1), Rational(2), Rational(3),
                         Rational(5), Rational(9)};
  ex.direct_member = [](int player, const Rational& s, const SR& g) {
    const SymbolicSet& own = g.sets[player];
    auto own_samples = own.sample_points(kSampleBudget);
    const auto candidates = [own_samples](const std::vector<Rational>& belief) {
      const Rational& b = belief[0];
      std::vector<Rational> out = own_samples;
      out.push_back(b);
      if (b >= 0) out.push_back(b + 1);
      out.push_back(Rational(-1));
      return out;
    };
    return sampled_best_response_exists(
        nat_minus_one_payoff, 2, player, s, belief_profiles(g, player), candidates,
        [&own](const Rational& c) { return own.contains(c); });  // responses judged inside g
  };
  return ex;
}

SymbolicExample make_three_player() {
  SymbolicExample ex;
  ex.name = "three_player_nat_GRbar";
  ex.description =
      "three players over N with an indifferent third player; every belief has a best response "
      "yet the run still needs w+1 stages";
  ex.operator_name = "grbar";
  ex.player_count = 3;
  ex.full = SR{{naturals(), naturals(), naturals()}};
  ex.step = three_player_grbar;
  ex.stage_formula = [](const Ordinal& a) -> SR {
    if (a.is_finite()) return three_player_stage(a.finite_part);
    if (a == Ordinal::omega())
      return SR{{SymbolicSet::empty(), SymbolicSet::empty(), naturals()}};
    return SR{{SymbolicSet::empty(), SymbolicSet::empty(), SymbolicSet::empty()}};
  };
  ex.expected_closure = Ordinal::omega(1, 1);
  ex.expected_outcome = SR{{SymbolicSet::empty(), SymbolicSet::empty(), SymbolicSet::empty()}};
  ex.payoff = three_player_payoff;
  ex.probe_strategies = {Rational(0), Rational(1), Rational(2), Rational(3), Rational(5),
                         Rational(9)};
  ex.direct_member = [](int player, const Rational& s, const SR& g) {
    if (!g.sets[player].contains(s)) return false;
    const auto candidates = [](const std::vector<Rational>& belief) {
      std::vector<Rational> out = {Rational(0), Rational(1), belief[0], belief[0] + 1,
                                   Rational(29)};
      return out;
    };
    return sampled_best_response_exists(
        three_player_payoff, 3, player, s, belief_profiles(g, player), candidates,
        [](const Rational&) { return true; });
  };
  return ex;
}

bool naturals_direct_dominated(int player, const Rational& s, const SR& g) {
  const auto dominators = g.sets[player].sample_points(kSampleBudget);
  const auto opponents = g.sets[1 - player].sample_points(kSampleBudget);
  for (const Rational& d : dominators) {
    bool beats_everywhere = true;
    for (const Rational& b : opponents) {
      std::vector<Rational> joint(2);
      joint[player] = d;
      joint[1 - player] = b;
      const Rational hi = own_number_payoff(player, joint);
      joint[player] = s;
      if (!(hi > own_number_payoff(player, joint))) {
        beats_everywhere = false;
        break;
      }
    }
    if (beats_everywhere) return true;  // vacuous when no opponent samples exist
  }
  return false;
}

SymbolicExample make_naturals_ls() {
  SymbolicExample ex;
  ex.name = "naturals_LS";
  ex.description =
      "pick-a-number game over N where every strategy is dominated; the local operator "
      "oscillates between the full game and the empty restriction";
  ex.operator_name = "ls";
  ex.player_count = 2;
  ex.full = SR{{naturals(), naturals()}};
  ex.step = naturals_ls;
  ex.stage_formula = [](const Ordinal& a) -> SR {
    if (!a.is_finite()) throw StageMismatch(a, "the oscillating run has no limit stage");
    return a.finite_part % 2 == 0 ? SR{{naturals(), naturals()}}
                                  : SR{{SymbolicSet::empty(), SymbolicSet::empty()}};
  };
  ex.expected_closure = std::nullopt;
  ex.expected_cycle_period = 2;
  ex.decreasing = false;
  ex.payoff = own_number_payoff;
  ex.probe_strategies = {Rational(0), Rational(1), Rational(5), Rational(9)};
  ex.direct_member = [](int player, const Rational& s, const SR& g) {
    return !naturals_direct_dominated(player, s, g);
  };
  return ex;
}

SymbolicExample make_naturals_lsbar() {
  SymbolicExample ex;
  ex.name = "naturals_LSbar";
  ex.description =
      "contracted local dominance on the pick-a-number game empties it in one step; scripted "
      "relaxations can stop at any diagonal singleton instead";
  ex.operator_name = "lsbar";
  ex.player_count = 2;
  ex.full = SR{{naturals(), naturals()}};
  ex.step = naturals_lsbar;
  ex.stage_formula = [](const Ordinal& a) -> SR {
    if (a == Ordinal::finite(0)) return SR{{naturals(), naturals()}};
    return SR{{SymbolicSet::empty(), SymbolicSet::empty()}};
  };
  ex.expected_closure = Ordinal::finite(1);
  ex.expected_outcome = SR{{SymbolicSet::empty(), SymbolicSet::empty()}};
  ex.payoff = own_number_payoff;
  ex.probe_strategies = {Rational(0), Rational(1), Rational(5), Rational(9)};
  ex.direct_member = [](int player, const Rational& s, const SR& g) {
    return g.sets[player].contains(s) && !naturals_direct_dominated(player, s, g);
  };
  for (long long i : {0, 1, 7}) {
    SymbolicRelaxation rel;
    rel.name = "pick_" + std::to_string(i);
    const SR target{{SymbolicSet::singleton(Rational(i)), SymbolicSet::singleton(Rational(i))}};
    const SR full{{naturals(), naturals()}};
    rel.step = [target, full](const SR& g) { return g == full ? target : naturals_lsbar(g); };
    rel.stage_formula = [target, full](const Ordinal& a) {
      return a == Ordinal::finite(0) ? full : target;
    };
    rel.expected_closure = Ordinal::finite(1);
    rel.expected_outcome = target;
    ex.relaxations.push_back(std::move(rel));
  }
  return ex;
}

SymbolicExample make_bertrand_grbar() {
  SymbolicExample ex;
  ex.name = "bertrand_GRbar";
  ex.description =
      "price competition on (0,100]; global best responses keep only 50, then remove it too";
  ex.operator_name = "grbar";
  ex.player_count = 2;
  const SymbolicSet prices = SymbolicSet::interval_loc(Rational(0), Rational(100));
  ex.full = SR{{prices, prices}};
  ex.step = bertrand_grbar;
  ex.stage_formula = [prices](const Ordinal& a) -> SR {
    if (a == Ordinal::finite(0)) return SR{{prices, prices}};
    if (a == Ordinal::finite(1))
      return SR{{SymbolicSet::singleton(Rational(50)), SymbolicSet::singleton(Rational(50))}};
    return SR{{SymbolicSet::empty(), SymbolicSet::empty()}};
  };
  ex.expected_closure = Ordinal::finite(2);
  ex.expected_outcome = SR{{SymbolicSet::empty(), SymbolicSet::empty()}};
  ex.payoff = bertrand_payoff;
  ex.probe_strategies = {Rational(1, 2), Rational(10), Rational(99, 2), Rational(50),
                         Rational(201, 4), Rational(75), Rational(100)};
  ex.direct_member = [](int player, const Rational& s, const SR& g) {
    if (!g.sets[player].contains(s)) return false;
    const auto candidates = [s](const std::vector<Rational>& belief) {
      const Rational& b = belief[0];
      std::vector<Rational> out = {Rational(50), b, b / 2};
      if (s < b) out.push_back((s + b) / 2);  // a sharper undercut of the belief
      return out;
    };
    return sampled_best_response_exists(
        bertrand_payoff, 2, player, s, belief_profiles(g, player), candidates,
        [](const Rational& c) { return 0 < c && c <= 100; });
  };
  return ex;
}

SymbolicRelaxation make_bertrand_relaxation() {
  SymbolicRelaxation rel;
  rel.name = "relaxation_R";
  const SymbolicSet prices = SymbolicSet::interval_loc(Rational(0), Rational(100));
  const SymbolicSet low = SymbolicSet::interval_loc(Rational(0), Rational(50));
  const SR full{{prices, prices}};
  const SR halved{{low, low}};
  rel.step = [full, halved](const SR& g) { return g == full ? halved : bertrand_lrbar(g); };
  rel.stage_formula = [full, halved](const Ordinal& a) -> SR {
    if (a == Ordinal::finite(0)) return full;
    if (a == Ordinal::finite(1)) return halved;
    return SR{{SymbolicSet::empty(), SymbolicSet::empty()}};
  };
  rel.expected_closure = Ordinal::finite(2);
  rel.expected_outcome = SR{{SymbolicSet::empty(), SymbolicSet::empty()}};
  return rel;
}

SymbolicExample make_bertrand_lrbar() {
  SymbolicExample ex;
  ex.name = "bertrand_LRbar";
  ex.description =
      "local best responses stop at the pair of 50s, while a relaxed first round empties the "
      "game: the local operator is not order independent";
  ex.operator_name = "lrbar";
  ex.player_count = 2;
  const SymbolicSet prices = SymbolicSet::interval_loc(Rational(0), Rational(100));
  ex.full = SR{{prices, prices}};
  ex.step = bertrand_lrbar;
  ex.stage_formula = [prices](const Ordinal& a) -> SR {
    if (a == Ordinal::finite(0)) return SR{{prices, prices}};
    return SR{{SymbolicSet::singleton(Rational(50)), SymbolicSet::singleton(Rational(50))}};
  };
  ex.expected_closure = Ordinal::finite(1);
  ex.expected_outcome =
      SR{{SymbolicSet::singleton(Rational(50)), SymbolicSet::singleton(Rational(50))}};
  ex.payoff = bertrand_payoff;
  ex.probe_strategies = {Rational(1, 2), Rational(10), Rational(99, 2), Rational(50),
                         Rational(201, 4), Rational(75), Rational(100)};
  ex.direct_member = [](int player, const Rational& s, const SR& g) {
    const SymbolicSet& own = g.sets[player];
    if (!own.contains(s)) return false;
    auto own_samples = own.sample_points(kSampleBudget);
    const auto candidates = [s, own_samples](const std::vector<Rational>& belief) {
      const Rational& b = belief[0];
      std::vector<Rational> out = own_samples;
      out.push_back(b);
      out.push_back(b / 2);
      if (s < b) out.push_back((s + b) / 2);
      return out;
    };
    return sampled_best_response_exists(
        bertrand_payoff, 2, player, s, belief_profiles(g, player), candidates,
        [&own](const Rational& c) { return own.contains(c); });
  };
  ex.relaxations.push_back(make_bertrand_relaxation());
  return ex;
}

SymbolicExample make_bertrand_lrbar_relaxation() {
  SymbolicExample ex;
  ex.name = "bertrand_LRbar_relaxation_R";
  ex.description =
      "the scripted relaxation of the local operator on the price game: keep everything at or "
      "below 50 first, then eliminate as usual, reaching the empty restriction";
  ex.operator_name = "lrbar";
  ex.player_count = 2;
  const SymbolicSet prices = SymbolicSet::interval_loc(Rational(0), Rational(100));
  ex.full = SR{{prices, prices}};
  SymbolicRelaxation rel = make_bertrand_relaxation();
  ex.step = rel.step;
  ex.stage_formula = rel.stage_formula;
  ex.expected_closure = rel.expected_closure;
  ex.expected_outcome = rel.expected_outcome;
  ex.payoff = bertrand_payoff;
  return ex;
}

SymbolicExample make_production_gsbar() {
  SymbolicExample ex;
  ex.name = "production_GSbar";
  ex.description =
      "production game on (0,100] with a bad corner at (100,100); global dominance keeps the "
      "pair of 100s, then removes them as well";
  ex.operator_name = "gsbar";
  ex.player_count = 2;
  const SymbolicSet amounts = SymbolicSet::interval_loc(Rational(0), Rational(100));
  ex.full = SR{{amounts, amounts}};
  ex.step = production_gsbar;
  ex.stage_formula = [amounts](const Ordinal& a) -> SR {
    if (a == Ordinal::finite(0)) return SR{{amounts, amounts}};
    if (a == Ordinal::finite(1))
      return SR{{SymbolicSet::singleton(Rational(100)), SymbolicSet::singleton(Rational(100))}};
    return SR{{SymbolicSet::empty(), SymbolicSet::empty()}};
  };
  ex.expected_closure = Ordinal::finite(2);
  ex.expected_outcome = SR{{SymbolicSet::empty(), SymbolicSet::empty()}};
  ex.payoff = production_payoff;
  ex.probe_strategies = {Rational(1, 2), Rational(10), Rational(99, 2), Rational(50),
                         Rational(201, 4), Rational(75), Rational(100)};
  ex.direct_member = [](int player, const Rational& s, const SR& g) {
    if (!g.sets[player].contains(s)) return false;
    std::vector<Rational> dominators = {Rational(50), Rational(99), Rational(100)};
    if (s < 100) dominators.push_back((s + 100) / 2);
    const auto opponents = g.sets[1 - player].sample_points(kSampleBudget);
    for (const Rational& d : dominators) {
      if (d == s) continue;
      bool beats_everywhere = !opponents.empty();
      for (const Rational& b : opponents) {
        std::vector<Rational> joint(2);
        joint[player] = d;
        joint[1 - player] = b;
        const Rational hi = production_payoff(player, joint);
        joint[player] = s;
        if (!(hi > production_payoff(player, joint))) {
          beats_everywhere = false;
          break;
        }
      }
      if (beats_everywhere) return false;
    }
    return true;
  };
  return ex;
}

const std::vector<SymbolicExample>& symbolic_catalogue() {
  static const std::vector<SymbolicExample> examples = [] {
    std::vector<SymbolicExample> out;
    out.push_back(make_bertrand_grbar());
    out.push_back(make_bertrand_lrbar());
    out.push_back(make_bertrand_lrbar_relaxation());
    out.push_back(make_production_gsbar());
    out.push_back(make_nat_minus_one_grbar());
    out.push_back(make_nat_minus_one_lr());
    out.push_back(make_naturals_ls());
    out.push_back(make_naturals_lsbar());
    out.push_back(make_three_player());
    return out;
  }();
  return examples;
}

}  // namespace

const SymbolicExample* find_symbolic_example(std::string_view name) {
  for (const SymbolicExample& ex : symbolic_catalogue()) {
    if (ex.name == name) return &ex;
  }
  return nullptr;
}

namespace {

std::string closure_text(const SymbolicExample& ex) {
  if (ex.expected_cycle_period)
    return "none (cycle of period " + std::to_string(*ex.expected_cycle_period) + ")";
  if (!ex.expected_closure) return "none";
  return to_string(*ex.expected_closure);
}

// ---------------------------------------------------------------------------
// replay
// ---------------------------------------------------------------------------

constexpr int kOmegaSubsetDepth = 24;

void check_omega_stage(const SymbolicExample& ex, int finite_upto, ReplayReport& report) {
  const SR omega = ex.stage_formula(Ordinal::omega());

  // The omega stage sits below every finite stage.
  for (int n = 0; n <= std::max(finite_upto, kOmegaSubsetDepth); ++n) {
    if (!omega.subset_of(ex.stage_formula(Ordinal::finite(n)))) {
      report.failures.push_back("omega stage is not below finite stage " + std::to_string(n));
      return;
    }
  }

  // Membership sampling: what the omega stage keeps must be kept by every
  // sampled finite stage, and what it drops must be dropped by some
  // explicit finite stage.
  long long max_probe = 0;
  for (const Rational& p : ex.probe_strategies)
    if (is_integral(p)) max_probe = std::max(max_probe, to_ll(p));
  const int witness_depth = static_cast<int>(2 * max_probe + 8);

  for (int i = 0; i < ex.player_count; ++i) {
    for (const Rational& x : ex.probe_strategies) {
      if (omega.sets[i].contains(x)) {
        for (int n = 0; n <= std::max(finite_upto, kOmegaSubsetDepth); ++n) {
          if (!ex.stage_formula(Ordinal::finite(n)).sets[i].contains(x)) {
            report.failures.push_back("omega stage keeps " + to_string(x) + " for player " +
                                      std::to_string(i + 1) + " but stage " + std::to_string(n) +
                                      " drops it");
            break;
          }
        }
      } else {
        bool witnessed = false;
        for (int n = 0; n <= std::max(witness_depth, finite_upto) && !witnessed; ++n) {
          witnessed = !ex.stage_formula(Ordinal::finite(n)).sets[i].contains(x);
        }
        if (!witnessed) {
          report.failures.push_back("omega stage drops " + to_string(x) + " for player " +
                                    std::to_string(i + 1) +
                                    " but no checked finite stage drops it");
        }
      }
    }
  }
}

void spot_check_memberships(const SymbolicExample& ex, ReplayReport& report) {
  if (!ex.direct_member) return;
  std::vector<Ordinal> stages = {Ordinal::finite(0), Ordinal::finite(1), Ordinal::finite(2)};
  if (ex.decreasing) stages.push_back(Ordinal::omega());
  for (const Ordinal& at : stages) {
    const SR g = ex.stage_formula(at);
    const SR stepped = ex.step(g);
    for (int i = 0; i < ex.player_count; ++i) {
      for (const Rational& s : ex.probe_strategies) {
        const bool symbolic = stepped.sets[i].contains(s);
        const bool direct = ex.direct_member(i, s, g);
        if (symbolic != direct) {
          report.failures.push_back(
              "membership of " + to_string(s) + " for player " + std::to_string(i + 1) +
              " after stage " + to_string(at) + " disagrees with the sampled definition (" +
              (symbolic ? "kept" : "dropped") + " symbolically)");
        }
      }
    }
  }
}

struct ClosureScan {
  std::optional<Ordinal> closure;
  std::optional<SR> outcome;
  std::optional<std::pair<std::uint32_t, Ordinal>> cycle;
};

ClosureScan scan_stages(const std::function<SR(const Ordinal&)>& formula, int finite_upto,
                        bool has_omega, int past_limit) {
  ClosureScan scan;
  std::vector<SR> finite_stages;
  for (int n = 0; n <= finite_upto; ++n) finite_stages.push_back(formula(Ordinal::finite(n)));

  for (int n = 0; n + 1 <= finite_upto; ++n) {
    if (finite_stages[n + 1] == finite_stages[n]) {
      scan.closure = Ordinal::finite(n);
      scan.outcome = finite_stages[n];
      return scan;
    }
    // a revisit of an earlier stage that is not a fixpoint is a cycle
    for (int m = 0; m < n + 1; ++m) {
      if (finite_stages[n + 1] == finite_stages[m]) {
        scan.cycle = {static_cast<std::uint32_t>(n + 1 - m), Ordinal::finite(m)};
        return scan;
      }
    }
  }
  if (!has_omega) return scan;
  for (int j = 0; j < past_limit; ++j) {
    const Ordinal at = Ordinal::omega(1, j);
    if (formula(at.successor()) == formula(at)) {
      scan.closure = at;
      scan.outcome = formula(at);
      return scan;
    }
  }
  return scan;
}

void append_displayed_stages(const std::function<SR(const Ordinal&)>& formula, int finite_upto,
                             bool has_omega, int past_limit, std::optional<Ordinal> closure,
                             std::vector<SymbolicStage>& out) {
  int last_finite = finite_upto;
  if (closure && closure->is_finite())
    last_finite = std::min<int>(finite_upto, static_cast<int>(closure->finite_part));
  for (int n = 0; n <= last_finite; ++n) {
    out.push_back({Ordinal::finite(n), formula(Ordinal::finite(n)).render()});
  }
  if (!has_omega || (closure && closure->is_finite())) return;
  for (int j = 0; j <= past_limit; ++j) {
    const Ordinal at = Ordinal::omega(1, j);
    out.push_back({at, formula(at).render()});
    if (closure && *closure == at) break;
  }
}

void replay_relaxation(const SymbolicExample& ex, const SymbolicRelaxation& rel,
                       const ReplayOptions& opt, const std::optional<SR>& base_outcome,
                       ReplayReport& report) {
  RelaxationNote note;
  note.name = rel.name;

  std::vector<SR> stages;
  stages.push_back(rel.stage_formula(Ordinal::finite(0)));
  std::optional<std::uint32_t> closure_at;
  for (int n = 0; n < opt.check_finite_upto; ++n) {
    const SR expected = rel.stage_formula(Ordinal::finite(n + 1));
    const SR stepped = rel.step(stages.back());
    if (stepped != expected) {
      report.failures.push_back("relaxation " + rel.name + ": stage " + std::to_string(n + 1) +
                                " disagrees with one step application");
      return;
    }
    if (expected == stages.back()) {
      closure_at = n;
      break;
    }
    stages.push_back(expected);
  }

  for (std::size_t n = 0; n < stages.size(); ++n)
    note.stages.push_back({Ordinal::finite(static_cast<std::uint32_t>(n)), stages[n].render()});

  if (closure_at) {
    note.closure = Ordinal::finite(*closure_at);
    note.outcome = stages[*closure_at].render();
    if (!(Ordinal::finite(*closure_at) == rel.expected_closure))
      report.failures.push_back("relaxation " + rel.name + ": closure ordinal differs");
    if (stages[*closure_at] != rel.expected_outcome)
      report.failures.push_back("relaxation " + rel.name + ": outcome differs from expectation");
    if (base_outcome) note.outcome_differs_from_base = !(*base_outcome == stages[*closure_at]);
  } else {
    report.failures.push_back("relaxation " + rel.name + ": no fixpoint within the checked range");
  }

  // Relaxation conditions along the recorded trace, with the base step.
  note.valid_relaxation = true;
  for (std::size_t n = 0; n < stages.size(); ++n) {
    const SR& g = stages[n];
    const SR r_of_g = n + 1 < stages.size() ? stages[n + 1] : g;
    const SR t_of_g = ex.step(g);
    if (!t_of_g.subset_of(r_of_g)) {
      note.valid_relaxation = false;
      report.failures.push_back("relaxation " + rel.name + ": base step exceeds it at stage " +
                                std::to_string(n));
      break;
    }
    if (t_of_g.subset_of(g) && !r_of_g.subset_of(g)) {
      note.valid_relaxation = false;
      report.failures.push_back("relaxation " + rel.name + ": fails to contract at stage " +
                                std::to_string(n));
      break;
    }
    if (r_of_g == g && !(t_of_g == g)) {
      note.valid_relaxation = false;
      report.failures.push_back("relaxation " + rel.name +
                                ": stalls where the base step does not, at stage " +
                                std::to_string(n));
      break;
    }
  }
  report.relaxations.push_back(std::move(note));
}

}  // namespace

ReplayReport replay(const SymbolicExample& ex, const ReplayOptions& options) {
  ReplayReport report;
  report.name = ex.name;
  report.operator_name = ex.operator_name;
  report.expected_closure = ex.expected_closure;

  const int finite_upto = std::max(2, options.check_finite_upto);
  const int past_limit = std::max(1, options.check_past_limit);

  if (ex.stage_formula(Ordinal::finite(0)) != ex.full)
    throw StageMismatch(Ordinal::finite(0), "the closed form does not start at the full game");

  // One-step validation over the finite stages.
  SR current = ex.full;
  for (int n = 0; n < finite_upto; ++n) {
    const SR expected = ex.stage_formula(Ordinal::finite(n + 1));
    const SR stepped = ex.step(current);
    if (stepped != expected)
      throw StageMismatch(Ordinal::finite(n),
                          "the closed form disagrees with one step application (expected " +
                              expected.render() + ", stepped to " + stepped.render() + ")");
    current = expected;
  }

  if (ex.decreasing) {
    for (int n = 0; n < finite_upto; ++n) {
      if (!ex.stage_formula(Ordinal::finite(n + 1)).subset_of(ex.stage_formula(Ordinal::finite(n))))
        report.failures.push_back("finite stages fail to shrink at stage " + std::to_string(n));
    }
    check_omega_stage(ex, finite_upto, report);

    // One-step validation across and past the limit.
    SR at_limit = ex.stage_formula(Ordinal::omega());
    for (int j = 0; j < past_limit; ++j) {
      const Ordinal at = Ordinal::omega(1, j);
      const SR expected = ex.stage_formula(at.successor());
      const SR stepped = ex.step(at_limit);
      if (stepped != expected)
        throw StageMismatch(at, "the closed form disagrees with one step application past the "
                                "limit (expected " +
                                    expected.render() + ", stepped to " + stepped.render() + ")");
      at_limit = expected;
    }
  }

  const ClosureScan scan =
      scan_stages(ex.stage_formula, finite_upto, ex.decreasing, past_limit);
  report.computed_closure = scan.closure;
  report.cycle = scan.cycle;
  if (scan.outcome) report.outcome = scan.outcome->render();

  if (ex.expected_closure.has_value() != scan.closure.has_value() ||
      (ex.expected_closure && !(*ex.expected_closure == *scan.closure))) {
    report.failures.push_back("closure ordinal differs from the expectation");
  }
  if (ex.expected_outcome && (!scan.outcome || !(*ex.expected_outcome == *scan.outcome))) {
    report.failures.push_back("outcome differs from the expectation");
  }
  if (ex.expected_cycle_period &&
      (!scan.cycle || scan.cycle->first != *ex.expected_cycle_period)) {
    report.failures.push_back("expected an oscillation of period " +
                              std::to_string(*ex.expected_cycle_period));
  }

  append_displayed_stages(ex.stage_formula, finite_upto, ex.decreasing, past_limit, scan.closure,
                          report.stages);

  for (const SymbolicRelaxation& rel : ex.relaxations)
    replay_relaxation(ex, rel, options, scan.outcome, report);

  spot_check_memberships(ex, report);

  report.validated = report.failures.empty();
  return report;
}

// ---------------------------------------------------------------------------
// Finite catalogue entry: a 3x3 two-player game with own-value payoffs for
// player 1 and constant payoffs for player 2, under correlated beliefs.
// The contracted local operator maps the full game to ({3}, {1,2,3}) yet
// fixes ({1},{1}), so it is not monotonic.
// ---------------------------------------------------------------------------

namespace {

ReplayReport run_finite_nonmonotone(const ReplayOptions&) {
  ReplayReport report;
  report.name = "finite_nonmonotone_LRbar";
  report.operator_name = "lrbar";

  std::vector<std::vector<std::string>> labels = {{"1", "2", "3"}, {"1", "2", "3"}};
  std::vector<std::vector<Rational>> payoffs;
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      payoffs.push_back({Rational(i), Rational(1)});
      (void)j;
    }
  }
  const FiniteGame game("ladder", std::move(labels), std::move(payoffs));
  const GameOperator op =
      make_operator(OperatorName::LRbar, game, BeliefStructure{BeliefKind::CorrelatedMixed});

  const IterationTrace trace = iterate(op, Ordinal::omega(2));
  for (const auto& [ordinal, value] : trace.stages)
    report.stages.push_back({ordinal, render_restriction(game, value)});
  report.computed_closure = closure_ordinal(trace);
  report.expected_closure = Ordinal::finite(1);

  Restriction expected_fix = Restriction::empty_of(game);
  expected_fix.add(0, 2);
  for (int s = 0; s < 3; ++s) expected_fix.add(1, s);
  if (!report.computed_closure || !(*report.computed_closure == Ordinal::finite(1)))
    report.failures.push_back("expected a fixpoint after one step");
  if (trace.stages.back().second != expected_fix)
    report.failures.push_back("expected the outcome {3} | {1,2,3}");
  else
    report.outcome = render_restriction(game, expected_fix);

  Restriction low = Restriction::empty_of(game);
  low.add(0, 0);
  low.add(1, 0);
  const Restriction low_image = op.step(low);
  if (low_image != low) report.failures.push_back("expected {1} | {1} to be a fixpoint");
  if (restriction_leq(low_image, trace.stages.back().second))
    report.failures.push_back("expected a monotonicity violation, found none");
  else
    report.notes.push_back("lrbar({1} | {1}) = " + render_restriction(game, low_image) +
                           " is not below lrbar(full) = " +
                           render_restriction(game, trace.stages.back().second) +
                           ": the operator is not monotonic");

  report.validated = report.failures.empty();
  return report;
}

}  // namespace

const std::vector<ExampleEntry>& list_examples() {
  static const std::vector<ExampleEntry> entries = [] {
    std::vector<ExampleEntry> out;
    for (const SymbolicExample& ex : symbolic_catalogue()) {
      out.push_back({ex.name, ex.description, ex.operator_name, ExampleKind::Symbolic,
                     closure_text(ex)});
    }
    out.push_back({"finite_nonmonotone_LRbar",
                   "a finite 3x3 game whose contracted local operator is not monotonic; runs "
                   "through the finite engine",
                   "lrbar", ExampleKind::FiniteEngine, "1"});
    return out;
  }();
  return entries;
}

ReplayReport run_example(std::string_view name, const ReplayOptions& options) {
  if (name == "finite_nonmonotone_LRbar") return run_finite_nonmonotone(options);
  const SymbolicExample* ex = find_symbolic_example(name);
  if (!ex) throw std::invalid_argument("unknown example '" + std::string(name) + "'");
  return replay(*ex, options);
}

}  // namespace eliminax
