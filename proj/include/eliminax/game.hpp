#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "eliminax/rational.hpp"

namespace eliminax {

// One strategy index per player, indexing into the game's label lists.
using JointStrategy = std::vector<int>;

enum class ParseErrorKind {
  Malformed,
  DuplicateLabel,
  UnknownLabel,
  MissingPayoffRow,
  DuplicatePayoffRow,
  MalformedRational,
  PlayerCountMismatch,
};

std::string_view parse_error_kind_name(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, int line, const std::string& message);

  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  ParseErrorKind kind_;
  int line_;
};

struct GameMismatch : std::invalid_argument {
  GameMismatch() : std::invalid_argument("restrictions belong to different games") {}
};

struct UnknownStrategy : std::invalid_argument {
  explicit UnknownStrategy(const std::string& what) : std::invalid_argument(what) {}
};

class Restriction;

// A finite strategic game: per-player ordered strategy labels and a total
// payoff tensor. Strategy identity is by label; indices are an internal
// encoding. Immutable after construction.
class FiniteGame {
 public:
  // payoffs[flat_index][player]; flat_index is row-major over the joint
  // strategy space, last player fastest.
  FiniteGame(std::string name, std::vector<std::vector<std::string>> labels,
             std::vector<std::vector<Rational>> payoffs);

  const std::string& name() const { return name_; }
  int player_count() const { return static_cast<int>(labels_.size()); }
  int strategy_count(int player) const { return static_cast<int>(labels_[player].size()); }
  const std::vector<std::string>& labels(int player) const { return labels_[player]; }
  const std::string& label(int player, int strategy) const { return labels_[player][strategy]; }

  // Throws UnknownStrategy if the label is not declared for the player.
  int strategy_index(int player, std::string_view label) const;

  std::size_t joint_count() const { return payoffs_.size(); }
  std::size_t flat_index(const JointStrategy& s) const;
  const Rational& payoff(int player, const JointStrategy& s) const {
    return payoffs_[flat_index(s)][player];
  }

  std::vector<int> shape() const;
  Restriction full() const;
  Restriction empty() const;

 private:
  std::string name_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<Rational>> payoffs_;
};

// Per-player subsets of a game's strategy indices. Restrictions of a fixed
// game, ordered componentwise, form a complete lattice whose top is the
// full game and whose bottom is the empty restriction; empty components
// are first-class values everywhere.
class Restriction {
 public:
  using Bits = boost::dynamic_bitset<>;

  Restriction() = default;  // a zero-player placeholder
  explicit Restriction(std::vector<Bits> sets) : sets_(std::move(sets)) {}

  static Restriction full_of(const FiniteGame& game);
  static Restriction empty_of(const FiniteGame& game);

  int player_count() const { return static_cast<int>(sets_.size()); }
  const Bits& set(int player) const { return sets_[player]; }
  bool contains(int player, int strategy) const { return sets_[player].test(strategy); }
  void add(int player, int strategy) { sets_[player].set(strategy); }
  void remove(int player, int strategy) { sets_[player].reset(strategy); }

  bool player_empty(int player) const { return sets_[player].none(); }
  // S_{-i} is empty iff some opponent's component is empty.
  bool opponents_empty(int player) const;
  bool all_empty() const;
  std::size_t total_count() const;

  // Strategy indices allowed for one player, ascending.
  std::vector<int> allowed(int player) const;

  friend bool operator==(const Restriction& a, const Restriction& b) {
    return a.sets_ == b.sets_;
  }
  friend bool operator!=(const Restriction& a, const Restriction& b) { return !(a == b); }

 private:
  std::vector<Bits> sets_;
};

// Componentwise lattice operations; all throw GameMismatch when the two
// restrictions have different shapes.
Restriction meet(const Restriction& a, const Restriction& b);
Restriction join(const Restriction& a, const Restriction& b);
bool restriction_leq(const Restriction& a, const Restriction& b);
// Strategies of a that are not in b (componentwise).
Restriction restriction_difference(const Restriction& a, const Restriction& b);

std::size_t restriction_hash(const Restriction& r);

struct RestrictionHash {
  std::size_t operator()(const Restriction& r) const { return restriction_hash(r); }
};

// "{C,D} | {C}": labels in declaration order, empty set renders "{}".
std::string render_restriction(const FiniteGame& game, const Restriction& r);

// Parses the line-oriented game format; see render_game for the canonical
// form. '#' starts a comment anywhere in a line.
FiniteGame parse_game(const std::string& text);

// Canonical rendering; parse_game(render_game(g)) reproduces g exactly.
std::string render_game(const FiniteGame& game);

}  // namespace eliminax
