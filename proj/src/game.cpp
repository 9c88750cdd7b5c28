#include "eliminax/game.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace eliminax {

std::string_view parse_error_kind_name(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::Malformed: return "Malformed";
    case ParseErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ParseErrorKind::UnknownLabel: return "UnknownLabel";
    case ParseErrorKind::MissingPayoffRow: return "MissingPayoffRow";
    case ParseErrorKind::DuplicatePayoffRow: return "DuplicatePayoffRow";
    case ParseErrorKind::MalformedRational: return "MalformedRational";
    case ParseErrorKind::PlayerCountMismatch: return "PlayerCountMismatch";
  }
  return "Malformed";
}

ParseError::ParseError(ParseErrorKind kind, int line, const std::string& message)
    : std::runtime_error(std::string(parse_error_kind_name(kind)) + " (line " +
                         std::to_string(line) + "): " + message),
      kind_(kind),
      line_(line) {}

FiniteGame::FiniteGame(std::string name, std::vector<std::vector<std::string>> labels,
                       std::vector<std::vector<Rational>> payoffs)
    : name_(std::move(name)), labels_(std::move(labels)), payoffs_(std::move(payoffs)) {
  if (labels_.size() < 2) throw std::invalid_argument("a game needs at least two players");
  std::size_t joint = 1;
  for (const auto& ls : labels_) {
    if (ls.empty()) throw std::invalid_argument("every player needs at least one strategy");
    joint *= ls.size();
  }
  if (payoffs_.size() != joint) throw std::invalid_argument("payoff tensor is not total");
  for (const auto& cell : payoffs_) {
    if (cell.size() != labels_.size())
      throw std::invalid_argument("payoff cell has wrong player count");
  }
}

int FiniteGame::strategy_index(int player, std::string_view label) const {
  const auto& ls = labels_[player];
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (ls[i] == label) return static_cast<int>(i);
  }
  throw UnknownStrategy("unknown strategy '" + std::string(label) + "' for player " +
                        std::to_string(player + 1));
}

std::size_t FiniteGame::flat_index(const JointStrategy& s) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    index = index * labels_[i].size() + static_cast<std::size_t>(s[i]);
  }
  return index;
}

std::vector<int> FiniteGame::shape() const {
  std::vector<int> out(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) out[i] = static_cast<int>(labels_[i].size());
  return out;
}

Restriction FiniteGame::full() const { return Restriction::full_of(*this); }
Restriction FiniteGame::empty() const { return Restriction::empty_of(*this); }

Restriction Restriction::full_of(const FiniteGame& game) {
  std::vector<Bits> sets;
  sets.reserve(game.player_count());
  for (int i = 0; i < game.player_count(); ++i) {
    Bits b(game.strategy_count(i));
    b.set();
    sets.push_back(std::move(b));
  }
  return Restriction(std::move(sets));
}

Restriction Restriction::empty_of(const FiniteGame& game) {
  std::vector<Bits> sets;
  sets.reserve(game.player_count());
  for (int i = 0; i < game.player_count(); ++i) sets.emplace_back(game.strategy_count(i));
  return Restriction(std::move(sets));
}

bool Restriction::opponents_empty(int player) const {
  for (int j = 0; j < player_count(); ++j) {
    if (j != player && sets_[j].none()) return true;
  }
  return false;
}

bool Restriction::all_empty() const {
  return std::all_of(sets_.begin(), sets_.end(), [](const Bits& b) { return b.none(); });
}

std::size_t Restriction::total_count() const {
  std::size_t n = 0;
  for (const Bits& b : sets_) n += b.count();
  return n;
}

std::vector<int> Restriction::allowed(int player) const {
  std::vector<int> out;
  const Bits& b = sets_[player];
  for (std::size_t i = b.find_first(); i != Bits::npos; i = b.find_next(i)) {
    out.push_back(static_cast<int>(i));
  }
  return out;
}

namespace {

void require_same_shape(const Restriction& a, const Restriction& b) {
  if (a.player_count() != b.player_count()) throw GameMismatch();
  for (int i = 0; i < a.player_count(); ++i) {
    if (a.set(i).size() != b.set(i).size()) throw GameMismatch();
  }
}

}  // namespace

Restriction meet(const Restriction& a, const Restriction& b) {
  require_same_shape(a, b);
  std::vector<Restriction::Bits> sets;
  sets.reserve(a.player_count());
  for (int i = 0; i < a.player_count(); ++i) sets.push_back(a.set(i) & b.set(i));
  return Restriction(std::move(sets));
}

Restriction join(const Restriction& a, const Restriction& b) {
  require_same_shape(a, b);
  std::vector<Restriction::Bits> sets;
  sets.reserve(a.player_count());
  for (int i = 0; i < a.player_count(); ++i) sets.push_back(a.set(i) | b.set(i));
  return Restriction(std::move(sets));
}

bool restriction_leq(const Restriction& a, const Restriction& b) {
  require_same_shape(a, b);
  for (int i = 0; i < a.player_count(); ++i) {
    if (!a.set(i).is_subset_of(b.set(i))) return false;
  }
  return true;
}

Restriction restriction_difference(const Restriction& a, const Restriction& b) {
  require_same_shape(a, b);
  std::vector<Restriction::Bits> sets;
  sets.reserve(a.player_count());
  for (int i = 0; i < a.player_count(); ++i) sets.push_back(a.set(i) - b.set(i));
  return Restriction(std::move(sets));
}

std::size_t restriction_hash(const Restriction& r) {
  std::size_t h = 0xcbf29ce484222325ull;
  for (int i = 0; i < r.player_count(); ++i) {
    std::vector<Restriction::Bits::block_type> blocks(r.set(i).num_blocks());
    boost::to_block_range(r.set(i), blocks.begin());
    for (auto block : blocks) {
      h ^= static_cast<std::size_t>(block) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    h ^= r.set(i).size() + (h << 3);
  }
  return h;
}

std::string render_restriction(const FiniteGame& game, const Restriction& r) {
  std::string out;
  for (int i = 0; i < game.player_count(); ++i) {
    if (i > 0) out += " | ";
    out += '{';
    bool first = true;
    for (int s = 0; s < game.strategy_count(i); ++s) {
      if (!r.contains(i, s)) continue;
      if (!first) out += ',';
      out += game.label(i, s);
      first = false;
    }
    out += '}';
  }
  return out;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

struct Line {
  int number;
  std::vector<std::string> tokens;
  std::string text;
};

std::vector<Line> significant_lines(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto tokens = tokenize(raw);
    if (tokens.empty()) continue;
    lines.push_back({number, std::move(tokens), raw});
  }
  return lines;
}

}  // namespace

FiniteGame parse_game(const std::string& text) {
  const auto lines = significant_lines(text);
  std::size_t at = 0;
  const auto next = [&]() -> const Line& {
    if (at >= lines.size())
      throw ParseError(ParseErrorKind::Malformed, lines.empty() ? 1 : lines.back().number,
                       "unexpected end of file");
    return lines[at++];
  };

  const Line& game_line = next();
  if (game_line.tokens[0] != "game" || game_line.tokens.size() != 2)
    throw ParseError(ParseErrorKind::Malformed, game_line.number, "expected 'game <name>'");
  const std::string name = game_line.tokens[1];

  const Line& players_line = next();
  if (players_line.tokens[0] != "players" || players_line.tokens.size() != 2)
    throw ParseError(ParseErrorKind::Malformed, players_line.number, "expected 'players <n>'");
  int player_count = 0;
  try {
    player_count = std::stoi(players_line.tokens[1]);
  } catch (const std::exception&) {
    throw ParseError(ParseErrorKind::Malformed, players_line.number, "player count is not a number");
  }
  if (player_count < 2)
    throw ParseError(ParseErrorKind::PlayerCountMismatch, players_line.number,
                     "at least two players required");

  std::vector<std::vector<std::string>> labels(player_count);
  for (int i = 0; i < player_count; ++i) {
    const Line& line = next();
    if (line.tokens[0] != "strategies" || line.tokens.size() < 3)
      throw ParseError(ParseErrorKind::Malformed, line.number,
                       "expected 'strategies <player> <label>...'");
    int index = 0;
    try {
      index = std::stoi(line.tokens[1]);
    } catch (const std::exception&) {
      throw ParseError(ParseErrorKind::Malformed, line.number, "player index is not a number");
    }
    if (index != i + 1)
      throw ParseError(ParseErrorKind::PlayerCountMismatch, line.number,
                       "expected strategies for player " + std::to_string(i + 1));
    std::unordered_set<std::string> seen;
    for (std::size_t t = 2; t < line.tokens.size(); ++t) {
      const std::string& label = line.tokens[t];
      if (!seen.insert(label).second)
        throw ParseError(ParseErrorKind::DuplicateLabel, line.number,
                         "strategy '" + label + "' declared twice for player " +
                             std::to_string(i + 1));
      labels[i].push_back(label);
    }
  }

  std::size_t joint = 1;
  for (const auto& ls : labels) joint *= ls.size();

  const auto index_of = [&](int player, const std::string& label, int line_number) {
    for (std::size_t s = 0; s < labels[player].size(); ++s) {
      if (labels[player][s] == label) return static_cast<int>(s);
    }
    throw ParseError(ParseErrorKind::UnknownLabel, line_number,
                     "strategy '" + label + "' not declared for player " +
                         std::to_string(player + 1));
  };

  std::vector<std::vector<Rational>> payoffs(joint);
  std::vector<int> filled_at(joint, 0);
  int last_line = lines.empty() ? 1 : lines.back().number;
  while (at < lines.size()) {
    const Line& line = next();
    if (line.tokens[0] != "payoff")
      throw ParseError(ParseErrorKind::Malformed, line.number, "expected a 'payoff' line");
    const auto colon = std::find(line.tokens.begin(), line.tokens.end(), ":");
    if (colon == line.tokens.end())
      throw ParseError(ParseErrorKind::Malformed, line.number, "payoff line is missing ':'");
    const auto label_count = static_cast<int>(colon - line.tokens.begin()) - 1;
    const auto value_count = static_cast<int>(line.tokens.end() - colon) - 1;
    if (label_count != player_count || value_count != player_count)
      throw ParseError(ParseErrorKind::PlayerCountMismatch, line.number,
                       "expected " + std::to_string(player_count) + " labels and " +
                           std::to_string(player_count) + " payoffs");

    JointStrategy s(player_count);
    for (int i = 0; i < player_count; ++i) s[i] = index_of(i, line.tokens[1 + i], line.number);
    std::size_t flat = 0;
    for (int i = 0; i < player_count; ++i)
      flat = flat * labels[i].size() + static_cast<std::size_t>(s[i]);
    if (filled_at[flat] != 0)
      throw ParseError(ParseErrorKind::DuplicatePayoffRow, line.number,
                       "payoff row repeats the row on line " + std::to_string(filled_at[flat]));
    filled_at[flat] = line.number;

    std::vector<Rational> cell(player_count);
    for (int i = 0; i < player_count; ++i) {
      const std::string& token = *(colon + 1 + i);
      auto q = parse_rational(token);
      if (!q)
        throw ParseError(ParseErrorKind::MalformedRational, line.number,
                         "'" + token + "' is not an integer or a/b");
      cell[i] = std::move(*q);
    }
    payoffs[flat] = std::move(cell);
  }

  for (std::size_t flat = 0; flat < joint; ++flat) {
    if (filled_at[flat] != 0) continue;
    // reconstruct the missing joint strategy for the message
    std::vector<std::size_t> radix(player_count);
    std::size_t rest = flat;
    for (int i = player_count - 1; i >= 0; --i) {
      radix[i] = rest % labels[i].size();
      rest /= labels[i].size();
    }
    std::string joint_text;
    for (int i = 0; i < player_count; ++i) {
      if (i > 0) joint_text += ' ';
      joint_text += labels[i][radix[i]];
    }
    throw ParseError(ParseErrorKind::MissingPayoffRow, last_line,
                     "no payoff row for joint strategy '" + joint_text + "'");
  }

  return FiniteGame(name, std::move(labels), std::move(payoffs));
}

std::string render_game(const FiniteGame& game) {
  std::ostringstream out;
  out << "game " << game.name() << '\n';
  out << "players " << game.player_count() << '\n';
  for (int i = 0; i < game.player_count(); ++i) {
    out << "strategies " << (i + 1);
    for (const auto& label : game.labels(i)) out << ' ' << label;
    out << '\n';
  }
  const int n = game.player_count();
  JointStrategy s(n, 0);
  for (;;) {
    out << "payoff";
    for (int i = 0; i < n; ++i) out << ' ' << game.label(i, s[i]);
    out << " :";
    for (int i = 0; i < n; ++i) out << ' ' << to_string(game.payoff(i, s));
    out << '\n';
    int i = n - 1;
    while (i >= 0 && s[i] + 1 == game.strategy_count(i)) {
      s[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++s[i];
  }
  return out.str();
}

}  // namespace eliminax
