#pragma once

// Two-player, two-color So Long Sucker positions: colors, piles, hands,
// board and full game state. No rule logic lives here.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace sls {

enum class Color : std::uint8_t { Blue = 0, Red = 1 };

constexpr Color opponent(Color c) noexcept {
  return c == Color::Blue ? Color::Red : Color::Blue;
}

constexpr char color_letter(Color c) noexcept { return c == Color::Blue ? 'b' : 'r'; }

constexpr std::string_view color_name(Color c) noexcept {
  return c == Color::Blue ? "Blue" : "Red";
}

inline std::optional<Color> color_from_letter(char ch) noexcept {
  switch (ch) {
    case 'b': case 'B': return Color::Blue;
    case 'r': case 'R': return Color::Red;
    default: return std::nullopt;
  }
}

// Raised for malformed notation or structurally invalid positions.
class parse_error : public std::invalid_argument {
 public:
  parse_error(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " (at offset " + std::to_string(position) + ")"),
        message_(what),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t position_;
};

// A stack of chips, bottom to top. Chips are stored one bit each, which keeps
// copies cheap for the solver while still representing the transient
// same-colored pair that exists between a placement and its capture.
class Pile {
 public:
  static constexpr std::size_t kMaxChips = 64;

  Pile() = default;

  // Alternating pile of the given length whose top chip is `top`.
  static Pile alternating(Color top, std::size_t length) {
    Pile p;
    if (length == 0) return p;
    Color bottom = (length % 2 == 1) ? top : opponent(top);
    for (std::size_t i = 0; i < length; ++i) {
      p.push(i % 2 == 0 ? bottom : opponent(bottom));
    }
    return p;
  }

  std::size_t size() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }

  Color at(std::size_t i) const {
    if (i >= length_) throw std::out_of_range("pile index out of range");
    return static_cast<Color>((bits_ >> i) & 1u);
  }

  Color top() const {
    if (empty()) throw std::logic_error("top() of an empty pile");
    return at(length_ - 1);
  }

  void push(Color c) {
    if (length_ >= kMaxChips) throw std::length_error("pile exceeds 64 chips");
    if (c == Color::Red) bits_ |= (std::uint64_t{1} << length_);
    ++length_;
  }

  // Removes one chip of color c (the topmost one). Chips of a color are
  // fungible, so which copy leaves does not matter to the rules.
  void remove_one(Color c) {
    for (std::size_t i = length_; i-- > 0;) {
      if (at(i) == c) {
        std::uint64_t low = bits_ & ((std::uint64_t{1} << i) - 1);
        std::uint64_t high = (i + 1 < 64) ? (bits_ >> (i + 1)) << i : 0;
        bits_ = low | high;
        --length_;
        return;
      }
    }
    throw std::logic_error("remove_one: color not present in pile");
  }

  void clear() noexcept {
    bits_ = 0;
    length_ = 0;
  }

  std::size_t count(Color c) const noexcept {
    std::uint64_t mask = length_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << length_) - 1);
    auto reds = static_cast<std::size_t>(__builtin_popcountll(bits_ & mask));
    return c == Color::Red ? reds : length_ - reds;
  }

  // True when no two consecutive chips share a color.
  bool alternates() const noexcept {
    for (std::size_t i = 1; i < length_; ++i) {
      if (((bits_ >> i) & 1u) == ((bits_ >> (i - 1)) & 1u)) return false;
    }
    return true;
  }

  // Top two chips share a color (a capture is pending).
  bool capturable() const noexcept {
    return length_ >= 2 && ((bits_ >> (length_ - 1)) & 1u) == ((bits_ >> (length_ - 2)) & 1u);
  }

  std::string to_string() const {
    if (empty()) return "_";
    std::string s;
    for (std::size_t i = 0; i < length_; ++i) s.push_back(color_letter(at(i)));
    return s;
  }

  static Pile parse(std::string_view text, std::size_t offset = 0) {
    Pile p;
    if (text == "_") return p;
    if (text.empty()) throw parse_error("empty pile token (use '_' for an empty pile)", offset);
    for (std::size_t i = 0; i < text.size(); ++i) {
      auto c = color_from_letter(text[i]);
      if (!c) throw parse_error(std::string("unexpected character '") + text[i] + "' in pile", offset + i);
      if (p.size() >= kMaxChips) throw parse_error("pile exceeds 64 chips", offset + i);
      p.push(*c);
    }
    return p;
  }

  friend bool operator==(const Pile&, const Pile&) = default;

 private:
  std::uint64_t bits_ = 0;  // bit i set => chip i is red
  std::uint8_t length_ = 0;
};

inline std::size_t pile_count(const Pile& pile, Color c) noexcept { return pile.count(c); }

// A player's hand. Guards are chips of the owner's color, prisoners are
// chips of the opponent's color.
struct Hand {
  int guards = 0;
  int prisoners = 0;

  int total() const noexcept { return guards + prisoners; }
  bool empty() const noexcept { return total() == 0; }
  friend bool operator==(const Hand&, const Hand&) = default;
};

class Board {
 public:
  explicit Board(std::vector<Pile> piles) : piles_(std::move(piles)) {
    if (piles_.empty()) throw std::invalid_argument("a board needs at least one pile (k >= 1)");
  }

  static Board empty_piles(std::size_t k) { return Board(std::vector<Pile>(k)); }

  std::size_t size() const noexcept { return piles_.size(); }
  const Pile& operator[](std::size_t i) const { return piles_.at(i); }
  Pile& operator[](std::size_t i) { return piles_.at(i); }
  const std::vector<Pile>& piles() const noexcept { return piles_; }

  std::size_t chip_count() const noexcept {
    std::size_t n = 0;
    for (const auto& p : piles_) n += p.size();
    return n;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < piles_.size(); ++i) {
      if (i) s.push_back(',');
      s += piles_[i].to_string();
    }
    return s;
  }

  // Board notation: piles separated by ',', '_' for an empty pile,
  // otherwise bottom-to-top color letters.
  static Board parse(std::string_view text) {
    std::vector<Pile> piles;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = text.find(',', start);
      std::string_view token = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      std::size_t lead = 0;
      while (lead < token.size() && token[lead] == ' ') ++lead;
      std::size_t trail = token.size();
      while (trail > lead && token[trail - 1] == ' ') --trail;
      piles.push_back(Pile::parse(token.substr(lead, trail - lead), start + lead));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return Board(std::move(piles));
  }

  friend bool operator==(const Board&, const Board&) = default;

 private:
  std::vector<Pile> piles_;
};

enum class PhaseKind : std::uint8_t { TurnStart, InRound, AwaitCaptureDiscard, AwaitRescueDonation };

// Decision point the game is waiting on. For AwaitCaptureDiscard, `pile` is
// the captured pile and `capturer` the player who must discard.
struct Phase {
  PhaseKind kind = PhaseKind::TurnStart;
  int pile = -1;
  Color capturer = Color::Blue;

  static Phase turn_start() { return {PhaseKind::TurnStart, -1, Color::Blue}; }
  static Phase in_round() { return {PhaseKind::InRound, -1, Color::Blue}; }
  static Phase await_capture(int pile, Color capturer) {
    return {PhaseKind::AwaitCaptureDiscard, pile, capturer};
  }
  static Phase await_rescue() { return {PhaseKind::AwaitRescueDonation, -1, Color::Blue}; }

  bool is_play() const noexcept {
    return kind == PhaseKind::TurnStart || kind == PhaseKind::InRound;
  }

  friend bool operator==(const Phase& a, const Phase& b) noexcept {
    if (a.kind != b.kind) return false;
    if (a.kind != PhaseKind::AwaitCaptureDiscard) return true;
    return a.pile == b.pile && a.capturer == b.capturer;
  }
};

inline std::string phase_name(PhaseKind k) {
  switch (k) {
    case PhaseKind::TurnStart: return "turn_start";
    case PhaseKind::InRound: return "in_round";
    case PhaseKind::AwaitCaptureDiscard: return "await_capture_discard";
    case PhaseKind::AwaitRescueDonation: return "await_rescue_donation";
  }
  return "?";
}

struct GameState {
  Board board = Board::empty_piles(1);
  Hand blue;
  Hand red;
  Color active = Color::Blue;
  Phase phase = Phase::turn_start();
  std::optional<Color> winner;

  const Hand& hand(Color c) const noexcept { return c == Color::Blue ? blue : red; }
  Hand& hand(Color c) noexcept { return c == Color::Blue ? blue : red; }

  // Chips of color c held by the player of color `holder`.
  int held(Color holder, Color c) const noexcept {
    const Hand& h = hand(holder);
    return c == holder ? h.guards : h.prisoners;
  }

  std::size_t total_chips() const noexcept {
    return board.chip_count() + static_cast<std::size_t>(blue.total() + red.total());
  }

  friend bool operator==(const GameState&, const GameState&) = default;
};

// Lexicographic termination measure: (chips anywhere, chips in hands,
// prisoners in hands). Every transition strictly decreases it.
using Potential = std::tuple<int, int, int>;

inline Potential total_potential(const GameState& s) {
  int hands = s.blue.total() + s.red.total();
  return {static_cast<int>(s.board.chip_count()) + hands, hands, s.blue.prisoners + s.red.prisoners};
}

// Swaps the roles of the two colors: every chip, both hands, the active
// player and any pending capturer. Game values swap accordingly.
inline GameState color_swapped(const GameState& s) {
  std::vector<Pile> piles;
  piles.reserve(s.board.size());
  for (const auto& p : s.board.piles()) {
    Pile q;
    for (std::size_t i = 0; i < p.size(); ++i) q.push(opponent(p.at(i)));
    piles.push_back(q);
  }
  GameState out;
  out.board = Board(std::move(piles));
  out.blue = s.red;
  out.red = s.blue;
  out.active = opponent(s.active);
  out.phase = s.phase;
  if (s.phase.kind == PhaseKind::AwaitCaptureDiscard) out.phase.capturer = opponent(s.phase.capturer);
  if (s.winner) out.winner = opponent(*s.winner);
  return out;
}

// Round-boundary state builder used by the CLI, tests and the enumerator.
inline GameState make_state(std::string_view board, Hand blue, Hand red, Color active) {
  if (blue.guards < 0 || blue.prisoners < 0 || red.guards < 0 || red.prisoners < 0) {
    throw std::invalid_argument("hand counts must be non-negative");
  }
  GameState s;
  s.board = Board::parse(board);
  s.blue = blue;
  s.red = red;
  s.active = active;
  s.phase = Phase::turn_start();
  return s;
}

}  // namespace sls
