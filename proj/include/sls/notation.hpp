#pragma once

// Text forms shared by the CLI, golden files and logs.
//
//   hand    "guards,prisoners"                  e.g. "2,1"
//   state   "board=<board> blue=<hand> red=<hand> active=<b|r> phase=<phase> [winner=<b|r>]"
//           phase: turn_start | in_round | capture:<pile>:<b|r> | rescue
//   policy  s | random | random:<seed> | adversarial | scripted:<file>

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sls/core_model.hpp"
#include "sls/rules.hpp"
#include "sls/strategy.hpp"

namespace sls {

namespace detail {

inline int parse_count(std::string_view text, std::size_t offset) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw parse_error("expected a non-negative integer, got '" + std::string(text) + "'", offset);
  }
  if (value < 0) throw parse_error("count must be non-negative", offset);
  return value;
}

inline Color parse_color(std::string_view text, std::size_t offset) {
  if (text.size() != 1) throw parse_error("expected color 'b' or 'r', got '" + std::string(text) + "'", offset);
  auto c = color_from_letter(text[0]);
  if (!c) throw parse_error("expected color 'b' or 'r', got '" + std::string(text) + "'", offset);
  return *c;
}

}  // namespace detail

inline Hand parse_hand(std::string_view text, std::size_t offset = 0) {
  auto comma = text.find(',');
  if (comma == std::string_view::npos) throw parse_error("hand must be 'guards,prisoners'", offset);
  Hand h;
  h.guards = detail::parse_count(text.substr(0, comma), offset);
  h.prisoners = detail::parse_count(text.substr(comma + 1), offset + comma + 1);
  return h;
}

inline std::string format_hand(const Hand& h) {
  return std::to_string(h.guards) + "," + std::to_string(h.prisoners);
}

inline std::string format_phase(const Phase& p) {
  switch (p.kind) {
    case PhaseKind::TurnStart: return "turn_start";
    case PhaseKind::InRound: return "in_round";
    case PhaseKind::AwaitCaptureDiscard:
      return "capture:" + std::to_string(p.pile) + ":" + color_letter(p.capturer);
    case PhaseKind::AwaitRescueDonation: return "rescue";
  }
  return "?";
}

inline std::string format_state(const GameState& s) {
  std::string out = "board=" + s.board.to_string() + " blue=" + format_hand(s.blue) + " red=" + format_hand(s.red) +
                    " active=" + color_letter(s.active) + " phase=" + format_phase(s.phase);
  if (s.winner) out += std::string(" winner=") + color_letter(*s.winner);
  return out;
}

// Checks that a parsed or deserialized state is structurally consistent.
inline void validate_state(const GameState& s) {
  for (const Hand& h : {s.blue, s.red}) {
    if (h.guards < 0 || h.prisoners < 0) throw std::invalid_argument("hand counts must be non-negative");
  }
  for (std::size_t i = 0; i < s.board.size(); ++i) {
    bool pending = s.phase.kind == PhaseKind::AwaitCaptureDiscard && static_cast<int>(i) == s.phase.pile;
    if (pending) {
      const Pile& p = s.board[i];
      if (!p.capturable() || p.top() != s.phase.capturer) {
        throw std::invalid_argument("capture phase must reference a pile whose top two chips are the capturer's color");
      }
      Pile below = p;
      below.remove_one(p.top());
      if (!below.alternates()) throw std::invalid_argument("captured pile must alternate below its top pair");
    } else if (!s.board[i].alternates()) {
      throw std::invalid_argument("pile " + std::to_string(i) + " (" + s.board[i].to_string() + ") does not alternate");
    }
  }
  if (s.phase.kind == PhaseKind::AwaitCaptureDiscard &&
      (s.phase.pile < 0 || static_cast<std::size_t>(s.phase.pile) >= s.board.size())) {
    throw std::invalid_argument("capture phase references a pile outside the board");
  }
  if (s.phase.kind == PhaseKind::AwaitRescueDonation && !s.hand(s.active).empty()) {
    throw std::invalid_argument("rescue phase requires the active player's hand to be empty");
  }
}

inline GameState parse_state(std::string_view text) {
  GameState s;
  bool have_board = false, have_blue = false, have_red = false, have_active = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size()) break;
    std::size_t end = text.find(' ', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view field = text.substr(pos, end - pos);
    auto eq = field.find('=');
    if (eq == std::string_view::npos) throw parse_error("expected key=value, got '" + std::string(field) + "'", pos);
    std::string_view key = field.substr(0, eq);
    std::string_view value = field.substr(eq + 1);
    std::size_t voff = pos + eq + 1;
    if (key == "board") {
      try {
        s.board = Board::parse(value);
      } catch (const parse_error& e) {
        throw parse_error("board: " + e.message(), voff + e.position());
      }
      have_board = true;
    } else if (key == "blue") {
      s.blue = parse_hand(value, voff);
      have_blue = true;
    } else if (key == "red") {
      s.red = parse_hand(value, voff);
      have_red = true;
    } else if (key == "active") {
      s.active = detail::parse_color(value, voff);
      have_active = true;
    } else if (key == "winner") {
      s.winner = detail::parse_color(value, voff);
    } else if (key == "phase") {
      if (value == "turn_start") s.phase = Phase::turn_start();
      else if (value == "in_round") s.phase = Phase::in_round();
      else if (value == "rescue") s.phase = Phase::await_rescue();
      else if (value.substr(0, 8) == "capture:") {
        auto rest = value.substr(8);
        auto colon = rest.find(':');
        if (colon == std::string_view::npos) throw parse_error("phase capture:<pile>:<color>", voff);
        int pile = detail::parse_count(rest.substr(0, colon), voff + 8);
        Color c = detail::parse_color(rest.substr(colon + 1), voff + 9 + colon);
        s.phase = Phase::await_capture(pile, c);
      } else {
        throw parse_error("unknown phase '" + std::string(value) + "'", voff);
      }
    } else {
      throw parse_error("unknown field '" + std::string(key) + "'", pos);
    }
    pos = end;
  }
  if (!have_board || !have_blue || !have_red || !have_active) {
    throw parse_error("state needs board=, blue=, red= and active=", text.size());
  }
  validate_state(s);
  return s;
}

inline Action parse_action(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string verb;
  in >> verb;
  auto rest = [&]() {
    std::string tok;
    in >> tok;
    return tok;
  };
  if (verb == "place") {
    std::string pile = rest();
    std::string color = rest();
    return Action::place(detail::parse_count(pile, 6), detail::parse_color(color, 7 + pile.size()));
  }
  if (verb == "capture_discard") return Action::capture_discard(detail::parse_color(rest(), 16));
  if (verb == "discard_prisoner") return Action::discard_prisoner();
  if (verb == "donate_prisoner") return Action::donate_prisoner();
  if (verb == "rescue") {
    std::string yn = rest();
    if (yn == "yes") return Action::rescue(true);
    if (yn == "no") return Action::rescue(false);
    throw parse_error("rescue takes 'yes' or 'no'", 7);
  }
  throw parse_error("unknown action '" + verb + "'", 0);
}

// One action per line; blank lines and '#' comments are ignored.
inline std::vector<Action> parse_script(std::istream& in) {
  std::vector<Action> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_action(line));
    } catch (const parse_error& e) {
      throw std::invalid_argument("script line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline PolicySpec parse_policy(std::string_view name) {
  if (name == "s" || name == "S") return policy::StrategyS{};
  if (name == "adversarial") return policy::Adversarial{};
  if (name == "random") return policy::UniformRandom{};
  if (name.substr(0, 7) == "random:") {
    std::uint64_t seed = 0;
    auto digits = name.substr(7);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
      throw parse_error("random:<seed> needs an unsigned integer seed", 7);
    }
    return policy::UniformRandom{seed};
  }
  if (name.substr(0, 9) == "scripted:") {
    std::string path(name.substr(9));
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open script file '" + path + "'");
    return policy::Scripted{parse_script(in)};
  }
  throw parse_error("unknown policy '" + std::string(name) + "' (s, random[:seed], adversarial, scripted:<file>)", 0);
}

}  // namespace sls
