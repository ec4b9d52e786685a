#pragma once

// Legal-action generation and state transitions for the two-player,
// two-color game: placement, capture, next-player designation, prisoner
// discards and donations, rescue donations and elimination.
//
// Decisions the rules allow "at any moment" are serialized: the player whose
// round it is may discard or donate prisoners at any of their decision
// points, and the other player acts only when asked to rescue a chipless
// active player.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sls/core_model.hpp"

namespace sls {

enum class ActionKind : std::uint8_t { Place, CaptureDiscard, DiscardPrisoner, DonatePrisoner, Rescue };

struct Action {
  ActionKind kind = ActionKind::Place;
  int pile = -1;               // Place
  Color color = Color::Blue;   // Place, CaptureDiscard
  bool donate = false;         // Rescue

  static Action place(int pile, Color c) { return {ActionKind::Place, pile, c, false}; }
  static Action capture_discard(Color c) { return {ActionKind::CaptureDiscard, -1, c, false}; }
  static Action discard_prisoner() { return {ActionKind::DiscardPrisoner, -1, Color::Blue, false}; }
  static Action donate_prisoner() { return {ActionKind::DonatePrisoner, -1, Color::Blue, false}; }
  static Action rescue(bool donate) { return {ActionKind::Rescue, -1, Color::Blue, donate}; }

  friend bool operator==(const Action& a, const Action& b) noexcept {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case ActionKind::Place: return a.pile == b.pile && a.color == b.color;
      case ActionKind::CaptureDiscard: return a.color == b.color;
      case ActionKind::Rescue: return a.donate == b.donate;
      default: return true;
    }
  }
};

// Text form: "place 0 b", "capture_discard r", "discard_prisoner",
// "donate_prisoner", "rescue yes" / "rescue no".
inline std::string to_string(const Action& a) {
  switch (a.kind) {
    case ActionKind::Place:
      return "place " + std::to_string(a.pile) + " " + color_letter(a.color);
    case ActionKind::CaptureDiscard:
      return std::string("capture_discard ") + color_letter(a.color);
    case ActionKind::DiscardPrisoner: return "discard_prisoner";
    case ActionKind::DonatePrisoner: return "donate_prisoner";
    case ActionKind::Rescue: return a.donate ? "rescue yes" : "rescue no";
  }
  return "?";
}

class illegal_action : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when actions are requested from a finished game.
class terminal_state : public std::logic_error {
 public:
  terminal_state() : std::logic_error("game is over: no legal actions") {}
};

struct ActionSet {
  Color actor = Color::Blue;
  std::vector<Action> actions;
};

struct TransitionRecord {
  Color actor = Color::Blue;
  Action action;
  GameState state;
  bool capture = false;      // placement triggered a capture, or a capture was resolved
  bool round_ended = false;  // control passed to the other player or someone was eliminated
  int discarded = 0;         // chips sent to the dead box by this transition
};

namespace detail {

// Player who decides at this node.
inline Color decision_owner(const GameState& s) {
  switch (s.phase.kind) {
    case PhaseKind::AwaitCaptureDiscard: return s.phase.capturer;
    case PhaseKind::AwaitRescueDonation: return opponent(s.active);
    default: return s.hand(s.active).empty() ? opponent(s.active) : s.active;
  }
}

// Applies the rescue/elimination check that happens whenever the active
// player begins a turn: an empty hand asks the opponent for a donation, and
// an opponent without prisoners cannot donate, so elimination is immediate.
inline void settle_turn_start(GameState& s) {
  if (!s.phase.is_play() || !s.hand(s.active).empty()) return;
  if (s.hand(opponent(s.active)).prisoners > 0) {
    s.phase = Phase::await_rescue();
  } else {
    s.winner = opponent(s.active);
  }
}

}  // namespace detail

inline std::optional<Color> is_terminal(const GameState& s) noexcept { return s.winner; }

inline ActionSet legal_actions(const GameState& s) {
  if (s.winner) throw terminal_state();
  ActionSet out;
  out.actor = detail::decision_owner(s);
  switch (s.phase.kind) {
    case PhaseKind::AwaitCaptureDiscard: {
      const Pile& p = s.board[static_cast<std::size_t>(s.phase.pile)];
      for (Color c : {Color::Blue, Color::Red}) {
        if (p.count(c) > 0) out.actions.push_back(Action::capture_discard(c));
      }
      break;
    }
    case PhaseKind::AwaitRescueDonation:
      out.actions.push_back(Action::rescue(true));
      out.actions.push_back(Action::rescue(false));
      break;
    case PhaseKind::TurnStart:
    case PhaseKind::InRound: {
      const Hand& h = s.hand(s.active);
      if (h.empty()) {
        if (s.hand(out.actor).prisoners > 0) out.actions.push_back(Action::rescue(true));
        out.actions.push_back(Action::rescue(false));
        break;
      }
      for (std::size_t i = 0; i < s.board.size(); ++i) {
        for (Color c : {Color::Blue, Color::Red}) {
          if (s.held(s.active, c) > 0) out.actions.push_back(Action::place(static_cast<int>(i), c));
        }
      }
      if (h.prisoners > 0) {
        out.actions.push_back(Action::discard_prisoner());
        out.actions.push_back(Action::donate_prisoner());
      }
      break;
    }
  }
  return out;
}

// Next Player Rule after a placement that did not capture. With two
// players both colors are either present in the played pile (the player
// whose highest chip sits lowest moves next) or only the placed color is
// present (the only player whose color is absent moves next).
inline Color next_active_player(const Pile& played) {
  if (played.empty()) throw std::logic_error("next_active_player: played pile is empty");
  if (played.capturable()) throw std::logic_error("next_active_player: placement resulted in a capture");
  std::optional<std::size_t> highest[2];
  for (std::size_t i = 0; i < played.size(); ++i) highest[static_cast<int>(played.at(i))] = i;
  bool blue_present = highest[0].has_value();
  bool red_present = highest[1].has_value();
  if (blue_present && red_present) return *highest[0] < *highest[1] ? Color::Blue : Color::Red;
  return blue_present ? Color::Red : Color::Blue;
}

inline Color next_active_player(const GameState& s, int pile) {
  if (s.winner) throw std::logic_error("next_active_player: game is over");
  if (s.phase.kind == PhaseKind::AwaitCaptureDiscard) {
    throw std::logic_error("next_active_player: a capture is pending");
  }
  return next_active_player(s.board[static_cast<std::size_t>(pile)]);
}

// Turn-start bookkeeping: a round boundary becomes InRound, or the rescue
// node, or an immediate elimination when no donation is possible.
inline GameState start_round(const GameState& s) {
  GameState out = s;
  if (out.winner) return out;
  if (out.phase.kind == PhaseKind::TurnStart) out.phase = Phase::in_round();
  detail::settle_turn_start(out);
  return out;
}

namespace detail {

// Transition without the legality check. `actor` must own the decision.
inline TransitionRecord apply_unchecked(const GameState& s, Color actor, const Action& a) {
  TransitionRecord rec;
  rec.actor = actor;
  rec.action = a;
  GameState& n = rec.state;
  n = s;

  switch (a.kind) {
    case ActionKind::Place: {
      Hand& h = n.hand(actor);
      if (a.color == actor) --h.guards; else --h.prisoners;
      Pile& p = n.board[static_cast<std::size_t>(a.pile)];
      p.push(a.color);
      if (p.capturable()) {
        n.phase = Phase::await_capture(a.pile, a.color);
        rec.capture = true;
        break;
      }
      Color next = next_active_player(p);
      if (next == actor) {
        n.phase = Phase::in_round();
      } else {
        n.active = next;
        n.phase = Phase::turn_start();
        rec.round_ended = true;
      }
      settle_turn_start(n);
      break;
    }
    case ActionKind::CaptureDiscard: {
      Pile& p = n.board[static_cast<std::size_t>(s.phase.pile)];
      p.remove_one(a.color);
      rec.discarded = 1;
      Hand& h = n.hand(actor);
      h.guards += static_cast<int>(p.count(actor));
      h.prisoners += static_cast<int>(p.count(opponent(actor)));
      p.clear();
      rec.capture = true;
      if (actor == s.active) {
        n.phase = Phase::in_round();
      } else {
        n.active = actor;
        n.phase = Phase::turn_start();
        rec.round_ended = true;
      }
      settle_turn_start(n);
      break;
    }
    case ActionKind::DiscardPrisoner: {
      --n.hand(actor).prisoners;
      rec.discarded = 1;
      if (n.phase.kind == PhaseKind::TurnStart) n.phase = Phase::in_round();
      settle_turn_start(n);
      break;
    }
    case ActionKind::DonatePrisoner: {
      --n.hand(actor).prisoners;
      ++n.hand(opponent(actor)).guards;
      if (n.phase.kind == PhaseKind::TurnStart) n.phase = Phase::in_round();
      settle_turn_start(n);
      break;
    }
    case ActionKind::Rescue: {
      if (a.donate) {
        --n.hand(actor).prisoners;
        ++n.hand(s.active).guards;
        n.phase = Phase::turn_start();
      } else {
        n.winner = actor;
        rec.round_ended = true;
      }
      break;
    }
  }
  if (n.winner && !s.winner) rec.round_ended = true;
  return rec;
}

}  // namespace detail

inline std::string describe_violation(const GameState& s, Color actor, const Action& a) {
  if (s.winner) return "game is over";
  ActionSet legal = legal_actions(s);
  if (legal.actor != actor) {
    return std::string(color_name(legal.actor)) + " decides here, not " + std::string(color_name(actor));
  }
  switch (a.kind) {
    case ActionKind::Place:
      if (a.pile < 0 || static_cast<std::size_t>(a.pile) >= s.board.size()) return "pile index out of range";
      if (s.held(actor, a.color) <= 0) {
        return std::string(color_name(actor)) + " holds no " + color_letter(a.color) + " chip";
      }
      break;
    case ActionKind::CaptureDiscard:
      if (s.phase.kind != PhaseKind::AwaitCaptureDiscard) return "no capture is pending";
      return std::string("captured pile holds no ") + color_letter(a.color) + " chip";
    case ActionKind::DiscardPrisoner:
    case ActionKind::DonatePrisoner:
      if (s.hand(actor).prisoners <= 0) return std::string(color_name(actor)) + " holds no prisoner";
      break;
    case ActionKind::Rescue:
      if (a.donate && s.hand(actor).prisoners <= 0) return "no prisoner available to donate";
      break;
  }
  return "action '" + to_string(a) + "' is not available in phase " + phase_name(s.phase.kind);
}

inline TransitionRecord apply_action(const GameState& s, Color actor, const Action& a) {
  if (s.winner) throw illegal_action("game is over");
  ActionSet legal = legal_actions(s);
  bool ok = legal.actor == actor;
  if (ok) {
    ok = false;
    for (const auto& cand : legal.actions) {
      if (cand == a) {
        ok = true;
        break;
      }
    }
  }
  if (!ok) throw illegal_action(describe_violation(s, actor, a));
  return detail::apply_unchecked(s, actor, a);
}

}  // namespace sls
