#pragma once

// Strategy S and the baseline policies.
//
// Strategy S, for a player X of color x holding at least one x chip:
//   1. capture every x-topped pile (discarding an opponent chip from the
//      captured pile when it holds one, otherwise an x chip);
//   2. discard every prisoner;
//   3. place an x chip on the longest opponent-topped pile, or on an empty
//      pile when there is none.
// The per-decision form below reproduces that round one action at a time.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sls/core_model.hpp"
#include "sls/rules.hpp"

namespace sls {

namespace policy {
struct StrategyS {};
struct UniformRandom {
  std::optional<std::uint64_t> seed;  // falls back to the playout seed when unset
};
struct Adversarial {};
struct Scripted {
  std::vector<Action> actions;  // consumed in order; Strategy S takes over when exhausted
};
}  // namespace policy

using PolicySpec = std::variant<policy::StrategyS, policy::UniformRandom, policy::Adversarial, policy::Scripted>;

class strategy_precondition : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Color to discard when `own` captures `pile`.
inline Color capture_discard_choice(const Pile& pile, Color own) noexcept {
  return pile.count(opponent(own)) >= 1 ? opponent(own) : own;
}

namespace detail {

// Index of the longest pile topped by `top`; ties go to the lowest index.
inline std::optional<int> longest_topped(const Board& b, Color top) {
  std::optional<int> best;
  std::size_t best_len = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Pile& p = b[i];
    if (!p.empty() && p.top() == top && p.size() > best_len) {
      best = static_cast<int>(i);
      best_len = p.size();
    }
  }
  return best;
}

inline std::optional<int> shortest_topped(const Board& b, Color top) {
  std::optional<int> best;
  std::size_t best_len = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Pile& p = b[i];
    if (!p.empty() && p.top() == top && (!best || p.size() < best_len)) {
      best = static_cast<int>(i);
      best_len = p.size();
    }
  }
  return best;
}

inline std::optional<int> first_empty(const Board& b) {
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i].empty()) return static_cast<int>(i);
  }
  return std::nullopt;
}

}  // namespace detail

// Losing-side behavior for a guardless player holding prisoners: place a
// prisoner on an empty pile, else on the shortest opponent-topped pile, else
// on the shortest own-topped pile. Never donates.
inline Action fallback_policy(const GameState& s) {
  Color me = s.active;
  const Hand& h = s.hand(me);
  if (h.prisoners <= 0) throw strategy_precondition("fallback_policy: no prisoner to place");
  Color chip = opponent(me);
  if (auto e = detail::first_empty(s.board)) return Action::place(*e, chip);
  if (auto o = detail::shortest_topped(s.board, opponent(me))) return Action::place(*o, chip);
  if (auto m = detail::shortest_topped(s.board, me)) return Action::place(*m, chip);
  throw strategy_precondition("fallback_policy: board has no pile");
}

// The action Strategy S takes for whoever decides at `s`. Covers the
// capture-discard and rescue nodes (S never donates) and falls back to
// fallback_policy for a guardless player.
inline Action strategy_s_action(const GameState& s) {
  if (s.winner) throw terminal_state();
  Color me = detail::decision_owner(s);
  switch (s.phase.kind) {
    case PhaseKind::AwaitCaptureDiscard:
      return Action::capture_discard(capture_discard_choice(s.board[static_cast<std::size_t>(s.phase.pile)], me));
    case PhaseKind::AwaitRescueDonation:
      return Action::rescue(false);
    default:
      break;
  }
  if (me != s.active) return Action::rescue(false);
  const Hand& h = s.hand(me);
  if (h.guards == 0) return fallback_policy(s);
  if (auto own = detail::longest_topped(s.board, me)) return Action::place(*own, me);
  if (h.prisoners > 0) return Action::discard_prisoner();
  if (auto theirs = detail::longest_topped(s.board, opponent(me))) return Action::place(*theirs, me);
  if (auto e = detail::first_empty(s.board)) return Action::place(*e, me);
  throw strategy_precondition("strategy S: no legal step-3 placement");
}

// Whole Strategy S round for the active player, in order.
inline std::vector<Action> strategy_s_round(const GameState& s) {
  if (s.winner) throw terminal_state();
  if (!s.phase.is_play()) throw strategy_precondition("strategy S round must start at a play decision");
  Color me = s.active;
  if (s.hand(me).guards < 1) throw strategy_precondition("strategy S requires at least one guard");
  std::vector<Action> round;
  GameState cur = s;
  while (!cur.winner && cur.active == me && detail::decision_owner(cur) == me) {
    Action a = strategy_s_action(cur);
    round.push_back(a);
    cur = apply_action(cur, me, a).state;
  }
  return round;
}

inline std::string policy_name(const PolicySpec& p) {
  struct V {
    std::string operator()(const policy::StrategyS&) const { return "s"; }
    std::string operator()(const policy::UniformRandom& r) const {
      return r.seed ? "random:" + std::to_string(*r.seed) : "random";
    }
    std::string operator()(const policy::Adversarial&) const { return "adversarial"; }
    std::string operator()(const policy::Scripted&) const { return "scripted"; }
  };
  return std::visit(V{}, p);
}

}  // namespace sls
