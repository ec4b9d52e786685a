#pragma once

// Board summaries, the board taxonomy, the closed-form winning predicate and
// the two induction measures.
//
// All formulas are stated for Blue as the player whose turn starts; queries
// about a Red-active state are answered on the color-swapped state.

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "sls/core_model.hpp"

namespace sls {

struct BoardSummary {
  int empty = 0;             // k_e
  int red_singletons = 0;    // k_r
  int blue_singletons = 0;   // k_b
  std::vector<int> long_red;   // lengths of long r-topped piles, descending
  std::vector<int> long_blue;  // lengths of long b-topped piles, descending

  int long_red_count() const noexcept { return static_cast<int>(long_red.size()); }   // l
  int long_blue_count() const noexcept { return static_cast<int>(long_blue.size()); } // h
  int pile_count() const noexcept {
    return empty + red_singletons + blue_singletons + long_red_count() + long_blue_count();
  }

  friend bool operator==(const BoardSummary&, const BoardSummary&) = default;
};

enum class BoardType { TypeI, GeneralizedTypeI, TypeII, GeneralizedTypeII, General };

inline std::string board_type_name(BoardType t) {
  switch (t) {
    case BoardType::TypeI: return "type I";
    case BoardType::GeneralizedTypeI: return "generalized type I";
    case BoardType::TypeII: return "type II";
    case BoardType::GeneralizedTypeII: return "generalized type II";
    case BoardType::General: return "general";
  }
  return "?";
}

// Chips of a pile's top color in an alternating pile of the given length.
constexpr int top_color_count(int length) noexcept { return (length + 1) / 2; }

inline BoardSummary summarize_board(const Board& board) {
  BoardSummary s;
  for (std::size_t i = 0; i < board.size(); ++i) {
    const Pile& p = board[i];
    if (!p.alternates()) {
      throw std::invalid_argument("summarize_board: pile " + std::to_string(i) + " (" + p.to_string() +
                                  ") does not alternate; resolve the pending capture first");
    }
    if (p.empty()) {
      ++s.empty;
    } else if (p.size() == 1) {
      (p.top() == Color::Red ? s.red_singletons : s.blue_singletons)++;
    } else {
      (p.top() == Color::Red ? s.long_red : s.long_blue).push_back(static_cast<int>(p.size()));
    }
  }
  std::sort(s.long_red.begin(), s.long_red.end(), std::greater<>());
  std::sort(s.long_blue.begin(), s.long_blue.end(), std::greater<>());
  return s;
}

inline bool in_class(const BoardSummary& s, BoardType t) noexcept {
  const int l = s.long_red_count();
  const int h = s.long_blue_count();
  switch (t) {
    case BoardType::TypeI: return h == 0 && l <= 1;
    case BoardType::GeneralizedTypeI: return h == 0;
    case BoardType::TypeII: return l == 1 && h == 1;
    case BoardType::GeneralizedTypeII: return l == 1 && h >= 1;
    case BoardType::General: return true;
  }
  return false;
}

// Most specific label.
inline BoardType classify(const BoardSummary& s) noexcept {
  for (BoardType t : {BoardType::TypeI, BoardType::GeneralizedTypeI, BoardType::TypeII,
                      BoardType::GeneralizedTypeII}) {
    if (in_class(s, t)) return t;
  }
  return BoardType::General;
}

// Whether Blue, whose turn starts, can force a win. m_b is Blue's guard
// count and n_r Red's guard count; prisoners play no part.
inline bool winning_predicate(const BoardSummary& s, int m_b, int n_r) {
  if (m_b <= 0) return false;
  if (n_r == 0) return true;
  int blue_side = m_b;
  for (int len : s.long_blue) blue_side += top_color_count(len);
  int red_sum = 0;
  int red_max = 0;
  for (int len : s.long_red) {
    red_sum += top_color_count(len);
    red_max = std::max(red_max, top_color_count(len));
  }
  return blue_side > n_r + red_sum - red_max;
}

// Measure on Red's potential holdings; empty max counts as 0.
inline int nu(const std::vector<int>& long_red, int n_b, int n_r) {
  int sum = 0;
  int mx = 0;
  for (int len : long_red) {
    sum += len - 1;
    mx = std::max(mx, len - 1);
  }
  return n_b + n_r + sum - mx - 1;
}

// Measure on Blue's potential holdings.
inline int mu(const std::vector<int>& long_blue, int m_b, int m_r) {
  int sum = 0;
  for (int len : long_blue) sum += len - 1;
  return m_b + m_r + sum - 1;
}

// Predicate for whichever player is active, via color symmetry.
inline bool active_player_wins(const GameState& s) {
  if (s.active == Color::Blue) return winning_predicate(summarize_board(s.board), s.blue.guards, s.red.guards);
  GameState sw = color_swapped(s);
  return winning_predicate(summarize_board(sw.board), sw.blue.guards, sw.red.guards);
}

// Analysis of a round-boundary state, computed in the frame where the
// active player plays Blue.
struct AnalysisReport {
  BoardSummary summary;       // of the board as given
  BoardSummary active_frame;  // of the board with the active player as Blue
  BoardType board_type = BoardType::General;  // of active_frame
  Color active = Color::Blue;
  bool active_wins = false;
  Color predicted_winner = Color::Blue;
  int nu_value = 0;
  int mu_value = 0;
};

inline AnalysisReport analyze(const GameState& s) {
  AnalysisReport r;
  r.summary = summarize_board(s.board);
  GameState frame = s.active == Color::Blue ? s : color_swapped(s);
  r.active_frame = summarize_board(frame.board);
  r.board_type = classify(r.active_frame);
  r.active = s.active;
  r.active_wins = winning_predicate(r.active_frame, frame.blue.guards, frame.red.guards);
  r.predicted_winner = r.active_wins ? s.active : opponent(s.active);
  r.nu_value = nu(r.active_frame.long_red, frame.red.prisoners, frame.red.guards);
  r.mu_value = mu(r.active_frame.long_blue, frame.blue.guards, frame.blue.prisoners);
  return r;
}

}  // namespace sls
