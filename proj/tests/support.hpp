#pragma once

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "sls/core_model.hpp"
#include "sls/notation.hpp"
#include "sls/rules.hpp"

namespace testing_support {

inline sls::GameState st(const char* text) { return sls::parse_state(text); }

inline sls::GameState mk(const char* board, int bg, int bp, int rg, int rp, sls::Color active = sls::Color::Blue) {
  return sls::make_state(board, sls::Hand{bg, bp}, sls::Hand{rg, rp}, active);
}

// Plain minimax straight over legal_actions/apply_action: no memo, no
// canonical keys, no symmetry pruning. Only for tiny positions.
inline sls::Color naive_winner(const sls::GameState& s) {
  if (s.winner) return *s.winner;
  sls::ActionSet set = sls::legal_actions(s);
  for (const auto& a : set.actions) {
    if (naive_winner(sls::apply_action(s, set.actor, a).state) == set.actor) return set.actor;
  }
  return sls::opponent(set.actor);
}

// Winner when `fixed` always plays Strategy S and the other side searches.
inline sls::Color naive_winner_s(const sls::GameState& s, sls::Color fixed, sls::Action (*s_action)(const sls::GameState&)) {
  if (s.winner) return *s.winner;
  sls::ActionSet set = sls::legal_actions(s);
  if (set.actor == fixed) return naive_winner_s(sls::apply_action(s, set.actor, s_action(s)).state, fixed, s_action);
  for (const auto& a : set.actions) {
    if (naive_winner_s(sls::apply_action(s, set.actor, a).state, fixed, s_action) == set.actor) return set.actor;
  }
  return fixed;
}

// Brute-force enumerator: every sorted tuple of pile strings drawn from the
// alternating piles up to max_len, every hand split, both actives.
inline std::vector<std::string> naive_piles(int max_len) {
  std::vector<std::string> out{"_"};
  for (int len = 1; len <= max_len; ++len) {
    for (char top : {'b', 'r'}) {
      std::string p(static_cast<std::size_t>(len), ' ');
      char c = top;
      for (int i = len - 1; i >= 0; --i) {
        p[static_cast<std::size_t>(i)] = c;
        c = c == 'b' ? 'r' : 'b';
      }
      out.push_back(p);
    }
  }
  return out;
}

inline std::set<std::string> naive_state_set(int k, int max_len, int max_hand) {
  auto piles = naive_piles(max_len);
  std::set<std::string> boards;
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == idx.size()) {
      std::vector<std::string> b;
      for (auto i : idx) b.push_back(piles[i]);
      std::sort(b.begin(), b.end());
      std::string text;
      for (std::size_t i = 0; i < b.size(); ++i) text += (i ? "," : "") + b[i];
      boards.insert(text);
      return;
    }
    for (std::size_t i = 0; i < piles.size(); ++i) {
      idx[pos] = i;
      rec(pos + 1);
    }
  };
  rec(0);
  std::set<std::string> out;
  for (const auto& b : boards) {
    for (int bg = 0; bg <= max_hand; ++bg)
      for (int bp = 0; bg + bp <= max_hand; ++bp)
        for (int rg = 0; rg <= max_hand; ++rg)
          for (int rp = 0; rg + rp <= max_hand; ++rp)
            for (char a : {'b', 'r'}) {
              out.insert(b + "|" + std::to_string(bg) + "," + std::to_string(bp) + "|" + std::to_string(rg) + "," +
                         std::to_string(rp) + "|" + a);
            }
  }
  return out;
}

inline std::string naive_key(const sls::GameState& s) {
  std::vector<std::string> b;
  for (const auto& p : s.board.piles()) b.push_back(p.to_string());
  std::sort(b.begin(), b.end());
  std::string text;
  for (std::size_t i = 0; i < b.size(); ++i) text += (i ? "," : "") + b[i];
  return text + "|" + sls::format_hand(s.blue) + "|" + sls::format_hand(s.red) + "|" + sls::color_letter(s.active);
}

struct CommandResult {
  int status = -1;
  std::string output;
};

inline CommandResult run_command(const std::string& cmd) {
  CommandResult r;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.output += buf;
  int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

}  // namespace testing_support
