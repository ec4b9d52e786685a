#include <gtest/gtest.h>

#include "sls/classifier.hpp"
#include "sls/playout.hpp"
#include "support.hpp"

using namespace sls;
using testing_support::mk;

TEST(Playout, Examples) {
  PlayoutResult a = playout(mk("_,_", 1, 0, 0, 0), policy::StrategyS{}, policy::StrategyS{}, 1);
  EXPECT_EQ(a.winner, Color::Blue);
  EXPECT_EQ(a.transitions.size(), 1u);
  EXPECT_EQ(playout(mk("_", 0, 0, 1, 0), policy::UniformRandom{}, policy::UniformRandom{}, 5).winner, Color::Red);
  EXPECT_EQ(playout(mk("_,_", 1, 0, 1, 0), policy::StrategyS{}, policy::StrategyS{}, 1).winner, Color::Red);
}

TEST(Playout, TerminalStartRejected) {
  GameState s = mk("_", 1, 0, 0, 0);
  s.winner = Color::Blue;
  EXPECT_THROW(playout(s, policy::StrategyS{}, policy::StrategyS{}, 1), terminal_state);
}

TEST(Playout, DeterministicForASeed) {
  GameState s = mk("rb,br,_", 3, 1, 2, 2);
  PlayoutResult a = playout(s, policy::UniformRandom{}, policy::UniformRandom{}, 99);
  PlayoutResult b = playout(s, policy::UniformRandom{}, policy::UniformRandom{}, 99);
  ASSERT_EQ(a.transitions.size(), b.transitions.size());
  for (std::size_t i = 0; i < a.transitions.size(); ++i) EXPECT_EQ(a.transitions[i].action, b.transitions[i].action);
  bool differs = false;
  for (std::uint64_t seed = 0; seed < 20 && !differs; ++seed) {
    PlayoutResult c = playout(s, policy::UniformRandom{}, policy::UniformRandom{}, seed);
    differs = c.transitions.size() != a.transitions.size();
  }
  EXPECT_TRUE(differs);
}

TEST(Playout, IllegalScriptAbortsWithDiagnostics) {
  policy::Scripted bad{{Action::place(0, Color::Red)}};
  try {
    playout(mk("_", 1, 0, 1, 0), bad, policy::StrategyS{}, 1);
    FAIL();
  } catch (const policy_error& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("place 0 r"), std::string::npos);
    EXPECT_NE(msg.find("board=_"), std::string::npos);
  }
}

TEST(Playout, AdversarialNeverLosesAWinningPosition) {
  Solver solver;
  for (const auto& s : enumerate_states({2, 1, 2})) {
    Color w = solver.winner(s);
    PolicySpec adv = policy::Adversarial{};
    PolicySpec rnd = policy::UniformRandom{};
    PlayoutResult r = w == Color::Blue ? playout(s, adv, rnd, 3) : playout(s, rnd, adv, 3);
    EXPECT_EQ(r.winner, w) << format_state(s);
  }
}

TEST(Playout, StrategySWinsPredicateTrueStates) {
  for (const auto& s : enumerate_states({3, 2, 2})) {
    if (!start_round(s).winner && s.hand(s.active).guards > 0) {
      bool wins = active_player_wins(s);
      for (std::uint64_t seed = 0; seed < 2; ++seed) {
        PolicySpec sp = policy::StrategyS{};
        PolicySpec rnd = policy::UniformRandom{};
        Color winner_side = wins ? s.active : opponent(s.active);
        PlayoutResult r = winner_side == Color::Blue ? playout(s, sp, rnd, seed) : playout(s, rnd, sp, seed);
        EXPECT_EQ(r.winner, winner_side) << format_state(s);
      }
    }
  }
}
