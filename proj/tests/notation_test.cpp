#include <gtest/gtest.h>

#include <sstream>

#include "sls/json_io.hpp"
#include "sls/notation.hpp"
#include "sls/solver.hpp"
#include "support.hpp"

using namespace sls;
using testing_support::mk;

TEST(Notation, StateRoundTrip) {
  for (const auto& s : enumerate_states({2, 2, 1})) {
    EXPECT_EQ(parse_state(format_state(s)), s);
  }
  GameState cap = mk("rbb,_", 0, 0, 1, 0);
  cap.phase = Phase::await_capture(0, Color::Blue);
  EXPECT_EQ(parse_state(format_state(cap)), cap);
  GameState done = mk("_", 1, 0, 0, 0);
  done.winner = Color::Blue;
  EXPECT_EQ(format_state(done), "board=_ blue=1,0 red=0,0 active=b phase=turn_start winner=b");
  EXPECT_EQ(parse_state(format_state(done)), done);
}

TEST(Notation, PositionPreciseErrors) {
  try {
    parse_state("board=_,rxb blue=1,0 red=0,0 active=b");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.position(), 9u);
  }
  try {
    parse_state("board=_ blue=1,q red=0,0 active=b");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.position(), 15u);
  }
  EXPECT_THROW(parse_state("board=_ blue=1,0 red=0,0"), parse_error);
  EXPECT_THROW(parse_state("board=_ blue=1,0 red=0,0 active=g"), parse_error);
  EXPECT_THROW(parse_state("board=bb blue=1,0 red=0,0 active=b"), std::invalid_argument);
  EXPECT_THROW(parse_state("board=_ blue=1,0 red=0,0 active=b colour=r"), parse_error);
}

TEST(Notation, Actions) {
  for (const Action& a : {Action::place(3, Color::Red), Action::capture_discard(Color::Blue), Action::discard_prisoner(),
                          Action::donate_prisoner(), Action::rescue(true), Action::rescue(false)}) {
    EXPECT_EQ(parse_action(to_string(a)), a);
  }
  EXPECT_THROW(parse_action("jump 1"), parse_error);
  EXPECT_THROW(parse_action("rescue maybe"), parse_error);
}

TEST(Notation, Scripts) {
  std::istringstream in("# opening\nplace 0 b\n\ncapture_discard r  # keep blue\ndiscard_prisoner\n");
  auto script = parse_script(in);
  ASSERT_EQ(script.size(), 3u);
  EXPECT_EQ(script[1], Action::capture_discard(Color::Red));
  std::istringstream bad("place 0 b\nplace x b\n");
  EXPECT_THROW(parse_script(bad), std::invalid_argument);
}

TEST(Notation, Policies) {
  EXPECT_TRUE(std::holds_alternative<policy::StrategyS>(parse_policy("s")));
  EXPECT_TRUE(std::holds_alternative<policy::Adversarial>(parse_policy("adversarial")));
  auto r = parse_policy("random:42");
  ASSERT_TRUE(std::holds_alternative<policy::UniformRandom>(r));
  EXPECT_EQ(std::get<policy::UniformRandom>(r).seed, 42u);
  EXPECT_FALSE(std::get<policy::UniformRandom>(parse_policy("random")).seed.has_value());
  EXPECT_THROW(parse_policy("random:x"), parse_error);
  EXPECT_THROW(parse_policy("greedy"), parse_error);
  EXPECT_THROW(parse_policy("scripted:/nonexistent/file"), std::invalid_argument);
}

TEST(Json, StateSchema) {
  GameState s = mk("_,rb,b", 2, 1, 0, 3, Color::Red);
  json j = state_to_json(s);
  EXPECT_EQ(j["board"], json({"_", "rb", "b"}));
  EXPECT_EQ(j["blue"], json({{"guards", 2}, {"prisoners", 1}}));
  EXPECT_EQ(j["red"]["prisoners"], 3);
  EXPECT_EQ(j["active"], "r");
  EXPECT_EQ(j["phase"]["kind"], "turn_start");
  EXPECT_TRUE(j["winner"].is_null());
  EXPECT_EQ(state_from_json(j), s);
}

TEST(Json, StateRoundTripAllPhases) {
  GameState cap = mk("rbb,_", 0, 0, 1, 0);
  cap.phase = Phase::await_capture(0, Color::Blue);
  GameState rescue = mk("_", 0, 0, 0, 1);
  rescue.phase = Phase::await_rescue();
  GameState mid = mk("r", 1, 0, 1, 0);
  mid.phase = Phase::in_round();
  for (const GameState& s : {cap, rescue, mid}) EXPECT_EQ(state_from_json(state_to_json(s)), s);
  EXPECT_EQ(state_to_json(cap)["phase"], json({{"kind", "await_capture_discard"}, {"pile", 0}, {"capturer", "b"}}));
}

TEST(Json, MalformedStates) {
  EXPECT_THROW(state_from_json(json::array()), schema_error);
  EXPECT_THROW(state_from_json(json::parse(R"({"board":[], "blue":{"guards":1,"prisoners":0},
      "red":{"guards":0,"prisoners":0}, "active":"b"})")), schema_error);
  EXPECT_THROW(state_from_json(json::parse(R"({"board":["x"], "blue":{"guards":1,"prisoners":0},
      "red":{"guards":0,"prisoners":0}, "active":"b"})")), schema_error);
  EXPECT_THROW(state_from_json(json::parse(R"({"board":["_"], "blue":{"guards":-1,"prisoners":0},
      "red":{"guards":0,"prisoners":0}, "active":"b"})")), schema_error);
  EXPECT_THROW(state_from_json(json::parse(R"({"board":["_"], "blue":{"guards":1,"prisoners":0},
      "red":{"guards":0,"prisoners":0}, "active":"green"})")), schema_error);
  EXPECT_THROW(state_from_json(json::parse(R"({"board":["bb"], "blue":{"guards":1,"prisoners":0},
      "red":{"guards":0,"prisoners":0}, "active":"b"})")), schema_error);
}

TEST(Json, Actions) {
  for (const Action& a : {Action::place(1, Color::Blue), Action::capture_discard(Color::Red), Action::discard_prisoner(),
                          Action::donate_prisoner(), Action::rescue(false)}) {
    EXPECT_EQ(action_from_json(action_to_json(a)), a);
  }
  EXPECT_EQ(action_to_json(Action::place(1, Color::Blue)), json({{"type", "place"}, {"pile", 1}, {"color", "b"}}));
  EXPECT_THROW(action_from_json(json{{"type", "place"}, {"pile", "one"}, {"color", "b"}}), schema_error);
  EXPECT_THROW(action_from_json(json{{"type", "fly"}}), schema_error);
  EXPECT_THROW(action_from_json(json{{"type", "rescue"}}), schema_error);
}

TEST(Json, AnalysisReport) {
  json j = analysis_to_json(analyze(mk("_,r,b,rbr", 2, 0, 1, 0)));
  EXPECT_EQ(j["summary"]["k_e"], 1);
  EXPECT_EQ(j["summary"]["long_r"], json({3}));
  EXPECT_EQ(j["board_type"], "type I");
  EXPECT_TRUE(j["active_wins"].is_boolean());
}
