#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include "sls/service.hpp"
#include "support.hpp"

using namespace sls;
using sls::service::Service;

namespace {

json state_json(const char* board, int bg, int bp, int rg, int rp, const char* active = "b") {
  return state_to_json(make_state(board, Hand{bg, bp}, Hand{rg, rp}, *color_from_letter(active[0])));
}

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sls_service_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir;
}

// Human plays the first legal action until the game ends.
json play_out(Service& svc, const std::string& id) {
  json view = svc.get_session(id).body;
  for (int i = 0; i < 100 && view["state"]["winner"].is_null(); ++i) {
    auto r = svc.post_action(id, {{"action", view["legal_actions"][0]}});
    EXPECT_EQ(r.status, 200) << r.body.dump();
    view = r.body;
  }
  return view;
}

}  // namespace

TEST(Service, EngineFinishesTrivialGame) {
  Service svc;
  auto r = svc.create_session({{"state", state_json("_,_", 1, 0, 0, 0)}, {"human", "r"}, {"engine_policy", "s"}});
  ASSERT_EQ(r.status, 201) << r.body.dump();
  EXPECT_EQ(r.body["state"]["winner"], "b");
  EXPECT_TRUE(r.body["legal_actions"].empty());
  ASSERT_EQ(r.body["transitions"].size(), 1u);
  EXPECT_EQ(r.body["transitions"][0]["actor"], "b");
}

TEST(Service, HumanMoveThenEngineReply) {
  Service svc;
  auto r = svc.create_session({{"state", state_json("_,_", 2, 0, 2, 0)}, {"human", "b"}});
  ASSERT_EQ(r.status, 201);
  std::string id = r.body["session_id"];
  EXPECT_EQ(r.body["decision"], "b");
  EXPECT_FALSE(r.body["legal_actions"].empty());
  EXPECT_TRUE(r.body["transitions"].empty());
  EXPECT_EQ(r.body["analysis"]["provenance"], "solver-verified");

  auto moved = svc.post_action(id, {{"action", {{"type", "place"}, {"pile", 0}, {"color", "b"}}}});
  ASSERT_EQ(moved.status, 200) << moved.body.dump();
  ASSERT_GE(moved.body["transitions"].size(), 2u);
  EXPECT_EQ(moved.body["transitions"][0]["actor"], "b");
  EXPECT_EQ(moved.body["transitions"][1]["actor"], "r");
  if (moved.body["state"]["winner"].is_null()) EXPECT_EQ(moved.body["decision"], "b");
}

TEST(Service, BareActionBodyAccepted) {
  Service svc;
  std::string id = svc.create_session({{"state", state_json("_", 1, 0, 1, 0)}, {"human", "b"}}).body["session_id"];
  EXPECT_EQ(svc.post_action(id, {{"type", "place"}, {"pile", 0}, {"color", "b"}}).status, 200);
}

TEST(Service, ErrorStatuses) {
  Service svc;
  EXPECT_EQ(svc.get_session("nope").status, 404);
  EXPECT_EQ(svc.post_action("nope", {{"type", "discard_prisoner"}}).status, 404);
  EXPECT_EQ(svc.hint("nope").status, 404);
  EXPECT_EQ(svc.create_session(json::array()).status, 400);
  EXPECT_EQ(svc.create_session({{"human", "b"}}).status, 400);
  EXPECT_EQ(svc.create_session({{"state", {{"board", {"x"}}}}}).status, 400);
  EXPECT_EQ(svc.create_session({{"state", state_json("_", 1, 0, 1, 0)}, {"engine_policy", "greedy"}}).status, 400);

  std::string id = svc.create_session({{"state", state_json("_,_", 1, 0, 1, 0)}, {"human", "b"}}).body["session_id"];
  auto wrong_color = svc.post_action(id, {{"action", {{"type", "place"}, {"pile", 0}, {"color", "r"}}}});
  EXPECT_EQ(wrong_color.status, 409);
  EXPECT_TRUE(wrong_color.body["error"].is_string());
  EXPECT_EQ(svc.post_action(id, {{"action", {{"type", "warp"}}}}).status, 400);
  EXPECT_EQ(svc.get_session(id).body["history_length"], 0);
}

TEST(Service, HintFollowsStrategyS) {
  Service svc;
  std::string id = svc.create_session({{"state", state_json("b,r,_", 2, 1, 1, 0)}, {"human", "b"}}).body["session_id"];
  auto h = svc.hint(id);
  ASSERT_EQ(h.status, 200);
  EXPECT_EQ(h.body["action"], action_to_json(Action::place(0, Color::Blue)));
  EXPECT_EQ(h.body["source"], "strategy_s");

  std::string lost = svc.create_session({{"state", state_json("_,r", 0, 2, 1, 0)}, {"human", "b"}}).body["session_id"];
  auto f = svc.hint(lost);
  ASSERT_EQ(f.status, 200);
  EXPECT_EQ(f.body["source"], "fallback");
  EXPECT_EQ(f.body["note"], "no winning line from here");

  std::string over = svc.create_session({{"state", state_json("_,_", 1, 0, 0, 0)}, {"human", "r"}}).body["session_id"];
  EXPECT_EQ(svc.hint(over).status, 409);
}

TEST(Service, AnalyzeProvenance) {
  Service svc;
  auto small = svc.analyze_request(state_json("_,_,_", 2, 0, 1, 0).dump());
  ASSERT_EQ(small.status, 200);
  EXPECT_EQ(small.body["provenance"], "solver-verified");
  EXPECT_EQ(small.body["solver_winner"], "b");
  EXPECT_TRUE(small.body["active_wins"].get<bool>());
  auto big = svc.analyze_request(state_json("rbrbrb,brb,_", 5, 2, 4, 1).dump());
  ASSERT_EQ(big.status, 200);
  EXPECT_EQ(big.body["provenance"], "predicate (proved optimal)");
  EXPECT_TRUE(big.body["solver_winner"].is_null());
  auto wide = svc.analyze_request(state_json("_,_,_,_,_", 1, 0, 1, 0).dump());
  EXPECT_EQ(wide.body["provenance"], "predicate (proved optimal)");
  EXPECT_EQ(svc.analyze_request("{not json").status, 400);
}

TEST(Service, WinnerMatchesInitialVerdictUnderBestPlay) {
  // engine and human-S both play Strategy S from solver-checked states
  for (const char* board : {"_,_,_", "rb,_,b", "br,rb,_"}) {
    for (int g = 1; g <= 2; ++g) {
      Service svc;
      json st = state_json(board, g, 0, 1, 1);
      auto created = svc.create_session({{"state", st}, {"human", "b"}, {"engine_policy", "s"}});
      ASSERT_EQ(created.status, 201);
      std::string id = created.body["session_id"];
      std::string predicted = created.body["analysis"]["predicted_winner"];
      json view = created.body;
      for (int i = 0; i < 100 && view["state"]["winner"].is_null(); ++i) {
        view = svc.post_action(id, {{"action", svc.hint(id).body["action"]}}).body;
      }
      EXPECT_EQ(view["state"]["winner"], predicted) << board << " g=" << g;
    }
  }
}

TEST(Service, HistoryReplaysToCurrentState) {
  Service svc;
  std::string id = svc.create_session({{"state", state_json("rb,br,_", 3, 1, 2, 1)}, {"human", "r"},
                                       {"engine_policy", "random:5"}}).body["session_id"];
  json view = play_out(svc, id);
  EXPECT_FALSE(view["state"]["winner"].is_null());
}

TEST(Service, SnapshotRoundTrip) {
  auto dir = fresh_dir("roundtrip");
  std::string id;
  json before;
  {
    Service svc({dir});
    id = svc.create_session({{"state", state_json("rb,_,b", 2, 1, 2, 0)}, {"human", "b"},
                             {"engine_policy", "random"}}).body["session_id"];
    auto h = svc.hint(id).body["action"];
    svc.post_action(id, {{"action", h}});
    before = svc.get_session(id).body;
  }
  Service restored({dir});
  auto rep = restored.restore();
  EXPECT_EQ(rep.restored, 1);
  EXPECT_TRUE(rep.errors.empty());
  EXPECT_EQ(restored.get_session(id).body, before);
  std::filesystem::remove_all(dir);
}

TEST(Service, CorruptSnapshotsAreSkipped) {
  auto dir = fresh_dir("corrupt");
  std::string good, bad;
  {
    Service svc({dir});
    good = svc.create_session({{"state", state_json("_,_", 2, 0, 1, 0)}, {"human", "b"}}).body["session_id"];
    bad = svc.create_session({{"state", state_json("_,_", 2, 0, 1, 0)}, {"human", "b"}}).body["session_id"];
    svc.post_action(bad, {{"action", {{"type", "place"}, {"pile", 0}, {"color", "b"}}}});
  }
  auto path = dir / (bad + ".json");
  json doc = json::parse(std::ifstream(path));
  ASSERT_FALSE(doc["history"].empty());
  doc["history"][0]["action"]["pile"] = 1;
  std::ofstream(path) << doc.dump();
  std::ofstream(dir / "garbage.json") << "{ not json";

  Service restored({dir});
  auto rep = restored.restore();
  EXPECT_EQ(rep.restored, 1);
  EXPECT_EQ(rep.errors.size(), 2u);
  EXPECT_EQ(restored.get_session(good).status, 200);
  EXPECT_EQ(restored.get_session(bad).status, 404);
  std::filesystem::remove_all(dir);
}

TEST(Service, EmptyStoreRestoresNothing) {
  auto dir = fresh_dir("empty");
  std::filesystem::create_directories(dir);
  Service svc({dir});
  EXPECT_EQ(svc.restore().restored, 0);
  EXPECT_EQ(svc.session_count(), 0u);
  std::filesystem::remove_all(dir);
}

TEST(Service, ConcurrentSessions) {
  Service svc;
  std::vector<std::thread> threads;
  std::atomic<int> finished{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      auto created = svc.create_session({{"state", state_json("rb,_,b", 2, 1, 2, 1)}, {"human", "b"},
                                         {"engine_policy", "random:" + std::to_string(t)}});
      std::string id = created.body["session_id"];
      json view = play_out(svc, id);
      if (!view["state"]["winner"].is_null()) ++finished;
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(finished.load(), 4);
  EXPECT_EQ(svc.session_count(), 4u);
}

TEST(Service, HttpEndToEnd) {
  Service svc;
  httplib::Server server;
  svc.mount(server);
  int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread loop([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  json body = {{"state", state_json("_,_", 2, 0, 1, 0)}, {"human", "b"}, {"engine_policy", "s"}};
  auto created = client.Post("/sessions", body.dump(), "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  std::string id = json::parse(created->body)["session_id"];

  auto got = client.Get(("/sessions/" + id).c_str());
  ASSERT_TRUE(got);
  EXPECT_EQ(got->status, 200);
  EXPECT_EQ(got->get_header_value("Access-Control-Allow-Origin"), "*");

  auto hint = client.Get(("/sessions/" + id + "/hint").c_str());
  ASSERT_TRUE(hint);
  json action = json::parse(hint->body)["action"];
  auto moved = client.Post(("/sessions/" + id + "/actions").c_str(), json{{"action", action}}.dump(), "application/json");
  ASSERT_TRUE(moved);
  EXPECT_EQ(moved->status, 200);

  auto bad = client.Post(("/sessions/" + id + "/actions").c_str(), "{oops", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  auto missing = client.Get("/sessions/ffff");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);

  httplib::Params params{{"state", state_json("_,_,_", 2, 0, 1, 0).dump()}};
  auto analysis = client.Get("/analyze", params, httplib::Headers{});
  ASSERT_TRUE(analysis);
  EXPECT_EQ(analysis->status, 200);
  EXPECT_EQ(json::parse(analysis->body)["predicted_winner"], "b");

  server.stop();
  loop.join();
}
