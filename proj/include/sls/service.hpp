#pragma once

// HTTP facade for live play against an engine policy.
//
//   POST /sessions                 {"state": <state>, "human": "b"|"r", "engine_policy": "s"}
//   GET  /sessions/{id}            view: state, legal actions for the human, analysis
//   POST /sessions/{id}/actions    {"action": <action>} (or the bare action object)
//   GET  /sessions/{id}/hint       what Strategy S (or the fallback) would do for the human
//   GET  /analyze?state=<json>     stateless analysis
//
// Every mutation goes through apply_action. Engine decisions are resolved
// eagerly so a returned view always waits on the human or is finished.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include <httplib.h>

#include "sls/classifier.hpp"
#include "sls/json_io.hpp"
#include "sls/playout.hpp"
#include "sls/rules.hpp"
#include "sls/solver.hpp"
#include "sls/strategy.hpp"

namespace sls::service {

struct Config {
  std::optional<std::filesystem::path> state_dir;
  int solve_max_chips = 8;
  int solve_max_piles = 4;
};

// Reads SLS_STATE_DIR and SLS_SOLVE_MAX_CHIPS.
inline Config config_from_env(Config base = {}) {
  if (const char* dir = std::getenv("SLS_STATE_DIR"); dir && *dir) base.state_dir = dir;
  if (const char* chips = std::getenv("SLS_SOLVE_MAX_CHIPS"); chips && *chips) base.solve_max_chips = std::atoi(chips);
  return base;
}

struct Response {
  int status = 200;
  json body;
};

struct Session {
  std::string id;
  GameState initial;
  GameState state;
  std::vector<TransitionRecord> history;
  Color human = Color::Red;
  std::string engine_policy = "s";
  std::uint64_t engine_seed = 0;
  std::string created;
  std::string updated;
  std::unique_ptr<PolicyRunner> engine;
  std::mutex mu;
};

struct RestoreReport {
  int restored = 0;
  std::vector<std::string> errors;
};

inline std::string utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Service {
 public:
  explicit Service(Config cfg = {}) : cfg_(std::move(cfg)), solver_(std::make_shared<Solver>()) {}

  Response create_session(const json& body) {
    try {
      if (!body.is_object()) return bad_request("body must be a JSON object");
      if (!body.contains("state")) return bad_request("missing 'state'");
      GameState initial = state_from_json(body["state"]);
      if (initial.winner) return bad_request("initial state is already finished");
      Color human = body.contains("human") ? detail::color_field(body, "human") : Color::Red;
      std::string policy = body.value("engine_policy", std::string("s"));
      auto session = std::make_shared<Session>();
      session->id = new_id();
      session->initial = initial;
      session->state = initial;
      session->human = human;
      session->engine_policy = policy;
      session->engine_seed = rng_seed();
      session->engine = make_engine(policy, session->engine_seed);
      session->created = session->updated = utc_now();
      std::lock_guard lock(session->mu);
      std::vector<TransitionRecord> moves;
      run_engine(*session, moves);
      persist(*session);
      {
        std::unique_lock w(store_mu_);
        sessions_[session->id] = session;
      }
      json out = view(*session);
      out["transitions"] = transitions_json(moves);
      return {201, out};
    } catch (const schema_error& e) {
      return bad_request(e.what());
    } catch (const std::invalid_argument& e) {
      return bad_request(e.what());
    }
  }

  Response get_session(const std::string& id) {
    auto s = find(id);
    if (!s) return not_found(id);
    std::lock_guard lock(s->mu);
    return {200, view(*s)};
  }

  Response post_action(const std::string& id, const json& body) {
    auto s = find(id);
    if (!s) return not_found(id);
    Action action;
    try {
      if (!body.is_object()) return bad_request("body must be a JSON object");
      action = action_from_json(body.contains("action") ? body["action"] : body);
    } catch (const schema_error& e) {
      return bad_request(e.what());
    }
    std::lock_guard lock(s->mu);
    if (s->state.winner) return conflict("game is over");
    std::vector<TransitionRecord> moves;
    try {
      moves.push_back(apply_action(s->state, s->human, action));
    } catch (const illegal_action& e) {
      return conflict(e.what());
    }
    s->state = moves.back().state;
    s->history.push_back(moves.back());
    run_engine(*s, moves);
    s->updated = utc_now();
    persist(*s);
    json out = view(*s);
    out["transitions"] = transitions_json(moves);
    return {200, out};
  }

  Response hint(const std::string& id) {
    auto s = find(id);
    if (!s) return not_found(id);
    std::lock_guard lock(s->mu);
    if (s->state.winner) return conflict("game is over");
    if (detail::decision_owner(s->state) != s->human) return conflict("not the human's decision");
    json out;
    out["action"] = action_to_json(strategy_s_action(s->state));
    bool guardless = s->state.phase.is_play() && s->state.active == s->human && s->state.hand(s->human).guards == 0;
    out["source"] = guardless ? "fallback" : "strategy_s";
    if (s->state.phase.is_play() && s->state.active == s->human && s->state.board.piles().size() > 0) {
      if (!active_player_wins(s->state)) out["note"] = "no winning line from here";
    }
    return {200, out};
  }

  // `state_param` is a JSON state document.
  Response analyze_request(const std::string& state_param) {
    GameState s;
    try {
      s = state_from_json(json::parse(state_param));
    } catch (const json::parse_error& e) {
      return bad_request(std::string("state is not valid JSON: ") + e.what());
    } catch (const schema_error& e) {
      return bad_request(e.what());
    }
    json a = analysis_json(s);
    if (a.is_null()) return conflict("state has a pending capture or is finished; analysis needs a turn start");
    return {200, a};
  }

  // Loads every snapshot in the state directory, validating each by
  // replaying its history from the initial state.
  RestoreReport restore() {
    RestoreReport rep;
    if (!cfg_.state_dir || !std::filesystem::exists(*cfg_.state_dir)) return rep;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(*cfg_.state_dir)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      try {
        std::ifstream in(path);
        json doc = json::parse(in);
        auto session = load_session(doc);
        std::unique_lock w(store_mu_);
        sessions_[session->id] = session;
        ++rep.restored;
      } catch (const std::exception& e) {
        std::string msg = "integrity error in " + path.filename().string() + ": " + e.what() + "; session skipped";
        std::cerr << msg << "\n";
        rep.errors.push_back(msg);
      }
    }
    return rep;
  }

  std::size_t session_count() const {
    std::shared_lock r(store_mu_);
    return sessions_.size();
  }

  void mount(httplib::Server& svr) {
    auto reply = [](httplib::Response& res, const Response& r) {
      res.status = r.status;
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_content(r.body.dump(), "application/json");
    };
    auto body_json = [](const httplib::Request& req, json& out) {
      try {
        out = req.body.empty() ? json::object() : json::parse(req.body);
        return true;
      } catch (const json::parse_error&) {
        return false;
      }
    };
    svr.Options(".*", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
    svr.Post("/sessions", [=, this](const httplib::Request& req, httplib::Response& res) {
      json body;
      if (!body_json(req, body)) return reply(res, bad_request("malformed JSON body"));
      reply(res, create_session(body));
    });
    svr.Get(R"(/sessions/([A-Za-z0-9]+))", [=, this](const httplib::Request& req, httplib::Response& res) {
      reply(res, get_session(req.matches[1]));
    });
    svr.Post(R"(/sessions/([A-Za-z0-9]+)/actions)", [=, this](const httplib::Request& req, httplib::Response& res) {
      json body;
      if (!body_json(req, body)) return reply(res, bad_request("malformed JSON body"));
      reply(res, post_action(req.matches[1], body));
    });
    svr.Get(R"(/sessions/([A-Za-z0-9]+)/hint)", [=, this](const httplib::Request& req, httplib::Response& res) {
      reply(res, hint(req.matches[1]));
    });
    svr.Get("/analyze", [=, this](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_param("state")) return reply(res, bad_request("missing query parameter 'state'"));
      reply(res, analyze_request(req.get_param_value("state")));
    });
  }

  json analysis_json(const GameState& s) {
    if (s.winner) return nullptr;
    for (const Pile& p : s.board.piles()) {
      if (!p.alternates()) return nullptr;
    }
    json a = analysis_to_json(sls::analyze(s));
    bool fits = static_cast<int>(s.total_chips()) <= cfg_.solve_max_chips &&
                static_cast<int>(s.board.size()) <= cfg_.solve_max_piles;
    if (fits) {
      Color w = solver_->winner(s);
      a["solver_winner"] = detail::letter(w);
      a["provenance"] = "solver-verified";
    } else {
      a["solver_winner"] = nullptr;
      a["provenance"] = "predicate (proved optimal)";
    }
    return a;
  }

 private:
  static Response bad_request(const std::string& msg) { return {400, {{"error", msg}}}; }
  static Response conflict(const std::string& msg) { return {409, {{"error", msg}}}; }
  static Response not_found(const std::string& id) { return {404, {{"error", "unknown session '" + id + "'"}}}; }

  std::shared_ptr<Session> find(const std::string& id) const {
    std::shared_lock r(store_mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  std::string new_id() {
    std::lock_guard lock(rng_mu_);
    std::uniform_int_distribution<std::uint64_t> d;
    std::ostringstream os;
    os << std::hex << d(rng_) << d(rng_);
    return os.str();
  }

  std::uint64_t rng_seed() {
    std::lock_guard lock(rng_mu_);
    return rng_();
  }

  std::unique_ptr<PolicyRunner> make_engine(const std::string& name, std::uint64_t seed) {
    if (name.rfind("scripted:", 0) == 0) throw std::invalid_argument("scripted policies are not available to the service");
    return std::make_unique<PolicyRunner>(parse_policy(name), seed, solver_);
  }

  void run_engine(Session& s, std::vector<TransitionRecord>& moves) {
    while (!s.state.winner) {
      Color owner = detail::decision_owner(s.state);
      if (owner == s.human) break;
      Action a = s.engine->choose(s.state);
      TransitionRecord t = apply_action(s.state, owner, a);
      s.state = t.state;
      s.history.push_back(t);
      moves.push_back(std::move(t));
    }
  }

  static json transitions_json(const std::vector<TransitionRecord>& moves) {
    json arr = json::array();
    for (const auto& t : moves) arr.push_back(transition_to_json(t));
    return arr;
  }

  json view(const Session& s) {
    json v;
    v["session_id"] = s.id;
    v["state"] = state_to_json(s.state);
    v["human"] = detail::letter(s.human);
    v["engine_policy"] = s.engine_policy;
    v["history_length"] = s.history.size();
    v["created"] = s.created;
    v["updated"] = s.updated;
    json legal = json::array();
    if (!s.state.winner) {
      ActionSet set = legal_actions(s.state);
      v["decision"] = detail::letter(set.actor);
      if (set.actor == s.human) {
        for (const auto& a : set.actions) legal.push_back(action_to_json(a));
      }
    } else {
      v["decision"] = nullptr;
    }
    v["legal_actions"] = legal;
    v["analysis"] = analysis_json(s.state);
    return v;
  }

  void persist(const Session& s) {
    if (!cfg_.state_dir) return;
    std::filesystem::create_directories(*cfg_.state_dir);
    json doc;
    doc["id"] = s.id;
    doc["initial"] = state_to_json(s.initial);
    doc["state"] = state_to_json(s.state);
    doc["human"] = detail::letter(s.human);
    doc["engine_policy"] = s.engine_policy;
    doc["engine_seed"] = s.engine_seed;
    doc["created"] = s.created;
    doc["updated"] = s.updated;
    json hist = json::array();
    for (const auto& t : s.history) hist.push_back({{"actor", detail::letter(t.actor)}, {"action", action_to_json(t.action)}});
    doc["history"] = hist;
    auto path = *cfg_.state_dir / (s.id + ".json");
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp);
      out << doc.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, path);
  }

  std::shared_ptr<Session> load_session(const json& doc) {
    auto s = std::make_shared<Session>();
    if (!doc.contains("id") || !doc["id"].is_string()) throw schema_error("missing id");
    s->id = doc["id"].get<std::string>();
    s->initial = state_from_json(doc.at("initial"));
    s->human = detail::color_field(doc, "human");
    s->engine_policy = doc.value("engine_policy", std::string("s"));
    s->engine_seed = doc.value("engine_seed", std::uint64_t{0});
    s->created = doc.value("created", std::string());
    s->updated = doc.value("updated", std::string());
    s->engine = make_engine(s->engine_policy, s->engine_seed);
    GameState cur = s->initial;
    for (const auto& h : doc.at("history")) {
      Color actor = detail::color_field(h, "actor");
      Action a = action_from_json(h.at("action"));
      if (actor != s->human) {
        // keep the engine's generator in step with the recorded decisions
        Action expected = s->engine->choose(cur);
        if (!(expected == a)) throw std::runtime_error("engine decision in history does not replay");
      }
      TransitionRecord t = apply_action(cur, actor, a);
      cur = t.state;
      s->history.push_back(std::move(t));
    }
    GameState stored = state_from_json(doc.at("state"));
    if (!(stored == cur)) throw std::runtime_error("history replay does not reproduce the stored state");
    s->state = cur;
    return s;
  }

  Config cfg_;
  std::shared_ptr<Solver> solver_;
  mutable std::shared_mutex store_mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex rng_mu_;
  std::mt19937_64 rng_{std::random_device{}()};
};

}  // namespace sls::service
