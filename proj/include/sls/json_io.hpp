#pragma once

// JSON wire format for states, actions, transitions and reports.
//
// state:  {"board": ["_" | "<b|r letters bottom to top>", ...],
//          "blue": {"guards": int, "prisoners": int},
//          "red":  {"guards": int, "prisoners": int},
//          "active": "b"|"r", "phase": {...}, "winner": "b"|"r"|null}
// phase:  {"kind": "turn_start"|"in_round"|"await_capture_discard"|"await_rescue_donation",
//          "pile": int, "capturer": "b"|"r"}   (pile/capturer only while a capture is pending)
// action: {"type": "place"|"capture_discard"|"discard_prisoner"|"donate_prisoner"|"rescue",
//          "pile": int?, "color": "b"|"r"?, "donate": bool?}

#include <json.hpp>
#include <stdexcept>
#include <string>

#include "sls/classifier.hpp"
#include "sls/core_model.hpp"
#include "sls/notation.hpp"
#include "sls/rules.hpp"
#include "sls/solver.hpp"
#include "sls/verifier.hpp"

namespace sls {

using json = nlohmann::json;

class schema_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string letter(Color c) { return std::string(1, color_letter(c)); }

inline Color color_field(const json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_string()) throw schema_error(std::string("field '") + name + "' must be \"b\" or \"r\"");
  auto s = j[name].get<std::string>();
  if (s == "b") return Color::Blue;
  if (s == "r") return Color::Red;
  throw schema_error(std::string("field '") + name + "' must be \"b\" or \"r\"");
}

inline int int_field(const json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_number_integer()) throw schema_error(std::string("field '") + name + "' must be an integer");
  return j[name].get<int>();
}

}  // namespace detail

inline json hand_to_json(const Hand& h) { return {{"guards", h.guards}, {"prisoners", h.prisoners}}; }

inline Hand hand_from_json(const json& j) {
  if (!j.is_object()) throw schema_error("hand must be an object");
  Hand h{detail::int_field(j, "guards"), detail::int_field(j, "prisoners")};
  if (h.guards < 0 || h.prisoners < 0) throw schema_error("hand counts must be non-negative");
  return h;
}

inline json phase_to_json(const Phase& p) {
  json j = {{"kind", phase_name(p.kind)}};
  if (p.kind == PhaseKind::AwaitCaptureDiscard) {
    j["pile"] = p.pile;
    j["capturer"] = detail::letter(p.capturer);
  }
  return j;
}

inline Phase phase_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw schema_error("phase needs a 'kind'");
  auto k = j["kind"].get<std::string>();
  if (k == "turn_start") return Phase::turn_start();
  if (k == "in_round") return Phase::in_round();
  if (k == "await_rescue_donation") return Phase::await_rescue();
  if (k == "await_capture_discard") return Phase::await_capture(detail::int_field(j, "pile"), detail::color_field(j, "capturer"));
  throw schema_error("unknown phase kind '" + k + "'");
}

inline json state_to_json(const GameState& s) {
  json board = json::array();
  for (const Pile& p : s.board.piles()) board.push_back(p.to_string());
  return {{"board", board},
          {"blue", hand_to_json(s.blue)},
          {"red", hand_to_json(s.red)},
          {"active", detail::letter(s.active)},
          {"phase", phase_to_json(s.phase)},
          {"winner", s.winner ? json(detail::letter(*s.winner)) : json(nullptr)}};
}

inline GameState state_from_json(const json& j) {
  if (!j.is_object()) throw schema_error("state must be an object");
  if (!j.contains("board") || !j["board"].is_array()) throw schema_error("field 'board' must be an array of pile strings");
  std::vector<Pile> piles;
  for (const auto& p : j["board"]) {
    if (!p.is_string()) throw schema_error("pile entries must be strings");
    try {
      piles.push_back(Pile::parse(p.get<std::string>()));
    } catch (const parse_error& e) {
      throw schema_error(std::string("board: ") + e.what());
    }
  }
  if (piles.empty()) throw schema_error("board needs at least one pile");
  GameState s;
  s.board = Board(std::move(piles));
  if (!j.contains("blue") || !j.contains("red")) throw schema_error("state needs 'blue' and 'red' hands");
  s.blue = hand_from_json(j["blue"]);
  s.red = hand_from_json(j["red"]);
  s.active = detail::color_field(j, "active");
  s.phase = j.contains("phase") && !j["phase"].is_null() ? phase_from_json(j["phase"]) : Phase::turn_start();
  if (j.contains("winner") && !j["winner"].is_null()) s.winner = detail::color_field(j, "winner");
  try {
    validate_state(s);
  } catch (const std::invalid_argument& e) {
    throw schema_error(e.what());
  }
  return s;
}

inline json action_to_json(const Action& a) {
  switch (a.kind) {
    case ActionKind::Place: return {{"type", "place"}, {"pile", a.pile}, {"color", detail::letter(a.color)}};
    case ActionKind::CaptureDiscard: return {{"type", "capture_discard"}, {"color", detail::letter(a.color)}};
    case ActionKind::DiscardPrisoner: return {{"type", "discard_prisoner"}};
    case ActionKind::DonatePrisoner: return {{"type", "donate_prisoner"}};
    case ActionKind::Rescue: return {{"type", "rescue"}, {"donate", a.donate}};
  }
  return {};
}

inline Action action_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) throw schema_error("action needs a 'type'");
  auto t = j["type"].get<std::string>();
  if (t == "place") return Action::place(detail::int_field(j, "pile"), detail::color_field(j, "color"));
  if (t == "capture_discard") return Action::capture_discard(detail::color_field(j, "color"));
  if (t == "discard_prisoner") return Action::discard_prisoner();
  if (t == "donate_prisoner") return Action::donate_prisoner();
  if (t == "rescue") {
    if (!j.contains("donate") || !j["donate"].is_boolean()) throw schema_error("field 'donate' must be a boolean");
    return Action::rescue(j["donate"].get<bool>());
  }
  throw schema_error("unknown action type '" + t + "'");
}

inline json transition_to_json(const TransitionRecord& t) {
  return {{"actor", detail::letter(t.actor)},
          {"action", action_to_json(t.action)},
          {"state", state_to_json(t.state)},
          {"capture", t.capture},
          {"round_ended", t.round_ended},
          {"discarded", t.discarded}};
}

inline json summary_to_json(const BoardSummary& s) {
  return {{"k_e", s.empty},
          {"k_r", s.red_singletons},
          {"k_b", s.blue_singletons},
          {"l", s.long_red_count()},
          {"h", s.long_blue_count()},
          {"long_r", s.long_red},
          {"long_b", s.long_blue}};
}

inline json analysis_to_json(const AnalysisReport& r) {
  return {{"summary", summary_to_json(r.summary)},
          {"active_frame_summary", summary_to_json(r.active_frame)},
          {"board_type", board_type_name(r.board_type)},
          {"active", detail::letter(r.active)},
          {"active_wins", r.active_wins},
          {"predicted_winner", detail::letter(r.predicted_winner)},
          {"nu", r.nu_value},
          {"mu", r.mu_value}};
}

inline json played_action_to_json(const PlayedAction& p) {
  return {{"actor", detail::letter(p.actor)}, {"action", action_to_json(p.action)}};
}

inline json solve_result_to_json(const SolveResult& r) {
  json pv = json::array();
  for (const auto& p : r.principal_variation) pv.push_back(played_action_to_json(p));
  return {{"winner", detail::letter(r.winner)},
          {"principal_variation", pv},
          {"nodes_expanded", r.nodes_expanded},
          {"memo_hits", r.memo_hits}};
}

// Line-delimited sweep record.
inline json sweep_record_to_json(const SweepRecord& r) {
  json j = {{"key", r.key}, {"predicate", r.predicate}, {"solver", r.solver}, {"agree", r.agree}};
  if (!r.strategy_ok) j["strategy_ok"] = false;
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j;
}

inline json sweep_report_to_json(const SweepReport& r) {
  json per_type = json::object();
  for (const auto& [type, tally] : r.per_type) {
    per_type[board_type_name(type)] = {{"states", tally.states}, {"agreements", tally.agreements}};
  }
  json dis = json::array();
  for (const auto& d : r.disagreements) dis.push_back(sweep_record_to_json(d));
  json j = {{"theorem", r.theorem},
            {"bounds", {{"piles", r.bounds.piles}, {"max_pile_len", r.bounds.max_pile_len}, {"max_hand", r.bounds.max_hand}}},
            {"workers", r.workers},
            {"seed", r.seed},
            {"states_enumerated", r.states_enumerated},
            {"states_visited", r.states_visited},
            {"expected_visits", r.expected_visits},
            {"agreements", r.agreements},
            {"disagreements", dis},
            {"per_type", per_type},
            {"wall_seconds", r.wall_seconds},
            {"ok", r.ok()}};
  if (r.error) j["error"] = *r.error;
  return j;
}

}  // namespace sls
