#pragma once

// Verification sweeps: exhaustive comparison of the closed-form predicate
// against the solver, restricted board classes, rule tables, and seeded
// playout suites for the structural invariants and the induction measures.
// Failures are reported as data (with a reproduction state), never thrown.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "sls/classifier.hpp"
#include "sls/notation.hpp"
#include "sls/playout.hpp"
#include "sls/solver.hpp"
#include "sls/strategy.hpp"

namespace sls {

enum class TheoremId {
  TypeOne,
  GeneralizedTypeOne,
  TypeTwo,
  GeneralizedTypeTwo,
  Final,
  SameActivePlayer,
  DifferentActivePlayer,
  Alternation,
  GuardNonDecrease,
  NuMeasure,
  MuMeasure,
  Potential,
};

struct TheoremInfo {
  TheoremId id;
  const char* code;  // identifier accepted by the CLI
  const char* title;
};

inline constexpr TheoremInfo kTheorems[] = {
    {TheoremId::TypeOne, "T3.5", "type I boards: Blue wins iff m_b > n_r"},
    {TheoremId::GeneralizedTypeOne, "T3.10", "generalized type I boards"},
    {TheoremId::TypeTwo, "T4.7", "type II boards: m_b > 0 and m_b + |beta|_b > n_r"},
    {TheoremId::GeneralizedTypeTwo, "T4.12", "generalized type II boards"},
    {TheoremId::Final, "Final", "general characterization and Strategy S optimality"},
    {TheoremId::SameActivePlayer, "T2.1", "placements that keep the turn"},
    {TheoremId::DifferentActivePlayer, "T2.2", "placements that pass the turn"},
    {TheoremId::Alternation, "P2.3", "piles alternate outside pending captures"},
    {TheoremId::GuardNonDecrease, "P2.4", "capturing an own-topped pile never loses guards"},
    {TheoremId::NuMeasure, "Nu", "nu strictly decreases under Strategy S (Blue winning, generalized type I)"},
    {TheoremId::MuMeasure, "Mu", "mu strictly decreases under Strategy S (Red winning, generalized type II)"},
    {TheoremId::Potential, "Potential", "termination potential strictly decreases; chips are conserved"},
};

inline const TheoremInfo& theorem_info(TheoremId id) {
  for (const auto& t : kTheorems) {
    if (t.id == id) return t;
  }
  throw std::invalid_argument("unknown theorem id");
}

inline TheoremId parse_theorem(std::string_view code) {
  for (const auto& t : kTheorems) {
    if (code == t.code) return t.id;
  }
  std::string known;
  for (const auto& t : kTheorems) known += std::string(known.empty() ? "" : ", ") + t.code;
  throw std::invalid_argument("unknown theorem id '" + std::string(code) + "' (known: " + known + ")");
}

struct VerifyOptions {
  Bounds bounds;
  int workers = 1;
  bool check_strategy = true;
  std::uint64_t seed = 20240601;  // playout suites
  int playouts = 10000;           // Alternation, GuardNonDecrease, Potential
  int traces = 1000;              // NuMeasure, MuMeasure
  std::size_t max_memo_entries = std::size_t{1} << 31;
};

// One compared item. For exhaustive sweeps `key` is the canonical key text;
// for playout suites it is the reproduction state.
struct SweepRecord {
  std::string key;
  bool predicate = false;  // closed form says the active player wins
  bool solver = false;     // solver says the active player wins
  bool strategy_ok = true;
  bool agree = true;
  BoardType type = BoardType::General;
  std::string reason;
};

struct TypeTally {
  std::uint64_t states = 0;
  std::uint64_t agreements = 0;
};

struct SweepReport {
  std::string theorem;
  Bounds bounds;
  int workers = 1;
  std::uint64_t seed = 0;
  std::uint64_t states_enumerated = 0;  // items compared
  std::uint64_t states_visited = 0;     // states produced by the enumerator (before class filtering)
  std::uint64_t expected_visits = 0;    // closed-form enumeration count
  std::uint64_t agreements = 0;
  std::vector<SweepRecord> disagreements;
  std::map<BoardType, TypeTally> per_type;
  double wall_seconds = 0;
  std::optional<std::string> error;  // resource exhaustion etc.; results are partial

  bool ok() const noexcept {
    return !error && disagreements.empty() && agreements == states_enumerated &&
           (expected_visits == 0 || states_visited == expected_visits);
  }
};

namespace detail {

// Active player as Blue.
inline GameState active_frame(const GameState& s) { return s.active == Color::Blue ? s : color_swapped(s); }

// Top-color chips counted directly from the piles (not from lengths).
struct PileTotals {
  int long_blue_b = 0;  // sum |beta_i|_b
  int long_red_r = 0;   // sum |rho_i|_r
  int max_red_r = 0;    // max |rho_i|_r
};

inline PileTotals pile_totals(const Board& b) {
  PileTotals t;
  for (const Pile& p : b.piles()) {
    if (p.size() < 2) continue;
    if (p.top() == Color::Blue) {
      t.long_blue_b += static_cast<int>(pile_count(p, Color::Blue));
    } else {
      int r = static_cast<int>(pile_count(p, Color::Red));
      t.long_red_r += r;
      t.max_red_r = std::max(t.max_red_r, r);
    }
  }
  return t;
}

// Class-specific statements of who wins, for a Blue-active frame.
inline bool reduced_formula(TheoremId id, const GameState& f) {
  const int m_b = f.blue.guards;
  const int n_r = f.red.guards;
  PileTotals t = pile_totals(f.board);
  switch (id) {
    case TheoremId::TypeOne: return m_b > n_r;
    case TheoremId::GeneralizedTypeOne: return m_b > 0 && (n_r == 0 || m_b > n_r + t.long_red_r - t.max_red_r);
    case TheoremId::TypeTwo:
    case TheoremId::GeneralizedTypeTwo: return m_b > 0 && m_b + t.long_blue_b > n_r;
    default: return winning_predicate(summarize_board(f.board), m_b, n_r);
  }
}

inline BoardType theorem_class(TheoremId id) {
  switch (id) {
    case TheoremId::TypeOne: return BoardType::TypeI;
    case TheoremId::GeneralizedTypeOne: return BoardType::GeneralizedTypeI;
    case TheoremId::TypeTwo: return BoardType::TypeII;
    case TheoremId::GeneralizedTypeTwo: return BoardType::GeneralizedTypeII;
    default: return BoardType::General;
  }
}

inline void tally(SweepReport& rep, const SweepRecord& rec) {
  ++rep.states_enumerated;
  auto& t = rep.per_type[rec.type];
  ++t.states;
  if (rec.agree) {
    ++rep.agreements;
    ++t.agreements;
  } else {
    rep.disagreements.push_back(rec);
  }
}

// Exhaustive sweep over round-boundary states within bounds. Each worker
// pulls state indices from a shared counter and shares one solver; results
// are merged in enumeration order so records are deterministic.
inline void exhaustive_sweep(TheoremId id, const VerifyOptions& opt, SweepReport& rep,
                             const std::function<void(const SweepRecord&)>& on_record) {
  std::vector<GameState> states = enumerate_states(opt.bounds);
  rep.states_visited = states.size();
  rep.expected_visits = enumeration_count(opt.bounds);
  BoardType cls = theorem_class(id);

  std::vector<std::optional<SweepRecord>> results(states.size());
  SolverOptions so;
  so.max_memo_entries = opt.max_memo_entries;
  Solver solver(so);
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::optional<std::string> error;
  std::atomic<bool> stop{false};

  auto work = [&]() {
    while (!stop.load(std::memory_order_relaxed)) {
      std::size_t i = next.fetch_add(1);
      if (i >= states.size()) return;
      const GameState& s = states[i];
      GameState f = active_frame(s);
      BoardSummary sum = summarize_board(f.board);
      if (!in_class(sum, cls)) continue;
      try {
        SweepRecord rec;
        rec.key = canonicalize(s).to_string();
        rec.type = classify(sum);
        rec.predicate = reduced_formula(id, f);
        bool general = winning_predicate(sum, f.blue.guards, f.red.guards);
        rec.solver = solver.winner(s) == s.active;
        rec.agree = rec.predicate == rec.solver;
        if (!rec.agree) rec.reason = "solver and closed form differ";
        if (rec.predicate != general) {
          rec.agree = false;
          rec.reason = "class formula differs from the general predicate";
        }
        if (opt.check_strategy) {
          Color expected = rec.predicate ? s.active : opponent(s.active);
          rec.strategy_ok = solver.winner_with_strategy_s(s, expected) == expected;
          if (!rec.strategy_ok) {
            rec.agree = false;
            rec.reason = std::string("Strategy S for ") + std::string(color_name(expected)) + " does not secure the win";
          }
        }
        results[i] = std::move(rec);
      } catch (const std::exception& e) {
        std::lock_guard lock(err_mu);
        if (!error) error = std::string(e.what()) + " while solving " + format_state(s);
        stop = true;
      }
    }
  };

  int workers = std::max(1, opt.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& r : results) {
    if (!r) continue;
    tally(rep, *r);
    if (on_record) on_record(*r);
  }
  if (error) rep.error = *error + " (partial: " + std::to_string(rep.states_enumerated) + " states compared)";
}

// Every placement kind (own or opponent color onto an empty, own-topped or
// opponent-topped pile of each length) from both movers, with every capture
// discard choice, checked against the two next-player tables.
inline void next_player_table(TheoremId id, const VerifyOptions& opt, SweepReport& rep,
                              const std::function<void(const SweepRecord&)>& on_record) {
  const int max_len = std::max(2, opt.bounds.max_pile_len);
  bool want_same = id == TheoremId::SameActivePlayer;
  int kinds_seen = 0;
  bool seen[3] = {false, false, false};
  for (Color mover : {Color::Blue, Color::Red}) {
    for (Color placed : {mover, opponent(mover)}) {
      for (int len = 0; len <= max_len; ++len) {
        for (Color top : {mover, opponent(mover)}) {
          if (len == 0 && top != mover) continue;
          Pile pile = len == 0 ? Pile{} : Pile::alternating(top, static_cast<std::size_t>(len));
          // Table rows: y on empty, y on x-pile, x on x-pile keep the turn;
          // x on empty, x on y-pile, y on y-pile pass it.
          bool own_chip = placed == mover;
          bool keeps;
          int row;
          if (len == 0) {
            keeps = !own_chip;
            row = 0;
          } else if (top == mover) {
            keeps = true;
            row = own_chip ? 2 : 1;
          } else {
            keeps = false;
            row = own_chip ? 1 : 2;
          }
          if (keeps != want_same) continue;
          seen[row] = true;

          GameState s;
          s.board = Board({pile, Pile{}});
          s.hand(mover) = {2, 2};
          s.hand(opponent(mover)) = {1, 1};
          s.active = mover;
          s.phase = Phase::turn_start();
          TransitionRecord first = apply_action(s, mover, Action::place(0, placed));

          std::vector<TransitionRecord> ends;
          if (first.state.phase.kind == PhaseKind::AwaitCaptureDiscard) {
            for (const Action& a : legal_actions(first.state).actions) {
              ends.push_back(apply_action(first.state, legal_actions(first.state).actor, a));
            }
          } else {
            ends.push_back(first);
          }
          bool capture_expected = len > 0 && top == placed;
          for (const TransitionRecord& end : ends) {
            SweepRecord rec;
            rec.key = format_state(s) + " | " + to_string(Action::place(0, placed)) +
                      (end.action.kind == ActionKind::CaptureDiscard ? " | " + to_string(end.action) : "");
            rec.type = BoardType::General;
            Color expected = keeps ? mover : opponent(mover);
            rec.predicate = keeps;
            rec.solver = end.state.active == mover;
            rec.agree = end.state.active == expected && first.capture == capture_expected &&
                        end.round_ended == (expected != mover);
            if (!rec.agree) rec.reason = "next active player does not match the table";
            tally(rep, rec);
            if (on_record) on_record(rec);
          }
        }
      }
    }
  }
  for (bool b : seen) kinds_seen += b ? 1 : 0;
  if (kinds_seen != 3) rep.error = "table rows not all exercised";
}

inline GameState sample_state(const std::vector<GameState>& pool, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  return pool[pick(rng)];
}

// Random-vs-random playouts from states sampled within bounds, checking one
// structural invariant on every transition.
inline void playout_suite(TheoremId id, const VerifyOptions& opt, SweepReport& rep,
                          const std::function<void(const SweepRecord&)>& on_record) {
  std::vector<GameState> pool;
  for_each_state(opt.bounds, [&](const GameState& s) {
    if (!start_round(s).winner) pool.push_back(s);
  });
  if (pool.empty()) {
    rep.error = "bounds contain no playable state";
    return;
  }
  std::mt19937_64 rng(opt.seed);
  for (int n = 0; n < opt.playouts; ++n) {
    GameState start = sample_state(pool, rng);
    std::uint64_t seed = rng();
    PlayoutResult run = playout(start, policy::UniformRandom{}, policy::UniformRandom{}, seed);
    SweepRecord rec;
    rec.key = format_state(start) + " seed=" + std::to_string(seed);
    rec.type = BoardType::General;
    GameState prev = start;
    for (std::size_t i = 0; i < run.transitions.size() && rec.agree; ++i) {
      const TransitionRecord& t = run.transitions[i];
      const GameState& next = t.state;
      switch (id) {
        case TheoremId::Alternation: {
          if (next.phase.kind != PhaseKind::AwaitCaptureDiscard) {
            for (const Pile& p : next.board.piles()) {
              if (!p.alternates()) {
                rec.agree = false;
                rec.reason = "pile " + p.to_string() + " does not alternate after step " + std::to_string(i);
              }
            }
          }
          if (t.action.kind == ActionKind::Place) {
            const Pile& played = next.board[static_cast<std::size_t>(t.action.pile)];
            bool triggered = played.size() >= 2 && played.capturable();
            if (triggered != t.capture) {
              rec.agree = false;
              rec.reason = "capture trigger mismatch at step " + std::to_string(i);
            }
          }
          break;
        }
        case TheoremId::GuardNonDecrease: {
          // own chip onto own-topped pile, resolved by the next transition
          if (t.action.kind == ActionKind::Place && t.action.color == t.actor && t.capture &&
              next.phase.capturer == t.actor && i + 1 < run.transitions.size()) {
            int before = prev.hand(t.actor).guards;
            int after = run.transitions[i + 1].state.hand(t.actor).guards;
            if (after < before) {
              rec.agree = false;
              rec.reason = "guards fell from " + std::to_string(before) + " to " + std::to_string(after) +
                           " at step " + std::to_string(i);
            }
          }
          break;
        }
        case TheoremId::Potential: {
          // a move into a finished game (declined rescue) ends play; no decrease needed
          if (!next.winner && !(total_potential(next) < total_potential(prev))) {
            rec.agree = false;
            rec.reason = "potential did not decrease at step " + std::to_string(i) + " (" + to_string(t.action) + ")";
          }
          if (prev.total_chips() != next.total_chips() + static_cast<std::size_t>(t.discarded)) {
            rec.agree = false;
            rec.reason = "chip count not conserved at step " + std::to_string(i);
          }
          break;
        }
        default: break;
      }
      prev = next;
    }
    tally(rep, rec);
    if (on_record) on_record(rec);
  }
}

inline bool nu_hypothesis(const GameState& s) {
  BoardSummary sum = summarize_board(s.board);
  int m_b = s.blue.guards;
  int n_r = s.red.guards;
  if (sum.long_blue_count() != 0 || m_b <= 0 || n_r <= 0) return false;
  PileTotals t = pile_totals(s.board);
  return m_b > n_r + t.long_red_r - t.max_red_r;
}

inline bool mu_hypothesis(const GameState& s) {
  BoardSummary sum = summarize_board(s.board);
  if (!in_class(sum, BoardType::GeneralizedTypeII) || s.blue.guards <= 0) return false;
  return s.blue.guards + pile_totals(s.board).long_blue_b <= s.red.guards;
}

// Blue about to make the round-ending Strategy S placement: every b-topped
// pile captured and every prisoner discarded.
inline bool blue_pre_placement(const GameState& s) {
  if (s.winner || !s.phase.is_play() || s.active != Color::Blue) return false;
  if (s.blue.guards <= 0 || s.blue.prisoners != 0) return false;
  for (const Pile& p : s.board.piles()) {
    if (!p.empty() && p.top() == Color::Blue) return false;
  }
  return true;
}

// Strategy S against a random opponent from states meeting a measure's
// hypotheses; the measure must strictly fall between consecutive sample
// points that still meet them, and the S side must win.
inline void measure_suite(TheoremId id, const VerifyOptions& opt, SweepReport& rep,
                          const std::function<void(const SweepRecord&)>& on_record) {
  bool is_nu = id == TheoremId::NuMeasure;
  std::vector<GameState> pool;
  for_each_state(opt.bounds, [&](const GameState& s) {
    if (s.active != Color::Blue) return;
    if (is_nu ? nu_hypothesis(s) : mu_hypothesis(s)) pool.push_back(s);
  });
  if (pool.empty()) {
    rep.error = "bounds contain no state meeting the hypotheses";
    return;
  }
  auto measure = [&](const GameState& s) {
    BoardSummary sum = summarize_board(s.board);
    return is_nu ? nu(sum.long_red, s.red.prisoners, s.red.guards) : mu(sum.long_blue, s.blue.guards, s.blue.prisoners);
  };
  auto sample_point = [&](const GameState& s, const GameState& before) {
    if (is_nu) return blue_pre_placement(s);
    return s.active == Color::Blue && s.phase.kind == PhaseKind::TurnStart && before.active == Color::Red && !s.winner;
  };
  auto hypothesis = [&](const GameState& s) { return is_nu ? nu_hypothesis(s) : mu_hypothesis(s); };

  std::mt19937_64 rng(opt.seed);
  Color s_side = is_nu ? Color::Blue : Color::Red;
  for (int n = 0; n < opt.traces; ++n) {
    GameState start = pool[static_cast<std::size_t>(n) % pool.size()];
    std::uint64_t seed = rng();
    PolicySpec blue = is_nu ? PolicySpec{policy::StrategyS{}} : PolicySpec{policy::UniformRandom{}};
    PolicySpec red = is_nu ? PolicySpec{policy::UniformRandom{}} : PolicySpec{policy::StrategyS{}};
    PlayoutResult run = playout(start, blue, red, seed);

    SweepRecord rec;
    rec.key = format_state(start) + " seed=" + std::to_string(seed);
    rec.type = classify(summarize_board(start.board));
    std::optional<int> last = is_nu ? std::optional<int>{} : std::optional<int>{measure(start)};
    bool tracking = true;
    GameState prev = start;
    auto visit = [&](const GameState& s) {
      if (!tracking || !rec.agree) return;
      if (!hypothesis(s)) {
        tracking = false;
        return;
      }
      int m = measure(s);
      if (last && m >= *last) {
        rec.agree = false;
        rec.reason = std::string(is_nu ? "nu" : "mu") + " went from " + std::to_string(*last) + " to " +
                     std::to_string(m) + " at " + format_state(s);
      }
      last = m;
    };
    if (is_nu && sample_point(start, start)) visit(start);
    for (const TransitionRecord& t : run.transitions) {
      if (sample_point(t.state, prev)) visit(t.state);
      prev = t.state;
    }
    rec.predicate = true;
    rec.solver = run.winner == s_side;
    if (run.winner != s_side && rec.agree) {
      rec.agree = false;
      rec.reason = std::string("Strategy S side ") + std::string(color_name(s_side)) + " lost";
    }
    tally(rep, rec);
    if (on_record) on_record(rec);
  }
}

}  // namespace detail

inline SweepReport verify_theorem(TheoremId id, const VerifyOptions& opt,
                                  const std::function<void(const SweepRecord&)>& on_record = {}) {
  opt.bounds.validate();
  SweepReport rep;
  rep.theorem = theorem_info(id).code;
  rep.bounds = opt.bounds;
  rep.workers = std::max(1, opt.workers);
  rep.seed = opt.seed;
  auto t0 = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case TheoremId::TypeOne:
      case TheoremId::GeneralizedTypeOne:
      case TheoremId::TypeTwo:
      case TheoremId::GeneralizedTypeTwo:
      case TheoremId::Final: detail::exhaustive_sweep(id, opt, rep, on_record); break;
      case TheoremId::SameActivePlayer:
      case TheoremId::DifferentActivePlayer: detail::next_player_table(id, opt, rep, on_record); break;
      case TheoremId::Alternation:
      case TheoremId::GuardNonDecrease:
      case TheoremId::Potential: detail::playout_suite(id, opt, rep, on_record); break;
      case TheoremId::NuMeasure:
      case TheoremId::MuMeasure: detail::measure_suite(id, opt, rep, on_record); break;
    }
  } catch (const std::exception& e) {
    rep.error = std::string(e.what()) + " (partial: " + std::to_string(rep.states_enumerated) + " items compared)";
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Oracle equivalence plus Strategy S optimality over every state in bounds.
inline SweepReport verify_characterization(const VerifyOptions& opt,
                                           const std::function<void(const SweepRecord&)>& on_record = {}) {
  return verify_theorem(TheoremId::Final, opt, on_record);
}

}  // namespace sls
