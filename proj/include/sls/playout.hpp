#pragma once

// Runs two policies against each other to the end of the game.

#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sls/notation.hpp"
#include "sls/rules.hpp"
#include "sls/solver.hpp"
#include "sls/strategy.hpp"

namespace sls {

class policy_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A PolicySpec bound to its runtime state (random generator, script cursor,
// shared solver for the adversarial policy).
class PolicyRunner {
 public:
  PolicyRunner(PolicySpec spec, std::uint64_t fallback_seed, std::shared_ptr<Solver> solver = nullptr)
      : spec_(std::move(spec)), solver_(std::move(solver)) {
    if (const auto* r = std::get_if<policy::UniformRandom>(&spec_)) {
      rng_.seed(r->seed.value_or(fallback_seed));
    }
    if (std::holds_alternative<policy::Adversarial>(spec_) && !solver_) solver_ = std::make_shared<Solver>();
  }

  Action choose(const GameState& s) {
    ActionSet set = legal_actions(s);
    if (std::holds_alternative<policy::StrategyS>(spec_)) return strategy_s_action(s);
    if (std::holds_alternative<policy::UniformRandom>(spec_)) {
      std::uniform_int_distribution<std::size_t> pick(0, set.actions.size() - 1);
      return set.actions[pick(rng_)];
    }
    if (std::holds_alternative<policy::Adversarial>(spec_)) {
      for (const Action& a : set.actions) {
        GameState child = detail::apply_unchecked(s, set.actor, a).state;
        if (solver_->winner(child) == set.actor) return a;
      }
      return set.actions.front();
    }
    const auto& script = std::get<policy::Scripted>(spec_).actions;
    if (cursor_ < script.size()) return script[cursor_++];
    return strategy_s_action(s);
  }

  const PolicySpec& spec() const noexcept { return spec_; }

 private:
  PolicySpec spec_;
  std::shared_ptr<Solver> solver_;
  std::mt19937_64 rng_;
  std::size_t cursor_ = 0;
};

struct PlayoutResult {
  Color winner = Color::Blue;
  std::vector<TransitionRecord> transitions;
};

// Deterministic for a given seed. Random policies without their own seed
// draw from `seed` (offset per color so the two sides differ).
inline PlayoutResult playout(const GameState& start, const PolicySpec& blue, const PolicySpec& red, std::uint64_t seed,
                             std::shared_ptr<Solver> solver = nullptr) {
  if (start.winner) throw terminal_state();
  PolicyRunner runners[2] = {PolicyRunner(blue, seed * 2 + 1, solver), PolicyRunner(red, seed * 2 + 2, solver)};
  PlayoutResult out;
  GameState cur = start;
  while (!cur.winner) {
    Color actor = legal_actions(cur).actor;
    Action a = runners[static_cast<int>(actor)].choose(cur);
    try {
      out.transitions.push_back(apply_action(cur, actor, a));
    } catch (const illegal_action& e) {
      throw policy_error(std::string(color_name(actor)) + " policy '" + policy_name(runners[static_cast<int>(actor)].spec()) +
                         "' chose illegal action '" + to_string(a) + "' at " + format_state(cur) + ": " + e.what());
    }
    cur = out.transitions.back().state;
  }
  out.winner = *cur.winner;
  return out;
}

}  // namespace sls
