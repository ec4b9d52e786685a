// sls: evaluate, solve, verify and play So Long Sucker positions.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "sls/classifier.hpp"
#include "sls/json_io.hpp"
#include "sls/notation.hpp"
#include "sls/playout.hpp"
#include "sls/service.hpp"
#include "sls/solver.hpp"
#include "sls/verifier.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kVerifyFailure = 3;

struct StateFlags {
  std::string state;
  std::string board;
  std::string blue = "0,0";
  std::string red = "0,0";
  std::string active = "b";

  // `play` uses --blue/--red for policies, so its hands move to --blue-hand/--red-hand.
  void add(CLI::App* cmd, bool hand_suffix = false) {
    std::string b = hand_suffix ? "--blue-hand" : "--blue";
    std::string r = hand_suffix ? "--red-hand" : "--red";
    cmd->add_option("--state", state, "full state notation (overrides the other state flags)");
    cmd->add_option("--board", board, "piles separated by commas, bottom to top, '_' for empty (e.g. _,rb,b)");
    cmd->add_option(b, blue, "Blue's hand as guards,prisoners: m_b,m_r")->capture_default_str();
    cmd->add_option(r, red, "Red's hand as guards,prisoners: n_r,n_b")->capture_default_str();
    cmd->add_option("--active", active, "active player, b or r")->capture_default_str();
  }

  sls::GameState parse() const {
    if (!state.empty()) return sls::parse_state(state);
    if (board.empty()) throw std::invalid_argument("--board is required (or --state)");
    return sls::parse_state("board=" + board + " blue=" + blue + " red=" + red + " active=" + active);
  }
};

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string lengths(const std::vector<int>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + "]";
}

void print_summary(const char* label, const sls::BoardSummary& s) {
  std::cout << label << ": k_e=" << s.empty << " k_r=" << s.red_singletons << " k_b=" << s.blue_singletons
            << " long_r=" << lengths(s.long_red) << " long_b=" << lengths(s.long_blue) << "\n";
}

int cmd_eval(const StateFlags& flags, bool records) {
  sls::GameState s = flags.parse();
  sls::AnalysisReport r = sls::analyze(s);
  if (records) {
    sls::json j = sls::analysis_to_json(r);
    j["state"] = sls::state_to_json(s);
    std::cout << j.dump() << "\n";
    return kOk;
  }
  std::cout << "state: " << sls::format_state(s) << "\n";
  print_summary("summary", r.summary);
  if (r.active == sls::Color::Red) print_summary("active frame", r.active_frame);
  std::cout << "type: " << sls::board_type_name(r.board_type) << "\n"
            << "predicate: " << yes_no(r.active_wins) << " (active " << sls::color_letter(r.active) << ")\n"
            << "predicted winner: " << sls::color_letter(r.predicted_winner) << "\n"
            << "nu: " << r.nu_value << "\n"
            << "mu: " << r.mu_value << "\n";
  return kOk;
}

int cmd_solve(const StateFlags& flags, bool records, const std::string& fixed_color, const std::string& policy) {
  sls::GameState s = flags.parse();
  sls::Solver solver;
  sls::SolveResult r;
  if (!fixed_color.empty()) {
    auto c = sls::color_from_letter(fixed_color.size() == 1 ? fixed_color[0] : '?');
    if (!c) throw std::invalid_argument("--fix takes b or r");
    r = solver.solve_with_policy(s, *c, sls::parse_policy(policy));
  } else {
    r = solver.solve(s);
  }
  if (records) {
    sls::json j = sls::solve_result_to_json(r);
    j["state"] = sls::state_to_json(s);
    std::cout << j.dump() << "\n";
    return kOk;
  }
  std::cout << "state: " << sls::format_state(s) << "\n"
            << "winner: " << sls::color_letter(r.winner) << "\n"
            << "nodes: " << r.nodes_expanded << " memo hits: " << r.memo_hits << "\n"
            << "principal variation:\n";
  for (const auto& p : r.principal_variation) std::cout << "  " << sls::color_letter(p.actor) << ": " << sls::to_string(p.action) << "\n";
  return kOk;
}

struct VerifyFlags {
  std::string theorem = "Final";
  sls::VerifyOptions opt;
  bool skip_strategy = false;
};

int cmd_verify(VerifyFlags f, bool records) {
  sls::TheoremId id = sls::parse_theorem(f.theorem);
  f.opt.check_strategy = !f.skip_strategy;
  f.opt.bounds.validate();
  std::function<void(const sls::SweepRecord&)> on_record;
  if (records) {
    on_record = [](const sls::SweepRecord& r) {
      if (!r.agree) std::cout << sls::sweep_record_to_json(r).dump() << "\n";
    };
  }
  sls::SweepReport rep = sls::verify_theorem(id, f.opt, on_record);
  std::uint64_t strategy_failures = 0;
  for (const auto& d : rep.disagreements) strategy_failures += d.strategy_ok ? 0 : 1;
  if (records) {
    sls::json j = sls::sweep_report_to_json(rep);
    j.erase("disagreements");
    j["disagreement_count"] = rep.disagreements.size();
    j["strategy_failures"] = strategy_failures;
    j["strategy_checked"] = f.opt.check_strategy;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "theorem " << rep.theorem << ": " << sls::theorem_info(id).title << "\n"
              << "bounds: piles=" << rep.bounds.piles << " max-pile-len=" << rep.bounds.max_pile_len
              << " max-hand=" << rep.bounds.max_hand << " workers=" << rep.workers << "\n"
              << "compared: " << rep.states_enumerated << " agreements: " << rep.agreements
              << " disagreements: " << rep.disagreements.size() << " strategy failures: " << strategy_failures << "\n";
    if (rep.expected_visits) std::cout << "visited: " << rep.states_visited << " of " << rep.expected_visits << "\n";
    for (const auto& [type, t] : rep.per_type) {
      std::cout << "  " << sls::board_type_name(type) << ": " << t.agreements << "/" << t.states << "\n";
    }
    for (std::size_t i = 0; i < rep.disagreements.size() && i < 20; ++i) {
      const auto& d = rep.disagreements[i];
      std::cout << "  mismatch " << d.key << " predicate=" << yes_no(d.predicate) << " solver=" << yes_no(d.solver)
                << (d.reason.empty() ? "" : " (" + d.reason + ")") << "\n";
    }
    if (rep.error) std::cout << "error: " << *rep.error << "\n";
    std::cout << "time: " << rep.wall_seconds << " s\n" << (rep.ok() ? "OK" : "FAILED") << "\n";
  }
  return rep.ok() ? kOk : kVerifyFailure;
}

int cmd_play(const StateFlags& flags, bool records, const std::string& blue, const std::string& red, std::uint64_t seed) {
  sls::GameState s = flags.parse();
  auto result = sls::playout(s, sls::parse_policy(blue), sls::parse_policy(red), seed);
  if (!records) std::cout << "start: " << sls::format_state(s) << "\n";
  for (const auto& t : result.transitions) {
    if (records) {
      std::cout << sls::transition_to_json(t).dump() << "\n";
    } else {
      std::cout << sls::color_letter(t.actor) << ": " << sls::to_string(t.action) << (t.capture ? " [capture]" : "")
                << (t.round_ended ? " [round ends]" : "") << "\n  " << sls::format_state(t.state) << "\n";
    }
  }
  if (records) {
    std::cout << sls::json{{"winner", sls::detail::letter(result.winner)}, {"transitions", result.transitions.size()}}.dump() << "\n";
  } else {
    std::cout << "winner: " << sls::color_letter(result.winner) << " after " << result.transitions.size() << " transitions\n";
  }
  return kOk;
}

int cmd_serve(int port, const std::string& host, const std::string& state_dir) {
  sls::service::Config cfg = sls::service::config_from_env();
  if (!state_dir.empty()) cfg.state_dir = state_dir;
  sls::service::Service svc(cfg);
  auto restored = svc.restore();
  std::cerr << "restored " << restored.restored << " session(s)";
  if (!restored.errors.empty()) std::cerr << ", skipped " << restored.errors.size();
  std::cerr << "\n";
  httplib::Server server;
  svc.mount(server);
  std::cerr << "listening on " << host << ":" << port << "\n";
  if (!server.listen(host, port)) {
    std::cerr << "cannot bind " << host << ":" << port << "\n";
    return kInputError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"So Long Sucker (two players, two colors): analysis, exact solving and verification"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "records"}))->capture_default_str();

  StateFlags eval_state, solve_state, play_state;
  auto* eval = app.add_subcommand("eval", "closed-form analysis of a round-boundary state");
  eval_state.add(eval);

  auto* solve = app.add_subcommand("solve", "exact winner with a principal variation");
  solve_state.add(solve);
  std::string fix_color, fix_policy = "s";
  solve->add_option("--fix", fix_color, "color whose play is fixed to --policy (b or r)");
  solve->add_option("--policy", fix_policy, "policy for the fixed color: s, adversarial, scripted:<file>")->capture_default_str();

  VerifyFlags vf;
  vf.opt.bounds = {3, 4, 3};
  auto* verify = app.add_subcommand("verify", "check a result against the exact solver or a rule property");
  verify->add_option("--theorem", vf.theorem, "T3.5 T3.10 T4.7 T4.12 Final T2.1 T2.2 P2.3 P2.4 Nu Mu Potential")->capture_default_str();
  verify->add_option("--piles", vf.opt.bounds.piles, "number of piles k")->capture_default_str();
  verify->add_option("--max-pile-len", vf.opt.bounds.max_pile_len, "longest pile")->capture_default_str();
  verify->add_option("--max-hand", vf.opt.bounds.max_hand, "largest hand (guards + prisoners)")->capture_default_str();
  verify->add_option("--workers", vf.opt.workers, "solver threads")->check(CLI::PositiveNumber)->capture_default_str();
  verify->add_option("--seed", vf.opt.seed, "seed for playout suites")->capture_default_str();
  verify->add_option("--playouts", vf.opt.playouts, "random playouts for P2.3, P2.4, Potential")->capture_default_str();
  verify->add_option("--traces", vf.opt.traces, "strategy traces for Nu, Mu")->capture_default_str();
  verify->add_flag("--skip-strategy", vf.skip_strategy, "skip the Strategy S optimality check in sweeps");

  auto* play = app.add_subcommand("play", "play two policies against each other");
  play_state.add(play, true);
  std::string blue_policy = "s", red_policy = "s";
  std::uint64_t seed = 1;
  play->add_option("--blue", blue_policy, "s, random[:seed], adversarial, scripted:<file>")->capture_default_str();
  play->add_option("--red", red_policy, "s, random[:seed], adversarial, scripted:<file>")->capture_default_str();
  play->add_option("--seed", seed, "seed for random policies")->capture_default_str();

  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  int port = 8080;
  if (const char* p = std::getenv("SLS_PORT"); p && *p) port = std::atoi(p);
  std::string host = "127.0.0.1", state_dir;
  serve->add_option("--port", port, "listen port (env SLS_PORT)")->capture_default_str();
  serve->add_option("--host", host, "listen address")->capture_default_str();
  serve->add_option("--state-dir", state_dir, "snapshot directory (env SLS_STATE_DIR)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  bool records = format == "records";
  try {
    if (*eval) return cmd_eval(eval_state, records);
    if (*solve) return cmd_solve(solve_state, records, fix_color, fix_policy);
    if (*verify) return cmd_verify(vf, records);
    if (*play) return cmd_play(play_state, records, blue_policy, red_policy, seed);
    if (*serve) return cmd_serve(port, host, state_dir);
  } catch (const sls::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const sls::terminal_state& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
