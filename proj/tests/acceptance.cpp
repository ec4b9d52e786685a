// Acceptance gate. Every check goes through the `sls verify` command line,
// so nothing beyond the CLI and the header library is needed.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "support.hpp"

using json = nlohmann::json;

namespace {

struct Run {
  int status = -1;
  json summary;
  std::string raw;
};

Run verify(const std::string& args) {
  Run r;
  auto out = testing_support::run_command(std::string(SLS_CLI_PATH) + " --format records verify " + args);
  r.status = out.status;
  r.raw = out.output;
  auto end = r.raw.find_last_not_of('\n');
  auto start = r.raw.rfind('\n', end);
  std::string last = r.raw.substr(start == std::string::npos ? 0 : start + 1, end == std::string::npos ? 0 : end + 1);
  try {
    r.summary = json::parse(last);
  } catch (const json::exception&) {
    r.summary = json::object();
  }
  return r;
}

int failures = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
  std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  if (!pass) ++failures;
}

std::string brief(const Run& r) {
  const json& s = r.summary;
  if (!s.contains("states_enumerated")) return "no summary (exit " + std::to_string(r.status) + ")";
  std::string out = std::to_string(s["states_enumerated"].get<std::uint64_t>()) + " compared, " +
                    std::to_string(s["disagreement_count"].get<std::uint64_t>()) + " disagreements, " +
                    std::to_string(s["wall_seconds"].get<double>()).substr(0, 6) + " s";
  if (s.contains("error")) out += ", error: " + s["error"].get<std::string>();
  return out;
}

bool clean(const Run& r) {
  const json& s = r.summary;
  return r.status == 0 && s.value("ok", false) && s.value("disagreement_count", 1) == 0 &&
         s.value("strategy_failures", 1) == 0 && s.value("agreements", 0) == s.value("states_enumerated", -1);
}

}  // namespace

int main() {
  Run k3 = verify("--theorem Final --piles 3 --max-pile-len 4 --max-hand 3 --workers 1");
  report(clean(k3) && k3.summary.value("states_enumerated", 0) == 33000 && k3.summary.value("wall_seconds", 1e9) < 300,
         "final characterization k=3 len<=4 hand<=3", brief(k3));

  Run k4 = verify("--theorem Final --piles 4 --max-pile-len 3 --max-hand 4 --workers 4");
  report(clean(k4) && k4.summary.value("states_enumerated", 0) == 94500 && k4.summary.value("wall_seconds", 1e9) < 1800,
         "extended sweep k=4 len<=3 hand<=4 (4 workers)", brief(k4));

  report(clean(k3) && k3.summary.value("strategy_checked", false) && k3.summary.value("strategy_failures", 1) == 0,
         "strategy S optimality over the k=3 sweep",
         std::to_string(k3.summary.value("strategy_failures", -1)) + " strategy failures");

  for (const char* id : {"T3.5", "T3.10", "T4.7", "T4.12"}) {
    Run r = verify(std::string("--theorem ") + id + " --piles 3 --max-pile-len 4 --max-hand 3");
    report(clean(r) && r.summary.value("states_enumerated", 0) > 0, std::string("reduction ") + id, brief(r));
  }

  Run same = verify("--theorem T2.1 --piles 3 --max-pile-len 4 --max-hand 3");
  Run diff = verify("--theorem T2.2 --piles 3 --max-pile-len 4 --max-hand 3");
  report(clean(same) && clean(diff), "next-player table (keep / pass)", brief(same) + " | " + brief(diff));

  for (const char* id : {"P2.3", "P2.4", "Potential"}) {
    Run r = verify(std::string("--theorem ") + id + " --piles 3 --max-pile-len 4 --max-hand 3 --playouts 10000");
    report(clean(r) && r.summary.value("states_enumerated", 0) >= 10000, std::string("playout invariant ") + id, brief(r));
  }

  for (const char* id : {"Nu", "Mu"}) {
    Run r = verify(std::string("--theorem ") + id + " --piles 3 --max-pile-len 4 --max-hand 3 --traces 1000");
    report(clean(r) && r.summary.value("states_enumerated", 0) >= 1000, std::string("measure decrease ") + id, brief(r));
  }

  Run bad = verify("--theorem Final --piles 0 --max-pile-len 1 --max-hand 1");
  report(bad.status == 2, "cli verify rejects malformed bounds", "exit " + std::to_string(bad.status));

  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
