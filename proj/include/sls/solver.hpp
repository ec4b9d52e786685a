#pragma once

// Exact game-tree evaluation with memoization on a permutation-invariant
// state key.
//
// Outcomes are win/lose, so the search is a plain AND/OR tree: the player
// deciding at a node wins iff some action leads to a position they win.
// Every transition strictly lowers total_potential, so the state graph is
// acyclic and the recursion terminates without a depth limit.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <cstring>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "sls/core_model.hpp"
#include "sls/rules.hpp"
#include "sls/strategy.hpp"

namespace sls {

class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Multiset of (top color, length) over the piles plus hands, active color
// and phase, packed in 16 bytes:
//   [0]     active | phase code << 1 | pending capturer << 3
//   [1]     pending capture pile as (length << 1 | top), 0 when none
//   [2..5]  blue guards, blue prisoners, red guards, red prisoners
//   [6..15] remaining piles as (length << 1 | top) sorted descending;
//           an empty pile is 0x01 and unused slots are 0x00
// TurnStart and InRound share a code: they admit the same actions.
struct CanonicalKey {
  static constexpr std::size_t kMaxPiles = 10;
  static constexpr int kMaxPileLength = 127;
  static constexpr int kMaxHandCount = 255;

  std::array<std::uint8_t, 16> bytes{};

  enum PhaseCode : std::uint8_t { kPlay = 0, kCapture = 1, kRescue = 2 };

  Color active() const noexcept { return static_cast<Color>(bytes[0] & 1u); }
  PhaseCode phase() const noexcept { return static_cast<PhaseCode>((bytes[0] >> 1) & 3u); }
  int hand_count(int i) const noexcept { return bytes[2 + static_cast<std::size_t>(i)]; }

  int empty_piles() const noexcept {
    return static_cast<int>(std::count(bytes.begin() + 6, bytes.end(), std::uint8_t{1}));
  }

  // (top, length) of the non-empty piles, longest first; a pending capture
  // pile is listed separately.
  std::vector<std::pair<Color, int>> piles() const {
    std::vector<std::pair<Color, int>> out;
    for (std::size_t i = 6; i < 16; ++i) {
      if (bytes[i] > 1) out.emplace_back(static_cast<Color>(bytes[i] & 1u), bytes[i] >> 1);
    }
    return out;
  }

  std::string to_string() const {
    std::string s = "active=";
    s += color_letter(active());
    s += " blue=" + std::to_string(hand_count(0)) + "," + std::to_string(hand_count(1));
    s += " red=" + std::to_string(hand_count(2)) + "," + std::to_string(hand_count(3));
    s += " phase=";
    switch (phase()) {
      case kPlay: s += "play"; break;
      case kCapture:
        s += "capture:";
        s += color_letter(static_cast<Color>((bytes[0] >> 3) & 1u));
        s += ":" + std::string(1, color_letter(static_cast<Color>(bytes[1] & 1u))) + std::to_string(bytes[1] >> 1);
        break;
      case kRescue: s += "rescue"; break;
    }
    s += " piles=";
    bool first = true;
    for (std::size_t i = 6; i < 16; ++i) {
      if (bytes[i] == 0) continue;
      if (!first) s += ",";
      first = false;
      if (bytes[i] == 1) {
        s += "_";
      } else {
        s += color_letter(static_cast<Color>(bytes[i] & 1u));
        s += std::to_string(bytes[i] >> 1);
      }
    }
    return s;
  }

  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

namespace detail {

inline std::uint8_t pile_code(const Pile& p) {
  if (p.empty()) return 1;
  if (p.size() > static_cast<std::size_t>(CanonicalKey::kMaxPileLength)) {
    throw capacity_error("canonical key: pile longer than 127 chips");
  }
  return static_cast<std::uint8_t>((p.size() << 1) | static_cast<std::size_t>(p.top()));
}

inline std::uint8_t hand_code(int n) {
  if (n < 0 || n > CanonicalKey::kMaxHandCount) throw capacity_error("canonical key: hand count exceeds 255");
  return static_cast<std::uint8_t>(n);
}

}  // namespace detail

inline CanonicalKey canonicalize(const GameState& s) {
  CanonicalKey k;
  std::size_t n = s.board.size();
  bool capture = s.phase.kind == PhaseKind::AwaitCaptureDiscard;
  if (n - (capture ? 1 : 0) > CanonicalKey::kMaxPiles) throw capacity_error("canonical key: more than 10 piles");
  std::uint8_t code = CanonicalKey::kPlay;
  if (capture) code = CanonicalKey::kCapture;
  else if (s.phase.kind == PhaseKind::AwaitRescueDonation) code = CanonicalKey::kRescue;
  k.bytes[0] = static_cast<std::uint8_t>(static_cast<unsigned>(s.active) | (code << 1) |
                                         (capture ? static_cast<unsigned>(s.phase.capturer) << 3 : 0u));
  k.bytes[2] = detail::hand_code(s.blue.guards);
  k.bytes[3] = detail::hand_code(s.blue.prisoners);
  k.bytes[4] = detail::hand_code(s.red.guards);
  k.bytes[5] = detail::hand_code(s.red.prisoners);
  std::size_t slot = 6;
  for (std::size_t i = 0; i < n; ++i) {
    if (capture && static_cast<int>(i) == s.phase.pile) {
      k.bytes[1] = detail::pile_code(s.board[i]);
    } else {
      k.bytes[slot++] = detail::pile_code(s.board[i]);
    }
  }
  std::sort(k.bytes.begin() + 6, k.bytes.end(), std::greater<>());
  return k;
}

// Thread-safe memo of winners keyed by CanonicalKey. Open addressing with
// linear probing, sharded by hash so concurrent workers rarely contend.
// Inserts are idempotent: a key always maps to the same winner, so a racing
// duplicate insert is harmless.
class MemoTable {
 public:
  explicit MemoTable(std::size_t max_entries = std::size_t{1} << 31) : max_entries_(max_entries) {
    for (auto& sh : shards_) sh.slots.assign(kInitialSlots, Entry{});
  }

  std::optional<Color> find(const CanonicalKey& key) const {
    Entry probe = to_entry(key, 0);
    std::uint64_t h = hash(probe);
    const Shard& sh = shards_[h & (kShards - 1)];
    std::lock_guard lock(sh.mu);
    std::size_t mask = sh.slots.size() - 1;
    for (std::size_t i = (h >> 8) & mask;; i = (i + 1) & mask) {
      const Entry& e = sh.slots[i];
      if (e.lo == 0 && e.hi == 0) return std::nullopt;
      if ((e.lo & ~kValueMask) == probe.lo && e.hi == probe.hi) {
        return static_cast<Color>(((e.lo & kValueMask) >> kValueShift) - 1);
      }
    }
  }

  void insert(const CanonicalKey& key, Color winner) {
    Entry probe = to_entry(key, 0);
    std::uint64_t h = hash(probe);
    Shard& sh = shards_[h & (kShards - 1)];
    std::lock_guard lock(sh.mu);
    if ((sh.used + 1) * 10 > sh.slots.size() * 7) grow(sh);
    std::size_t mask = sh.slots.size() - 1;
    for (std::size_t i = (h >> 8) & mask;; i = (i + 1) & mask) {
      Entry& e = sh.slots[i];
      if (e.lo == 0 && e.hi == 0) {
        if (size_.load(std::memory_order_relaxed) >= max_entries_) {
          throw capacity_error("memo table is full (" + std::to_string(max_entries_) + " entries)");
        }
        e = to_entry(key, winner);
        ++sh.used;
        size_.fetch_add(1, std::memory_order_relaxed);
        return;
      }
      if ((e.lo & ~kValueMask) == probe.lo && e.hi == probe.hi) return;
    }
  }

  std::size_t size() const noexcept { return size_.load(std::memory_order_relaxed); }

  void clear() {
    for (auto& sh : shards_) {
      std::lock_guard lock(sh.mu);
      sh.slots.assign(kInitialSlots, Entry{});
      sh.used = 0;
    }
    size_ = 0;
  }

 private:
  struct Entry {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
  };
  struct Shard {
    mutable std::mutex mu;
    std::vector<Entry> slots;
    std::size_t used = 0;
  };

  static constexpr std::size_t kShards = 64;
  static constexpr std::size_t kInitialSlots = 1024;
  // Winner is stored in the top two bits of key byte 0, which the key
  // layout leaves unused.
  static constexpr int kValueShift = 6;
  static constexpr std::uint64_t kValueMask = std::uint64_t{3} << kValueShift;

  static Entry to_entry(const CanonicalKey& key, int value_plus_one) {
    Entry e;
    std::memcpy(&e.lo, key.bytes.data(), 8);
    std::memcpy(&e.hi, key.bytes.data() + 8, 8);
    e.lo |= static_cast<std::uint64_t>(value_plus_one) << kValueShift;
    return e;
  }
  static Entry to_entry(const CanonicalKey& key, Color winner) {
    return to_entry(key, static_cast<int>(winner) + 1);
  }

  static std::uint64_t hash(const Entry& e) noexcept {
    std::uint64_t x = e.lo * 0x9E3779B97F4A7C15ull ^ (e.hi + 0x632BE59BD9B4E019ull);
    x ^= x >> 32;
    x *= 0xD6E8FEB86659FD93ull;
    x ^= x >> 29;
    return x;
  }

  static void grow(Shard& sh) {
    std::vector<Entry> old = std::move(sh.slots);
    sh.slots.assign(old.size() * 2, Entry{});
    std::size_t mask = sh.slots.size() - 1;
    for (const Entry& e : old) {
      if (e.lo == 0 && e.hi == 0) continue;
      Entry bare{e.lo & ~kValueMask, e.hi};
      for (std::size_t i = (hash(bare) >> 8) & mask;; i = (i + 1) & mask) {
        if (sh.slots[i].lo == 0 && sh.slots[i].hi == 0) {
          sh.slots[i] = e;
          break;
        }
      }
    }
  }

  std::array<Shard, kShards> shards_;
  std::atomic<std::size_t> size_{0};
  std::size_t max_entries_;
};

struct PlayedAction {
  Color actor = Color::Blue;
  Action action;
  friend bool operator==(const PlayedAction&, const PlayedAction&) = default;
};

struct SolveResult {
  Color winner = Color::Blue;
  std::vector<PlayedAction> principal_variation;
  std::uint64_t nodes_expanded = 0;
  std::uint64_t memo_hits = 0;
};

struct SolverOptions {
  bool memoize = true;
  std::size_t max_memo_entries = std::size_t{1} << 31;
};

class Solver {
 public:
  explicit Solver(SolverOptions opts = {})
      : opts_(opts),
        memo_(std::make_unique<MemoTable>(opts.max_memo_entries)),
        policy_memo_{std::make_unique<MemoTable>(opts.max_memo_entries),
                     std::make_unique<MemoTable>(opts.max_memo_entries)} {}

  // Exact winner under optimal play by both sides.
  SolveResult solve(const GameState& s) {
    if (s.winner) throw terminal_state();
    SolveResult r;
    Stats st;
    r.winner = value(s, st);
    r.principal_variation = principal_variation(s, st, [](const GameState&) { return false; }, {});
    r.nodes_expanded = st.nodes;
    r.memo_hits = st.hits;
    return r;
  }

  // Winner when `fixed` follows `policy` and the other side plays optimally.
  SolveResult solve_with_policy(const GameState& s, Color fixed, const PolicySpec& policy) {
    if (s.winner) throw terminal_state();
    if (std::holds_alternative<policy::Adversarial>(policy)) return solve(s);
    if (std::holds_alternative<policy::UniformRandom>(policy)) {
      throw std::invalid_argument("solve_with_policy needs a deterministic policy (s, adversarial or scripted)");
    }
    SolveResult r;
    Stats st;
    if (const auto* script = std::get_if<policy::Scripted>(&policy)) {
      r.winner = value_scripted(s, fixed, script->actions, 0, st);
      r.principal_variation = scripted_variation(s, fixed, script->actions, st);
    } else {
      r.winner = value_policy(s, fixed, st);
      r.principal_variation = principal_variation(
          s, st, [fixed](const GameState& g) { return detail::decision_owner(g) == fixed; }, fixed);
    }
    r.nodes_expanded = st.nodes;
    r.memo_hits = st.hits;
    return r;
  }

  // Winner only; cheaper than solve() when the variation is not needed.
  Color winner(const GameState& s) {
    if (s.winner) return *s.winner;
    Stats st;
    return value(s, st);
  }

  Color winner_with_strategy_s(const GameState& s, Color fixed) {
    if (s.winner) return *s.winner;
    Stats st;
    return value_policy(s, fixed, st);
  }

  std::size_t memo_size() const noexcept { return memo_->size(); }
  std::size_t policy_memo_size() const noexcept { return policy_memo_[0]->size() + policy_memo_[1]->size(); }

  void clear() {
    memo_->clear();
    policy_memo_[0]->clear();
    policy_memo_[1]->clear();
  }

 private:
  struct Stats {
    std::uint64_t nodes = 0;
    std::uint64_t hits = 0;
  };

  // Actions with moves onto identical piles collapsed to the first such pile.
  static std::vector<Action> distinct_actions(const GameState& s, const ActionSet& set) {
    if (!s.phase.is_play()) return set.actions;
    std::vector<Action> out;
    out.reserve(set.actions.size());
    for (const Action& a : set.actions) {
      if (a.kind == ActionKind::Place) {
        const Pile& p = s.board[static_cast<std::size_t>(a.pile)];
        bool dup = false;
        for (int j = 0; j < a.pile && !dup; ++j) dup = s.board[static_cast<std::size_t>(j)] == p;
        if (dup) continue;
      }
      out.push_back(a);
    }
    return out;
  }

  Color value(const GameState& s, Stats& st) {
    if (s.winner) return *s.winner;
    CanonicalKey key = canonicalize(s);
    if (opts_.memoize) {
      if (auto v = memo_->find(key)) {
        ++st.hits;
        return *v;
      }
    }
    ++st.nodes;
    ActionSet set = legal_actions(s);
    Color result = opponent(set.actor);
    for (const Action& a : distinct_actions(s, set)) {
      GameState child = detail::apply_unchecked(s, set.actor, a).state;
      if (value(child, st) == set.actor) {
        result = set.actor;
        break;
      }
    }
    if (opts_.memoize) memo_->insert(key, result);
    return result;
  }

  Color value_policy(const GameState& s, Color fixed, Stats& st) {
    if (s.winner) return *s.winner;
    CanonicalKey key = canonicalize(s);
    MemoTable& memo = *policy_memo_[static_cast<int>(fixed)];
    if (opts_.memoize) {
      if (auto v = memo.find(key)) {
        ++st.hits;
        return *v;
      }
    }
    ++st.nodes;
    Color result;
    Color owner = detail::decision_owner(s);
    if (owner == fixed) {
      result = value_policy(detail::apply_unchecked(s, fixed, checked_strategy_action(s, fixed)).state, fixed, st);
    } else {
      ActionSet set = legal_actions(s);
      result = fixed;
      for (const Action& a : distinct_actions(s, set)) {
        if (value_policy(detail::apply_unchecked(s, set.actor, a).state, fixed, st) == set.actor) {
          result = set.actor;
          break;
        }
      }
    }
    if (opts_.memoize) memo.insert(key, result);
    return result;
  }

  static Action checked_strategy_action(const GameState& s, Color fixed) {
    Action a = strategy_s_action(s);
    ActionSet set = legal_actions(s);
    if (set.actor != fixed || std::find(set.actions.begin(), set.actions.end(), a) == set.actions.end()) {
      throw illegal_action("strategy S produced an illegal action: " + to_string(a));
    }
    return a;
  }

  Color value_scripted(const GameState& s, Color fixed, const std::vector<Action>& script, std::size_t cursor,
                       Stats& st) {
    if (s.winner) return *s.winner;
    if (cursor >= script.size()) return value_policy(s, fixed, st);
    ++st.nodes;
    ActionSet set = legal_actions(s);
    if (set.actor == fixed) {
      return value_scripted(apply_action(s, fixed, script[cursor]).state, fixed, script, cursor + 1, st);
    }
    for (const Action& a : distinct_actions(s, set)) {
      if (value_scripted(detail::apply_unchecked(s, set.actor, a).state, fixed, script, cursor, st) == set.actor) {
        return set.actor;
      }
    }
    return fixed;
  }

  // Greedy descent: the winner of each node picks the first action that
  // keeps the win, the loser the first available action. Nodes where
  // `forced` holds follow Strategy S.
  template <typename Forced>
  std::vector<PlayedAction> principal_variation(const GameState& root, Stats& st, Forced forced,
                                                std::optional<Color> fixed) {
    std::vector<PlayedAction> pv;
    GameState cur = root;
    auto eval = [&](const GameState& g) { return fixed ? value_policy(g, *fixed, st) : value(g, st); };
    while (!cur.winner) {
      ActionSet set = legal_actions(cur);
      Action chosen = set.actions.front();
      if (forced(cur)) {
        chosen = strategy_s_action(cur);
      } else {
        for (const Action& a : set.actions) {
          if (eval(detail::apply_unchecked(cur, set.actor, a).state) == set.actor) {
            chosen = a;
            break;
          }
        }
      }
      pv.push_back({set.actor, chosen});
      cur = detail::apply_unchecked(cur, set.actor, chosen).state;
    }
    return pv;
  }

  std::vector<PlayedAction> scripted_variation(const GameState& root, Color fixed, const std::vector<Action>& script,
                                               Stats& st) {
    std::vector<PlayedAction> pv;
    GameState cur = root;
    std::size_t cursor = 0;
    while (!cur.winner) {
      ActionSet set = legal_actions(cur);
      Action chosen = set.actions.front();
      if (set.actor == fixed) {
        chosen = cursor < script.size() ? script[cursor++] : strategy_s_action(cur);
      } else {
        for (const Action& a : set.actions) {
          if (value_scripted(detail::apply_unchecked(cur, set.actor, a).state, fixed, script, cursor, st) ==
              set.actor) {
            chosen = a;
            break;
          }
        }
      }
      pv.push_back({set.actor, chosen});
      cur = apply_action(cur, set.actor, chosen).state;
    }
    return pv;
  }

  SolverOptions opts_;
  std::unique_ptr<MemoTable> memo_;
  std::array<std::unique_ptr<MemoTable>, 2> policy_memo_;
};

// Sweep bounds over round-boundary states.
struct Bounds {
  int piles = 1;          // k
  int max_pile_len = 0;   // every pile length <= this
  int max_hand = 0;       // each player's guards + prisoners <= this

  void validate() const {
    if (piles < 1) throw std::invalid_argument("bounds: need at least one pile (k >= 1)");
    if (piles > static_cast<int>(CanonicalKey::kMaxPiles)) throw std::invalid_argument("bounds: at most 10 piles");
    if (max_pile_len < 0 || max_hand < 0) throw std::invalid_argument("bounds: lengths and hands must be >= 0");
    if (max_pile_len > 64) throw std::invalid_argument("bounds: pile length above 64");
  }
};

// Number of states enumerate_states yields, in closed form: multisets of k
// pile shapes (empty or top color x length) times hand splits squared times
// two active colors.
inline std::uint64_t enumeration_count(const Bounds& b) {
  b.validate();
  std::uint64_t shapes = 1 + 2 * static_cast<std::uint64_t>(b.max_pile_len);
  std::uint64_t n = shapes + static_cast<std::uint64_t>(b.piles) - 1;
  std::uint64_t multisets = 1;
  for (std::uint64_t i = 1; i <= static_cast<std::uint64_t>(b.piles); ++i) {
    multisets = multisets * (n - static_cast<std::uint64_t>(b.piles) + i) / i;
  }
  std::uint64_t h = static_cast<std::uint64_t>(b.max_hand);
  std::uint64_t hands = (h + 1) * (h + 2) / 2;
  return multisets * hands * hands * 2;
}

// Visits every round-boundary state within bounds once per canonical key:
// pile multisets (as non-increasing shape sequences), then Blue's hand,
// Red's hand and the active color, in that nesting order.
inline void for_each_state(const Bounds& b, const std::function<void(const GameState&)>& visit) {
  b.validate();
  std::vector<Pile> shapes{Pile{}};
  for (int len = 1; len <= b.max_pile_len; ++len) {
    shapes.push_back(Pile::alternating(Color::Blue, static_cast<std::size_t>(len)));
    shapes.push_back(Pile::alternating(Color::Red, static_cast<std::size_t>(len)));
  }
  std::vector<Hand> hands;
  for (int g = 0; g <= b.max_hand; ++g) {
    for (int p = 0; g + p <= b.max_hand; ++p) hands.push_back({g, p});
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(b.piles), 0);
  while (true) {
    std::vector<Pile> piles;
    piles.reserve(idx.size());
    for (std::size_t i : idx) piles.push_back(shapes[i]);
    Board board(std::move(piles));
    for (const Hand& bh : hands) {
      for (const Hand& rh : hands) {
        for (Color active : {Color::Blue, Color::Red}) {
          GameState s;
          s.board = board;
          s.blue = bh;
          s.red = rh;
          s.active = active;
          s.phase = Phase::turn_start();
          visit(s);
        }
      }
    }
    // next non-decreasing index sequence
    std::size_t pos = idx.size();
    while (pos > 0 && idx[pos - 1] == shapes.size() - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < idx.size(); ++j) idx[j] = idx[pos - 1];
  }
}

inline std::vector<GameState> enumerate_states(const Bounds& b) {
  std::vector<GameState> out;
  out.reserve(static_cast<std::size_t>(enumeration_count(b)));
  for_each_state(b, [&](const GameState& s) { out.push_back(s); });
  return out;
}

}  // namespace sls
