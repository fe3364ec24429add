// Independent reference implementations used as test oracles. Nothing here
// calls into the library's domain semantics: states are plain support vectors
// and the action rules are re-derived from the domain restriction list.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr int kTable = -1;
inline constexpr int kHand = -2;

using Support = std::vector<int>;

// Every block reaches the table (or the hand) through distinct blocks, no
// block carries two blocks, nothing rests on the held block, at most one held.
inline bool valid_state(const Support& s) {
  const int n = static_cast<int>(s.size());
  int held = 0;
  std::vector<int> load(n, 0);
  for (int b = 0; b < n; ++b) {
    if (s[b] == kHand) {
      ++held;
      continue;
    }
    if (s[b] == kTable) continue;
    if (s[b] < 0 || s[b] >= n || s[b] == b) return false;
    if (s[s[b]] == kHand) return false;
    if (++load[s[b]] > 1) return false;
  }
  if (held > 1) return false;
  for (int b = 0; b < n; ++b) {
    int cur = b;
    for (int steps = 0; steps <= n; ++steps) {
      if (s[cur] < 0) break;
      cur = s[cur];
      if (steps == n) return false;
    }
  }
  return true;
}

// All hand-empty arrangements of n labeled blocks, by brute force over
// {table, 0..n-1}^n.
inline std::vector<Support> complete_states(int n) {
  std::vector<Support> out;
  Support s(n, kTable);
  std::vector<int> digit(n, 0);
  for (;;) {
    for (int i = 0; i < n; ++i) s[i] = digit[i] == 0 ? kTable : digit[i] - 1;
    if (valid_state(s)) out.push_back(s);
    int i = 0;
    while (i < n && ++digit[i] == n + 1) digit[i++] = 0;
    if (i == n) break;
  }
  return out;
}

// Complete states plus every state with one block in the hand.
inline std::vector<Support> all_states(int n) {
  std::set<Support> seen;
  for (const auto& c : complete_states(n)) {
    seen.insert(c);
    for (int b = 0; b < n; ++b) {
      Support h = c;
      h[b] = kHand;
      if (valid_state(h)) seen.insert(h);
    }
  }
  return {seen.begin(), seen.end()};
}

inline std::vector<std::pair<int, int>> on_atoms(const Support& s) {
  std::vector<std::pair<int, int>> atoms;
  for (int b = 0; b < static_cast<int>(s.size()); ++b)
    if (s[b] >= 0) atoms.emplace_back(b, s[b]);
  return atoms;
}

inline bool holds(const Support& s, const std::vector<std::pair<int, int>>& goal) {
  return std::all_of(goal.begin(), goal.end(), [&](auto g) { return s[g.first] == g.second; });
}

// Number of (init, goal-state) pairs with the goal not already true at init.
inline std::uint64_t task_space(int n) {
  auto states = complete_states(n);
  std::uint64_t count = 0;
  for (const auto& init : states)
    for (const auto& g : states)
      if (!holds(init, on_atoms(g))) ++count;
  return count;
}

// Syntactic action: kind 0 pick-up, 1 put-down, 2 stack, 3 unstack.
struct Act {
  int kind;
  int b;
  int o;
};

inline bool clear(const Support& s, int x) {
  if (s[x] == kHand) return false;
  for (int y : s)
    if (y == x) return false;
  return true;
}

inline bool hand_empty(const Support& s) {
  return std::find(s.begin(), s.end(), kHand) == s.end();
}

// Successor under the restriction list, or false when a restriction fails.
inline bool step(const Support& s, const Act& a, Support& out) {
  const int n = static_cast<int>(s.size());
  if (a.b < 0 || a.b >= n) return false;
  out = s;
  switch (a.kind) {
    case 0:
      if (!hand_empty(s) || s[a.b] != kTable || !clear(s, a.b)) return false;
      out[a.b] = kHand;
      return true;
    case 1:
      if (s[a.b] != kHand) return false;
      out[a.b] = kTable;
      return true;
    case 2:
      if (a.o < 0 || a.o >= n || a.o == a.b) return false;
      if (s[a.b] != kHand || !clear(s, a.o)) return false;
      out[a.b] = a.o;
      return true;
    case 3:
      if (a.o < 0 || a.o >= n || a.o == a.b) return false;
      if (!hand_empty(s) || s[a.b] != a.o || !clear(s, a.b)) return false;
      out[a.b] = kHand;
      return true;
  }
  return false;
}

inline std::vector<Act> syntactic_actions(int n) {
  std::vector<Act> acts;
  for (int b = 0; b < n; ++b) {
    acts.push_back({0, b, -1});
    acts.push_back({1, b, -1});
    for (int o = 0; o < n; ++o) {
      acts.push_back({2, b, o});
      acts.push_back({3, b, o});
    }
  }
  return acts;
}

namespace detail {
inline bool dls(const Support& s, const std::vector<std::pair<int, int>>& goal, int depth,
                const std::vector<Act>& acts, std::map<Support, int>& best) {
  if (holds(s, goal)) return true;
  if (depth == 0) return false;
  auto it = best.find(s);
  if (it != best.end() && it->second >= depth) return false;
  best[s] = depth;
  Support next;
  for (const auto& a : acts)
    if (step(s, a, next) && dls(next, goal, depth - 1, acts, best)) return true;
  return false;
}
}  // namespace detail

// Shortest plan length by iterative deepening over every syntactic action.
// States already explored with at least as much remaining depth are pruned,
// which keeps the search exhaustive.
inline int shortest_plan(const Support& init, const std::vector<std::pair<int, int>>& goal,
                         int max_depth = 40) {
  auto acts = syntactic_actions(static_cast<int>(init.size()));
  for (int d = 0; d <= max_depth; ++d) {
    std::map<Support, int> best;
    if (detail::dls(init, goal, d, acts, best)) return d;
  }
  return -1;
}

// Goal-and-init edge sets of a blocksworld task, tagged by half.
inline std::set<std::tuple<int, int, int>> edge_set(const Support& init,
                                                    const std::vector<std::pair<int, int>>& goal) {
  std::set<std::tuple<int, int, int>> e;
  for (auto [a, b] : on_atoms(init)) e.emplace(0, a, b);
  for (auto [a, b] : goal) e.emplace(1, a, b);
  return e;
}

inline std::size_t symmetric_difference(const std::set<std::tuple<int, int, int>>& a,
                                        const std::set<std::tuple<int, int, int>>& b) {
  std::size_t common = 0;
  for (const auto& x : a) common += b.count(x);
  return a.size() + b.size() - 2 * common;
}

}  // namespace oracle
