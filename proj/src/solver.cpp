#include "plancurate/solver.hpp"

#include <queue>
#include <unordered_map>

#include "plancurate/parallel.hpp"

namespace plancurate {

std::string_view status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kSolved: return "solved";
    case SolveStatus::kUnsolvable: return "unsolvable";
    case SolveStatus::kLimitExceeded: return "limit-exceeded";
  }
  return "unknown";
}

namespace {

std::string state_key(const blocksworld::State& s) {
  std::string key;
  key.reserve(s.support().size());
  for (int v : s.support()) key.push_back(static_cast<char>(v + 3));
  return key;
}

std::string state_key(const logistics::State& s) {
  std::string key;
  for (const auto& loc : s.trucks()) key.push_back(static_cast<char>(loc.index));
  for (const auto& loc : s.airplanes()) key.push_back(static_cast<char>(loc.city));
  for (const auto& pos : s.packages()) {
    key.push_back(static_cast<char>(pos.kind));
    if (pos.kind == logistics::PackagePosition::Kind::kAt) {
      key.push_back(static_cast<char>(pos.at.city));
      key.push_back(static_cast<char>(pos.at.index));
    } else {
      key.push_back(static_cast<char>(pos.vehicle));
      key.push_back(0);
    }
  }
  return key;
}

template <typename State, typename Act>
struct Node {
  State state;
  int parent;
  Act action;
  std::size_t depth;
};

template <typename State, typename Act>
Plan extract_plan(const std::vector<Node<State, Act>>& nodes, int leaf) {
  std::vector<Action> reversed;
  for (int i = leaf; nodes[i].parent >= 0; i = nodes[i].parent) {
    reversed.emplace_back(nodes[i].action);
  }
  return Plan{{reversed.rbegin(), reversed.rend()}};
}

template <typename State, typename Goal>
SolveResult search(const State& init, const Goal& goal, const SolveLimits& limits,
                   SearchMode mode) {
  using Act = decltype(applicable_actions(init))::value_type;
  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  auto finish = [&](SolveStatus status) {
    result.status = status;
    result.elapsed = std::chrono::steady_clock::now() - start;
    return result;
  };

  std::vector<Node<State, Act>> nodes;
  std::unordered_map<std::string, int> seen;
  nodes.push_back({init, -1, Act{}, 0});
  seen.emplace(state_key(init), 0);

  auto succeed = [&](int leaf) {
    result.plan = extract_plan(nodes, leaf);
    result.length = result.plan->size();
    return finish(SolveStatus::kSolved);
  };
  auto out_of_budget = [&] {
    if (result.expanded >= limits.max_nodes) return true;
    if ((result.expanded & 1023) == 0) {
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
      if (dt.count() > limits.max_seconds) return true;
    }
    return false;
  };

  if (mode == SearchMode::kBreadthFirst) {
    if (satisfies_goal(init, goal)) return succeed(0);
    // nodes doubles as the FIFO queue: everything before `head` is expanded.
    for (std::size_t head = 0; head < nodes.size(); ++head) {
      if (out_of_budget()) return finish(SolveStatus::kLimitExceeded);
      ++result.expanded;
      for (const Act& a : applicable_actions(nodes[head].state)) {
        State child = apply_unchecked(nodes[head].state, a);
        auto [it, inserted] = seen.emplace(state_key(child), static_cast<int>(nodes.size()));
        if (!inserted) continue;
        const bool done = satisfies_goal(child, goal);
        nodes.push_back({std::move(child), static_cast<int>(head), a, nodes[head].depth + 1});
        if (done) return succeed(static_cast<int>(nodes.size()) - 1);
      }
    }
    return finish(SolveStatus::kUnsolvable);
  }

  // Uniform-cost: goal test on expansion, queue ordered by (g, insertion).
  using Entry = std::pair<std::size_t, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::vector<std::size_t> best{0};
  std::vector<bool> closed{false};
  open.push({0, 0});
  while (!open.empty()) {
    const auto [g, idx] = open.top();
    open.pop();
    if (closed[idx] || g > best[idx]) continue;
    closed[idx] = true;
    if (satisfies_goal(nodes[idx].state, goal)) return succeed(idx);
    if (out_of_budget()) return finish(SolveStatus::kLimitExceeded);
    ++result.expanded;
    for (const Act& a : applicable_actions(nodes[idx].state)) {
      State child = apply_unchecked(nodes[idx].state, a);
      auto [it, inserted] = seen.emplace(state_key(child), static_cast<int>(nodes.size()));
      const std::size_t cost = g + 1;
      if (inserted) {
        nodes.push_back({std::move(child), idx, a, cost});
        best.push_back(cost);
        closed.push_back(false);
        open.push({cost, it->second});
      } else if (!closed[it->second] && cost < best[it->second]) {
        best[it->second] = cost;
        nodes[it->second].parent = idx;
        nodes[it->second].action = a;
        nodes[it->second].depth = cost;
        open.push({cost, it->second});
      }
    }
  }
  return finish(SolveStatus::kUnsolvable);
}

}  // namespace

SolveResult solve_optimal(const TaskInstance& task, const SolveLimits& limits, SearchMode mode) {
  if (task.is_blocksworld()) {
    const auto& p = task.as_blocksworld();
    return search(p.init, p.goal, limits, mode);
  }
  const auto& p = task.as_logistics();
  return search(p.init, p.goal, limits, mode);
}

std::optional<std::size_t> optimal_length(const TaskInstance& task, const SolveLimits& limits) {
  return solve_optimal(task, limits).length;
}

LabeledCorpus label_corpus(const std::vector<TaskInstance>& tasks, const SolveLimits& limits,
                           int jobs) {
  std::vector<SolveResult> results(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t i) { results[i] = solve_optimal(tasks[i], limits); });
  LabeledCorpus out;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (results[i].status == SolveStatus::kSolved) {
      out.labeled.push_back({tasks[i], std::move(*results[i].plan)});
    } else {
      out.unsolved.emplace_back(tasks[i], results[i].status);
    }
  }
  return out;
}

}  // namespace plancurate
