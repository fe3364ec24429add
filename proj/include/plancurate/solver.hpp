#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plancurate/task.hpp"

namespace plancurate {

struct SolveLimits {
  std::uint64_t max_nodes = 5'000'000;
  double max_seconds = 60.0;
};

enum class SolveStatus { kSolved, kUnsolvable, kLimitExceeded };

std::string_view status_name(SolveStatus status);

// Breadth-first search is the production mode. Uniform-cost search with a
// zero heuristic exists as an independent cross-check of optimality.
enum class SearchMode { kBreadthFirst, kUniformCost };

struct SolveResult {
  SolveStatus status = SolveStatus::kUnsolvable;
  std::optional<Plan> plan;
  std::optional<std::size_t> length;
  std::uint64_t expanded = 0;
  std::chrono::duration<double> elapsed{0.0};
};

// Shortest plan under unit action costs. Duplicate detection is on exact
// state keys; ties are broken by applicable_actions order, so the plan is a
// pure function of the task.
SolveResult solve_optimal(const TaskInstance& task, const SolveLimits& limits = {},
                          SearchMode mode = SearchMode::kBreadthFirst);

// Length of an optimal plan; nullopt when unsolved within limits.
std::optional<std::size_t> optimal_length(const TaskInstance& task,
                                          const SolveLimits& limits = {});

struct LabeledTask {
  TaskInstance task;
  Plan plan;
};

struct LabeledCorpus {
  std::vector<LabeledTask> labeled;
  // Tasks that hit a limit or proved unsolvable, with their status.
  std::vector<std::pair<TaskInstance, SolveStatus>> unsolved;
};

// Solves every task (in parallel when jobs > 1); output order follows input.
LabeledCorpus label_corpus(const std::vector<TaskInstance>& tasks, const SolveLimits& limits = {},
                           int jobs = 1);

}  // namespace plancurate
