#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "plancurate/nl_codec.hpp"
#include "plancurate/task.hpp"

namespace plancurate {

enum class VerdictKind {
  kValid,
  kParseError,
  kPreconditionViolation,
  kGoalNotSatisfied,
  // No response was supplied for the task.
  kNoResponse,
};

std::string_view verdict_name(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::kNoResponse;
  // Number of actions parsed (or executed, for valid plans).
  std::size_t length = 0;
  std::optional<std::size_t> optimal_length;
  // Present only for valid plans with a known optimal length.
  std::optional<bool> is_optimal;
  std::optional<ParseError> parse_error;
  // 0-based step of the first inapplicable action.
  std::optional<std::size_t> failed_step;
  std::optional<PreconditionReason> reason;

  bool valid() const { return kind == VerdictKind::kValid; }
};

// Simulates the plan from the initial state. Actions from the other domain
// are reported as an unknown-object precondition violation.
Verdict validate_plan(const TaskInstance& task, const Plan& plan,
                      std::optional<std::size_t> optimal_length = std::nullopt);

struct LengthBucket {
  std::size_t attempted = 0;
  std::size_t solved = 0;
};

struct CorpusReport {
  std::size_t n_tasks = 0;
  std::size_t n_solved = 0;
  double solved_rate = 0.0;
  std::size_t n_optimal = 0;
  // Absent when nothing was solved.
  std::optional<double> optimality_rate;
  // Keyed by optimal plan length; tasks without an oracle length land in -1.
  std::map<long, LengthBucket> histogram;
  // Keyed by verdict name; every task counted exactly once.
  std::map<std::string, std::size_t> outcomes;
  // Per-task verdicts in task order.
  std::vector<std::pair<std::string, Verdict>> verdicts;
};

// Parses each response leniently (prose around the [PLAN] block is ignored),
// validates it and aggregates. Tasks without a response count as failures.
// Throws UnknownId when a response names no task, DuplicateId on repeats.
CorpusReport evaluate_responses(const std::vector<TaskInstance>& tasks,
                                const std::vector<std::pair<std::string, std::string>>& responses,
                                const std::map<std::string, std::size_t>& oracle_lengths,
                                int jobs = 1);

struct HistogramRow {
  long optimal_length = -1;
  std::size_t attempted = 0;
  std::size_t solved = 0;
  double rate = 0.0;
};

std::vector<HistogramRow> solved_by_length_histogram(const CorpusReport& report);

// Fixed-width human-readable summary.
std::string render_report_table(const CorpusReport& report);

}  // namespace plancurate
