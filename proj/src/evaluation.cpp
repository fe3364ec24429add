#include "plancurate/evaluation.hpp"

#include <cstdio>
#include <unordered_map>

#include "plancurate/errors.hpp"
#include "plancurate/parallel.hpp"

namespace plancurate {

namespace bw = blocksworld;
namespace lg = logistics;

namespace {

template <typename State, typename Goal, typename DomainAction>
Verdict simulate(const State& init, const Goal& goal, const Plan& plan) {
  Verdict v;
  v.length = plan.size();
  State state = init;
  for (std::size_t i = 0; i < plan.actions.size(); ++i) {
    const auto* a = std::get_if<DomainAction>(&plan.actions[i]);
    std::optional<PreconditionReason> why =
        a ? check_preconditions(state, *a) : PreconditionReason::kUnknownObject;
    if (why) {
      v.kind = VerdictKind::kPreconditionViolation;
      v.failed_step = i;
      v.reason = *why;
      return v;
    }
    state = apply_unchecked(state, *a);
  }
  v.kind = satisfies_goal(state, goal) ? VerdictKind::kValid : VerdictKind::kGoalNotSatisfied;
  return v;
}

}  // namespace

std::string_view verdict_name(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kValid:
      return "valid";
    case VerdictKind::kParseError:
      return "parse_error";
    case VerdictKind::kPreconditionViolation:
      return "precondition_violation";
    case VerdictKind::kGoalNotSatisfied:
      return "goal_not_satisfied";
    case VerdictKind::kNoResponse:
      return "no_response";
  }
  return "unknown";
}

Verdict validate_plan(const TaskInstance& task, const Plan& plan,
                      std::optional<std::size_t> optimal_length) {
  Verdict v;
  if (task.is_blocksworld()) {
    const auto& p = task.as_blocksworld();
    v = simulate<bw::State, bw::Goal, bw::Action>(p.init, p.goal, plan);
  } else {
    const auto& p = task.as_logistics();
    v = simulate<lg::State, lg::Goal, lg::Action>(p.init, p.goal, plan);
  }
  v.optimal_length = optimal_length;
  if (v.valid() && optimal_length) v.is_optimal = v.length == *optimal_length;
  return v;
}

CorpusReport evaluate_responses(const std::vector<TaskInstance>& tasks,
                                const std::vector<std::pair<std::string, std::string>>& responses,
                                const std::map<std::string, std::size_t>& oracle_lengths,
                                int jobs) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < tasks.size(); ++i) index.emplace(tasks[i].id(), i);

  std::vector<const std::string*> text(tasks.size(), nullptr);
  for (const auto& [id, body] : responses) {
    auto it = index.find(id);
    if (it == index.end()) throw UnknownId("response for unknown task id " + id);
    if (text[it->second]) throw DuplicateId("more than one response for task " + id);
    text[it->second] = &body;
  }

  std::vector<Verdict> verdicts(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t i) {
    std::optional<std::size_t> optimal;
    if (auto it = oracle_lengths.find(tasks[i].id()); it != oracle_lengths.end())
      optimal = it->second;
    Verdict v;
    if (!text[i]) {
      v.kind = VerdictKind::kNoResponse;
      v.optimal_length = optimal;
    } else {
      auto parsed = parse_response(*text[i], tasks[i].domain());
      if (auto* err = std::get_if<ParseError>(&parsed)) {
        v.kind = VerdictKind::kParseError;
        v.parse_error = *err;
        v.optimal_length = optimal;
      } else {
        v = validate_plan(tasks[i], std::get<Plan>(parsed), optimal);
      }
    }
    verdicts[i] = std::move(v);
  });

  CorpusReport r;
  r.n_tasks = tasks.size();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& v = verdicts[i];
    long key = v.optimal_length ? static_cast<long>(*v.optimal_length) : -1;
    auto& bucket = r.histogram[key];
    ++bucket.attempted;
    ++r.outcomes[std::string(verdict_name(v.kind))];
    if (v.valid()) {
      ++r.n_solved;
      ++bucket.solved;
      if (v.is_optimal.value_or(false)) ++r.n_optimal;
    }
    r.verdicts.emplace_back(tasks[i].id(), v);
  }
  r.solved_rate = r.n_tasks ? static_cast<double>(r.n_solved) / static_cast<double>(r.n_tasks) : 0.0;
  if (r.n_solved > 0)
    r.optimality_rate = static_cast<double>(r.n_optimal) / static_cast<double>(r.n_solved);
  return r;
}

std::vector<HistogramRow> solved_by_length_histogram(const CorpusReport& report) {
  std::vector<HistogramRow> rows;
  for (const auto& [len, b] : report.histogram) {
    double rate = b.attempted ? static_cast<double>(b.solved) / static_cast<double>(b.attempted) : 0.0;
    rows.push_back({len, b.attempted, b.solved, rate});
  }
  return rows;
}

std::string render_report_table(const CorpusReport& report) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "tasks %zu  solved %zu  solved_rate %.4f\n", report.n_tasks,
                report.n_solved, report.solved_rate);
  out += buf;
  if (report.optimality_rate)
    std::snprintf(buf, sizeof buf, "optimal %zu  optimality_rate %.4f\n", report.n_optimal,
                  *report.optimality_rate);
  else
    std::snprintf(buf, sizeof buf, "optimal %zu  optimality_rate n/a\n", report.n_optimal);
  out += buf;
  out += "\noutcome                  count\n";
  for (const auto& [name, count] : report.outcomes) {
    std::snprintf(buf, sizeof buf, "%-24s %5zu\n", name.c_str(), count);
    out += buf;
  }
  out += "\noptimal_len  attempted  solved    rate\n";
  for (const auto& row : solved_by_length_histogram(report)) {
    if (row.optimal_length < 0)
      std::snprintf(buf, sizeof buf, "%11s  %9zu  %6zu  %6.4f\n", "unknown", row.attempted,
                    row.solved, row.rate);
    else
      std::snprintf(buf, sizeof buf, "%11ld  %9zu  %6zu  %6.4f\n", row.optimal_length,
                    row.attempted, row.solved, row.rate);
    out += buf;
  }
  return out;
}

}  // namespace plancurate
