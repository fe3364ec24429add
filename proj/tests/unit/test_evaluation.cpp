#include <doctest.h>

#include <algorithm>

#include "plancurate/evaluation.hpp"
#include "plancurate/generation.hpp"
#include "plancurate/solver.hpp"
#include "unit/helpers.hpp"

using namespace plancurate;
namespace bw = plancurate::blocksworld;

namespace {

struct Gold {
  std::vector<TaskInstance> tasks;
  std::vector<Plan> plans;
  std::map<std::string, std::size_t> lengths;
};

Gold gold(std::size_t n, std::uint64_t seed, Domain d = Domain::kBlocksworld) {
  GenSpec spec;
  spec.domain = d;
  spec.count = n;
  spec.seed = seed;
  Gold g;
  for (auto& lt : label_corpus(generate(spec)).labeled) {
    g.lengths[lt.task.id()] = lt.plan.size();
    g.tasks.push_back(lt.task);
    g.plans.push_back(lt.plan);
  }
  return g;
}

// Adds put-down(b) / pick-up(b) right after the first step that picks b up.
Plan with_detour(const Plan& plan) {
  Plan out = plan;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& a = std::get<bw::Action>(out.actions[i]);
    if (a.kind == bw::ActionKind::kPickUp || a.kind == bw::ActionKind::kUnstack) {
      const int b = a.block;
      out.actions.insert(out.actions.begin() + static_cast<long>(i) + 1,
                         {bw::Action::put_down(b), bw::Action::pick_up(b)});
      return out;
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("worked example plans are valid and optimal") {
  auto [task, plan] = worked_example(Domain::kBlocksworld);
  auto v = validate_plan(task, plan, optimal_length(task));
  CHECK(v.valid());
  CHECK(v.length == 12);
  CHECK(v.optimal_length == 12u);
  CHECK(v.is_optimal == true);
  auto [lt, lp] = worked_example(Domain::kLogistics);
  auto lv = validate_plan(lt, lp, optimal_length(lt));
  CHECK(lv.valid());
  CHECK(lv.is_optimal == true);
}

TEST_CASE("swapping steps 7 and 9 breaks the plan") {
  auto [task, plan] = worked_example(Domain::kBlocksworld);
  std::swap(plan.actions[6], plan.actions[8]);
  auto v = validate_plan(task, plan);
  CHECK(v.kind == VerdictKind::kPreconditionViolation);
  // Red is picked up first, so stacking blue finds the hand holding red.
  CHECK(v.failed_step == 7u);
  CHECK(v.reason == PreconditionReason::kNotHolding);
  CHECK_FALSE(v.is_optimal.has_value());
}

TEST_CASE("an empty plan leaves the goal unsatisfied") {
  for (const auto& t : gold(20, 1).tasks) {
    auto v = validate_plan(t, Plan{});
    CHECK(v.kind == VerdictKind::kGoalNotSatisfied);
    CHECK(v.length == 0);
  }
}

TEST_CASE("cross-domain actions are unknown objects") {
  auto [lt, lp] = worked_example(Domain::kLogistics);
  auto v = validate_plan(testing::bw_query_task(), lp);
  CHECK(v.kind == VerdictKind::kPreconditionViolation);
  CHECK(v.failed_step == 0u);
  CHECK(v.reason == PreconditionReason::kUnknownObject);
}

TEST_CASE("a detour keeps plans valid and adds two steps") {
  auto g = gold(100, 2);
  for (std::size_t i = 0; i < g.tasks.size(); ++i) {
    auto longer = with_detour(g.plans[i]);
    auto v = validate_plan(g.tasks[i], longer, g.plans[i].size());
    CHECK(v.valid());
    CHECK(v.length == g.plans[i].size() + 2);
    CHECK(v.is_optimal == false);
  }
}

TEST_CASE("every solver plan validates as optimal") {
  for (auto d : {Domain::kBlocksworld, Domain::kLogistics}) {
    auto g = gold(60, 3, d);
    for (std::size_t i = 0; i < g.tasks.size(); ++i) {
      auto v = validate_plan(g.tasks[i], g.plans[i], g.plans[i].size());
      CHECK(v.valid());
      CHECK(v.is_optimal == true);
    }
  }
}

TEST_CASE("gold responses score perfectly") {
  auto g = gold(50, 4);
  std::vector<std::pair<std::string, std::string>> rs;
  for (std::size_t i = 0; i < g.tasks.size(); ++i) rs.emplace_back(g.tasks[i].id(), render_plan(g.plans[i]));
  auto r = evaluate_responses(g.tasks, rs, g.lengths);
  CHECK(r.n_tasks == 50);
  CHECK(r.solved_rate == 1.0);
  CHECK(r.optimality_rate == 1.0);
  for (const auto& row : solved_by_length_histogram(r)) CHECK(row.rate == 1.0);
  CHECK(r.outcomes.at("valid") == 50);
}

TEST_CASE("empty responses solve nothing") {
  auto g = gold(30, 5);
  std::vector<std::pair<std::string, std::string>> rs;
  for (const auto& t : g.tasks) rs.emplace_back(t.id(), "");
  auto r = evaluate_responses(g.tasks, rs, g.lengths);
  CHECK(r.solved_rate == 0.0);
  CHECK_FALSE(r.optimality_rate.has_value());
  CHECK(r.outcomes.at("goal_not_satisfied") == 30);
}

TEST_CASE("mixed batch: nine valid of ten, eight optimal of nine") {
  auto g = gold(10, 6);
  std::vector<std::pair<std::string, std::string>> rs;
  for (std::size_t i = 0; i < 10; ++i) {
    Plan p = g.plans[i];
    if (i == 0) p = with_detour(p);
    if (i == 1) p.actions.erase(p.actions.begin());
    rs.emplace_back(g.tasks[i].id(), "Here you go:\n" + render_plan(p) + "\nDone.");
  }
  auto r = evaluate_responses(g.tasks, rs, g.lengths);
  CHECK(r.n_solved == 9);
  CHECK(r.solved_rate == doctest::Approx(0.9));
  CHECK(r.n_optimal == 8);
  CHECK(*r.optimality_rate == doctest::Approx(8.0 / 9.0));
}

TEST_CASE("missing responses, parse errors and the histogram") {
  auto g = gold(40, 7);
  std::vector<std::pair<std::string, std::string>> rs;
  for (std::size_t i = 0; i < 30; ++i) {
    const std::string text = i % 3 == 0 ? "[PLAN]\ndance\n[PLAN END]" : render_plan(g.plans[i]);
    rs.emplace_back(g.tasks[i].id(), text);
  }
  auto lengths = g.lengths;
  lengths.erase(g.tasks[5].id());
  auto r = evaluate_responses(g.tasks, rs, lengths);
  CHECK(r.outcomes.at("no_response") == 10);
  CHECK(r.outcomes.at("parse_error") == 10);
  CHECK(r.n_solved == 20);
  std::size_t attempted = 0, solved = 0, outcomes = 0;
  for (const auto& row : solved_by_length_histogram(r)) {
    attempted += row.attempted;
    solved += row.solved;
  }
  for (const auto& [name, n] : r.outcomes) outcomes += n;
  CHECK(attempted == 40);
  CHECK(solved == 20);
  CHECK(outcomes == 40);
  CHECK(r.histogram.at(-1).attempted == 1);
  CHECK(r.histogram.size() > 2);
  auto table = render_report_table(r);
  CHECK(table.find("solved") != std::string::npos);
}

TEST_CASE("unknown and duplicate response ids are rejected") {
  auto g = gold(5, 8);
  CHECK_THROWS_AS(evaluate_responses(g.tasks, {{"nope", ""}}, g.lengths), UnknownId);
  CHECK_THROWS_AS(evaluate_responses(g.tasks, {{g.tasks[0].id(), ""}, {g.tasks[0].id(), ""}}, g.lengths),
                  DuplicateId);
}

TEST_CASE("reports do not depend on response order or thread count") {
  auto g = gold(60, 9);
  std::vector<std::pair<std::string, std::string>> rs;
  for (std::size_t i = 0; i < g.tasks.size(); ++i) {
    Plan p = i % 4 == 0 ? with_detour(g.plans[i]) : g.plans[i];
    if (i % 7 == 0) p.actions.pop_back();
    rs.emplace_back(g.tasks[i].id(), render_plan(p));
  }
  auto a = evaluate_responses(g.tasks, rs, g.lengths, 1);
  std::reverse(rs.begin(), rs.end());
  auto b = evaluate_responses(g.tasks, rs, g.lengths, 3);
  CHECK(a.n_solved == b.n_solved);
  CHECK(a.n_optimal == b.n_optimal);
  CHECK(a.outcomes == b.outcomes);
  CHECK(render_report_table(a) == render_report_table(b));
  REQUIRE(a.verdicts.size() == b.verdicts.size());
  for (std::size_t i = 0; i < a.verdicts.size(); ++i) {
    CHECK(a.verdicts[i].first == b.verdicts[i].first);
    CHECK(a.verdicts[i].second.kind == b.verdicts[i].second.kind);
  }
}

}  // TEST_SUITE
