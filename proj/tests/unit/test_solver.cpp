#include <doctest.h>

#include "oracles.hpp"
#include "plancurate/generation.hpp"
#include "plancurate/nl_codec.hpp"
#include "plancurate/solver.hpp"
#include "unit/helpers.hpp"

using namespace plancurate;
namespace bw = plancurate::blocksworld;
namespace lg = plancurate::logistics;

namespace {

bool plan_reaches_goal(const TaskInstance& task, const Plan& plan) {
  if (task.is_blocksworld()) {
    auto s = task.as_blocksworld().init;
    for (const auto& a : plan.actions) {
      auto next = bw::try_apply(s, std::get<bw::Action>(a));
      if (!next) return false;
      s = *next;
    }
    return bw::satisfies_goal(s, task.as_blocksworld().goal);
  }
  auto s = task.as_logistics().init;
  for (const auto& a : plan.actions) {
    auto next = lg::try_apply(s, std::get<lg::Action>(a));
    if (!next) return false;
    s = *next;
  }
  return lg::satisfies_goal(s, task.as_logistics().goal);
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("blocksworld worked example needs twelve steps") {
  auto [task, plan] = worked_example(Domain::kBlocksworld);
  auto r = solve_optimal(task);
  REQUIRE(r.status == SolveStatus::kSolved);
  CHECK(r.length == 12u);
  CHECK(plan_reaches_goal(task, *r.plan));
}

TEST_CASE("logistics worked example needs eight steps") {
  auto [task, plan] = worked_example(Domain::kLogistics);
  auto r = solve_optimal(task);
  REQUIRE(r.status == SolveStatus::kSolved);
  CHECK(r.length == 8u);
  CHECK(plan_reaches_goal(task, *r.plan));
}

TEST_CASE("two-block swap takes four steps") {
  // 0 on 1, goal 1 on 0.
  auto task = testing::bw_task({1, bw::kTable}, {{1, 0}});
  auto r = solve_optimal(task);
  CHECK(r.length == 4u);
  CHECK(r.plan->actions.front() == Action(bw::Action::unstack(0, 1)));
}

TEST_CASE("a goal that already holds yields the empty plan") {
  auto task = testing::bw_task({1, bw::kTable}, {{0, 1}}, GoalCheck::kAllowSatisfied);
  auto r = solve_optimal(task);
  REQUIRE(r.status == SolveStatus::kSolved);
  CHECK(r.length == 0u);
  CHECK(r.plan->empty());
}

TEST_CASE("status names") {
  CHECK(status_name(SolveStatus::kSolved) == "solved");
  CHECK(status_name(SolveStatus::kUnsolvable) == "unsolvable");
  CHECK(status_name(SolveStatus::kLimitExceeded) == "limit-exceeded");
}

TEST_CASE("lengths match an independent search and both modes agree") {
  GenSpec spec;
  spec.count = 60;
  spec.seed = 5;
  spec.n_blocks = 4;
  for (const auto& task : generate(spec)) {
    const auto& p = task.as_blocksworld();
    auto bfs = solve_optimal(task);
    auto ucs = solve_optimal(task, {}, SearchMode::kUniformCost);
    REQUIRE(bfs.status == SolveStatus::kSolved);
    REQUIRE(ucs.status == SolveStatus::kSolved);
    CHECK(bfs.length == ucs.length);
    const int expected = oracle::shortest_plan(p.init.support(), p.goal.atoms(), 20);
    CHECK(static_cast<int>(*bfs.length) == expected);
    CHECK(plan_reaches_goal(task, *bfs.plan));
    CHECK(plan_reaches_goal(task, *ucs.plan));
  }
}

TEST_CASE("logistics modes agree on generated tasks") {
  GenSpec spec;
  spec.domain = Domain::kLogistics;
  spec.count = 30;
  spec.seed = 9;
  for (const auto& task : generate(spec)) {
    auto bfs = solve_optimal(task);
    auto ucs = solve_optimal(task, {}, SearchMode::kUniformCost);
    REQUIRE(bfs.status == SolveStatus::kSolved);
    CHECK(bfs.length == ucs.length);
    CHECK(plan_reaches_goal(task, *bfs.plan));
  }
}

TEST_CASE("node limit is reported, not treated as unsolvable") {
  auto [task, plan] = worked_example(Domain::kBlocksworld);
  auto r = solve_optimal(task, {1, 60.0});
  CHECK(r.status == SolveStatus::kLimitExceeded);
  CHECK_FALSE(r.plan.has_value());
  CHECK_FALSE(optimal_length(task, {1, 60.0}).has_value());
}

TEST_CASE("labelling an empty corpus") {
  auto corpus = label_corpus({});
  CHECK(corpus.labeled.empty());
  CHECK(corpus.unsolved.empty());
}

TEST_CASE("labelling is deterministic and independent of thread count") {
  GenSpec spec;
  spec.count = 40;
  spec.seed = 17;
  auto tasks = generate(spec);
  auto a = label_corpus(tasks, {}, 1);
  auto b = label_corpus(tasks, {}, 4);
  REQUIRE(a.labeled.size() == tasks.size());
  REQUIRE(b.labeled.size() == tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    CHECK(a.labeled[i].task == tasks[i]);
    CHECK(a.labeled[i].plan == b.labeled[i].plan);
  }
}

TEST_CASE("tasks over the limit land in the unsolved list") {
  auto [task, plan] = worked_example(Domain::kBlocksworld);
  auto easy = testing::bw_task({1, bw::kTable}, {{1, 0}});
  auto corpus = label_corpus({task, easy}, {20, 60.0});
  REQUIRE(corpus.labeled.size() == 1);
  CHECK(corpus.labeled[0].task == easy);
  REQUIRE(corpus.unsolved.size() == 1);
  CHECK(corpus.unsolved[0].second == SolveStatus::kLimitExceeded);
}

}  // TEST_SUITE
