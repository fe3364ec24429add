#include <doctest.h>

#include <fstream>

#include "plancurate/formats.hpp"
#include "plancurate/generation.hpp"
#include "plancurate/solver.hpp"
#include "unit/helpers.hpp"

using namespace plancurate;
namespace bw = plancurate::blocksworld;
namespace lg = plancurate::logistics;

TEST_SUITE("formats") {

TEST_CASE("task records round-trip for both domains") {
  for (auto d : {Domain::kBlocksworld, Domain::kLogistics}) {
    GenSpec spec;
    spec.domain = d;
    spec.count = 100;
    spec.seed = 3;
    for (const auto& t : generate(spec)) {
      auto back = task_from_json(task_to_json(t));
      CHECK(back == t);
      CHECK(back.id() == t.id());
    }
  }
}

TEST_CASE("blocksworld record layout") {
  auto j = task_to_json(testing::bw_query_task());
  CHECK(j["domain"] == "blocksworld");
  CHECK(j["meta"]["n_blocks"] == 4);
  CHECK(j["init"]["support"] == nlohmann::json::array({"blue", "orange", "table", "red"}));
  CHECK(j["goal"]["on"][0] == nlohmann::json::array({"blue", "orange"}));
}

TEST_CASE("held blocks and loaded packages survive the round trip") {
  auto held = TaskInstance::blocksworld(bw::State::from_support({bw::kHand, bw::kTable}),
                                        bw::Goal::from_atoms({{0, 1}}, 2));
  CHECK(task_from_json(task_to_json(held)) == held);
  lg::Topology topo{2, 2, 1};
  auto s = lg::State::make(topo, {{0, 0}, {1, 1}}, {{1, 0}},
                           {lg::PackagePosition::in_truck(1), lg::PackagePosition::in_airplane(0)});
  auto t = TaskInstance::logistics(s, lg::Goal::make({{0, {0, 1}}}, topo, 2));
  CHECK(task_from_json(task_to_json(t)) == t);
}

TEST_CASE("a tampered record is rejected") {
  auto j = task_to_json(testing::bw_query_task());
  j["id"] = "0123";
  CHECK_THROWS_AS(task_from_json(j), InvalidValue);
  j = task_to_json(testing::bw_query_task());
  j["init"]["support"][0] = "purple";
  CHECK_THROWS_AS(task_from_json(j), InvalidValue);
}

TEST_CASE("task files") {
  auto dir = testing::scratch("tasks");
  const auto path = (dir / "t.jsonl").string();
  GenSpec spec;
  spec.count = 30;
  auto tasks = generate(spec);
  write_tasks(tasks, path);
  CHECK(read_tasks(path) == tasks);

  auto lines = testing::read_file(path);
  const auto first = lines.substr(0, lines.find('\n') + 1);
  std::ofstream(path) << first << first;
  CHECK_THROWS_AS(read_tasks(path), DuplicateId);
  std::ofstream(path) << first << "\n{\"id\": 1}\n";
  try {
    read_tasks(path);
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(read_tasks((dir / "missing.jsonl").string()), IoError);
}

TEST_CASE("label files round-trip and serve task subsets") {
  auto dir = testing::scratch("labels");
  const auto path = (dir / "l.jsonl").string();
  GenSpec spec;
  spec.domain = Domain::kLogistics;
  spec.count = 20;
  auto tasks = generate(spec);
  auto corpus = label_corpus(tasks);
  write_labels(corpus, tasks, path);
  auto labels = read_labels(path, tasks);
  REQUIRE(labels.size() == 20);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(labels[i].id == tasks[i].id());
    CHECK(labels[i].status == SolveStatus::kSolved);
    CHECK(*labels[i].plan == corpus.labeled[i].plan);
  }
  std::vector<TaskInstance> subset(tasks.begin(), tasks.begin() + 5);
  CHECK(read_labels(path, subset).size() == 5);
}

TEST_CASE("unsolved labels carry their status") {
  auto dir = testing::scratch("labels_unsolved");
  const auto path = (dir / "l.jsonl").string();
  auto t = testing::bw_query_task();
  auto corpus = label_corpus({t}, {1, 60.0});
  write_labels(corpus, {t}, path);
  auto labels = read_labels(path, {t});
  REQUIRE(labels.size() == 1);
  CHECK(labels[0].status == SolveStatus::kLimitExceeded);
  CHECK_FALSE(labels[0].plan.has_value());
}

TEST_CASE("selection reports record the configuration") {
  GenSpec spec;
  spec.count = 30;
  auto tasks = generate(spec);
  auto emb = graph_embeddings(tasks);
  SelectionConfig cfg;
  cfg.k = 3;
  auto j = selection_to_json(select_cmds(tasks, emb, cfg));
  CHECK(j["method"] == "cmds");
  CHECK(j["config"]["reduction"] == "mds");
  CHECK(j["selected_ids"].size() == 3);
  CHECK(j.contains("reduction_note"));
  CHECK_FALSE(selection_to_json(select_random(tasks, 3, 1)).contains("reduction_note"));
}

}  // TEST_SUITE
