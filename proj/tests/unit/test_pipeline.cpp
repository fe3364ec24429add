#include <doctest.h>

#include <filesystem>

#include "plancurate/formats.hpp"
#include "plancurate/pipeline.hpp"
#include "unit/helpers.hpp"

using namespace plancurate;
namespace fs = std::filesystem;

namespace {

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = testing::read_file(e.path().string());
  return out;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("generate is byte-for-byte reproducible") {
  auto dir = testing::scratch("pipeline_generate");
  GenerateOptions opt;
  opt.spec.count = 100;
  opt.spec.seed = 5;
  opt.test_count = 10;
  opt.out = (dir / "a.jsonl").string();
  opt.test_out = (dir / "a_test.jsonl").string();
  cmd_generate(opt);
  opt.out = (dir / "b.jsonl").string();
  opt.test_out = (dir / "b_test.jsonl").string();
  cmd_generate(opt);
  CHECK(testing::read_file((dir / "a.jsonl").string()) == testing::read_file((dir / "b.jsonl").string()));
  CHECK(read_tasks((dir / "a.jsonl").string()).size() == 90);
  CHECK(read_tasks((dir / "a_test.jsonl").string()).size() == 10);
  CHECK(fs::exists(dir / "a.manifest.json"));
}

TEST_CASE("solve, embed, select, emit and validate chain together") {
  auto dir = testing::scratch("pipeline_chain");
  auto p = [&](const char* name) { return (dir / name).string(); };
  GenerateOptions gen;
  gen.spec.count = 120;
  gen.spec.seed = 2;
  gen.out = p("tasks.jsonl");
  cmd_generate(gen);
  cmd_solve({p("tasks.jsonl"), p("labels.jsonl"), {}, 1});
  for (auto m : {EmbedMethod::kGraph, EmbedMethod::kTfidf}) {
    EmbedOptions e;
    e.tasks = p("tasks.jsonl");
    e.out = p(m == EmbedMethod::kGraph ? "graph.jsonl" : "text.jsonl");
    e.method = m;
    cmd_embed(e);
  }
  SelectOptions sel;
  sel.tasks = p("tasks.jsonl");
  sel.embeddings = p("graph.jsonl");
  sel.out = p("selected.jsonl");
  sel.report = p("report.json");
  sel.config.k = 12;
  auto r = cmd_select(sel);
  CHECK(r.selected_ids.size() == 12);
  CHECK(read_tasks(p("selected.jsonl")).size() == 12);
  auto report = nlohmann::json::parse(testing::read_file(p("report.json")));
  CHECK(report.contains("coordinates"));

  EmitOptions em;
  em.tasks = {p("selected.jsonl")};
  em.labels = {p("labels.jsonl")};
  em.out = p("dataset.jsonl");
  CHECK(cmd_emit(em) == 12);

  auto tasks = read_tasks(p("selected.jsonl"));
  std::vector<std::pair<std::string, std::string>> rs;
  for (const auto& rec : read_finetune_dataset(p("dataset.jsonl"))) rs.emplace_back("", rec.assistant);
  for (std::size_t i = 0; i < tasks.size(); ++i) rs[i].first = tasks[i].id();
  write_responses(rs, p("responses.jsonl"));
  ValidateOptions v;
  v.tasks = p("selected.jsonl");
  v.responses = p("responses.jsonl");
  v.labels = p("labels.jsonl");
  v.out = p("eval.json");
  auto rep = cmd_validate(v);
  CHECK(rep.solved_rate == 1.0);
  CHECK(rep.optimality_rate == 1.0);
  CHECK(fs::exists(dir / "eval.txt"));
}

TEST_CASE("emit mixes two domains") {
  auto dir = testing::scratch("pipeline_mix");
  auto p = [&](const char* name) { return (dir / name).string(); };
  GenerateOptions gen;
  gen.spec.count = 150;
  gen.out = p("bw.jsonl");
  cmd_generate(gen);
  gen.spec.domain = Domain::kLogistics;
  gen.out = p("lg.jsonl");
  cmd_generate(gen);
  cmd_solve({p("bw.jsonl"), p("bw_labels.jsonl"), {}, 1});
  cmd_solve({p("lg.jsonl"), p("lg_labels.jsonl"), {}, 1});
  EmitOptions em;
  em.tasks = {p("bw.jsonl"), p("lg.jsonl")};
  em.labels = {p("bw_labels.jsonl"), p("lg_labels.jsonl")};
  em.out = p("mix.jsonl");
  em.mix_k = 100;
  em.seed = 3;
  CHECK(cmd_emit(em) == 200);
  std::size_t n_bw = 0;
  for (const auto& rec : read_finetune_dataset(p("mix.jsonl")))
    n_bw += rec.user.find("I am playing with a set of blocks") == 0;
  CHECK(n_bw == 100);
}

TEST_CASE("a small experiment is reproducible") {
  auto a = testing::scratch("pipeline_exp_a");
  auto b = testing::scratch("pipeline_exp_b");
  ExperimentOptions opt;
  opt.seed = 4;
  opt.n_tasks = 150;
  opt.ks = {10, 20};
  opt.random_trials = 5;
  opt.out_dir = a.string();
  auto rows = cmd_experiment(opt);
  opt.out_dir = b.string();
  opt.jobs = 2;
  cmd_experiment(opt);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].k == 10);
  CHECK(rows[0].cmds_g > 0.0);
  auto ta = tree(a), tb = tree(b);
  CHECK(ta.size() == tb.size());
  CHECK(ta == tb);
  CHECK(ta.count("diversity.json") == 1);
  CHECK(ta.count("manifest.json") == 1);
}

}  // TEST_SUITE
