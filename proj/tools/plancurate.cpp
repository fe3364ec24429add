// plancurate: generate, solve, embed, select, emit and validate planning-task
// corpora for fine-tuning experiments.

#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "plancurate/errors.hpp"
#include "plancurate/evaluation.hpp"
#include "plancurate/pipeline.hpp"
#include "plancurate/rng.hpp"

using namespace plancurate;

namespace {

int exit_code(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::kUsage:
      return 1;
    case ErrorCategory::kData:
      return 2;
    case ErrorCategory::kResource:
      return 3;
  }
  return 2;
}

PromptMode parse_mode(const std::string& s) {
  if (s == "zero-shot") return PromptMode::kZeroShot;
  if (s == "one-shot") return PromptMode::kOneShot;
  throw InvalidValue("unknown prompt mode " + s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planning-task corpus curation for LLM fine-tuning"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values; sections name subcommands");

  std::uint64_t seed = 0;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--seed", seed, "Global seed; stages derive their own streams from it")
      ->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate distinct random tasks");
  std::string gen_domain = "blocksworld", gen_out, gen_test_out;
  GenSpec spec;
  std::size_t test_count = 0;
  double imb_p = -1.0;
  ImbalanceSpec imb;
  gen->add_option("--domain", gen_domain)->check(CLI::IsMember({"blocksworld", "logistics"}));
  gen->add_option("--count,-n", spec.count, "Number of tasks")->required();
  gen->add_option("--blocks", spec.n_blocks, "Blocks per task")->capture_default_str();
  gen->add_option("--cities", spec.logistics.cities.hi)->capture_default_str();
  gen->add_option("--min-cities", spec.logistics.cities.lo)->capture_default_str();
  gen->add_option("--locations", spec.logistics.locations.hi)->capture_default_str();
  gen->add_option("--min-locations", spec.logistics.locations.lo)->capture_default_str();
  gen->add_option("--airplanes", spec.logistics.airplanes.hi)->capture_default_str();
  gen->add_option("--min-airplanes", spec.logistics.airplanes.lo)->capture_default_str();
  gen->add_option("--packages", spec.logistics.packages.hi)->capture_default_str();
  gen->add_option("--min-packages", spec.logistics.packages.lo)->capture_default_str();
  gen->add_option("--test-count", test_count, "Hold out this many tasks");
  gen->add_option("--test-out", gen_test_out);
  gen->add_option("--imbalance", imb_p, "Deplete this fraction of clusters (0..1)");
  gen->add_option("--imbalance-clusters", imb.n_clusters)->capture_default_str();
  gen->add_option("--imbalance-min", imb.j_range.lo)->capture_default_str();
  gen->add_option("--imbalance-max", imb.j_range.hi)->capture_default_str();
  gen->add_option("--out,-o", gen_out)->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Label tasks with optimal plans");
  SolveOptions so;
  solve->add_option("--tasks", so.tasks)->required()->check(CLI::ExistingFile);
  solve->add_option("--out,-o", so.out)->required();
  solve->add_option("--max-nodes", so.limits.max_nodes)->capture_default_str();
  solve->add_option("--max-seconds", so.limits.max_seconds)->capture_default_str();

  // embed
  auto* embed = app.add_subcommand("embed", "Write task embeddings");
  EmbedOptions eo;
  std::string embed_method = "graph";
  embed->add_option("--tasks", eo.tasks)->required()->check(CLI::ExistingFile);
  embed->add_option("--method", embed_method)
      ->check(CLI::IsMember({"graph", "tfidf", "external"}))
      ->capture_default_str();
  embed->add_option("--external", eo.external, "Embeddings produced elsewhere")
      ->check(CLI::ExistingFile);
  embed->add_option("--out,-o", eo.out)->required();

  // select
  auto* select = app.add_subcommand("select", "Select a diverse subset");
  SelectOptions sel;
  std::string reduction = "mds", algo = "kmeans", nearest = "clustering";
  select->add_option("--tasks", sel.tasks)->required()->check(CLI::ExistingFile);
  select->add_option("--embeddings", sel.embeddings)->check(CLI::ExistingFile);
  select->add_option("--method", sel.method)
      ->check(CLI::IsMember({"cmds", "random"}))
      ->capture_default_str();
  select->add_option("-k", sel.config.k, "Subset size")->required();
  select->add_option("--reduction", reduction)
      ->check(CLI::IsMember({"none", "pca", "mds"}))
      ->capture_default_str();
  select->add_option("--dim", sel.config.dim)->capture_default_str();
  select->add_option("--cluster", algo)
      ->check(CLI::IsMember({"kmeans", "kmedoids"}))
      ->capture_default_str();
  select->add_option("--nearest", nearest)
      ->check(CLI::IsMember({"clustering", "original"}))
      ->capture_default_str();
  select->add_option("--max-iter", sel.config.max_iter)->capture_default_str();
  select->add_option("--tol", sel.config.rel_tol)->capture_default_str();
  select->add_option("--report", sel.report, "Selection report with 2-D coordinates");
  select->add_option("--out,-o", sel.out)->required();

  // emit
  auto* emit = app.add_subcommand("emit", "Write a fine-tuning dataset");
  EmitOptions em;
  std::string emit_mode = "zero-shot";
  emit->add_option("--tasks", em.tasks)->required()->check(CLI::ExistingFile);
  emit->add_option("--labels", em.labels)->required()->check(CLI::ExistingFile);
  emit->add_option("--mode", emit_mode)
      ->check(CLI::IsMember({"zero-shot", "one-shot"}))
      ->capture_default_str();
  emit->add_option("--mix-k", em.mix_k, "Sample k tasks from each of two inputs");
  emit->add_option("--out,-o", em.out)->required();

  // validate
  auto* validate = app.add_subcommand("validate", "Score model responses");
  ValidateOptions vo;
  validate->add_option("--tasks", vo.tasks)->required()->check(CLI::ExistingFile);
  validate->add_option("--responses", vo.responses)->required()->check(CLI::ExistingFile);
  validate->add_option("--labels", vo.labels, "Oracle plans; solved on the fly when absent")
      ->check(CLI::ExistingFile);
  validate->add_option("--out,-o", vo.out)->required();

  // experiment
  auto* exp = app.add_subcommand("experiment", "Random vs CMDS-l vs CMDS-g diversity run");
  ExperimentOptions xo;
  std::string exp_domain = "blocksworld", exp_mode = "zero-shot";
  exp->add_option("--domain", exp_domain)
      ->check(CLI::IsMember({"blocksworld", "logistics"}))
      ->capture_default_str();
  exp->add_option("--blocks", xo.n_blocks)->capture_default_str();
  exp->add_option("--count,-n", xo.n_tasks)->capture_default_str();
  exp->add_option("-k", xo.ks, "Subset sizes")->capture_default_str();
  exp->add_option("--trials", xo.random_trials)->capture_default_str();
  exp->add_option("--dim", xo.dim, "MDS dimension for clustering")->capture_default_str();
  exp->add_option("--mode", exp_mode)
      ->check(CLI::IsMember({"zero-shot", "one-shot"}))
      ->capture_default_str();
  exp->add_option("--out,-o", xo.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      GenerateOptions go;
      spec.domain = parse_domain(gen_domain);
      spec.seed = derive_seed(seed, "generate");
      go.spec = spec;
      go.test_count = test_count;
      go.test_out = gen_test_out;
      go.out = gen_out;
      if (imb_p >= 0.0) {
        imb.p = imb_p;
        imb.seed = derive_seed(seed, "generate/imbalance");
        go.imbalance = imb;
      }
      cmd_generate(go);
    } else if (*solve) {
      so.jobs = jobs;
      cmd_solve(so);
    } else if (*embed) {
      eo.method = parse_embed_method(embed_method);
      if (eo.method == EmbedMethod::kExternal && eo.external.empty())
        throw InvalidValue("--method external needs --external");
      cmd_embed(eo);
    } else if (*select) {
      sel.config.reduction = parse_reduction(reduction);
      sel.config.cluster_algo = parse_cluster_algo(algo);
      sel.config.nearest = nearest == "original" ? NearestSpace::kOriginal : NearestSpace::kClustering;
      sel.config.seed = derive_seed(seed, "select/" + sel.method);
      sel.config.jobs = jobs;
      auto r = cmd_select(sel);
      std::cout << r.method << ": selected " << r.selected_ids.size()
                << " tasks, diversity " << r.diversity << "\n";
    } else if (*emit) {
      em.mode = parse_mode(emit_mode);
      em.seed = seed;
      std::cout << cmd_emit(em) << " records\n";
    } else if (*validate) {
      vo.jobs = jobs;
      auto report = cmd_validate(vo);
      std::cout << render_report_table(report);
    } else if (*exp) {
      xo.domain = parse_domain(exp_domain);
      xo.mode = parse_mode(exp_mode);
      xo.seed = seed;
      xo.jobs = jobs;
      std::cout << render_diversity_table(cmd_experiment(xo));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
