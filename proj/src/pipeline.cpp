#include "plancurate/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <unordered_map>

#include "plancurate/digest.hpp"
#include "plancurate/embedding.hpp"
#include "plancurate/errors.hpp"
#include "plancurate/evaluation.hpp"
#include "plancurate/formats.hpp"
#include "plancurate/rng.hpp"

namespace plancurate {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string manifest_path(const std::string& out) {
  return fs::path(out).replace_extension(".manifest.json").string();
}

std::string display_path(const std::string& path, const std::string& relative_to) {
  if (relative_to.empty()) return fs::path(path).filename().string();
  return fs::path(path).lexically_relative(relative_to).generic_string();
}

// Reorders an embedding set to follow the task order.
EmbeddingSet align(const EmbeddingSet& set, const std::vector<TaskInstance>& tasks) {
  std::unordered_map<std::string, std::size_t> row;
  for (std::size_t i = 0; i < set.ids.size(); ++i) row.emplace(set.ids[i], i);
  EmbeddingSet out;
  out.metric = set.metric;
  for (const auto& t : tasks) {
    auto it = row.find(t.id());
    if (it == row.end()) throw UnknownId("no embedding for task " + t.id());
    out.ids.push_back(t.id());
    out.vectors.push_back(set.vectors[it->second]);
  }
  return out;
}

EmbeddingSet text_embeddings(const std::vector<TaskInstance>& tasks) {
  std::vector<std::string> ids, texts;
  for (const auto& t : tasks) {
    ids.push_back(t.id());
    texts.push_back(render_statement(t));
  }
  return tfidf_embed(ids, texts);
}

std::vector<TaskInstance> pick(const std::vector<TaskInstance>& tasks,
                               const std::vector<std::size_t>& indices) {
  std::vector<TaskInstance> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(tasks[i]);
  return out;
}

std::vector<std::pair<TaskInstance, Plan>> labeled_pairs(const std::vector<TaskInstance>& tasks,
                                                         const std::vector<LabelRecord>& labels) {
  std::unordered_map<std::string, const Plan*> plans;
  for (const auto& l : labels)
    if (l.plan) plans.emplace(l.id, &*l.plan);
  std::vector<std::pair<TaskInstance, Plan>> out;
  for (const auto& t : tasks)
    if (auto it = plans.find(t.id()); it != plans.end()) out.emplace_back(t, *it->second);
  return out;
}

json gen_spec_json(const GenSpec& s) {
  json j = {{"domain", domain_name(s.domain)}, {"count", s.count}, {"seed", s.seed}};
  if (s.domain == Domain::kBlocksworld) {
    j["n_blocks"] = s.n_blocks;
  } else {
    auto r = [](const IntRange& x) { return json::array({x.lo, x.hi}); };
    j["cities"] = r(s.logistics.cities);
    j["locations"] = r(s.logistics.locations);
    j["airplanes"] = r(s.logistics.airplanes);
    j["packages"] = r(s.logistics.packages);
  }
  return j;
}

json limits_json(const SolveLimits& l) {
  return {{"max_nodes", l.max_nodes}, {"max_seconds", l.max_seconds}};
}

json selection_config_json(const SelectionConfig& c) {
  return {{"k", c.k},
          {"reduction", reduction_name(c.reduction)},
          {"dim", c.dim},
          {"cluster_algo", cluster_algo_name(c.cluster_algo)},
          {"nearest", c.nearest == NearestSpace::kClustering ? "clustering" : "original"},
          {"seed", c.seed},
          {"max_iter", c.max_iter},
          {"rel_tol", c.rel_tol}};
}

// 2-D coordinates of every task for external plotting.
json coordinates(const EmbeddingSet& set) {
  auto points = PointSet::from_rows(set.vectors);
  Reduced r = set.metric == Metric::kL2 || points.cols <= 2
                  ? reduce_pca(points, 2)
                  : reduce_mds(distance_matrix(set), 2);
  json out = json::array();
  for (std::size_t i = 0; i < r.points.rows; ++i)
    out.push_back({r.points.row(i)[0], r.points.row(i)[1]});
  return out;
}

}  // namespace

std::string file_sha256(const std::string& path) { return sha256_hex(read_text(path)); }

json Manifest::to_json(const std::string& relative_to) const {
  auto files = [&](const std::vector<std::string>& paths) {
    json arr = json::array();
    for (const auto& p : paths)
      arr.push_back({{"path", display_path(p, relative_to)},
                     {"sha256", file_sha256(p)},
                     {"bytes", fs::file_size(p)}});
    return arr;
  };
  json j = {{"tool", "plancurate"}, {"version", kToolVersion}, {"command", command_}};
  j["seed"] = seed_ ? json(*seed_) : json(nullptr);
  j["config"] = config_;
  j["inputs"] = files(inputs_);
  j["outputs"] = files(outputs_);
  return j;
}

void Manifest::write(const std::string& path, const std::string& relative_to) const {
  write_text(path, to_json(relative_to).dump(2) + "\n");
}

void cmd_generate(const GenerateOptions& o) {
  auto tasks = generate(o.spec);
  json config = {{"spec", gen_spec_json(o.spec)}, {"test_count", o.test_count}};
  if (o.test_count > 0) {
    if (o.test_out.empty()) throw SpecError("a test split needs a test output path");
    auto split = hold_out(tasks, o.test_count, derive_seed(o.spec.seed, "generate/hold-out"));
    tasks = std::move(split.train);
    write_tasks(split.test, o.test_out);
  }
  if (o.imbalance) {
    std::vector<std::vector<double>> enc;
    for (const auto& e : encode_corpus(tasks)) enc.push_back(e.as_doubles());
    auto result = make_imbalanced(tasks, enc, *o.imbalance);
    tasks = std::move(result.tasks);
    config["imbalance"] = {{"p", o.imbalance->p},
                           {"j_range", {o.imbalance->j_range.lo, o.imbalance->j_range.hi}},
                           {"n_clusters", o.imbalance->n_clusters},
                           {"seed", o.imbalance->seed},
                           {"depleted", result.depleted},
                           {"retained", result.retained}};
  }
  write_tasks(tasks, o.out);
  Manifest m("generate");
  m.set_seed(o.spec.seed);
  m.set_config(config);
  m.add_output(o.out);
  if (o.test_count > 0) m.add_output(o.test_out);
  m.write(manifest_path(o.out));
}

void cmd_solve(const SolveOptions& o) {
  auto tasks = read_tasks(o.tasks);
  auto corpus = label_corpus(tasks, o.limits, o.jobs);
  write_labels(corpus, tasks, o.out);
  Manifest m("solve");
  m.set_config({{"limits", limits_json(o.limits)}});
  m.add_input(o.tasks);
  m.add_output(o.out);
  m.write(manifest_path(o.out));
  std::size_t limited = 0;
  for (const auto& [t, status] : corpus.unsolved)
    if (status == SolveStatus::kLimitExceeded) ++limited;
  if (limited > 0)
    throw ResourceLimitError(std::to_string(limited) + " task(s) exceeded solver limits");
}

EmbedMethod parse_embed_method(std::string_view name) {
  if (name == "graph") return EmbedMethod::kGraph;
  if (name == "tfidf") return EmbedMethod::kTfidf;
  if (name == "external") return EmbedMethod::kExternal;
  throw InvalidValue("unknown embedding method " + std::string(name));
}

void cmd_embed(const EmbedOptions& o) {
  auto tasks = read_tasks(o.tasks);
  EmbeddingSet set;
  const char* method = "graph";
  switch (o.method) {
    case EmbedMethod::kGraph:
      set = graph_embeddings(tasks);
      break;
    case EmbedMethod::kTfidf:
      set = text_embeddings(tasks);
      method = "tfidf";
      break;
    case EmbedMethod::kExternal:
      set = align(load_external_embeddings(o.external, &tasks), tasks);
      method = "external";
      break;
  }
  save_embeddings(set, o.out);
  Manifest m("embed");
  m.set_config({{"method", method}, {"metric", metric_name(set.metric)}});
  m.add_input(o.tasks);
  if (o.method == EmbedMethod::kExternal) m.add_input(o.external);
  m.add_output(o.out);
  m.write(manifest_path(o.out));
}

SelectionResult cmd_select(const SelectOptions& o) {
  auto tasks = read_tasks(o.tasks);
  std::optional<EmbeddingSet> set;
  if (!o.embeddings.empty()) set = align(load_external_embeddings(o.embeddings, &tasks), tasks);
  SelectionResult result;
  if (o.method == "cmds") {
    if (!set) throw SpecError("cmds selection needs an embeddings file");
    result = select_cmds(tasks, *set, o.config);
  } else if (o.method == "random") {
    result = select_random(tasks, o.config.k, o.config.seed, set ? &*set : nullptr);
  } else {
    throw SpecError("unknown selection method " + o.method);
  }
  write_tasks(pick(tasks, result.selected_indices), o.out);
  Manifest m("select");
  m.set_seed(o.config.seed);
  m.set_config({{"method", o.method}, {"selection", selection_config_json(o.config)}});
  m.add_input(o.tasks);
  if (set) m.add_input(o.embeddings);
  m.add_output(o.out);
  if (!o.report.empty()) {
    auto report = selection_to_json(result);
    if (set) report["coordinates"] = coordinates(*set);
    write_text(o.report, report.dump(2) + "\n");
    m.add_output(o.report);
  }
  m.write(manifest_path(o.out));
  return result;
}

std::size_t cmd_emit(const EmitOptions& o) {
  if (o.tasks.empty() || o.tasks.size() != o.labels.size())
    throw SpecError("emit needs one labels file per tasks file");
  std::vector<std::vector<std::pair<TaskInstance, Plan>>> groups;
  for (std::size_t i = 0; i < o.tasks.size(); ++i) {
    auto tasks = read_tasks(o.tasks[i]);
    groups.push_back(labeled_pairs(tasks, read_labels(o.labels[i], tasks)));
  }
  std::vector<std::pair<TaskInstance, Plan>> pairs;
  if (o.mix_k > 0) {
    if (groups.size() != 2) throw SpecError("mixing needs exactly two tasks/labels inputs");
    std::unordered_map<std::string, const Plan*> plans;
    std::vector<TaskInstance> a, b;
    for (const auto& [t, p] : groups[0]) a.push_back(t), plans.emplace(t.id(), &p);
    for (const auto& [t, p] : groups[1]) b.push_back(t), plans.emplace(t.id(), &p);
    for (auto& t : mix_corpora(a, b, o.mix_k, derive_seed(o.seed, "emit/mix")))
      pairs.emplace_back(t, *plans.at(t.id()));
  } else {
    for (auto& g : groups) pairs.insert(pairs.end(), g.begin(), g.end());
  }
  auto count = emit_finetune_dataset(pairs, o.mode, o.out);
  Manifest m("emit");
  m.set_seed(o.seed);
  m.set_config({{"mode", o.mode == PromptMode::kOneShot ? "one-shot" : "zero-shot"},
                {"mix_k", o.mix_k},
                {"records", count}});
  for (std::size_t i = 0; i < o.tasks.size(); ++i) {
    m.add_input(o.tasks[i]);
    m.add_input(o.labels[i]);
  }
  m.add_output(o.out);
  m.write(manifest_path(o.out));
  return count;
}

CorpusReport cmd_validate(const ValidateOptions& o) {
  auto tasks = read_tasks(o.tasks);
  auto responses = ingest_responses(o.responses);
  std::map<std::string, std::size_t> lengths;
  if (!o.labels.empty()) {
    for (const auto& l : read_labels(o.labels, tasks))
      if (l.plan) lengths[l.id] = l.plan->size();
  } else {
    for (const auto& l : label_corpus(tasks, o.limits, o.jobs).labeled)
      lengths[l.task.id()] = l.plan.size();
  }
  auto report = evaluate_responses(tasks, responses, lengths, o.jobs);
  write_text(o.out, report_to_json(report).dump(2) + "\n");
  auto table = fs::path(o.out).replace_extension(".txt").string();
  write_text(table, render_report_table(report));
  Manifest m("validate");
  m.set_config({{"oracle", o.labels.empty() ? "solver" : "labels"}});
  m.add_input(o.tasks);
  m.add_input(o.responses);
  if (!o.labels.empty()) m.add_input(o.labels);
  m.add_output(o.out);
  m.add_output(table);
  m.write(manifest_path(o.out));
  return report;
}

std::vector<DiversityRow> cmd_experiment(const ExperimentOptions& o) {
  const fs::path root(o.out_dir);
  fs::create_directories(root / "selections");
  fs::create_directories(root / "datasets");
  Manifest manifest("experiment");
  manifest.set_seed(o.seed);
  auto out = [&](const fs::path& rel) {
    auto p = (root / rel).string();
    manifest.add_output(p);
    return p;
  };

  GenSpec spec;
  spec.domain = o.domain;
  spec.count = o.n_tasks;
  spec.seed = derive_seed(o.seed, "experiment/generate");
  spec.n_blocks = o.n_blocks;
  auto tasks = generate(spec);
  write_tasks(tasks, out("tasks.jsonl"));

  auto labeled = label_corpus(tasks, o.limits, o.jobs);
  if (!labeled.unsolved.empty())
    throw ResourceLimitError(std::to_string(labeled.unsolved.size()) +
                             " generated task(s) could not be solved");
  write_labels(labeled, tasks, out("labels.jsonl"));
  std::unordered_map<std::string, const Plan*> plans;
  for (const auto& l : labeled.labeled) plans.emplace(l.task.id(), &l.plan);

  auto graph = graph_embeddings(tasks);
  auto text = text_embeddings(tasks);
  save_embeddings(graph, out("embeddings_graph.jsonl"));
  save_embeddings(text, out("embeddings_text.jsonl"));
  auto graph_d = distance_matrix(graph, o.jobs);
  auto text_d = distance_matrix(text, o.jobs);
  const Reduced graph_space = reduce_mds(graph_d, o.dim);
  const Reduced text_space = reduce_mds(text_d, o.dim);

  auto emit = [&](const std::vector<std::size_t>& indices, const std::string& name) {
    std::vector<std::pair<TaskInstance, Plan>> pairs;
    for (auto i : indices) pairs.emplace_back(tasks[i], *plans.at(tasks[i].id()));
    emit_finetune_dataset(pairs, o.mode, out(fs::path("datasets") / (name + ".jsonl")));
  };
  auto save_selection = [&](const SelectionResult& r, const std::string& name) {
    write_text(out(fs::path("selections") / (name + ".json")), selection_to_json(r).dump(2) + "\n");
  };

  std::vector<DiversityRow> rows;
  for (auto k : o.ks) {
    const auto tag = "k" + std::to_string(k);
    DiversityRow row;
    row.k = k;

    std::vector<double> trials;
    for (std::size_t t = 0; t < o.random_trials; ++t) {
      auto seed = derive_seed(o.seed, "experiment/random/" + tag + "/" + std::to_string(t));
      auto r = select_random(tasks, k, seed);
      trials.push_back(diversity(graph_d, r.selected_indices));
      row.random_mean_text += diversity(text_d, r.selected_indices);
      if (t == 0) {
        r.diversity = trials.back();
        save_selection(r, "random_" + tag);
        emit(r.selected_indices, "random_" + tag);
      }
    }
    if (!trials.empty()) {
      double mean = 0.0;
      for (double d : trials) mean += d;
      mean /= static_cast<double>(trials.size());
      double var = 0.0;
      for (double d : trials) var += (d - mean) * (d - mean);
      row.random_mean = mean;
      row.random_std = trials.size() > 1 ? std::sqrt(var / static_cast<double>(trials.size() - 1)) : 0.0;
      row.random_mean_text /= static_cast<double>(trials.size());
    }

    SelectionConfig g;
    g.k = k;
    g.dim = o.dim;
    g.seed = derive_seed(o.seed, "experiment/cmds-g/" + tag);
    g.jobs = o.jobs;
    auto rg = select_cmds(tasks, graph, g, &graph_space);
    row.cmds_g = diversity(graph_d, rg.selected_indices);
    row.cmds_g_text = diversity(text_d, rg.selected_indices);
    save_selection(rg, "cmds-g_" + tag);
    emit(rg.selected_indices, "cmds-g_" + tag);

    SelectionConfig l = g;
    l.seed = derive_seed(o.seed, "experiment/cmds-l/" + tag);
    auto rl = select_cmds(tasks, text, l, &text_space);
    row.cmds_l = diversity(graph_d, rl.selected_indices);
    row.cmds_l_text = diversity(text_d, rl.selected_indices);
    save_selection(rl, "cmds-l_" + tag);
    emit(rl.selected_indices, "cmds-l_" + tag);

    rows.push_back(row);
  }

  json table = json::array();
  for (const auto& r : rows)
    table.push_back({{"k", r.k},
                     {"random_mean", r.random_mean},
                     {"random_std", r.random_std},
                     {"cmds_l", r.cmds_l},
                     {"cmds_g", r.cmds_g},
                     {"random_mean_text", r.random_mean_text},
                     {"cmds_l_text", r.cmds_l_text},
                     {"cmds_g_text", r.cmds_g_text}});
  write_text(out("diversity.json"), json{{"metric_graph", "edit"}, {"metric_text", "l2"},
                                         {"random_trials", o.random_trials}, {"rows", table}}
                                        .dump(2) + "\n");
  write_text(out("diversity.txt"), render_diversity_table(rows));

  json ks = o.ks;
  manifest.set_config({{"domain", domain_name(o.domain)},
                       {"n_blocks", o.n_blocks},
                       {"n_tasks", o.n_tasks},
                       {"ks", ks},
                       {"random_trials", o.random_trials},
                       {"reduction", "mds"},
                       {"dim", o.dim},
                       {"mode", o.mode == PromptMode::kOneShot ? "one-shot" : "zero-shot"},
                       {"limits", limits_json(o.limits)}});
  manifest.write((root / "manifest.json").string(), root.string());
  return rows;
}

std::string render_diversity_table(const std::vector<DiversityRow>& rows) {
  std::string out =
      "diversity (sum of pairwise distances)\n"
      "graph space: edit distance; text space: L2 over TF-IDF\n\n"
      "     k   random(graph)      sd   CMDS-l(graph)   CMDS-g(graph)    random(text)"
      "    CMDS-l(text)    CMDS-g(text)\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%6zu  %14.1f  %6.1f  %14.1f  %14.1f  %14.2f  %14.2f  %14.2f\n",
                  r.k, r.random_mean, r.random_std, r.cmds_l, r.cmds_g, r.random_mean_text,
                  r.cmds_l_text, r.cmds_g_text);
    out += buf;
  }
  return out;
}

}  // namespace plancurate
