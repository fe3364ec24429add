#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "plancurate/evaluation.hpp"
#include "plancurate/generation.hpp"
#include "plancurate/nl_codec.hpp"
#include "plancurate/selection.hpp"
#include "plancurate/solver.hpp"

namespace plancurate {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Provenance record written next to every command output. Paths are stored by
// file name only so that identical runs in different directories agree.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void set_config(nlohmann::json config) { config_ = std::move(config); }
  void add_input(const std::string& path) { inputs_.push_back(path); }
  void add_output(const std::string& path) { outputs_.push_back(path); }

  // Digests are taken when the manifest is written.
  nlohmann::json to_json(const std::string& relative_to = {}) const;
  void write(const std::string& path, const std::string& relative_to = {}) const;

 private:
  std::string command_;
  std::optional<std::uint64_t> seed_;
  nlohmann::json config_ = nlohmann::json::object();
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
};

std::string file_sha256(const std::string& path);

struct GenerateOptions {
  GenSpec spec;
  std::optional<ImbalanceSpec> imbalance;
  // Held-out test tasks written to test_out when positive.
  std::size_t test_count = 0;
  std::string out;
  std::string test_out;
};
void cmd_generate(const GenerateOptions& options);

struct SolveOptions {
  std::string tasks;
  std::string out;
  SolveLimits limits;
  int jobs = 1;
};
// Throws ResourceLimitError after writing labels when any task hit a limit.
void cmd_solve(const SolveOptions& options);

enum class EmbedMethod { kGraph, kTfidf, kExternal };
EmbedMethod parse_embed_method(std::string_view name);

struct EmbedOptions {
  std::string tasks;
  std::string out;
  EmbedMethod method = EmbedMethod::kGraph;
  // Vectors produced outside this tool, for kExternal.
  std::string external;
};
void cmd_embed(const EmbedOptions& options);

struct SelectOptions {
  std::string tasks;
  std::string embeddings;
  std::string out;
  std::string report;
  // "cmds" or "random".
  std::string method = "cmds";
  SelectionConfig config;
};
SelectionResult cmd_select(const SelectOptions& options);

struct EmitOptions {
  std::vector<std::string> tasks;
  std::vector<std::string> labels;
  std::string out;
  PromptMode mode = PromptMode::kZeroShot;
  // With two inputs: sample this many labeled tasks from each and shuffle.
  std::size_t mix_k = 0;
  std::uint64_t seed = 0;
};
std::size_t cmd_emit(const EmitOptions& options);

struct ValidateOptions {
  std::string tasks;
  std::string responses;
  // Oracle lengths; the solver is run when absent.
  std::string labels;
  std::string out;
  SolveLimits limits;
  int jobs = 1;
};
CorpusReport cmd_validate(const ValidateOptions& options);

struct ExperimentOptions {
  std::string out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  Domain domain = Domain::kBlocksworld;
  int n_blocks = 4;
  std::size_t n_tasks = 2000;
  std::vector<std::size_t> ks = {100, 200, 400, 1000};
  std::size_t random_trials = 20;
  // Both CMDS arms cluster in an MDS projection of this dimension.
  std::size_t dim = 2;
  PromptMode mode = PromptMode::kZeroShot;
  SolveLimits limits;
};

struct DiversityRow {
  std::size_t k = 0;
  double random_mean = 0.0;
  double random_std = 0.0;
  double cmds_l = 0.0;
  double cmds_g = 0.0;
  // Same selections measured in the text-embedding space.
  double random_mean_text = 0.0;
  double cmds_l_text = 0.0;
  double cmds_g_text = 0.0;
};

// Generate, label, embed, select with Random / CMDS-l / CMDS-g at every k,
// emit one dataset per selection and write diversity tables plus a manifest.
std::vector<DiversityRow> cmd_experiment(const ExperimentOptions& options);

std::string render_diversity_table(const std::vector<DiversityRow>& rows);

}  // namespace plancurate
