#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "plancurate/evaluation.hpp"
#include "plancurate/selection.hpp"
#include "plancurate/solver.hpp"
#include "plancurate/task.hpp"

namespace plancurate {

// Task records:
//   {"id", "domain", "meta", "init", "goal"} with objects named as in prompts.
// Blocksworld init is {"support": [...]} indexed by block, each entry a color,
// "table" or "hand"; goal is {"on": [[above, below], ...]}.
// Logistics init is {"trucks": [loc], "airplanes": [loc], "packages": [loc |
// "truck_t" | "airplane_a"]}; goal is {"at": [[package, loc], ...]}.
nlohmann::json task_to_json(const TaskInstance& task);
// Throws InvalidValue on malformed content or an id that does not match it.
TaskInstance task_from_json(const nlohmann::json& j);

void write_tasks(const std::vector<TaskInstance>& tasks, const std::string& path);
// Throws FormatError with the offending line, DuplicateId on repeated ids.
std::vector<TaskInstance> read_tasks(const std::string& path);

// Label records: {"id", "status", "length", "plan": [action lines]}.
struct LabelRecord {
  std::string id;
  SolveStatus status = SolveStatus::kSolved;
  std::optional<Plan> plan;
};

void write_labels(const LabeledCorpus& corpus, const std::vector<TaskInstance>& order,
                  const std::string& path);
// Plans are parsed against the domain of the matching task; records for
// tasks outside `tasks` are skipped, so one labels file serves any subset.
std::vector<LabelRecord> read_labels(const std::string& path,
                                     const std::vector<TaskInstance>& tasks);

nlohmann::json selection_to_json(const SelectionResult& result);
nlohmann::json report_to_json(const CorpusReport& report);

// Writes text to a file, throwing IoError on failure.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace plancurate
