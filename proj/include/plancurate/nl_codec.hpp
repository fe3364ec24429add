#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "plancurate/task.hpp"

namespace plancurate {

enum class PromptMode { kZeroShot, kOneShot };

struct PromptStyle {
  PromptMode mode = PromptMode::kZeroShot;
  // Worked example shown before the query in one-shot prompts.
  std::optional<TaskInstance> example_task;
  std::optional<Plan> example_plan;

  static PromptStyle zero_shot() { return {}; }
  static PromptStyle one_shot(TaskInstance task, Plan plan) {
    return {PromptMode::kOneShot, std::move(task), std::move(plan)};
  }
  // Throws InvalidValue when one-shot lacks its example.
  void validate() const;
};

enum class ParseReason { kUnknownTemplate, kUnknownObject, kMalformedHeader };
std::string_view parse_reason_code(ParseReason reason);

struct ParseError {
  // 1-based line within the parsed text.
  std::size_t line = 0;
  ParseReason reason = ParseReason::kUnknownTemplate;
  std::string text;

  bool operator==(const ParseError&) const = default;
};

// The worked example task and optimal plan shown in one-shot prompts.
std::pair<TaskInstance, Plan> worked_example(Domain domain);

// Fixed natural-language domain description placed at the top of prompts.
std::string_view domain_instruction(Domain domain);

// "As initial conditions I have that, ... ." and "My goal is to have that ... ."
std::string render_initial_conditions(const TaskInstance& task);
std::string render_goal(const TaskInstance& task);
// Both sentences, newline separated; the text used for language embeddings.
std::string render_statement(const TaskInstance& task);

// [STATEMENT] block through "My plan is as follows:".
std::string render_task(const TaskInstance& task);
std::string render_action(const Action& action);
// [PLAN] / one action per line / [PLAN END].
std::string render_plan(const Plan& plan);
// Task followed by its solution.
std::string render_example(const TaskInstance& task, const Plan& plan);
// Task followed by the query trailer: "[PLAN END]" for blocksworld, "[PLAN]"
// for logistics, matching the worked query blocks.
std::string render_query(const TaskInstance& task);
std::string render_prompt(const TaskInstance& task, const PromptStyle& style);

// Strict template parser: case-insensitive, whitespace-trimmed, skips blank
// lines and [PLAN] / [PLAN END] markers. The first other line that does not
// match an action template yields a ParseError.
std::variant<Plan, ParseError> parse_plan(std::string_view text, Domain domain);

// Model-response variant of parse_plan: prose before a [PLAN] marker line is
// skipped and everything from a [PLAN END] marker on is dropped. Line numbers
// still refer to the full response.
std::variant<Plan, ParseError> parse_response(std::string_view text, Domain domain);

struct DatasetRecord {
  std::string user;
  std::string assistant;
};

DatasetRecord make_record(const TaskInstance& task, const Plan& plan, const PromptStyle& style);

// Writes one {"messages": [...]} line per pair. Throws ValidationError if any
// plan does not solve its task, IoError on write failure.
std::size_t emit_finetune_dataset(const std::vector<std::pair<TaskInstance, Plan>>& pairs,
                                  const PromptStyle& style, const std::string& path);
// Mixed-domain variant: one-shot records use the worked example of their own domain.
std::size_t emit_finetune_dataset(const std::vector<std::pair<TaskInstance, Plan>>& pairs,
                                  PromptMode mode, const std::string& path);
std::vector<DatasetRecord> read_finetune_dataset(const std::string& path);

// Responses file: one {"id": text, "text": text} object per line.
std::vector<std::pair<std::string, std::string>> ingest_responses(const std::string& path);
void write_responses(const std::vector<std::pair<std::string, std::string>>& responses,
                     const std::string& path);

struct PddlFiles {
  std::string domain;
  std::string problem;
};

// 4-operator Blocksworld or typed STRIPS Logistics domain plus the task's problem.
PddlFiles emit_pddl(const TaskInstance& task);

}  // namespace plancurate
