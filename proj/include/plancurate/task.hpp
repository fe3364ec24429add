#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "plancurate/blocksworld.hpp"
#include "plancurate/logistics.hpp"

namespace plancurate {

enum class Domain { kBlocksworld, kLogistics };

std::string_view domain_name(Domain domain);
// Throws InvalidValue for names other than "blocksworld" / "logistics".
Domain parse_domain(std::string_view name);

struct BlocksworldProblem {
  blocksworld::State init;
  blocksworld::Goal goal;
  auto operator<=>(const BlocksworldProblem&) const = default;
};

struct LogisticsProblem {
  logistics::State init;
  logistics::Goal goal;
  auto operator<=>(const LogisticsProblem&) const = default;
};

using Action = std::variant<blocksworld::Action, logistics::Action>;

// Ordered action sequence; every action belongs to one domain.
struct Plan {
  std::vector<Action> actions;

  std::size_t size() const { return actions.size(); }
  bool empty() const { return actions.empty(); }
  bool operator==(const Plan&) const = default;
};

// Whether construction may accept a goal that already holds in the initial
// state. Generated corpora never contain such tasks.
enum class GoalCheck { kRejectSatisfied, kAllowSatisfied };

// One planning problem with a stable content digest as its id.
class TaskInstance {
 public:
  static TaskInstance blocksworld(blocksworld::State init, blocksworld::Goal goal,
                                  GoalCheck check = GoalCheck::kRejectSatisfied);
  static TaskInstance logistics(logistics::State init, logistics::Goal goal,
                                GoalCheck check = GoalCheck::kRejectSatisfied);

  const std::string& id() const { return id_; }
  Domain domain() const {
    return std::holds_alternative<BlocksworldProblem>(problem_) ? Domain::kBlocksworld
                                                                : Domain::kLogistics;
  }
  bool is_blocksworld() const { return domain() == Domain::kBlocksworld; }

  const BlocksworldProblem& as_blocksworld() const { return std::get<BlocksworldProblem>(problem_); }
  const LogisticsProblem& as_logistics() const { return std::get<LogisticsProblem>(problem_); }

  // Object count used for size-based layouts: blocks, or packages for logistics.
  int size_key() const;

  // Canonical serialization the id is computed from.
  std::string canonical_form() const;

  bool operator==(const TaskInstance& other) const { return problem_ == other.problem_; }

 private:
  explicit TaskInstance(std::variant<BlocksworldProblem, LogisticsProblem> problem);

  std::variant<BlocksworldProblem, LogisticsProblem> problem_;
  std::string id_;
};

// Stable digest of the canonical serialization; equal tasks <=> equal digests.
std::string canonical_digest(const TaskInstance& task);

std::string to_string(const Action& action);

}  // namespace plancurate
