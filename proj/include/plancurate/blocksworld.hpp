#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "plancurate/precondition.hpp"

namespace plancurate::blocksworld {

// Block index <-> color is global: block i is always kPalette[i].
inline constexpr std::array<std::string_view, 8> kPalette = {
    "red", "blue", "orange", "yellow", "green", "cyan", "magenta", "white"};
inline constexpr int kMaxBlocks = static_cast<int>(kPalette.size());

std::string_view color_name(int block);
// Index of a color name, or nullopt when it is not in the palette.
std::optional<int> color_index(std::string_view name);

// Support sentinels.
inline constexpr int kTable = -1;
inline constexpr int kHand = -2;

// A complete arrangement of n labeled blocks.
//
// support()[b] is the block b rests on, kTable, or kHand for the held block.
// Construction validates: acyclic support, at most one block on any block,
// nothing rests on the held block, at most one block held.
class State {
 public:
  static State from_support(std::vector<int> support);
  // All blocks on the table, hand empty.
  static State all_on_table(int n_blocks);

  int num_blocks() const { return static_cast<int>(support_.size()); }
  const std::vector<int>& support() const { return support_; }
  int support_of(int block) const { return support_[block]; }

  std::optional<int> holding() const;
  bool hand_empty() const { return !holding().has_value(); }
  bool on_table(int block) const { return support_[block] == kTable; }
  bool clear(int block) const;
  // The block directly on top of `block`, if any.
  std::optional<int> above(int block) const;

  // Every on(above, below) fact, ordered by the upper block index.
  std::vector<std::pair<int, int>> on_atoms() const;

  auto operator<=>(const State&) const = default;

 private:
  explicit State(std::vector<int> support) : support_(std::move(support)) {}
  std::vector<int> support_;
};

// A partial goal: a set of on(above, below) atoms, sorted by `above`.
class Goal {
 public:
  // Validates: distinct pairs, no block twice as `above` or twice as `below`,
  // above != below, acyclic, indices < n_blocks.
  static Goal from_atoms(std::vector<std::pair<int, int>> atoms, int n_blocks);
  static Goal from_state(const State& state);

  const std::vector<std::pair<int, int>>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }

  auto operator<=>(const Goal&) const = default;

 private:
  explicit Goal(std::vector<std::pair<int, int>> atoms) : atoms_(std::move(atoms)) {}
  std::vector<std::pair<int, int>> atoms_;
};

// Declaration order is the successor-ordering key.
enum class ActionKind { kPickUp, kPutDown, kStack, kUnstack };

struct Action {
  ActionKind kind;
  int block = 0;
  // Target of stack, origin of unstack; -1 otherwise.
  int other = -1;

  static Action pick_up(int b) { return {ActionKind::kPickUp, b, -1}; }
  static Action put_down(int b) { return {ActionKind::kPutDown, b, -1}; }
  static Action stack(int b, int target) { return {ActionKind::kStack, b, target}; }
  static Action unstack(int b, int from) { return {ActionKind::kUnstack, b, from}; }

  auto operator<=>(const Action&) const = default;
};

// Why `action` cannot be applied in `state`, or nullopt when it can.
std::optional<PreconditionReason> check_preconditions(const State& state, const Action& action);

// Successor without re-validating; the action must be applicable.
State apply_unchecked(const State& state, const Action& action);

// Throws PreconditionViolation when a restriction fails.
State apply_action(const State& state, const Action& action);
std::optional<State> try_apply(const State& state, const Action& action);

// All applicable actions ordered by kind, then block, then other block.
std::vector<Action> applicable_actions(const State& state);

bool satisfies_goal(const State& state, const Goal& goal);

// e.g. "unstack(blue,yellow)"; used in diagnostics.
std::string to_string(const Action& action);

}  // namespace plancurate::blocksworld
