#include "plancurate/blocksworld.hpp"

#include <algorithm>

#include "plancurate/errors.hpp"

namespace plancurate::blocksworld {

std::string_view color_name(int block) {
  if (block < 0 || block >= kMaxBlocks) {
    throw InvalidValue("block index out of palette: " + std::to_string(block));
  }
  return kPalette[block];
}

std::optional<int> color_index(std::string_view name) {
  for (int i = 0; i < kMaxBlocks; ++i) {
    if (kPalette[i] == name) return i;
  }
  return std::nullopt;
}

State State::from_support(std::vector<int> support) {
  const int n = static_cast<int>(support.size());
  if (n < 1 || n > kMaxBlocks) {
    throw InvalidValue("block count must be in [1, " + std::to_string(kMaxBlocks) + "], got " +
                       std::to_string(n));
  }
  int held = -1;
  std::vector<int> load(n, 0);
  for (int b = 0; b < n; ++b) {
    const int s = support[b];
    if (s == kHand) {
      if (held >= 0) throw InvalidValue("more than one block held");
      held = b;
    } else if (s == kTable) {
      continue;
    } else if (s < 0 || s >= n || s == b) {
      throw InvalidValue("invalid support for block " + std::to_string(b));
    } else if (++load[s] > 1) {
      throw InvalidValue("two blocks on top of block " + std::to_string(s));
    }
  }
  if (held >= 0 && load[held] > 0) throw InvalidValue("a block rests on the held block");
  // Every chain of supports must reach the table or the hand within n steps.
  for (int b = 0; b < n; ++b) {
    int cur = b;
    int steps = 0;
    while (cur >= 0) {
      cur = support[cur];
      if (++steps > n) throw InvalidValue("cyclic support relation");
    }
  }
  return State(std::move(support));
}

State State::all_on_table(int n_blocks) {
  return from_support(std::vector<int>(static_cast<std::size_t>(std::max(n_blocks, 0)), kTable));
}

std::optional<int> State::holding() const {
  for (int b = 0; b < num_blocks(); ++b) {
    if (support_[b] == kHand) return b;
  }
  return std::nullopt;
}

std::optional<int> State::above(int block) const {
  for (int b = 0; b < num_blocks(); ++b) {
    if (support_[b] == block) return b;
  }
  return std::nullopt;
}

bool State::clear(int block) const {
  return support_[block] != kHand && !above(block).has_value();
}

std::vector<std::pair<int, int>> State::on_atoms() const {
  std::vector<std::pair<int, int>> atoms;
  for (int b = 0; b < num_blocks(); ++b) {
    if (support_[b] >= 0) atoms.emplace_back(b, support_[b]);
  }
  return atoms;
}

Goal Goal::from_atoms(std::vector<std::pair<int, int>> atoms, int n_blocks) {
  std::sort(atoms.begin(), atoms.end());
  std::vector<int> below_of(n_blocks, -1);
  std::vector<bool> used_below(n_blocks, false);
  for (const auto& [a, b] : atoms) {
    if (a < 0 || a >= n_blocks || b < 0 || b >= n_blocks) {
      throw InvalidValue("goal atom names an unknown block");
    }
    if (a == b) throw InvalidValue("goal atom places a block on itself");
    if (below_of[a] >= 0) throw InvalidValue("block appears twice as the upper block in the goal");
    if (used_below[b]) throw InvalidValue("two goal blocks on top of the same block");
    below_of[a] = b;
    used_below[b] = true;
  }
  for (int start = 0; start < n_blocks; ++start) {
    int cur = start;
    int steps = 0;
    while (cur >= 0) {
      cur = below_of[cur];
      if (++steps > n_blocks) throw InvalidValue("cyclic goal relation");
    }
  }
  return Goal(std::move(atoms));
}

Goal Goal::from_state(const State& state) {
  return from_atoms(state.on_atoms(), state.num_blocks());
}

std::optional<PreconditionReason> check_preconditions(const State& state, const Action& action) {
  const int n = state.num_blocks();
  const int b = action.block;
  if (b < 0 || b >= n) return PreconditionReason::kUnknownObject;
  const bool two_blocks = action.kind == ActionKind::kStack || action.kind == ActionKind::kUnstack;
  if (two_blocks) {
    if (action.other < 0 || action.other >= n) return PreconditionReason::kUnknownObject;
    if (action.other == b) return PreconditionReason::kSameObject;
  }
  switch (action.kind) {
    case ActionKind::kPickUp:
      if (!state.hand_empty()) return PreconditionReason::kHandNotEmpty;
      if (!state.on_table(b)) return PreconditionReason::kNotOnTable;
      if (!state.clear(b)) return PreconditionReason::kBlockNotClear;
      return std::nullopt;
    case ActionKind::kPutDown:
      if (state.support_of(b) != kHand) return PreconditionReason::kNotHolding;
      return std::nullopt;
    case ActionKind::kStack:
      if (state.support_of(b) != kHand) return PreconditionReason::kNotHolding;
      if (!state.clear(action.other)) return PreconditionReason::kTargetNotClear;
      return std::nullopt;
    case ActionKind::kUnstack:
      if (!state.hand_empty()) return PreconditionReason::kHandNotEmpty;
      if (state.support_of(b) != action.other) return PreconditionReason::kNotOnClaimedSupport;
      if (!state.clear(b)) return PreconditionReason::kBlockNotClear;
      return std::nullopt;
  }
  return PreconditionReason::kUnknownObject;
}

State apply_unchecked(const State& state, const Action& action) {
  std::vector<int> support = state.support();
  switch (action.kind) {
    case ActionKind::kPickUp:
    case ActionKind::kUnstack:
      support[action.block] = kHand;
      break;
    case ActionKind::kPutDown:
      support[action.block] = kTable;
      break;
    case ActionKind::kStack:
      support[action.block] = action.other;
      break;
  }
  return State::from_support(std::move(support));
}

State apply_action(const State& state, const Action& action) {
  if (auto reason = check_preconditions(state, action)) {
    throw PreconditionViolation(to_string(action), *reason);
  }
  return apply_unchecked(state, action);
}

std::optional<State> try_apply(const State& state, const Action& action) {
  if (check_preconditions(state, action)) return std::nullopt;
  return apply_unchecked(state, action);
}

std::vector<Action> applicable_actions(const State& state) {
  const int n = state.num_blocks();
  std::vector<Action> out;
  if (auto held = state.holding()) {
    out.push_back(Action::put_down(*held));
    for (int t = 0; t < n; ++t) {
      if (t != *held && state.clear(t)) out.push_back(Action::stack(*held, t));
    }
    return out;
  }
  for (int b = 0; b < n; ++b) {
    if (state.on_table(b) && state.clear(b)) out.push_back(Action::pick_up(b));
  }
  for (int b = 0; b < n; ++b) {
    if (state.support_of(b) >= 0 && state.clear(b)) {
      out.push_back(Action::unstack(b, state.support_of(b)));
    }
  }
  return out;
}

bool satisfies_goal(const State& state, const Goal& goal) {
  return std::all_of(goal.atoms().begin(), goal.atoms().end(), [&](const auto& atom) {
    return atom.first < state.num_blocks() && state.support_of(atom.first) == atom.second;
  });
}

std::string to_string(const Action& action) {
  auto name = [](int b) {
    return (b >= 0 && b < kMaxBlocks) ? std::string(kPalette[b]) : "#" + std::to_string(b);
  };
  switch (action.kind) {
    case ActionKind::kPickUp:
      return "pick-up(" + name(action.block) + ")";
    case ActionKind::kPutDown:
      return "put-down(" + name(action.block) + ")";
    case ActionKind::kStack:
      return "stack(" + name(action.block) + "," + name(action.other) + ")";
    case ActionKind::kUnstack:
      return "unstack(" + name(action.block) + "," + name(action.other) + ")";
  }
  return "?";
}

}  // namespace plancurate::blocksworld
