#pragma once

#include <cstdint>
#include <vector>

#include "plancurate/rng.hpp"
#include "plancurate/task.hpp"

namespace plancurate {

struct IntRange {
  int lo = 0;
  int hi = 0;

  bool contains(int v) const { return v >= lo && v <= hi; }
  bool operator==(const IntRange&) const = default;
};

// Default Logistics parameter ranges.
struct LogisticsRanges {
  IntRange cities{2, 2};
  IntRange locations{2, 3};
  IntRange airplanes{1, 2};
  IntRange packages{1, 2};
};

struct GenSpec {
  Domain domain = Domain::kBlocksworld;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  int n_blocks = 4;
  LogisticsRanges logistics{};
  // Consecutive duplicate draws tolerated before giving up; 0 picks a
  // budget proportional to count.
  std::uint64_t retry_budget = 0;
};

// Unsigned Lah number L(n, k): arrangements of n labeled blocks into exactly
// k non-empty towers.
std::uint64_t lah_number(int n, int k);
// Arrangements of n labeled blocks into towers (hand empty): 1, 3, 13, 73, ...
std::uint64_t count_tower_arrangements(int n);
// Distinct (init, goal) pairs with goal = on-atoms of a complete state and the
// goal not already satisfied by init.
std::uint64_t blocksworld_task_space(int n);

// Uniformly random hand-empty arrangement of n blocks.
blocksworld::State random_complete_blocksworld_state(int n_blocks, Rng& rng);

// Throws SpecError for invalid specs, ExhaustionError when fewer than
// spec.count distinct tasks exist or can be found.
std::vector<TaskInstance> gen_blocksworld(const GenSpec& spec);
std::vector<TaskInstance> gen_logistics(const GenSpec& spec);
std::vector<TaskInstance> generate(const GenSpec& spec);

struct TrainTestSplit {
  std::vector<TaskInstance> train;
  std::vector<TaskInstance> test;
};

// Uniform hold-out of `test_count` tasks; both parts keep corpus order.
TrainTestSplit hold_out(const std::vector<TaskInstance>& corpus, std::size_t test_count,
                        std::uint64_t seed);

struct ImbalanceSpec {
  double p = 0.0;
  IntRange j_range{1, 5};
  std::size_t n_clusters = 100;
  std::uint64_t seed = 0;
};

struct ImbalanceResult {
  std::vector<TaskInstance> tasks;
  // Cluster of each input task.
  std::vector<int> assignment;
  std::vector<int> cluster_sizes;
  // Depleted clusters, ascending, and how many points each kept.
  std::vector<int> depleted;
  std::vector<int> retained;
};

// Clusters `corpus` by k-means over `encodings`, then depletes
// ceil(p * n_clusters) uniformly chosen clusters down to j points each.
// Surviving tasks keep corpus order.
ImbalanceResult make_imbalanced(const std::vector<TaskInstance>& corpus,
                                const std::vector<std::vector<double>>& encodings,
                                const ImbalanceSpec& spec);

// k uniform samples from each corpus, concatenated and shuffled.
std::vector<TaskInstance> mix_corpora(const std::vector<TaskInstance>& a,
                                      const std::vector<TaskInstance>& b, std::size_t k,
                                      std::uint64_t seed);

}  // namespace plancurate
