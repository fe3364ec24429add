#include "plancurate/generation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "plancurate/errors.hpp"
#include "plancurate/selection.hpp"

namespace plancurate {

namespace {

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

std::uint64_t auto_budget(const GenSpec& spec) {
  if (spec.retry_budget > 0) return spec.retry_budget;
  return std::max<std::uint64_t>(100'000, 100 * static_cast<std::uint64_t>(spec.count));
}

void check_range(const IntRange& r, const char* what) {
  if (r.lo < 1 || r.lo > r.hi) {
    throw SpecError(std::string("invalid logistics range for ") + what);
  }
}

}  // namespace

std::uint64_t lah_number(int n, int k) {
  if (n == 0 && k == 0) return 1;
  if (n < 1 || k < 1 || k > n) return 0;
  return binomial(n - 1, k - 1) * (factorial(n) / factorial(k));
}

std::uint64_t count_tower_arrangements(int n) {
  std::uint64_t total = 0;
  for (int k = 0; k <= n; ++k) total += lah_number(n, k);
  return total;
}

std::uint64_t blocksworld_task_space(int n) {
  // A goal state g is satisfied at init s iff atoms(g) is a subset of
  // atoms(s); every subset of a state's on-atoms is itself a state, so each s
  // with n - k atoms excludes 2^(n-k) goals.
  const std::uint64_t states = count_tower_arrangements(n);
  std::uint64_t satisfied = 0;
  for (int k = 1; k <= n; ++k) satisfied += lah_number(n, k) * ipow(2, n - k);
  return states * states - satisfied;
}

blocksworld::State random_complete_blocksworld_state(int n_blocks, Rng& rng) {
  if (n_blocks < 1 || n_blocks > blocksworld::kMaxBlocks) {
    throw SpecError("n_blocks out of range: " + std::to_string(n_blocks));
  }
  // Tower count with probability L(n, t) / a(n); then a uniform permutation
  // cut into t non-empty runs by a uniform composition. Each arrangement
  // arises from exactly t! (permutation, composition) pairs.
  std::uint64_t r = rng.below(count_tower_arrangements(n_blocks));
  int towers = 1;
  for (; towers <= n_blocks; ++towers) {
    const std::uint64_t w = lah_number(n_blocks, towers);
    if (r < w) break;
    r -= w;
  }
  std::vector<int> order(n_blocks);
  for (int i = 0; i < n_blocks; ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<std::size_t> cuts = rng.sample_indices(n_blocks - 1, towers - 1);
  for (auto& c : cuts) ++c;
  std::vector<bool> starts_tower(n_blocks, false);
  starts_tower[0] = true;
  for (auto c : cuts) starts_tower[c] = true;

  std::vector<int> support(n_blocks, blocksworld::kTable);
  for (int i = 1; i < n_blocks; ++i) {
    if (!starts_tower[i]) support[order[i]] = order[i - 1];
  }
  return blocksworld::State::from_support(std::move(support));
}

std::vector<TaskInstance> gen_blocksworld(const GenSpec& spec) {
  if (spec.n_blocks < 2 || spec.n_blocks > blocksworld::kMaxBlocks) {
    throw SpecError("n_blocks must be in [2, " + std::to_string(blocksworld::kMaxBlocks) + "]");
  }
  const std::uint64_t space = blocksworld_task_space(spec.n_blocks);
  if (spec.count > space) {
    throw ExhaustionError("requested " + std::to_string(spec.count) + " distinct " +
                          std::to_string(spec.n_blocks) + "-block tasks but only " +
                          std::to_string(space) + " exist");
  }
  Rng rng(spec.seed);
  const std::uint64_t budget = auto_budget(spec);
  std::unordered_set<std::string> seen;
  std::vector<TaskInstance> out;
  out.reserve(spec.count);
  std::uint64_t failures = 0;
  while (out.size() < spec.count) {
    auto init = random_complete_blocksworld_state(spec.n_blocks, rng);
    auto goal = blocksworld::Goal::from_state(random_complete_blocksworld_state(spec.n_blocks, rng));
    if (!blocksworld::satisfies_goal(init, goal)) {
      auto task = TaskInstance::blocksworld(std::move(init), std::move(goal));
      if (seen.insert(task.canonical_form()).second) {
        out.push_back(std::move(task));
        failures = 0;
        continue;
      }
    }
    if (++failures > budget) {
      throw ExhaustionError("retry budget exhausted after " + std::to_string(out.size()) +
                            " distinct tasks");
    }
  }
  return out;
}

std::vector<TaskInstance> gen_logistics(const GenSpec& spec) {
  const LogisticsRanges& r = spec.logistics;
  check_range(r.cities, "cities");
  check_range(r.locations, "locations");
  check_range(r.airplanes, "airplanes");
  check_range(r.packages, "packages");

  // Exact size of the task space: per parameter setting, truck, airplane and
  // package placements times goals that are not already satisfied.
  long double space = 0;
  for (int c = r.cities.lo; c <= r.cities.hi; ++c)
    for (int l = r.locations.lo; l <= r.locations.hi; ++l)
      for (int a = r.airplanes.lo; a <= r.airplanes.hi; ++a)
        for (int p = r.packages.lo; p <= r.packages.hi; ++p) {
          const long double placements = std::pow(static_cast<long double>(c * l), p);
          space += std::pow(static_cast<long double>(l), c) *
                   std::pow(static_cast<long double>(c), a) * placements * (placements - 1);
        }
  if (static_cast<long double>(spec.count) > space) {
    throw ExhaustionError("requested " + std::to_string(spec.count) +
                          " distinct logistics tasks but the ranges admit fewer");
  }

  Rng rng(spec.seed);
  const std::uint64_t budget = auto_budget(spec);
  std::unordered_set<std::string> seen;
  std::vector<TaskInstance> out;
  out.reserve(spec.count);
  std::uint64_t failures = 0;
  while (out.size() < spec.count) {
    logistics::Topology topo{rng.between(r.cities.lo, r.cities.hi),
                             rng.between(r.locations.lo, r.locations.hi),
                             rng.between(r.airplanes.lo, r.airplanes.hi)};
    const int n_packages = rng.between(r.packages.lo, r.packages.hi);
    std::vector<logistics::Location> trucks;
    for (int t = 0; t < topo.n_trucks(); ++t) {
      trucks.push_back({t, rng.between(0, topo.locations_per_city - 1)});
    }
    std::vector<logistics::Location> planes;
    for (int a = 0; a < topo.n_airplanes; ++a) planes.push_back({rng.between(0, topo.n_cities - 1), 0});
    std::vector<logistics::PackagePosition> packages;
    for (int p = 0; p < n_packages; ++p) {
      packages.push_back(logistics::PackagePosition::at_location(
          topo.location(static_cast<int>(rng.below(topo.n_locations())))));
    }
    std::vector<std::pair<int, logistics::Location>> dest;
    bool all_there = true;
    for (int p = 0; p < n_packages; ++p) {
      dest.emplace_back(p, topo.location(static_cast<int>(rng.below(topo.n_locations()))));
      all_there = all_there && dest.back().second == packages[p].at;
    }
    if (!all_there) {
      auto state = logistics::State::make(topo, std::move(trucks), std::move(planes),
                                          std::move(packages));
      auto goal = logistics::Goal::make(std::move(dest), topo, n_packages);
      auto task = TaskInstance::logistics(std::move(state), std::move(goal));
      if (seen.insert(task.canonical_form()).second) {
        out.push_back(std::move(task));
        failures = 0;
        continue;
      }
    }
    if (++failures > budget) {
      throw ExhaustionError("retry budget exhausted after " + std::to_string(out.size()) +
                            " distinct tasks");
    }
  }
  return out;
}

std::vector<TaskInstance> generate(const GenSpec& spec) {
  return spec.domain == Domain::kBlocksworld ? gen_blocksworld(spec) : gen_logistics(spec);
}

TrainTestSplit hold_out(const std::vector<TaskInstance>& corpus, std::size_t test_count,
                        std::uint64_t seed) {
  if (test_count > corpus.size()) throw SpecError("hold-out larger than the corpus");
  Rng rng(seed);
  std::vector<bool> is_test(corpus.size(), false);
  for (auto i : rng.sample_indices(corpus.size(), test_count)) is_test[i] = true;
  TrainTestSplit split;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (is_test[i] ? split.test : split.train).push_back(corpus[i]);
  }
  return split;
}

ImbalanceResult make_imbalanced(const std::vector<TaskInstance>& corpus,
                                const std::vector<std::vector<double>>& encodings,
                                const ImbalanceSpec& spec) {
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw SpecError("imbalance p must lie in [0, 1]");
  if (spec.j_range.lo < 1 || spec.j_range.lo > spec.j_range.hi) {
    throw SpecError("imbalance j_range must be a non-empty interval within [1, inf)");
  }
  if (spec.n_clusters < 1 || spec.n_clusters > corpus.size()) {
    throw SpecError("n_clusters must be in [1, corpus size]");
  }
  if (encodings.size() != corpus.size()) {
    throw DimensionMismatch("encodings are not aligned with the corpus");
  }

  const int k = static_cast<int>(spec.n_clusters);
  KMeansResult clusters = kmeans(PointSet::from_rows(encodings), k,
                                 KMeansOptions{derive_seed(spec.seed, "imbalance/kmeans")});

  ImbalanceResult result;
  result.assignment = clusters.assignment;
  result.cluster_sizes.assign(k, 0);
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    members[clusters.assignment[i]].push_back(i);
    ++result.cluster_sizes[clusters.assignment[i]];
  }

  Rng rng(derive_seed(spec.seed, "imbalance/deplete"));
  // The small epsilon keeps products like 0.29 * 100 from rounding up.
  const auto n_deplete = static_cast<std::size_t>(std::ceil(spec.p * k - 1e-9));
  std::vector<std::size_t> chosen = rng.sample_indices(k, n_deplete);
  std::sort(chosen.begin(), chosen.end());

  std::vector<bool> keep(corpus.size(), true);
  for (std::size_t c : chosen) {
    const auto& m = members[c];
    const int j = std::min<int>(rng.between(spec.j_range.lo, spec.j_range.hi),
                                static_cast<int>(m.size()));
    for (std::size_t i : m) keep[i] = false;
    for (std::size_t pick : rng.sample_indices(m.size(), j)) keep[m[pick]] = true;
    result.depleted.push_back(static_cast<int>(c));
    result.retained.push_back(j);
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (keep[i]) result.tasks.push_back(corpus[i]);
  }
  return result;
}

std::vector<TaskInstance> mix_corpora(const std::vector<TaskInstance>& a,
                                      const std::vector<TaskInstance>& b, std::size_t k,
                                      std::uint64_t seed) {
  if (k > a.size() || k > b.size()) {
    throw SpecError("mix size k=" + std::to_string(k) + " exceeds a source corpus");
  }
  Rng rng(seed);
  std::vector<TaskInstance> out;
  out.reserve(2 * k);
  for (auto i : rng.sample_indices(a.size(), k)) out.push_back(a[i]);
  for (auto i : rng.sample_indices(b.size(), k)) out.push_back(b[i]);
  rng.shuffle(out);
  return out;
}

}  // namespace plancurate
