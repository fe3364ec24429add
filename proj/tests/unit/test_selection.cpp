#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "plancurate/embedding.hpp"
#include "plancurate/generation.hpp"
#include "plancurate/rng.hpp"
#include "plancurate/selection.hpp"

using namespace plancurate;

namespace {

std::vector<TaskInstance> corpus(std::size_t n, std::uint64_t seed) {
  GenSpec spec;
  spec.count = n;
  spec.seed = seed;
  return generate(spec);
}

PointSet random_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  PointSet p{n, d, std::vector<double>(n * d)};
  for (auto& v : p.values) v = rng.uniform();
  return p;
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Checks every selected point is the nearest member of its cluster to the
// cluster's centroid in `space`, ties to the lower index.
void audit_nearest(const SelectionResult& r, const PointSet& space) {
  const std::size_t k = r.selected_indices.size();
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t best = space.rows;
    double best_d = 0.0;
    for (std::size_t i = 0; i < space.rows; ++i) {
      if (r.assignment[i] != static_cast<int>(c)) continue;
      const double d = sq_dist(space.row(i), r.centroids.row(c));
      if (best == space.rows || d < best_d) {
        best = i;
        best_d = d;
      }
    }
    CHECK(r.selected_indices[c] == best);
  }
}

}  // namespace

TEST_SUITE("selection") {

TEST_CASE("classical MDS recovers collinear points") {
  DistanceMatrix d(3);
  d.set(0, 1, 1.0);
  d.set(1, 2, 1.0);
  d.set(0, 2, 2.0);
  auto r = reduce_mds(d, 1);
  REQUIRE(r.points.cols == 1);
  const double a = r.points.values[0], b = r.points.values[1], c = r.points.values[2];
  CHECK(std::abs(a - b) == doctest::Approx(1.0));
  CHECK(std::abs(b - c) == doctest::Approx(1.0));
  CHECK(std::abs(a - c) == doctest::Approx(2.0));
  CHECK_FALSE(r.rank_deficient);
  auto over = reduce_mds(d, 3);
  CHECK(over.rank_deficient);
  CHECK(over.rank == 1);
  for (std::size_t i = 0; i < 3; ++i) CHECK(over.points.row(i)[2] == 0.0);
}

TEST_CASE("PCA keeps distances of data with exact rank") {
  Rng rng(3);
  // 40 points spanning a 2-D subspace of R^5, plus an offset.
  std::vector<std::vector<double>> rows;
  const std::vector<double> u = {1, 2, 0, -1, 0.5}, v = {0, 1, 3, 1, -2}, o = {4, 4, 4, 4, 4};
  for (int i = 0; i < 40; ++i) {
    const double s = rng.uniform() * 10 - 5, t = rng.uniform() * 10 - 5;
    std::vector<double> r(5);
    for (int j = 0; j < 5; ++j) r[j] = o[j] + s * u[j] + t * v[j];
    rows.push_back(r);
  }
  auto pts = PointSet::from_rows(rows);
  auto red = reduce_pca(pts, 2);
  CHECK_FALSE(red.rank_deficient);
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = 0; j < 40; ++j)
      CHECK(std::abs(l2_distance(red.points.row(i), red.points.row(j)) -
                     l2_distance(pts.row(i), pts.row(j))) < 1e-9);
  CHECK(reduce_pca(pts, 3).rank_deficient);
}

TEST_CASE("k-means with k = N puts every point in its own cluster") {
  auto pts = random_points(12, 3, 1);
  auto r = kmeans(pts, 12);
  CHECK(r.inertia() == doctest::Approx(0.0));
  CHECK(std::set<int>(r.assignment.begin(), r.assignment.end()).size() == 12);
}

TEST_CASE("k-means separates two distant pairs") {
  auto pts = PointSet::from_rows({{0, 0}, {100, 100}, {0, 1}, {100, 101}});
  auto r = kmeans(pts, 2, {7});
  CHECK(r.assignment[0] == r.assignment[2]);
  CHECK(r.assignment[1] == r.assignment[3]);
  CHECK(r.assignment[0] != r.assignment[1]);
  auto c = r.centroids.row(r.assignment[0]);
  CHECK(c[0] == doctest::Approx(0.0));
  CHECK(c[1] == doctest::Approx(0.5));
  auto c2 = r.centroids.row(r.assignment[1]);
  CHECK(c2[1] == doctest::Approx(100.5));
}

TEST_CASE("k-means inertia never increases") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto pts = random_points(300, 4, seed);
    auto r = kmeans(pts, 8, {seed, 100, 0.0});
    REQUIRE_FALSE(r.inertia_history.empty());
    for (std::size_t i = 1; i < r.inertia_history.size(); ++i)
      CHECK(r.inertia_history[i] <= r.inertia_history[i - 1] + 1e-9);
    CHECK(r.iterations <= 100);
  }
}

TEST_CASE("k-medoids cost never increases and stays close to k-means") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto pts = random_points(150, 2, seed + 100);
    // Squared Euclidean costs make the medoid objective comparable to inertia.
    DistanceMatrix sq(pts.rows);
    for (std::size_t i = 0; i < pts.rows; ++i)
      for (std::size_t j = i + 1; j < pts.rows; ++j) sq.set(i, j, sq_dist(pts.row(i), pts.row(j)));
    auto med = kmedoids(sq, 5);
    for (std::size_t i = 1; i < med.cost_history.size(); ++i)
      CHECK(med.cost_history[i] <= med.cost_history[i - 1]);
    auto km = kmeans(pts, 5, {seed});
    CHECK(med.cost() <= 1.10 * km.inertia());
  }
  DistanceMatrix tiny(4);
  tiny.set(0, 1, 1);
  tiny.set(2, 3, 1);
  tiny.set(0, 2, 5);
  tiny.set(0, 3, 5);
  tiny.set(1, 2, 5);
  tiny.set(1, 3, 5);
  auto all = kmedoids(tiny, 4);
  CHECK(std::set<std::size_t>(all.medoids.begin(), all.medoids.end()).size() == 4);
  CHECK(all.cost() == 0.0);
}

TEST_CASE("CMDS with k = N selects every task") {
  auto tasks = corpus(20, 2);
  auto emb = graph_embeddings(tasks);
  SelectionConfig cfg;
  cfg.k = 20;
  auto r = select_cmds(tasks, emb, cfg);
  std::vector<std::size_t> sorted = r.selected_indices;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < 20; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("CMDS with k = 1 picks the point nearest the global centroid") {
  auto tasks = corpus(60, 4);
  auto emb = graph_embeddings(tasks);
  SelectionConfig cfg;
  cfg.k = 1;
  cfg.reduction = Reduction::kNone;
  auto r = select_cmds(tasks, emb, cfg);
  REQUIRE(r.selected_indices.size() == 1);
  std::vector<double> mean(emb.vectors[0].size(), 0.0);
  for (const auto& v : emb.vectors)
    for (std::size_t j = 0; j < v.size(); ++j) mean[j] += v[j] / 60.0;
  std::size_t best = 0;
  for (std::size_t i = 1; i < 60; ++i)
    if (sq_dist(emb.vectors[i], mean) < sq_dist(emb.vectors[best], mean) - 1e-12) best = i;
  CHECK(r.selected_indices[0] == best);
  CHECK(r.diversity == 0.0);
}

TEST_CASE("CMDS picks one centroid-nearest task per cluster") {
  auto tasks = corpus(300, 5);
  auto emb = graph_embeddings(tasks);
  for (auto reduction : {Reduction::kMds, Reduction::kPca, Reduction::kNone}) {
    SelectionConfig cfg;
    cfg.k = 30;
    cfg.reduction = reduction;
    cfg.seed = 11;
    auto r = select_cmds(tasks, emb, cfg);
    REQUIRE(r.selected_ids.size() == 30);
    CHECK(std::set<std::string>(r.selected_ids.begin(), r.selected_ids.end()).size() == 30);
    for (std::size_t c = 0; c < 30; ++c) {
      CHECK(r.assignment[r.selected_indices[c]] == static_cast<int>(c));
      CHECK(r.selected_ids[c] == tasks[r.selected_indices[c]].id());
    }
    audit_nearest(r, clustering_space(emb, cfg).points);
    CHECK(r.diversity == doctest::Approx(diversity(emb, r.selected_indices)));
  }
}

TEST_CASE("CMDS with k-medoids returns the medoids") {
  auto tasks = corpus(80, 6);
  auto emb = graph_embeddings(tasks);
  SelectionConfig cfg;
  cfg.k = 8;
  cfg.reduction = Reduction::kNone;
  cfg.cluster_algo = ClusterAlgo::kKMedoids;
  auto r = select_cmds(tasks, emb, cfg);
  CHECK(r.selected_indices == r.medoids);
  CHECK(std::set<std::string>(r.selected_ids.begin(), r.selected_ids.end()).size() == 8);
}

TEST_CASE("invalid selection sizes are rejected") {
  auto tasks = corpus(10, 1);
  auto emb = graph_embeddings(tasks);
  SelectionConfig cfg;
  cfg.k = 11;
  CHECK_THROWS_AS(select_cmds(tasks, emb, cfg), SpecError);
  cfg.k = 0;
  CHECK_THROWS_AS(select_cmds(tasks, emb, cfg), SpecError);
  CHECK_THROWS_AS(select_random(tasks, 11, 0), SpecError);
}

TEST_CASE("random selection includes each task with probability k/N") {
  auto tasks = corpus(50, 7);
  std::vector<double> counts(50, 0.0);
  const int draws = 10000;
  for (int d = 0; d < draws; ++d) {
    auto r = select_random(tasks, 10, derive_seed(1, "draw/" + std::to_string(d)));
    REQUIRE(r.selected_indices.size() == 10);
    REQUIRE(std::is_sorted(r.selected_indices.begin(), r.selected_indices.end()));
    for (auto i : r.selected_indices) counts[i] += 1;
  }
  const double expected = draws * 10.0 / 50.0;
  double stat = 0.0;
  for (double c : counts) stat += (c - expected) * (c - expected) / expected;
  // 0.1% critical value for 49 degrees of freedom.
  CHECK(stat < 85.4);
  auto all = select_random(tasks, 50, 3);
  CHECK(all.selected_indices.size() == 50);
  CHECK(select_random(tasks, 10, 1).selected_ids != select_random(tasks, 10, 2).selected_ids);
}

TEST_CASE("diversity sums pairwise distances") {
  auto tasks = corpus(60, 8);
  auto emb = graph_embeddings(tasks);
  auto d = distance_matrix(emb);
  CHECK(diversity(emb, {3}) == 0.0);
  CHECK(diversity(emb, {3, 9}) == d.at(3, 9));
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    auto idx = rng.sample_indices(60, 30);
    double brute = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b)
        if (a < b) brute += distance(emb.metric, emb.vectors[idx[a]], emb.vectors[idx[b]]);
    CHECK(diversity(emb, idx) == doctest::Approx(brute));
    CHECK(diversity(d, idx) == doctest::Approx(brute));
  }
}

TEST_CASE("exact maximum diversity on small inputs") {
  DistanceMatrix line(3);
  line.set(0, 1, 1);
  line.set(1, 2, 1);
  line.set(0, 2, 2);
  auto s = exact_mdp(line, 2);
  CHECK(s.subset == std::vector<std::size_t>{0, 2});
  CHECK(s.diversity == 2.0);
  auto full = exact_mdp(line, 3);
  CHECK(full.subset == std::vector<std::size_t>{0, 1, 2});
  CHECK(full.diversity == 4.0);
  CHECK_THROWS_AS(exact_mdp(DistanceMatrix(21), 2), SizeError);
}

TEST_CASE("CMDS never beats the exact optimum") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    auto tasks = corpus(12, 100 + trial);
    auto emb = graph_embeddings(tasks);
    SelectionConfig cfg;
    cfg.k = 4;
    cfg.seed = trial;
    auto r = select_cmds(tasks, emb, cfg);
    auto best = exact_mdp(distance_matrix(emb), 4);
    CHECK(r.diversity <= best.diversity + 1e-9);
    auto rnd = select_random(tasks, 4, trial, &emb);
    CHECK(rnd.diversity <= best.diversity + 1e-9);
  }
}

TEST_CASE("scaling the embeddings scales diversity and keeps the selection") {
  auto tasks = corpus(200, 9);
  // Edit distance counts differing slots, so scaling is only meaningful in L2.
  auto emb = graph_embeddings(tasks);
  emb.metric = Metric::kL2;
  auto scaled = emb;
  for (auto& v : scaled.vectors)
    for (auto& x : v) x *= 4.0;
  for (auto reduction : {Reduction::kMds, Reduction::kNone}) {
    SelectionConfig cfg;
    cfg.k = 20;
    cfg.seed = 5;
    cfg.reduction = reduction;
    auto a = select_cmds(tasks, emb, cfg);
    auto b = select_cmds(tasks, scaled, cfg);
    CHECK(a.selected_ids == b.selected_ids);
    CHECK(b.diversity == doctest::Approx(4.0 * a.diversity));
  }
}

TEST_CASE("selection does not depend on the thread count") {
  auto tasks = corpus(250, 10);
  auto emb = graph_embeddings(tasks);
  SelectionConfig cfg;
  cfg.k = 25;
  cfg.seed = 3;
  auto a = select_cmds(tasks, emb, cfg);
  cfg.jobs = 4;
  auto b = select_cmds(tasks, emb, cfg);
  CHECK(a.selected_ids == b.selected_ids);
  CHECK(a.assignment == b.assignment);
  CHECK(a.diversity == b.diversity);
  cfg.jobs = 1;
  CHECK(select_cmds(tasks, emb, cfg).selected_ids == a.selected_ids);
}

TEST_CASE("precomputed clustering space must match the corpus") {
  auto tasks = corpus(30, 11);
  auto emb = graph_embeddings(tasks);
  SelectionConfig cfg;
  cfg.k = 5;
  auto space = clustering_space(emb, cfg);
  CHECK(select_cmds(tasks, emb, cfg, &space).selected_ids == select_cmds(tasks, emb, cfg).selected_ids);
  auto other = clustering_space(graph_embeddings(corpus(31, 11)), cfg);
  CHECK_THROWS_AS(select_cmds(tasks, emb, cfg, &other), DimensionMismatch);
}

TEST_CASE("name round trips") {
  CHECK(parse_reduction(reduction_name(Reduction::kPca)) == Reduction::kPca);
  CHECK(parse_cluster_algo(cluster_algo_name(ClusterAlgo::kKMedoids)) == ClusterAlgo::kKMedoids);
}

}  // TEST_SUITE
