#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plancurate/embedding.hpp"
#include "plancurate/task.hpp"

namespace plancurate {

enum class Reduction { kNone, kPca, kMds };
std::string_view reduction_name(Reduction r);
Reduction parse_reduction(std::string_view name);

struct Reduced {
  PointSet points;
  // Requested dimension exceeded the available rank; trailing coordinates are zero.
  bool rank_deficient = false;
  std::size_t rank = 0;
};

// Projection onto the top `dim` principal components of the centered data.
// Each component is oriented so its largest-magnitude loading is positive.
Reduced reduce_pca(const PointSet& points, std::size_t dim);

// Classical MDS: top `dim` eigenpairs of -1/2 J D^2 J, scaled by sqrt(lambda).
Reduced reduce_mds(const DistanceMatrix& distances, std::size_t dim);

struct KMeansOptions {
  std::uint64_t seed = 0;
  int max_iter = 100;
  double rel_tol = 1e-6;
};

struct KMeansResult {
  std::vector<int> assignment;
  PointSet centroids;
  // Inertia after every centroid update, in iteration order.
  std::vector<double> inertia_history;
  int iterations = 0;

  double inertia() const { return inertia_history.empty() ? 0.0 : inertia_history.back(); }
};

// k-means++ seeding followed by Lloyd iterations. Stops after max_iter or when
// the relative inertia change drops below rel_tol. An empty cluster takes the
// point farthest from its own centroid. Ties go to the lower index.
KMeansResult kmeans(const PointSet& points, int k, const KMeansOptions& options = {});

struct KMedoidsResult {
  std::vector<int> assignment;
  // Point index of each cluster's medoid.
  std::vector<std::size_t> medoids;
  // Total within-cluster cost after BUILD and after every accepted swap.
  std::vector<double> cost_history;

  double cost() const { return cost_history.back(); }
};

// PAM: greedy BUILD then best-improvement SWAP until no swap lowers the cost.
// Deterministic: ties go to the lower index.
KMedoidsResult kmedoids(const DistanceMatrix& distances, int k);

enum class ClusterAlgo { kKMeans, kKMedoids };
std::string_view cluster_algo_name(ClusterAlgo a);
ClusterAlgo parse_cluster_algo(std::string_view name);

// Space in which "closest to the centroid" is measured.
enum class NearestSpace { kClustering, kOriginal };

struct SelectionConfig {
  std::size_t k = 1;
  // Clustering in a 2-D projection spreads the picks over the corpus; in the
  // full encoding space the centroid-nearest picks crowd toward the middle.
  Reduction reduction = Reduction::kMds;
  std::size_t dim = 2;
  ClusterAlgo cluster_algo = ClusterAlgo::kKMeans;
  NearestSpace nearest = NearestSpace::kClustering;
  std::uint64_t seed = 0;
  int max_iter = 100;
  double rel_tol = 1e-6;
  int jobs = 1;
};

struct SelectionResult {
  std::string method;
  // One id per cluster, ordered by cluster index (random: ascending task index).
  std::vector<std::string> selected_ids;
  std::vector<std::size_t> selected_indices;
  // Cluster of every input task; empty for random selection.
  std::vector<int> assignment;
  // k-means centroids in clustering space, or medoid indices.
  PointSet centroids;
  std::vector<std::size_t> medoids;
  std::vector<int> cluster_sizes;
  double diversity = 0.0;
  SelectionConfig config;
  bool rank_deficient = false;
};

// Sum of pairwise distances among the selected rows, in the set's metric.
double diversity(const EmbeddingSet& embeddings, const std::vector<std::size_t>& selected);
double diversity(const DistanceMatrix& distances, const std::vector<std::size_t>& selected);

// Points the clustering runs on: the embeddings themselves, or their PCA / MDS
// projection to config.dim dimensions.
Reduced clustering_space(const EmbeddingSet& embeddings, const SelectionConfig& config);

// Clustering-based maximum diversity sampling: reduce, cluster into k groups,
// keep the member closest to each centroid. Embeddings must be aligned with
// tasks (same order, same ids). `precomputed` skips the reduction when the
// caller already holds clustering_space(embeddings, config), e.g. across k.
SelectionResult select_cmds(const std::vector<TaskInstance>& tasks,
                            const EmbeddingSet& embeddings, const SelectionConfig& config,
                            const Reduced* precomputed = nullptr);

// Uniform sample of k tasks without replacement. Diversity is reported in the
// metric of `embeddings` when given.
SelectionResult select_random(const std::vector<TaskInstance>& tasks, std::size_t k,
                              std::uint64_t seed, const EmbeddingSet* embeddings = nullptr);

struct MdpSolution {
  std::vector<std::size_t> subset;
  double diversity = 0.0;
};

// Exhaustive maximum-diversity subset; lexicographically smallest among ties.
// Throws SizeError for more than 20 points.
MdpSolution exact_mdp(const DistanceMatrix& distances, std::size_t k);

}  // namespace plancurate
