#include "plancurate/selection.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "plancurate/errors.hpp"
#include "plancurate/parallel.hpp"
#include "plancurate/rng.hpp"

namespace plancurate {

std::string_view reduction_name(Reduction r) {
  switch (r) {
    case Reduction::kNone: return "none";
    case Reduction::kPca: return "pca";
    case Reduction::kMds: return "mds";
  }
  return "none";
}

Reduction parse_reduction(std::string_view name) {
  if (name == "none") return Reduction::kNone;
  if (name == "pca") return Reduction::kPca;
  if (name == "mds") return Reduction::kMds;
  throw InvalidValue("unknown reduction: " + std::string(name));
}

std::string_view cluster_algo_name(ClusterAlgo a) {
  return a == ClusterAlgo::kKMeans ? "kmeans" : "kmedoids";
}

ClusterAlgo parse_cluster_algo(std::string_view name) {
  if (name == "kmeans") return ClusterAlgo::kKMeans;
  if (name == "kmedoids") return ClusterAlgo::kKMedoids;
  throw InvalidValue("unknown clustering algorithm: " + std::string(name));
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Flip each column so its largest-magnitude entry is positive.
void orient_columns(Eigen::MatrixXd& basis) {
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    Eigen::Index best = 0;
    for (Eigen::Index r = 1; r < basis.rows(); ++r) {
      if (std::abs(basis(r, c)) > std::abs(basis(best, c))) best = r;
    }
    if (basis.rows() > 0 && basis(best, c) < 0) basis.col(c) *= -1.0;
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

PointSet zero_points(std::size_t rows, std::size_t cols) {
  PointSet p;
  p.rows = rows;
  p.cols = cols;
  p.values.assign(rows * cols, 0.0);
  return p;
}

}  // namespace

Reduced reduce_pca(const PointSet& points, std::size_t dim) {
  if (dim < 1) throw SpecError("reduction dimension must be at least 1");
  Reduced out;
  out.points = zero_points(points.rows, dim);
  if (points.rows == 0 || points.cols == 0) {
    out.rank_deficient = true;
    return out;
  }
  Eigen::Map<const RowMatrix> raw(points.values.data(), points.rows, points.cols);
  Eigen::MatrixXd x = raw.rowwise() - raw.colwise().mean();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double tol = s.size() ? s(0) * 1e-10 * std::max(points.rows, points.cols) : 0.0;
  std::size_t rank = 0;
  while (rank < static_cast<std::size_t>(s.size()) && s(rank) > tol) ++rank;
  out.rank = rank;
  out.rank_deficient = dim > rank;
  const std::size_t used = std::min(dim, rank);
  if (used == 0) return out;
  Eigen::MatrixXd basis = svd.matrixV().leftCols(used);
  orient_columns(basis);
  Eigen::MatrixXd proj = x * basis;
  for (std::size_t i = 0; i < points.rows; ++i) {
    for (std::size_t c = 0; c < used; ++c) out.points.values[i * dim + c] = proj(i, c);
  }
  return out;
}

Reduced reduce_mds(const DistanceMatrix& distances, std::size_t dim) {
  if (dim < 1) throw SpecError("reduction dimension must be at least 1");
  const std::size_t n = distances.size();
  Reduced out;
  out.points = zero_points(n, dim);
  if (n == 0) {
    out.rank_deficient = true;
    return out;
  }
  Eigen::MatrixXd d2(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d2(i, j) = distances.at(i, j) * distances.at(i, j);
  }
  const Eigen::VectorXd row_mean = d2.rowwise().mean();
  const double grand = row_mean.mean();
  Eigen::MatrixXd b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      b(i, j) = -0.5 * (d2(i, j) - row_mean(i) - row_mean(j) + grand);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  const Eigen::VectorXd& values = eig.eigenvalues();  // ascending
  const double top = std::abs(values(n - 1));
  const double tol = std::max(top, 1.0) * 1e-10 * static_cast<double>(n);
  std::size_t rank = 0;
  while (rank < n && values(n - 1 - rank) > tol) ++rank;
  out.rank = rank;
  out.rank_deficient = dim > rank;
  const std::size_t used = std::min(dim, rank);
  if (used == 0) return out;
  Eigen::MatrixXd basis(n, used);
  for (std::size_t c = 0; c < used; ++c) basis.col(c) = eig.eigenvectors().col(n - 1 - c);
  orient_columns(basis);
  for (std::size_t c = 0; c < used; ++c) {
    const double scale = std::sqrt(values(n - 1 - c));
    for (std::size_t i = 0; i < n; ++i) out.points.values[i * dim + c] = basis(i, c) * scale;
  }
  return out;
}

KMeansResult kmeans(const PointSet& points, int k, const KMeansOptions& options) {
  const std::size_t n = points.rows;
  const std::size_t d = points.cols;
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw SpecError("k must be in [1, " + std::to_string(n) + "], got " + std::to_string(k));
  }
  const auto kk = static_cast<std::size_t>(k);
  Rng rng(options.seed);

  // k-means++ seeding.
  std::vector<std::size_t> seeds;
  std::vector<bool> chosen(n, false);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  auto add_seed = [&](std::size_t s) {
    seeds.push_back(s);
    chosen[s] = true;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points.row(i), points.row(s)));
    }
  };
  add_seed(rng.below(n));
  while (seeds.size() < kk) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += chosen[i] ? 0.0 : nearest[i];
    std::size_t pick = n;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i] || nearest[i] <= 0.0) continue;
        acc += nearest[i];
        pick = i;
        if (acc > r) break;
      }
    }
    if (pick == n) {
      // All remaining points coincide with a seed.
      pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), false) - chosen.begin());
    }
    add_seed(pick);
  }

  KMeansResult result;
  result.centroids = zero_points(kk, d);
  for (std::size_t c = 0; c < kk; ++c) {
    std::copy(points.row(seeds[c]).begin(), points.row(seeds[c]).end(),
              result.centroids.row(c).begin());
  }
  result.assignment.assign(n, -1);
  std::vector<int> previous;
  std::vector<double> own_dist(n);
  std::vector<int> sizes(kk);

  for (int iter = 0; iter < std::max(options.max_iter, 1); ++iter) {
    // Assignment step.
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = squared_distance(points.row(i), result.centroids.row(0));
      for (std::size_t c = 1; c < kk; ++c) {
        const double dc = squared_distance(points.row(i), result.centroids.row(c));
        if (dc < best_d) {
          best_d = dc;
          best = static_cast<int>(c);
        }
      }
      result.assignment[i] = best;
      own_dist[i] = best_d;
    }
    std::fill(sizes.begin(), sizes.end(), 0);
    for (int a : result.assignment) ++sizes[a];
    // Empty-cluster repair.
    for (std::size_t c = 0; c < kk; ++c) {
      if (sizes[c] > 0) continue;
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[result.assignment[i]] > 1 && (far == n || own_dist[i] > own_dist[far])) far = i;
      }
      --sizes[result.assignment[far]];
      result.assignment[far] = static_cast<int>(c);
      own_dist[far] = 0.0;
      ++sizes[c];
    }
    // Update step.
    std::fill(result.centroids.values.begin(), result.centroids.values.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto dst = result.centroids.row(result.assignment[i]);
      auto src = points.row(i);
      for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
    }
    for (std::size_t c = 0; c < kk; ++c) {
      for (double& v : result.centroids.row(c)) v /= sizes[c];
    }
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      inertia += squared_distance(points.row(i), result.centroids.row(result.assignment[i]));
    }
    result.inertia_history.push_back(inertia);
    result.iterations = iter + 1;
    if (result.assignment == previous) break;
    if (result.inertia_history.size() >= 2) {
      const double prev = result.inertia_history[result.inertia_history.size() - 2];
      if (prev <= 0.0 || std::abs(prev - inertia) < options.rel_tol * prev) break;
    }
    if (inertia <= 0.0) break;
    previous = result.assignment;
  }
  return result;
}

KMedoidsResult kmedoids(const DistanceMatrix& dist, int k) {
  const std::size_t n = dist.size();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw SpecError("k must be in [1, " + std::to_string(n) + "], got " + std::to_string(k));
  }
  const auto kk = static_cast<std::size_t>(k);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<bool> is_medoid(n, false);
  std::vector<std::size_t> medoids;

  // BUILD.
  std::vector<double> near(n, inf);
  {
    std::size_t best = 0;
    double best_sum = inf;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += dist.at(i, j);
      if (s < best_sum) {
        best_sum = s;
        best = i;
      }
    }
    medoids.push_back(best);
    is_medoid[best] = true;
    for (std::size_t j = 0; j < n; ++j) near[j] = dist.at(best, j);
  }
  while (medoids.size() < kk) {
    std::size_t best = n;
    double best_gain = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_medoid[i]) continue;
      double gain = 0.0;
      for (std::size_t j = 0; j < n; ++j) gain += std::max(0.0, near[j] - dist.at(i, j));
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    medoids.push_back(best);
    is_medoid[best] = true;
    for (std::size_t j = 0; j < n; ++j) near[j] = std::min(near[j], dist.at(best, j));
  }

  KMedoidsResult result;
  std::vector<int> nearest_c(n);
  std::vector<double> d1(n), d2(n);
  auto refresh = [&] {
    double cost = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      d1[j] = d2[j] = inf;
      nearest_c[j] = 0;
      for (std::size_t c = 0; c < kk; ++c) {
        const double dj = dist.at(medoids[c], j);
        if (dj < d1[j]) {
          d2[j] = d1[j];
          d1[j] = dj;
          nearest_c[j] = static_cast<int>(c);
        } else if (dj < d2[j]) {
          d2[j] = dj;
        }
      }
      cost += d1[j];
    }
    return cost;
  };
  result.cost_history.push_back(refresh());

  // SWAP: best improving (medoid, non-medoid) exchange per round.
  for (;;) {
    double best_delta = 0.0;
    std::size_t best_c = kk, best_h = n;
    for (std::size_t c = 0; c < kk; ++c) {
      for (std::size_t h = 0; h < n; ++h) {
        if (is_medoid[h]) continue;
        double delta = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double djh = dist.at(h, j);
          if (nearest_c[j] == static_cast<int>(c)) {
            delta += std::min(djh, d2[j]) - d1[j];
          } else {
            delta += std::min(djh, d1[j]) - d1[j];
          }
        }
        if (delta < best_delta) {
          best_delta = delta;
          best_c = c;
          best_h = h;
        }
      }
    }
    const double scale = std::max(1.0, std::abs(result.cost_history.back()));
    if (best_c == kk || best_delta > -1e-12 * scale) break;
    is_medoid[medoids[best_c]] = false;
    medoids[best_c] = best_h;
    is_medoid[best_h] = true;
    result.cost_history.push_back(refresh());
  }
  result.medoids = medoids;
  result.assignment = nearest_c;
  return result;
}

double diversity(const DistanceMatrix& distances, const std::vector<std::size_t>& selected) {
  double total = 0.0;
  for (std::size_t a = 0; a < selected.size(); ++a) {
    for (std::size_t b = a + 1; b < selected.size(); ++b) {
      total += distances.at(selected[a], selected[b]);
    }
  }
  return total;
}

double diversity(const EmbeddingSet& embeddings, const std::vector<std::size_t>& selected) {
  double total = 0.0;
  for (std::size_t a = 0; a < selected.size(); ++a) {
    for (std::size_t b = a + 1; b < selected.size(); ++b) {
      total += distance(embeddings.metric, embeddings.vectors[selected[a]],
                        embeddings.vectors[selected[b]]);
    }
  }
  return total;
}

namespace {

void check_alignment(const std::vector<TaskInstance>& tasks, const EmbeddingSet& embeddings) {
  embeddings.validate();
  if (tasks.size() != embeddings.size()) {
    throw DimensionMismatch("embeddings are not aligned with the task list");
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].id() != embeddings.ids[i]) {
      throw UnknownId("embedding " + std::to_string(i) + " has id " + embeddings.ids[i] +
                      " but the task is " + tasks[i].id());
    }
  }
}

}  // namespace

Reduced clustering_space(const EmbeddingSet& embeddings, const SelectionConfig& config) {
  if (config.reduction != Reduction::kNone && config.dim < 1) {
    throw SpecError("reduction dimension must be at least 1");
  }
  switch (config.reduction) {
    case Reduction::kPca:
      return reduce_pca(PointSet::from_rows(embeddings.vectors), config.dim);
    case Reduction::kMds:
      return reduce_mds(distance_matrix(embeddings, config.jobs), config.dim);
    case Reduction::kNone:
      break;
  }
  Reduced r;
  r.points = PointSet::from_rows(embeddings.vectors);
  r.rank = r.points.cols;
  return r;
}

SelectionResult select_cmds(const std::vector<TaskInstance>& tasks,
                            const EmbeddingSet& embeddings, const SelectionConfig& config,
                            const Reduced* precomputed) {
  check_alignment(tasks, embeddings);
  const std::size_t n = tasks.size();
  if (config.k < 1 || config.k > n) {
    throw SpecError("subset size k must be in [1, " + std::to_string(n) + "]");
  }
  const PointSet original = PointSet::from_rows(embeddings.vectors);

  SelectionResult result;
  result.method = "cmds";
  result.config = config;

  Reduced reduced;
  if (precomputed) {
    if (precomputed->points.rows != n) {
      throw DimensionMismatch("precomputed clustering space has " +
                              std::to_string(precomputed->points.rows) + " rows, expected " +
                              std::to_string(n));
    }
  } else {
    reduced = clustering_space(embeddings, config);
  }
  const Reduced& r = precomputed ? *precomputed : reduced;
  result.rank_deficient = r.rank_deficient;
  const PointSet& space = r.points;

  const int k = static_cast<int>(config.k);
  std::vector<std::size_t> chosen(config.k, n);
  if (config.cluster_algo == ClusterAlgo::kKMeans) {
    KMeansResult km = kmeans(space, k, {config.seed, config.max_iter, config.rel_tol});
    result.assignment = km.assignment;
    PointSet reference = km.centroids;
    const PointSet* scan = &space;
    if (config.nearest == NearestSpace::kOriginal) {
      reference = zero_points(config.k, original.cols);
      std::vector<int> sizes(config.k, 0);
      for (std::size_t i = 0; i < n; ++i) {
        auto dst = reference.row(km.assignment[i]);
        auto src = original.row(i);
        for (std::size_t j = 0; j < original.cols; ++j) dst[j] += src[j];
        ++sizes[km.assignment[i]];
      }
      for (std::size_t c = 0; c < config.k; ++c) {
        for (double& v : reference.row(c)) v /= sizes[c];
      }
      scan = &original;
    }
    std::vector<double> best(config.k, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
      const int c = km.assignment[i];
      const double d = squared_distance(scan->row(i), reference.row(c));
      if (d < best[c]) {
        best[c] = d;
        chosen[c] = i;
      }
    }
    result.centroids = std::move(km.centroids);
  } else {
    const DistanceMatrix dm = config.reduction == Reduction::kNone
                                  ? distance_matrix(embeddings, config.jobs)
                                  : distance_matrix(space, Metric::kL2, config.jobs);
    KMedoidsResult pam = kmedoids(dm, k);
    result.assignment = pam.assignment;
    result.medoids = pam.medoids;
    for (std::size_t c = 0; c < config.k; ++c) chosen[c] = pam.medoids[c];
  }

  result.cluster_sizes.assign(config.k, 0);
  for (int a : result.assignment) ++result.cluster_sizes[a];
  result.selected_indices = chosen;
  for (std::size_t i : chosen) result.selected_ids.push_back(tasks[i].id());
  result.diversity = diversity(embeddings, chosen);
  return result;
}

SelectionResult select_random(const std::vector<TaskInstance>& tasks, std::size_t k,
                              std::uint64_t seed, const EmbeddingSet* embeddings) {
  if (k > tasks.size()) throw SpecError("subset size exceeds the corpus");
  if (embeddings) check_alignment(tasks, *embeddings);
  Rng rng(seed);
  SelectionResult result;
  result.method = "random";
  result.config.k = k;
  result.config.seed = seed;
  result.selected_indices = rng.sample_indices(tasks.size(), k);
  std::sort(result.selected_indices.begin(), result.selected_indices.end());
  for (std::size_t i : result.selected_indices) result.selected_ids.push_back(tasks[i].id());
  if (embeddings) result.diversity = diversity(*embeddings, result.selected_indices);
  return result;
}

MdpSolution exact_mdp(const DistanceMatrix& distances, std::size_t k) {
  const std::size_t n = distances.size();
  if (n > 20) throw SizeError("exact_mdp supports at most 20 points, got " + std::to_string(n));
  if (k > n) throw SpecError("subset size exceeds the number of points");
  MdpSolution best;
  best.diversity = -1.0;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (;;) {
    const double value = diversity(distances, idx);
    if (value > best.diversity) {
      best.diversity = value;
      best.subset = idx;
    }
    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

}  // namespace plancurate
