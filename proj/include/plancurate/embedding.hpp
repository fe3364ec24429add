#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "plancurate/task.hpp"

namespace plancurate {

// Dense row-major point set.
struct PointSet {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
  std::span<double> row(std::size_t i) { return {values.data() + i * cols, cols}; }

  // Throws DimensionMismatch on ragged input.
  static PointSet from_rows(const std::vector<std::vector<double>>& rows);
  std::vector<std::vector<double>> to_rows() const;
};

// Padded object counts for the logistics layout.
struct LogisticsPad {
  int cities = 0;
  int locations = 0;
  int airplanes = 0;
  int packages = 0;

  bool operator==(const LogisticsPad&) const = default;
};

struct EncodingLayout {
  Domain domain = Domain::kBlocksworld;
  int pad_blocks = 0;
  LogisticsPad pad_logistics{};
  // Values carry the +1 padding shift: 0 absent, 1 no edge, 2 edge.
  bool shifted = false;

  // Slots per configuration; the encoding is twice this (init, then goal).
  std::size_t half_length() const;
  bool operator==(const EncodingLayout&) const = default;
};

// Init-configuration edge indicators followed by goal-configuration ones.
struct GraphEncoding {
  EncodingLayout layout;
  std::vector<std::uint8_t> values;

  std::span<const std::uint8_t> init_half() const {
    return {values.data(), layout.half_length()};
  }
  std::span<const std::uint8_t> goal_half() const {
    return {values.data() + layout.half_length(), layout.half_length()};
  }
  std::vector<double> as_doubles() const { return {values.begin(), values.end()}; }
};

// Slot of the ordered pair (above, below) within one blocksworld half:
// above-major, skipping the diagonal, over pad_blocks blocks.
std::size_t blocksworld_slot(int above, int below, int pad_blocks);

// Blocksworld: one slot per ordered block pair marking on(i, j). The shift is
// applied when pad_blocks exceeds the task's block count or force_shift is set.
// Throws SizeError if the task has more blocks than pad_blocks.
GraphEncoding encode_graph(const TaskInstance& task, int pad_blocks, bool force_shift = false);

// Logistics: in-city, truck-at, airplane-at and package position edges over
// canonically ordered, padded objects.
GraphEncoding encode_graph(const TaskInstance& task, const LogisticsPad& pad,
                           bool force_shift = false);

// Encodes a single-domain corpus with one shared layout: padded to the largest
// task, shifted only when sizes are mixed. Throws LayoutMismatch on mixed domains.
std::vector<GraphEncoding> encode_corpus(const std::vector<TaskInstance>& tasks);

// Number of slots whose values differ. Throws LayoutMismatch.
std::size_t edit_distance(const GraphEncoding& a, const GraphEncoding& b);
std::size_t edit_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

// Throws LayoutMismatch on unequal lengths.
double l2_distance(std::span<const double> a, std::span<const double> b);

enum class Metric { kEdit, kL2 };
std::string_view metric_name(Metric metric);
Metric parse_metric(std::string_view name);

double distance(Metric metric, std::span<const double> a, std::span<const double> b);

struct EmbeddingSet {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> vectors;
  Metric metric = Metric::kL2;

  std::size_t size() const { return ids.size(); }
  // Throws DimensionMismatch / DuplicateId when the invariants fail.
  void validate() const;
};

EmbeddingSet graph_embeddings(const std::vector<TaskInstance>& tasks);

// Symmetric matrix with zero diagonal.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t n = 0) : n_(n), values_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double d) {
    values_[i * n_ + j] = d;
    values_[j * n_ + i] = d;
  }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

DistanceMatrix distance_matrix(const EmbeddingSet& set, int jobs = 1);
DistanceMatrix distance_matrix(const PointSet& points, Metric metric, int jobs = 1);

// TF-IDF over word 1- to 3-grams (lower-cased, split on anything that is not
// alphanumeric or '_'), rows L2-normalized, vocabulary in lexicographic order.
// Offline stand-in for transformer text embeddings.
EmbeddingSet tfidf_embed(const std::vector<std::string>& ids,
                         const std::vector<std::string>& texts);

// Embeddings file: one JSON object per line, {"id": text, "vector": [numbers]}.
// When `corpus` is non-null every id must belong to it.
EmbeddingSet load_external_embeddings(const std::string& path,
                                      const std::vector<TaskInstance>* corpus = nullptr);
void save_embeddings(const EmbeddingSet& set, const std::string& path);

}  // namespace plancurate
