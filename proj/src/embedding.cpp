#include "plancurate/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "plancurate/errors.hpp"
#include "plancurate/parallel.hpp"

namespace plancurate {

using nlohmann::json;

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
  PointSet p;
  p.rows = rows.size();
  p.cols = rows.empty() ? 0 : rows.front().size();
  p.values.reserve(p.rows * p.cols);
  for (const auto& r : rows) {
    if (r.size() != p.cols) throw DimensionMismatch("ragged point set");
    p.values.insert(p.values.end(), r.begin(), r.end());
  }
  return p;
}

std::vector<std::vector<double>> PointSet::to_rows() const {
  std::vector<std::vector<double>> out(rows);
  for (std::size_t i = 0; i < rows; ++i) out[i].assign(row(i).begin(), row(i).end());
  return out;
}

namespace {

struct LogisticsSlots {
  std::size_t in_city, truck_at, plane_at, package_at, total;
};

LogisticsSlots logistics_slots(const LogisticsPad& pad) {
  const std::size_t locs = static_cast<std::size_t>(pad.cities) * pad.locations;
  LogisticsSlots s{};
  s.in_city = locs;
  s.truck_at = static_cast<std::size_t>(pad.cities) * locs;
  s.plane_at = static_cast<std::size_t>(pad.airplanes) * pad.cities;
  s.package_at = static_cast<std::size_t>(pad.packages) * (locs + pad.cities + pad.airplanes);
  s.total = s.in_city + s.truck_at + s.plane_at + s.package_at;
  return s;
}

// Writes slot values: edge / existing-without-edge / absent.
struct SlotWriter {
  std::vector<std::uint8_t>& out;
  bool shifted;

  void put(bool exists, bool edge) {
    if (shifted) {
      out.push_back(!exists ? 0 : (edge ? 2 : 1));
    } else {
      out.push_back(exists && edge ? 1 : 0);
    }
  }
};

void encode_logistics_half(const logistics::State& s, const logistics::Goal* goal,
                           const LogisticsPad& pad, SlotWriter& w) {
  const auto& topo = s.topology();
  auto loc_exists = [&](int c, int l) { return c < topo.n_cities && l < topo.locations_per_city; };
  for (int c = 0; c < pad.cities; ++c) {
    for (int l = 0; l < pad.locations; ++l) w.put(loc_exists(c, l), true);
  }
  for (int t = 0; t < pad.cities; ++t) {
    for (int c = 0; c < pad.cities; ++c) {
      for (int l = 0; l < pad.locations; ++l) {
        const bool exists = t < topo.n_trucks() && loc_exists(c, l);
        const bool edge = exists && !goal && s.trucks()[t] == logistics::Location{c, l};
        w.put(exists, edge);
      }
    }
  }
  for (int a = 0; a < pad.airplanes; ++a) {
    for (int c = 0; c < pad.cities; ++c) {
      const bool exists = a < topo.n_airplanes && c < topo.n_cities;
      const bool edge = exists && !goal && s.airplanes()[a] == logistics::Location{c, 0};
      w.put(exists, edge);
    }
  }
  for (int p = 0; p < pad.packages; ++p) {
    const bool pkg = p < s.n_packages();
    std::optional<logistics::PackagePosition> pos;
    if (pkg && !goal) pos = s.packages()[p];
    if (pkg && goal) {
      for (const auto& [gp, loc] : goal->destinations()) {
        if (gp == p) pos = logistics::PackagePosition::at_location(loc);
      }
    }
    using Kind = logistics::PackagePosition::Kind;
    for (int c = 0; c < pad.cities; ++c) {
      for (int l = 0; l < pad.locations; ++l) {
        const bool exists = pkg && loc_exists(c, l);
        w.put(exists, exists && pos && pos->kind == Kind::kAt && pos->at == logistics::Location{c, l});
      }
    }
    for (int t = 0; t < pad.cities; ++t) {
      const bool exists = pkg && t < topo.n_trucks();
      w.put(exists, exists && pos && pos->kind == Kind::kInTruck && pos->vehicle == t);
    }
    for (int a = 0; a < pad.airplanes; ++a) {
      const bool exists = pkg && a < topo.n_airplanes;
      w.put(exists, exists && pos && pos->kind == Kind::kInAirplane && pos->vehicle == a);
    }
  }
}

LogisticsPad pad_of(const TaskInstance& task) {
  const auto& s = task.as_logistics().init;
  return {s.topology().n_cities, s.topology().locations_per_city, s.topology().n_airplanes,
          s.n_packages()};
}

}  // namespace

std::size_t EncodingLayout::half_length() const {
  if (domain == Domain::kBlocksworld) {
    return static_cast<std::size_t>(pad_blocks) * (pad_blocks > 0 ? pad_blocks - 1 : 0);
  }
  return logistics_slots(pad_logistics).total;
}

std::size_t blocksworld_slot(int above, int below, int pad_blocks) {
  return static_cast<std::size_t>(above) * (pad_blocks - 1) + (below < above ? below : below - 1);
}

GraphEncoding encode_graph(const TaskInstance& task, int pad_blocks, bool force_shift) {
  if (!task.is_blocksworld()) throw LayoutMismatch("block padding given for a logistics task");
  const auto& p = task.as_blocksworld();
  const int n = p.init.num_blocks();
  if (n > pad_blocks) {
    throw SizeError("task has " + std::to_string(n) + " blocks, layout pads to " +
                    std::to_string(pad_blocks));
  }
  GraphEncoding enc;
  enc.layout.domain = Domain::kBlocksworld;
  enc.layout.pad_blocks = pad_blocks;
  enc.layout.shifted = force_shift || pad_blocks > n;
  const std::size_t half = enc.layout.half_length();
  const std::uint8_t absent = 0;
  const std::uint8_t no_edge = enc.layout.shifted ? 1 : 0;
  const std::uint8_t edge = enc.layout.shifted ? 2 : 1;
  enc.values.assign(2 * half, absent);
  for (int offset = 0; offset < 2; ++offset) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) enc.values[offset * half + blocksworld_slot(i, j, pad_blocks)] = no_edge;
      }
    }
  }
  for (const auto& [a, b] : p.init.on_atoms()) enc.values[blocksworld_slot(a, b, pad_blocks)] = edge;
  for (const auto& [a, b] : p.goal.atoms()) {
    enc.values[half + blocksworld_slot(a, b, pad_blocks)] = edge;
  }
  return enc;
}

GraphEncoding encode_graph(const TaskInstance& task, const LogisticsPad& pad, bool force_shift) {
  if (task.is_blocksworld()) throw LayoutMismatch("logistics padding given for a blocksworld task");
  const LogisticsPad own = pad_of(task);
  if (own.cities > pad.cities || own.locations > pad.locations || own.airplanes > pad.airplanes ||
      own.packages > pad.packages) {
    throw SizeError("logistics task exceeds the layout padding");
  }
  GraphEncoding enc;
  enc.layout.domain = Domain::kLogistics;
  enc.layout.pad_logistics = pad;
  enc.layout.shifted = force_shift || !(own == pad);
  enc.values.reserve(2 * enc.layout.half_length());
  SlotWriter w{enc.values, enc.layout.shifted};
  const auto& p = task.as_logistics();
  encode_logistics_half(p.init, nullptr, pad, w);
  encode_logistics_half(p.init, &p.goal, pad, w);
  return enc;
}

std::vector<GraphEncoding> encode_corpus(const std::vector<TaskInstance>& tasks) {
  std::vector<GraphEncoding> out;
  if (tasks.empty()) return out;
  const Domain domain = tasks.front().domain();
  for (const auto& t : tasks) {
    if (t.domain() != domain) throw LayoutMismatch("graph encoding needs a single-domain corpus");
  }
  out.reserve(tasks.size());
  if (domain == Domain::kBlocksworld) {
    int lo = blocksworld::kMaxBlocks, hi = 0;
    for (const auto& t : tasks) {
      lo = std::min(lo, t.size_key());
      hi = std::max(hi, t.size_key());
    }
    for (const auto& t : tasks) out.push_back(encode_graph(t, hi, lo != hi));
    return out;
  }
  LogisticsPad pad{};
  bool mixed = false;
  const LogisticsPad first = pad_of(tasks.front());
  for (const auto& t : tasks) {
    const LogisticsPad own = pad_of(t);
    mixed = mixed || !(own == first);
    pad.cities = std::max(pad.cities, own.cities);
    pad.locations = std::max(pad.locations, own.locations);
    pad.airplanes = std::max(pad.airplanes, own.airplanes);
    pad.packages = std::max(pad.packages, own.packages);
  }
  for (const auto& t : tasks) out.push_back(encode_graph(t, pad, mixed));
  return out;
}

std::size_t edit_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw LayoutMismatch("encodings differ in length");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

std::size_t edit_distance(const GraphEncoding& a, const GraphEncoding& b) {
  if (!(a.layout == b.layout)) throw LayoutMismatch("encodings use different layouts");
  return edit_distance(std::span<const std::uint8_t>(a.values), std::span<const std::uint8_t>(b.values));
}

double l2_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw LayoutMismatch("vectors differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

std::string_view metric_name(Metric metric) { return metric == Metric::kEdit ? "edit" : "l2"; }

Metric parse_metric(std::string_view name) {
  if (name == "edit") return Metric::kEdit;
  if (name == "l2") return Metric::kL2;
  throw InvalidValue("unknown metric: " + std::string(name));
}

double distance(Metric metric, std::span<const double> a, std::span<const double> b) {
  if (metric == Metric::kL2) return l2_distance(a, b);
  if (a.size() != b.size()) throw LayoutMismatch("vectors differ in length");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return static_cast<double>(d);
}

void EmbeddingSet::validate() const {
  if (ids.size() != vectors.size()) throw DimensionMismatch("ids and vectors differ in count");
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (vectors[i].size() != vectors.front().size()) {
      throw DimensionMismatch("embedding vectors differ in length");
    }
    if (!seen.insert(ids[i]).second) throw DuplicateId("duplicate embedding id: " + ids[i]);
  }
}

EmbeddingSet graph_embeddings(const std::vector<TaskInstance>& tasks) {
  EmbeddingSet set;
  set.metric = Metric::kEdit;
  for (const auto& enc : encode_corpus(tasks)) set.vectors.push_back(enc.as_doubles());
  for (const auto& t : tasks) set.ids.push_back(t.id());
  set.validate();
  return set;
}

DistanceMatrix distance_matrix(const PointSet& points, Metric metric, int jobs) {
  DistanceMatrix m(points.rows);
  parallel_for(points.rows, jobs, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < points.rows; ++j) {
      m.set(i, j, distance(metric, points.row(i), points.row(j)));
    }
  });
  return m;
}

DistanceMatrix distance_matrix(const EmbeddingSet& set, int jobs) {
  return distance_matrix(PointSet::from_rows(set.vectors), set.metric, jobs);
}

namespace {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> words;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '_') {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      words.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  std::vector<std::string> grams;
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t i = 0; i + n <= words.size(); ++i) {
      std::string g = words[i];
      for (std::size_t k = 1; k < n; ++k) g += " " + words[i + k];
      grams.push_back(std::move(g));
    }
  }
  return grams;
}

}  // namespace

EmbeddingSet tfidf_embed(const std::vector<std::string>& ids,
                         const std::vector<std::string>& texts) {
  if (texts.empty()) throw InvalidValue("tfidf_embed needs at least one text");
  if (ids.size() != texts.size()) throw DimensionMismatch("ids and texts differ in count");
  std::vector<std::map<std::string, int>> counts(texts.size());
  std::map<std::string, int> df;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    for (auto& g : tokenize(texts[i])) ++counts[i][g];
    for (const auto& [g, c] : counts[i]) ++df[g];
  }
  std::unordered_map<std::string, std::size_t> column;
  std::vector<double> idf;
  for (const auto& [g, d] : df) {
    column.emplace(g, idf.size());
    // Smoothed idf, as in common TF-IDF implementations.
    idf.push_back(std::log((1.0 + texts.size()) / (1.0 + d)) + 1.0);
  }
  EmbeddingSet set;
  set.metric = Metric::kL2;
  set.ids = ids;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    std::vector<double> v(idf.size(), 0.0);
    for (const auto& [g, c] : counts[i]) v[column[g]] = c * idf[column[g]];
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0) {
      for (double& x : v) x /= norm;
    }
    set.vectors.push_back(std::move(v));
  }
  set.validate();
  return set;
}

EmbeddingSet load_external_embeddings(const std::string& path,
                                      const std::vector<TaskInstance>* corpus) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embeddings file: " + path);
  std::unordered_set<std::string> known;
  if (corpus) {
    for (const auto& t : *corpus) known.insert(t.id());
  }
  EmbeddingSet set;
  set.metric = Metric::kL2;
  std::unordered_set<std::string> seen;
  std::optional<Metric> metric;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(path, lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string() ||
        !rec.contains("vector") || !rec["vector"].is_array()) {
      throw FormatError(path, lineno, "expected {\"id\": string, \"vector\": [numbers]}");
    }
    std::vector<double> v;
    for (const auto& x : rec["vector"]) {
      if (!x.is_number()) throw FormatError(path, lineno, "vector entries must be numbers");
      v.push_back(x.get<double>());
    }
    if (rec.contains("metric")) {
      Metric m = rec["metric"] == "edit" ? Metric::kEdit : Metric::kL2;
      if (metric && *metric != m) throw FormatError(path, lineno, "inconsistent metric field");
      metric = m;
    }
    std::string id = rec["id"].get<std::string>();
    if (!seen.insert(id).second) throw DuplicateId(path + ":" + std::to_string(lineno) + ": duplicate id " + id);
    if (corpus && !known.count(id)) {
      throw UnknownId(path + ":" + std::to_string(lineno) + ": id not in corpus: " + id);
    }
    if (!set.vectors.empty() && v.size() != set.vectors.front().size()) {
      throw DimensionMismatch(path + ":" + std::to_string(lineno) + ": vector length " +
                              std::to_string(v.size()) + " differs from " +
                              std::to_string(set.vectors.front().size()));
    }
    set.ids.push_back(std::move(id));
    set.vectors.push_back(std::move(v));
  }
  if (metric) set.metric = *metric;
  return set;
}

void save_embeddings(const EmbeddingSet& set, const std::string& path) {
  set.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write embeddings file: " + path);
  for (std::size_t i = 0; i < set.size(); ++i) {
    json rec;
    rec["id"] = set.ids[i];
    rec["metric"] = std::string(metric_name(set.metric));
    rec["vector"] = set.vectors[i];
    out << rec.dump() << '\n';
  }
  if (!out) throw IoError("failed writing embeddings file: " + path);
}

}  // namespace plancurate
