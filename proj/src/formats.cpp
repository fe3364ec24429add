#include "plancurate/formats.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "plancurate/errors.hpp"
#include "plancurate/nl_codec.hpp"

namespace plancurate {

namespace bw = blocksworld;
namespace lg = logistics;
using nlohmann::json;

namespace {

std::string block_name(int b) { return std::string(bw::color_name(b)); }

int block_index(const json& j) {
  auto idx = bw::color_index(j.get<std::string>());
  if (!idx) throw InvalidValue("unknown block " + j.get<std::string>());
  return *idx;
}

std::optional<int> suffix_index(const std::string& s, const std::string& prefix) {
  if (s.size() <= prefix.size() || s.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
  auto rest = s.substr(prefix.size());
  if (rest.empty() || rest.size() > 6 || rest.find_first_not_of("0123456789") != std::string::npos)
    return std::nullopt;
  return std::stoi(rest);
}

lg::Location location_from(const json& j) {
  auto s = j.get<std::string>();
  auto us = s.rfind('_');
  if (s.rfind("location_", 0) != 0 || us == std::string::npos || us <= 9)
    throw InvalidValue("bad location " + s);
  auto c = suffix_index(s.substr(0, us), "location_");
  auto i = suffix_index("x" + s.substr(us + 1), "x");
  if (!c || !i) throw InvalidValue("bad location " + s);
  return {*c, *i};
}

json blocksworld_json(const TaskInstance& task) {
  const auto& p = task.as_blocksworld();
  json support = json::array();
  for (int s : p.init.support())
    support.push_back(s == bw::kTable ? "table" : s == bw::kHand ? "hand" : block_name(s));
  json on = json::array();
  for (auto [a, b] : p.goal.atoms()) on.push_back({block_name(a), block_name(b)});
  return {{"id", task.id()},
          {"domain", "blocksworld"},
          {"meta", {{"n_blocks", p.init.num_blocks()}}},
          {"init", {{"support", support}}},
          {"goal", {{"on", on}}}};
}

json logistics_json(const TaskInstance& task) {
  const auto& p = task.as_logistics();
  const auto& s = p.init;
  const auto& t = s.topology();
  json trucks = json::array(), planes = json::array(), pkgs = json::array(), at = json::array();
  for (const auto& l : s.trucks()) trucks.push_back(lg::location_name(l));
  for (const auto& l : s.airplanes()) planes.push_back(lg::location_name(l));
  for (const auto& pos : s.packages()) {
    switch (pos.kind) {
      case lg::PackagePosition::Kind::kAt:
        pkgs.push_back(lg::location_name(pos.at));
        break;
      case lg::PackagePosition::Kind::kInTruck:
        pkgs.push_back("truck_" + std::to_string(pos.vehicle));
        break;
      case lg::PackagePosition::Kind::kInAirplane:
        pkgs.push_back("airplane_" + std::to_string(pos.vehicle));
        break;
    }
  }
  for (const auto& [k, l] : p.goal.destinations())
    at.push_back({"package_" + std::to_string(k), lg::location_name(l)});
  return {{"id", task.id()},
          {"domain", "logistics"},
          {"meta",
           {{"cities", t.n_cities},
            {"locations_per_city", t.locations_per_city},
            {"airplanes", t.n_airplanes},
            {"packages", s.n_packages()}}},
          {"init", {{"trucks", trucks}, {"airplanes", planes}, {"packages", pkgs}}},
          {"goal", {{"at", at}}}};
}

TaskInstance blocksworld_from(const json& j) {
  std::vector<int> support;
  for (const auto& e : j.at("init").at("support")) {
    auto s = e.get<std::string>();
    if (s == "table")
      support.push_back(bw::kTable);
    else if (s == "hand")
      support.push_back(bw::kHand);
    else
      support.push_back(block_index(e));
  }
  const int n = static_cast<int>(support.size());
  if (j.at("meta").at("n_blocks").get<int>() != n)
    throw InvalidValue("n_blocks does not match support length");
  std::vector<std::pair<int, int>> atoms;
  for (const auto& pair : j.at("goal").at("on")) {
    if (!pair.is_array() || pair.size() != 2) throw InvalidValue("goal atom must be a pair");
    atoms.emplace_back(block_index(pair[0]), block_index(pair[1]));
  }
  return TaskInstance::blocksworld(bw::State::from_support(std::move(support)),
                                   bw::Goal::from_atoms(std::move(atoms), n),
                                   GoalCheck::kAllowSatisfied);
}

TaskInstance logistics_from(const json& j) {
  const auto& meta = j.at("meta");
  lg::Topology topo{meta.at("cities").get<int>(), meta.at("locations_per_city").get<int>(),
                    meta.at("airplanes").get<int>()};
  topo.validate();
  const auto& init = j.at("init");
  std::vector<lg::Location> trucks, planes;
  for (const auto& l : init.at("trucks")) trucks.push_back(location_from(l));
  for (const auto& l : init.at("airplanes")) planes.push_back(location_from(l));
  std::vector<lg::PackagePosition> pkgs;
  for (const auto& e : init.at("packages")) {
    auto s = e.get<std::string>();
    if (auto t = suffix_index(s, "truck_"))
      pkgs.push_back(lg::PackagePosition::in_truck(*t));
    else if (auto a = suffix_index(s, "airplane_"))
      pkgs.push_back(lg::PackagePosition::in_airplane(*a));
    else
      pkgs.push_back(lg::PackagePosition::at_location(location_from(e)));
  }
  const int n_packages = static_cast<int>(pkgs.size());
  if (meta.at("packages").get<int>() != n_packages)
    throw InvalidValue("packages count does not match init");
  std::vector<std::pair<int, lg::Location>> dest;
  for (const auto& pair : j.at("goal").at("at")) {
    if (!pair.is_array() || pair.size() != 2) throw InvalidValue("goal atom must be a pair");
    auto k = suffix_index(pair[0].get<std::string>(), "package_");
    if (!k) throw InvalidValue("bad package " + pair[0].get<std::string>());
    dest.emplace_back(*k, location_from(pair[1]));
  }
  auto state = lg::State::make(topo, std::move(trucks), std::move(planes), std::move(pkgs));
  return TaskInstance::logistics(std::move(state), lg::Goal::make(std::move(dest), topo, n_packages),
                                 GoalCheck::kAllowSatisfied);
}

template <typename Fn>
void for_each_record(const std::string& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(path, n, std::string("invalid JSON: ") + e.what());
    }
    try {
      fn(j, n);
    } catch (const json::exception& e) {
      throw FormatError(path, n, e.what());
    } catch (const InvalidValue& e) {
      throw FormatError(path, n, e.what());
    }
  }
}

json verdict_to_json(const Verdict& v) {
  json j = {{"verdict", verdict_name(v.kind)}, {"length", v.length}};
  if (v.optimal_length) j["optimal_length"] = *v.optimal_length;
  if (v.is_optimal) j["is_optimal"] = *v.is_optimal;
  if (v.parse_error)
    j["parse_error"] = {{"line", v.parse_error->line},
                        {"reason", parse_reason_code(v.parse_error->reason)},
                        {"text", v.parse_error->text}};
  if (v.failed_step) j["failed_step"] = *v.failed_step;
  if (v.reason) j["reason"] = reason_code(*v.reason);
  return j;
}

}  // namespace

json task_to_json(const TaskInstance& task) {
  return task.is_blocksworld() ? blocksworld_json(task) : logistics_json(task);
}

TaskInstance task_from_json(const json& j) {
  auto domain = parse_domain(j.at("domain").get<std::string>());
  auto task = domain == Domain::kBlocksworld ? blocksworld_from(j) : logistics_from(j);
  if (auto id = j.find("id"); id != j.end() && id->get<std::string>() != task.id())
    throw InvalidValue("id " + id->get<std::string>() + " does not match task content");
  return task;
}

void write_tasks(const std::vector<TaskInstance>& tasks, const std::string& path) {
  std::string out;
  for (const auto& t : tasks) out += task_to_json(t).dump() + "\n";
  write_text(path, out);
}

std::vector<TaskInstance> read_tasks(const std::string& path) {
  std::vector<TaskInstance> tasks;
  std::set<std::string> seen;
  for_each_record(path, [&](const json& j, std::size_t n) {
    auto t = task_from_json(j);
    if (!seen.insert(t.id()).second)
      throw DuplicateId(path + ":" + std::to_string(n) + ": duplicate task " + t.id());
    tasks.push_back(std::move(t));
  });
  return tasks;
}

void write_labels(const LabeledCorpus& corpus, const std::vector<TaskInstance>& order,
                  const std::string& path) {
  std::unordered_map<std::string, json> records;
  for (const auto& l : corpus.labeled) {
    json plan = json::array();
    for (const auto& a : l.plan.actions) plan.push_back(render_action(a));
    records[l.task.id()] = {{"id", l.task.id()},
                            {"status", status_name(SolveStatus::kSolved)},
                            {"length", l.plan.size()},
                            {"plan", plan}};
  }
  for (const auto& [t, status] : corpus.unsolved)
    records[t.id()] = {{"id", t.id()}, {"status", status_name(status)}, {"length", nullptr},
                       {"plan", nullptr}};
  std::string out;
  for (const auto& t : order) {
    auto it = records.find(t.id());
    if (it != records.end()) out += it->second.dump() + "\n";
  }
  write_text(path, out);
}

std::vector<LabelRecord> read_labels(const std::string& path,
                                     const std::vector<TaskInstance>& tasks) {
  std::unordered_map<std::string, Domain> domains;
  for (const auto& t : tasks) domains.emplace(t.id(), t.domain());
  std::vector<LabelRecord> out;
  std::set<std::string> seen;
  for_each_record(path, [&](const json& j, std::size_t n) {
    LabelRecord r;
    r.id = j.at("id").get<std::string>();
    auto dom = domains.find(r.id);
    if (dom == domains.end()) return;
    if (!seen.insert(r.id).second) throw DuplicateId(path + ": duplicate label " + r.id);
    auto status = j.at("status").get<std::string>();
    if (status == "solved") {
      r.status = SolveStatus::kSolved;
      std::string text;
      for (const auto& line : j.at("plan")) text += line.get<std::string>() + "\n";
      auto parsed = parse_plan(text, dom->second);
      if (auto* err = std::get_if<ParseError>(&parsed))
        throw FormatError(path, n, "plan line " + std::to_string(err->line) + ": " +
                                       std::string(parse_reason_code(err->reason)));
      r.plan = std::get<Plan>(std::move(parsed));
    } else if (status == "unsolvable") {
      r.status = SolveStatus::kUnsolvable;
    } else if (status == "limit-exceeded") {
      r.status = SolveStatus::kLimitExceeded;
    } else {
      throw FormatError(path, n, "unknown status " + status);
    }
    out.push_back(std::move(r));
  });
  return out;
}

json selection_to_json(const SelectionResult& r) {
  const auto& c = r.config;
  json j = {{"method", r.method},
            {"k", c.k},
            {"config",
             {{"reduction", reduction_name(c.reduction)},
              {"dim", c.dim},
              {"cluster_algo", cluster_algo_name(c.cluster_algo)},
              {"nearest", c.nearest == NearestSpace::kClustering ? "clustering" : "original"},
              {"seed", c.seed},
              {"max_iter", c.max_iter},
              {"rel_tol", c.rel_tol}}},
            {"selected_ids", r.selected_ids},
            {"selected_indices", r.selected_indices},
            {"cluster_sizes", r.cluster_sizes},
            {"diversity", r.diversity},
            {"rank_deficient", r.rank_deficient}};
  if (!r.assignment.empty()) j["assignment"] = r.assignment;
  if (!r.medoids.empty()) j["medoids"] = r.medoids;
  if (r.method != "random") {
    j["reduction_note"] =
        "dimension reduction uses deterministic PCA or classical MDS in place of t-SNE";
  }
  return j;
}

json report_to_json(const CorpusReport& r) {
  json hist = json::array();
  for (const auto& row : solved_by_length_histogram(r)) {
    json h = {{"attempted", row.attempted}, {"solved", row.solved}, {"rate", row.rate}};
    h["optimal_length"] = row.optimal_length < 0 ? json(nullptr) : json(row.optimal_length);
    hist.push_back(h);
  }
  json verdicts = json::array();
  for (const auto& [id, v] : r.verdicts) {
    auto vj = verdict_to_json(v);
    vj["id"] = id;
    verdicts.push_back(vj);
  }
  return {{"n_tasks", r.n_tasks},
          {"n_solved", r.n_solved},
          {"solved_rate", r.solved_rate},
          {"n_optimal", r.n_optimal},
          {"optimality_rate", r.optimality_rate ? json(*r.optimality_rate) : json(nullptr)},
          {"outcomes", r.outcomes},
          {"histogram", hist},
          {"verdicts", verdicts}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace plancurate
