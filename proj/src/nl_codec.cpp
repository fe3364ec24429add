#include "plancurate/nl_codec.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "plancurate/errors.hpp"
#include "plancurate/evaluation.hpp"

namespace plancurate {

namespace bw = blocksworld;
namespace lg = logistics;

namespace {

constexpr std::string_view kBlocksworldInstruction =
    "I am playing with a set of blocks where I need to arrange the blocks into stacks. Here "
    "are the actions I can do:\n"
    "\n"
    "Pick up a block\n"
    "Unstack a block from on top of another block\n"
    "Put down a block\n"
    "Stack a block on top of another block\n"
    "\n"
    "I have the following restrictions on my actions:\n"
    "I can only pick up or unstack one block at a time.\n"
    "I can only pick up or unstack a block if my hand is empty.\n"
    "I can only pick up a block if the block is on the table and the block is clear.\n"
    "A block is clear if the block has no other blocks on top of it and if the block is not "
    "picked up.\n"
    "I can only unstack a block from on top of another block if the block I am unstacking was "
    "really on top of the other block.\n"
    "I can only unstack a block from on top of another block if the block I am unstacking is "
    "clear.\n"
    "Once I pick up or unstack a block, I am holding the block.\n"
    "I can only put down a block that I am holding.\n"
    "I can only stack a block on top of another block if I am holding the block being "
    "stacked.\n"
    "I can only stack a block on top of another block if the block onto which I am stacking "
    "the block is clear.\n"
    "Once I put down or stack a block, my hand becomes empty.\n"
    "Once you stack a block on top of a second block, the second block is no longer clear.";

constexpr std::string_view kLogisticsInstruction =
    "I have to plan logistics to transport packages within cities via trucks and between "
    "cities via airplanes. Locations within a city are directly connected (trucks can move "
    "between any two such locations), and so are the cities. In each city, there is exactly "
    "one truck and each city has one location that serves as an airport.\n"
    "\n"
    "Here are the actions that can be performed:\n"
    "Load a package into a truck.\n"
    "Load a package into an airplane.\n"
    "Unload a package from a truck.\n"
    "Unload a package from an airplane.\n"
    "Drive a truck from one location to another location.\n"
    "Fly an airplane from one city to another city.\n"
    "\n"
    "The following are the restrictions on the actions:\n"
    "A package can be loaded into a truck only if the package and the truck are in the same "
    "location.\n"
    "Once a package is loaded into a truck, the package is not at the location and is in the "
    "truck.\n"
    "A package can be loaded into an airplane only if the package and the airplane are in the "
    "same location.\n"
    "Once a package is loaded into an airplane, the package is not at the location and is in "
    "the airplane.\n"
    "A package can be unloaded from a truck only if the package is in the truck.\n"
    "Once a package is unloaded from a truck, the package is not in the truck and is at the "
    "location of the truck.\n"
    "A package can be unloaded from an airplane only if the package in the airplane.\n"
    "Once a package is unloaded from an airplane, the package is not in the airplane and is at "
    "the location of the airplane.\n"
    "A truck can be driven from one location to another if the truck is at the from-location "
    "and both from-location and to-location are locations in the same city.\n"
    "Once a truck is driven from one location to another, it is not at the from-location and "
    "is at the to-location.\n"
    "An airplane can be flown from one city to another if the from-location and the "
    "to-location are airports and the airplane is at the from-location.\n"
    "Once an airplane is flown from one city to another the airplane is not at the "
    "from-location and is at the to-location.";

// "a, b, c and d"
std::string join_facts(const std::vector<std::string>& facts) {
  std::string out;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (i > 0) out += (i + 1 == facts.size()) ? " and " : ", ";
    out += facts[i];
  }
  return out;
}

std::string block(int b) { return "the " + std::string(bw::color_name(b)) + " block"; }
std::string indexed(std::string_view prefix, int i) {
  return std::string(prefix) + "_" + std::to_string(i);
}
std::string truck(int t) { return indexed("truck", t); }
std::string airplane(int a) { return indexed("airplane", a); }
std::string package(int p) { return indexed("package", p); }
std::string city(int c) { return indexed("city", c); }
std::string loc(const lg::Location& l) { return lg::location_name(l); }

std::vector<std::string> blocksworld_init_facts(const bw::State& s) {
  std::vector<std::string> facts;
  const int n = s.num_blocks();
  for (int b = 0; b < n; ++b)
    if (s.clear(b)) facts.push_back(block(b) + " is clear");
  if (auto held = s.holding())
    facts.push_back("the hand is currently holding " + block(*held));
  else
    facts.push_back("the hand is empty");
  for (auto [above, below] : s.on_atoms())
    facts.push_back(block(above) + " is on top of " + block(below));
  for (int b = 0; b < n; ++b)
    if (s.on_table(b)) facts.push_back(block(b) + " is on the table");
  return facts;
}

std::string package_fact(int p, const lg::PackagePosition& pos) {
  switch (pos.kind) {
    case lg::PackagePosition::Kind::kAt:
      return package(p) + " is at " + loc(pos.at);
    case lg::PackagePosition::Kind::kInTruck:
      return package(p) + " is in " + truck(pos.vehicle);
    case lg::PackagePosition::Kind::kInAirplane:
      return package(p) + " is in " + airplane(pos.vehicle);
  }
  return {};
}

std::vector<std::string> logistics_init_facts(const lg::State& s) {
  const auto& topo = s.topology();
  std::vector<std::string> facts;
  for (int c = 0; c < topo.n_cities; ++c) facts.push_back(loc({c, 0}) + " is an airport");
  for (std::size_t a = 0; a < s.airplanes().size(); ++a)
    facts.push_back(airplane(static_cast<int>(a)) + " is at " + loc(s.airplanes()[a]));
  for (std::size_t p = 0; p < s.packages().size(); ++p)
    facts.push_back(package_fact(static_cast<int>(p), s.packages()[p]));
  for (std::size_t t = 0; t < s.trucks().size(); ++t)
    facts.push_back(truck(static_cast<int>(t)) + " is at " + loc(s.trucks()[t]));
  for (int c = 0; c < topo.n_cities; ++c)
    for (int i = 0; i < topo.locations_per_city; ++i)
      facts.push_back(loc({c, i}) + " is in the city " + city(c));
  return facts;
}

std::string render_bw_action(const bw::Action& a) {
  switch (a.kind) {
    case bw::ActionKind::kPickUp:
      return "pick up " + block(a.block);
    case bw::ActionKind::kPutDown:
      return "put down " + block(a.block);
    case bw::ActionKind::kStack:
      return "stack " + block(a.block) + " on top of " + block(a.other);
    case bw::ActionKind::kUnstack:
      return "unstack " + block(a.block) + " from on top of " + block(a.other);
  }
  return {};
}

std::string render_lg_action(const lg::Action& a) {
  switch (a.kind) {
    case lg::ActionKind::kLoadTruck:
      return "load " + package(a.package) + " into " + truck(a.vehicle) + " at " + loc(a.from);
    case lg::ActionKind::kLoadAirplane:
      return "load " + package(a.package) + " into " + airplane(a.vehicle) + " at " +
             loc(a.from);
    case lg::ActionKind::kUnloadTruck:
      return "unload " + package(a.package) + " from " + truck(a.vehicle) + " at " +
             loc(a.from);
    case lg::ActionKind::kUnloadAirplane:
      return "unload " + package(a.package) + " from " + airplane(a.vehicle) + " at " +
             loc(a.from);
    case lg::ActionKind::kDriveTruck:
      return "drive " + truck(a.vehicle) + " from " + loc(a.from) + " to " + loc(a.to) + " in " +
             city(a.city);
    case lg::ActionKind::kFlyAirplane:
      return "fly " + airplane(a.vehicle) + " from " + loc(a.from) + " to " + loc(a.to);
  }
  return {};
}

// ---- parsing ----

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

// Pattern token: literal word, or a "{}" slot capturing one token.
bool match(const std::vector<std::string>& toks, std::initializer_list<std::string_view> pattern,
           std::vector<std::string>& slots) {
  if (toks.size() != pattern.size()) return false;
  slots.clear();
  std::size_t i = 0;
  for (auto p : pattern) {
    if (p == "{}")
      slots.push_back(toks[i]);
    else if (toks[i] != p)
      return false;
    ++i;
  }
  return true;
}

std::optional<int> parse_index(std::string_view s) {
  if (s.empty() || s.size() > 6) return std::nullopt;
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) return std::nullopt;
  return v;
}

std::optional<int> parse_named(std::string_view tok, std::string_view prefix) {
  if (tok.size() <= prefix.size() + 1 || tok.substr(0, prefix.size()) != prefix ||
      tok[prefix.size()] != '_')
    return std::nullopt;
  return parse_index(tok.substr(prefix.size() + 1));
}

std::optional<lg::Location> parse_location(std::string_view tok) {
  constexpr std::string_view prefix = "location_";
  if (tok.substr(0, prefix.size()) != prefix) return std::nullopt;
  auto rest = tok.substr(prefix.size());
  auto us = rest.find('_');
  if (us == std::string_view::npos) return std::nullopt;
  auto c = parse_index(rest.substr(0, us));
  auto i = parse_index(rest.substr(us + 1));
  if (!c || !i) return std::nullopt;
  return lg::Location{*c, *i};
}

struct Vehicle {
  bool is_truck;
  int index;
};

std::optional<Vehicle> parse_vehicle(std::string_view tok) {
  if (auto t = parse_named(tok, "truck")) return Vehicle{true, *t};
  if (auto a = parse_named(tok, "airplane")) return Vehicle{false, *a};
  return std::nullopt;
}

// nullopt slot result means unknown object; template mismatch is reported separately.
using LineResult = std::variant<Action, ParseReason>;

LineResult parse_bw_line(const std::vector<std::string>& toks) {
  std::vector<std::string> s;
  auto color = [](const std::string& name) { return bw::color_index(name); };
  if (match(toks, {"pick", "up", "the", "{}", "block"}, s)) {
    auto b = color(s[0]);
    if (!b) return ParseReason::kUnknownObject;
    return bw::Action::pick_up(*b);
  }
  if (match(toks, {"put", "down", "the", "{}", "block"}, s)) {
    auto b = color(s[0]);
    if (!b) return ParseReason::kUnknownObject;
    return bw::Action::put_down(*b);
  }
  if (match(toks, {"stack", "the", "{}", "block", "on", "top", "of", "the", "{}", "block"}, s)) {
    auto b = color(s[0]);
    auto t = color(s[1]);
    if (!b || !t) return ParseReason::kUnknownObject;
    return bw::Action::stack(*b, *t);
  }
  if (match(toks,
            {"unstack", "the", "{}", "block", "from", "on", "top", "of", "the", "{}", "block"},
            s)) {
    auto b = color(s[0]);
    auto f = color(s[1]);
    if (!b || !f) return ParseReason::kUnknownObject;
    return bw::Action::unstack(*b, *f);
  }
  return ParseReason::kUnknownTemplate;
}

LineResult parse_lg_line(const std::vector<std::string>& toks) {
  std::vector<std::string> s;
  bool load = match(toks, {"load", "{}", "into", "{}", "at", "{}"}, s);
  if (load || match(toks, {"unload", "{}", "from", "{}", "at", "{}"}, s)) {
    auto p = parse_named(s[0], "package");
    auto v = parse_vehicle(s[1]);
    auto at = parse_location(s[2]);
    if (!p || !v || !at) return ParseReason::kUnknownObject;
    if (load)
      return v->is_truck ? lg::Action::load_truck(*p, v->index, *at)
                         : lg::Action::load_airplane(*p, v->index, *at);
    return v->is_truck ? lg::Action::unload_truck(*p, v->index, *at)
                       : lg::Action::unload_airplane(*p, v->index, *at);
  }
  if (match(toks, {"drive", "{}", "from", "{}", "to", "{}", "in", "{}"}, s)) {
    auto t = parse_named(s[0], "truck");
    auto from = parse_location(s[1]);
    auto to = parse_location(s[2]);
    auto c = parse_named(s[3], "city");
    if (!t || !from || !to || !c) return ParseReason::kUnknownObject;
    return lg::Action::drive_truck(*t, *from, *to, *c);
  }
  if (match(toks, {"fly", "{}", "from", "{}", "to", "{}"}, s)) {
    auto a = parse_named(s[0], "airplane");
    auto from = parse_location(s[1]);
    auto to = parse_location(s[2]);
    if (!a || !from || !to) return ParseReason::kUnknownObject;
    return lg::Action::fly_airplane(*a, *from, *to);
  }
  return ParseReason::kUnknownTemplate;
}

bool is_plan_marker(std::string_view lowered) {
  return lowered == "[plan]" || lowered == "[plan end]";
}

std::variant<Plan, ParseError> parse_lines(const std::vector<std::string_view>& lines,
                                           std::size_t begin, std::size_t end, Domain domain) {
  Plan plan;
  for (std::size_t i = begin; i < end; ++i) {
    auto line = trim(lines[i]);
    if (line.empty()) continue;
    auto low = lower(line);
    if (is_plan_marker(low)) continue;
    if (low.front() == '[' || low.back() == ']')
      return ParseError{i + 1, ParseReason::kMalformedHeader, std::string(line)};
    auto toks = tokens(low);
    auto r = domain == Domain::kBlocksworld ? parse_bw_line(toks) : parse_lg_line(toks);
    if (auto* reason = std::get_if<ParseReason>(&r))
      return ParseError{i + 1, *reason, std::string(line)};
    plan.actions.push_back(std::get<Action>(r));
  }
  return plan;
}

// ---- PDDL ----

constexpr std::string_view kBlocksworldPddl = R"((define (domain blocksworld-4ops)
  (:requirements :strips)
  (:predicates (clear ?x)
               (ontable ?x)
               (handempty)
               (holding ?x)
               (on ?x ?y))

  (:action pick-up
    :parameters (?ob)
    :precondition (and (clear ?ob) (ontable ?ob) (handempty))
    :effect (and (holding ?ob) (not (clear ?ob)) (not (ontable ?ob))
                 (not (handempty))))

  (:action put-down
    :parameters (?ob)
    :precondition (holding ?ob)
    :effect (and (clear ?ob) (handempty) (ontable ?ob)
                 (not (holding ?ob))))

  (:action stack
    :parameters (?ob ?underob)
    :precondition (and (clear ?underob) (holding ?ob))
    :effect (and (handempty) (clear ?ob) (on ?ob ?underob)
                 (not (clear ?underob)) (not (holding ?ob))))

  (:action unstack
    :parameters (?ob ?underob)
    :precondition (and (on ?ob ?underob) (clear ?ob) (handempty))
    :effect (and (holding ?ob) (clear ?underob)
                 (not (on ?ob ?underob)) (not (clear ?ob)) (not (handempty)))))
)";

constexpr std::string_view kLogisticsPddl = R"((define (domain logistics)
  (:requirements :strips :typing)
  (:types truck airplane - vehicle
          package vehicle - physobj
          airport location - place
          city place physobj - object)

  (:predicates (in-city ?loc - place ?city - city)
               (at ?obj - physobj ?loc - place)
               (in ?pkg - package ?veh - vehicle))

  (:action load-truck
    :parameters (?pkg - package ?truck - truck ?loc - place)
    :precondition (and (at ?truck ?loc) (at ?pkg ?loc))
    :effect (and (not (at ?pkg ?loc)) (in ?pkg ?truck)))

  (:action load-airplane
    :parameters (?pkg - package ?airplane - airplane ?loc - place)
    :precondition (and (at ?pkg ?loc) (at ?airplane ?loc))
    :effect (and (not (at ?pkg ?loc)) (in ?pkg ?airplane)))

  (:action unload-truck
    :parameters (?pkg - package ?truck - truck ?loc - place)
    :precondition (and (at ?truck ?loc) (in ?pkg ?truck))
    :effect (and (not (in ?pkg ?truck)) (at ?pkg ?loc)))

  (:action unload-airplane
    :parameters (?pkg - package ?airplane - airplane ?loc - place)
    :precondition (and (in ?pkg ?airplane) (at ?airplane ?loc))
    :effect (and (not (in ?pkg ?airplane)) (at ?pkg ?loc)))

  (:action drive-truck
    :parameters (?truck - truck ?loc-from - place ?loc-to - place ?city - city)
    :precondition (and (at ?truck ?loc-from) (in-city ?loc-from ?city) (in-city ?loc-to ?city))
    :effect (and (not (at ?truck ?loc-from)) (at ?truck ?loc-to)))

  (:action fly-airplane
    :parameters (?airplane - airplane ?loc-from - airport ?loc-to - airport)
    :precondition (at ?airplane ?loc-from)
    :effect (and (not (at ?airplane ?loc-from)) (at ?airplane ?loc-to))))
)";

std::string problem_header(const TaskInstance& task, std::string_view domain) {
  return "(define (problem task-" + task.id().substr(0, 12) + ")\n  (:domain " +
         std::string(domain) + ")\n";
}

std::string bw_problem(const TaskInstance& task) {
  const auto& p = task.as_blocksworld();
  const int n = p.init.num_blocks();
  std::string out = problem_header(task, "blocksworld-4ops");
  out += "  (:objects";
  for (int b = 0; b < n; ++b) out += " " + std::string(bw::color_name(b));
  out += ")\n  (:init\n";
  auto name = [](int b) { return std::string(bw::color_name(b)); };
  if (auto held = p.init.holding())
    out += "    (holding " + name(*held) + ")\n";
  else
    out += "    (handempty)\n";
  for (int b = 0; b < n; ++b)
    if (p.init.clear(b)) out += "    (clear " + name(b) + ")\n";
  for (auto [a, b] : p.init.on_atoms()) out += "    (on " + name(a) + " " + name(b) + ")\n";
  for (int b = 0; b < n; ++b)
    if (p.init.on_table(b)) out += "    (ontable " + name(b) + ")\n";
  out += "  )\n  (:goal (and";
  for (auto [a, b] : p.goal.atoms()) out += " (on " + name(a) + " " + name(b) + ")";
  out += "))\n)\n";
  return out;
}

std::string lg_problem(const TaskInstance& task) {
  const auto& p = task.as_logistics();
  const auto& s = p.init;
  const auto& topo = s.topology();
  std::string out = problem_header(task, "logistics");
  out += "  (:objects\n";
  for (int c = 0; c < topo.n_cities; ++c) out += "    " + city(c) + " - city\n";
  for (int c = 0; c < topo.n_cities; ++c)
    for (int i = 0; i < topo.locations_per_city; ++i)
      out += "    " + loc({c, i}) + (i == 0 ? " - airport\n" : " - location\n");
  for (int t = 0; t < topo.n_trucks(); ++t) out += "    " + truck(t) + " - truck\n";
  for (int a = 0; a < topo.n_airplanes; ++a) out += "    " + airplane(a) + " - airplane\n";
  for (int k = 0; k < s.n_packages(); ++k) out += "    " + package(k) + " - package\n";
  out += "  )\n  (:init\n";
  for (int c = 0; c < topo.n_cities; ++c)
    for (int i = 0; i < topo.locations_per_city; ++i)
      out += "    (in-city " + loc({c, i}) + " " + city(c) + ")\n";
  for (std::size_t t = 0; t < s.trucks().size(); ++t)
    out += "    (at " + truck(static_cast<int>(t)) + " " + loc(s.trucks()[t]) + ")\n";
  for (std::size_t a = 0; a < s.airplanes().size(); ++a)
    out += "    (at " + airplane(static_cast<int>(a)) + " " + loc(s.airplanes()[a]) + ")\n";
  for (std::size_t k = 0; k < s.packages().size(); ++k) {
    const auto& pos = s.packages()[k];
    const auto name = package(static_cast<int>(k));
    switch (pos.kind) {
      case lg::PackagePosition::Kind::kAt:
        out += "    (at " + name + " " + loc(pos.at) + ")\n";
        break;
      case lg::PackagePosition::Kind::kInTruck:
        out += "    (in " + name + " " + truck(pos.vehicle) + ")\n";
        break;
      case lg::PackagePosition::Kind::kInAirplane:
        out += "    (in " + name + " " + airplane(pos.vehicle) + ")\n";
        break;
    }
  }
  out += "  )\n  (:goal (and";
  for (const auto& [k, where] : p.goal.destinations()) out += " (at " + package(k) + " " + loc(where) + ")";
  out += "))\n)\n";
  return out;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const auto& l : lines) out << l << '\n';
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

void PromptStyle::validate() const {
  if (mode == PromptMode::kOneShot && (!example_task || !example_plan))
    throw InvalidValue("one-shot prompt style requires an example task and plan");
}

std::string_view parse_reason_code(ParseReason reason) {
  switch (reason) {
    case ParseReason::kUnknownTemplate:
      return "unknown-template";
    case ParseReason::kUnknownObject:
      return "unknown-object";
    case ParseReason::kMalformedHeader:
      return "malformed-header";
  }
  return "unknown";
}

std::pair<TaskInstance, Plan> worked_example(Domain domain) {
  if (domain == Domain::kBlocksworld) {
    // red on the table, orange on red, yellow on orange, blue on yellow.
    auto init = bw::State::from_support({bw::kTable, 3, 0, 2});
    auto goal = bw::Goal::from_atoms({{0, 1}, {1, 2}, {3, 0}}, 4);
    Plan plan{{bw::Action::unstack(1, 3), bw::Action::put_down(1), bw::Action::unstack(3, 2),
               bw::Action::put_down(3), bw::Action::unstack(2, 0), bw::Action::put_down(2),
               bw::Action::pick_up(1), bw::Action::stack(1, 2), bw::Action::pick_up(0),
               bw::Action::stack(0, 1), bw::Action::pick_up(3), bw::Action::stack(3, 0)}};
    return {TaskInstance::blocksworld(init, goal), plan};
  }
  lg::Topology topo{2, 2, 1};
  auto init = lg::State::make(topo, {{0, 1}, {1, 0}}, {{0, 0}},
                              {lg::PackagePosition::at_location({1, 1})});
  auto goal = lg::Goal::make({{0, {0, 0}}}, topo, 1);
  Plan plan{{lg::Action::drive_truck(1, {1, 0}, {1, 1}, 1), lg::Action::load_truck(0, 1, {1, 1}),
             lg::Action::drive_truck(1, {1, 1}, {1, 0}, 1), lg::Action::unload_truck(0, 1, {1, 0}),
             lg::Action::fly_airplane(0, {0, 0}, {1, 0}), lg::Action::load_airplane(0, 0, {1, 0}),
             lg::Action::fly_airplane(0, {1, 0}, {0, 0}),
             lg::Action::unload_airplane(0, 0, {0, 0})}};
  return {TaskInstance::logistics(init, goal), plan};
}

std::string_view domain_instruction(Domain domain) {
  return domain == Domain::kBlocksworld ? kBlocksworldInstruction : kLogisticsInstruction;
}

std::string render_initial_conditions(const TaskInstance& task) {
  auto facts = task.is_blocksworld() ? blocksworld_init_facts(task.as_blocksworld().init)
                                     : logistics_init_facts(task.as_logistics().init);
  return "As initial conditions I have that, " + join_facts(facts) + ".";
}

std::string render_goal(const TaskInstance& task) {
  std::vector<std::string> facts;
  if (task.is_blocksworld()) {
    for (auto [above, below] : task.as_blocksworld().goal.atoms())
      facts.push_back(block(above) + " is on top of " + block(below));
  } else {
    for (const auto& [p, where] : task.as_logistics().goal.destinations())
      facts.push_back(package(p) + " is at " + loc(where));
  }
  return "My goal is to have that " + join_facts(facts) + ".";
}

std::string render_statement(const TaskInstance& task) {
  return render_initial_conditions(task) + "\n" + render_goal(task);
}

std::string render_task(const TaskInstance& task) {
  // Logistics prompts separate the sentences by an empty line.
  const char* gap = task.is_blocksworld() ? "\n" : "\n\n";
  return "[STATEMENT]\n" + render_initial_conditions(task) + gap + render_goal(task) +
         "\n\nMy plan is as follows:";
}

std::string render_action(const Action& action) {
  if (const auto* a = std::get_if<bw::Action>(&action)) return render_bw_action(*a);
  return render_lg_action(std::get<lg::Action>(action));
}

std::string render_plan(const Plan& plan) {
  std::string out = "[PLAN]\n";
  for (const auto& a : plan.actions) out += render_action(a) + "\n";
  return out + "[PLAN END]";
}

std::string render_example(const TaskInstance& task, const Plan& plan) {
  return render_task(task) + "\n" + render_plan(plan);
}

std::string render_query(const TaskInstance& task) {
  return render_task(task) + (task.is_blocksworld() ? "\n[PLAN END]" : "\n[PLAN]");
}

std::string render_prompt(const TaskInstance& task, const PromptStyle& style) {
  style.validate();
  std::string out(domain_instruction(task.domain()));
  out += "\n\n";
  if (style.mode == PromptMode::kOneShot) {
    out += render_example(*style.example_task, *style.example_plan);
    out += "\n\n";
  }
  return out + render_query(task);
}

std::variant<Plan, ParseError> parse_plan(std::string_view text, Domain domain) {
  auto lines = split_lines(text);
  return parse_lines(lines, 0, lines.size(), domain);
}

std::variant<Plan, ParseError> parse_response(std::string_view text, Domain domain) {
  auto lines = split_lines(text);
  std::size_t begin = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lower(trim(lines[i])) == "[plan]") {
      begin = i + 1;
      break;
    }
  }
  std::size_t end = lines.size();
  for (std::size_t i = begin; i < lines.size(); ++i) {
    if (lower(trim(lines[i])).rfind("[plan end]", 0) == 0) {
      end = i;
      break;
    }
  }
  return parse_lines(lines, begin, end, domain);
}

DatasetRecord make_record(const TaskInstance& task, const Plan& plan, const PromptStyle& style) {
  return {render_prompt(task, style), render_plan(plan)};
}

namespace {

std::string dataset_line(const TaskInstance& task, const Plan& plan, const PromptStyle& style) {
  auto verdict = validate_plan(task, plan);
  if (!verdict.valid())
    throw ValidationError("plan for task " + task.id() + " is not valid: " +
                          std::string(verdict_name(verdict.kind)));
  auto rec = make_record(task, plan, style);
  nlohmann::json user = {{"role", "user"}, {"content", rec.user}};
  nlohmann::json assistant = {{"role", "assistant"}, {"content", rec.assistant}};
  nlohmann::json j;
  j["messages"] = nlohmann::json::array({user, assistant});
  return j.dump();
}

}  // namespace

std::size_t emit_finetune_dataset(const std::vector<std::pair<TaskInstance, Plan>>& pairs,
                                  const PromptStyle& style, const std::string& path) {
  style.validate();
  std::vector<std::string> lines;
  lines.reserve(pairs.size());
  for (const auto& [task, plan] : pairs) lines.push_back(dataset_line(task, plan, style));
  write_lines(path, lines);
  return lines.size();
}

std::size_t emit_finetune_dataset(const std::vector<std::pair<TaskInstance, Plan>>& pairs,
                                  PromptMode mode, const std::string& path) {
  std::optional<PromptStyle> styles[2];
  std::vector<std::string> lines;
  lines.reserve(pairs.size());
  for (const auto& [task, plan] : pairs) {
    auto& style = styles[static_cast<int>(task.domain())];
    if (!style) {
      if (mode == PromptMode::kOneShot) {
        auto [t, p] = worked_example(task.domain());
        style = PromptStyle::one_shot(std::move(t), std::move(p));
      } else {
        style = PromptStyle::zero_shot();
      }
    }
    lines.push_back(dataset_line(task, plan, *style));
  }
  write_lines(path, lines);
  return lines.size();
}

std::vector<DatasetRecord> read_finetune_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<DatasetRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      const auto& msgs = j.at("messages");
      if (!msgs.is_array() || msgs.size() != 2) throw FormatError(path, n, "expected two messages");
      if (msgs[0].at("role") != "user" || msgs[1].at("role") != "assistant")
        throw FormatError(path, n, "expected user then assistant message");
      out.push_back({msgs[0].at("content").get<std::string>(),
                     msgs[1].at("content").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path, n, e.what());
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> ingest_responses(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(path, n, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw FormatError(path, n, "record is not an object");
    auto id = j.find("id");
    auto text = j.find("text");
    if (id == j.end() || !id->is_string()) throw FormatError(path, n, "missing string field 'id'");
    if (text == j.end() || !text->is_string())
      throw FormatError(path, n, "missing string field 'text'");
    auto sid = id->get<std::string>();
    if (!seen.insert(sid).second)
      throw DuplicateId(path + ":" + std::to_string(n) + ": duplicate response id " + sid);
    out.emplace_back(std::move(sid), text->get<std::string>());
  }
  return out;
}

void write_responses(const std::vector<std::pair<std::string, std::string>>& responses,
                     const std::string& path) {
  std::vector<std::string> lines;
  lines.reserve(responses.size());
  for (const auto& [id, text] : responses)
    lines.push_back(nlohmann::json{{"id", id}, {"text", text}}.dump());
  write_lines(path, lines);
}

PddlFiles emit_pddl(const TaskInstance& task) {
  if (task.is_blocksworld()) return {std::string(kBlocksworldPddl), bw_problem(task)};
  return {std::string(kLogisticsPddl), lg_problem(task)};
}

}  // namespace plancurate
