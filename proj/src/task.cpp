#include "plancurate/task.hpp"

#include <sstream>

#include "plancurate/digest.hpp"
#include "plancurate/errors.hpp"

namespace plancurate {

std::string_view reason_code(PreconditionReason reason) {
  switch (reason) {
    case PreconditionReason::kUnknownObject: return "unknown-object";
    case PreconditionReason::kSameObject: return "same-object";
    case PreconditionReason::kHandNotEmpty: return "hand-not-empty";
    case PreconditionReason::kNotHolding: return "not-holding";
    case PreconditionReason::kBlockNotClear: return "block-not-clear";
    case PreconditionReason::kNotOnTable: return "not-on-table";
    case PreconditionReason::kNotOnClaimedSupport: return "not-on-claimed-support";
    case PreconditionReason::kTargetNotClear: return "target-not-clear";
    case PreconditionReason::kPackageNotAtLocation: return "package-not-at-location";
    case PreconditionReason::kVehicleNotAtLocation: return "vehicle-not-at-location";
    case PreconditionReason::kPackageNotInVehicle: return "package-not-in-vehicle";
    case PreconditionReason::kTruckWrongCity: return "truck-wrong-city";
    case PreconditionReason::kNotAnAirport: return "not-an-airport";
    case PreconditionReason::kSameLocation: return "same-location";
  }
  return "unknown";
}

std::string_view domain_name(Domain domain) {
  return domain == Domain::kBlocksworld ? "blocksworld" : "logistics";
}

Domain parse_domain(std::string_view name) {
  if (name == "blocksworld") return Domain::kBlocksworld;
  if (name == "logistics") return Domain::kLogistics;
  throw InvalidValue("unknown domain: " + std::string(name));
}

TaskInstance::TaskInstance(std::variant<BlocksworldProblem, LogisticsProblem> problem)
    : problem_(std::move(problem)) {
  id_ = canonical_digest(*this);
}

TaskInstance TaskInstance::blocksworld(blocksworld::State init, blocksworld::Goal goal,
                                       GoalCheck check) {
  for (const auto& [a, b] : goal.atoms()) {
    if (a >= init.num_blocks() || b >= init.num_blocks()) {
      throw InvalidValue("goal names a block outside the initial state");
    }
  }
  if (check == GoalCheck::kRejectSatisfied) {
    if (goal.empty()) throw InvalidValue("blocksworld goal has no on-atoms");
    if (blocksworld::satisfies_goal(init, goal)) {
      throw InvalidValue("goal already satisfied by the initial state");
    }
  }
  return TaskInstance(BlocksworldProblem{std::move(init), std::move(goal)});
}

TaskInstance TaskInstance::logistics(logistics::State init, logistics::Goal goal,
                                     GoalCheck check) {
  for (const auto& [p, loc] : goal.destinations()) {
    if (p >= init.n_packages() || !init.topology().contains(loc)) {
      throw InvalidValue("goal names an object outside the initial state");
    }
  }
  if (check == GoalCheck::kRejectSatisfied && logistics::satisfies_goal(init, goal)) {
    throw InvalidValue("goal already satisfied by the initial state");
  }
  return TaskInstance(LogisticsProblem{std::move(init), std::move(goal)});
}

int TaskInstance::size_key() const {
  if (is_blocksworld()) return as_blocksworld().init.num_blocks();
  return as_logistics().init.n_packages();
}

namespace {

void write_location(std::ostream& out, const logistics::Location& loc) {
  out << loc.city << '.' << loc.index;
}

}  // namespace

std::string TaskInstance::canonical_form() const {
  std::ostringstream out;
  if (is_blocksworld()) {
    const auto& p = as_blocksworld();
    out << "blocksworld;n=" << p.init.num_blocks() << ";support=";
    for (int b = 0; b < p.init.num_blocks(); ++b) {
      if (b) out << ',';
      const int s = p.init.support_of(b);
      if (s == blocksworld::kTable) {
        out << 'T';
      } else if (s == blocksworld::kHand) {
        out << 'H';
      } else {
        out << s;
      }
    }
    out << ";goal=";
    bool first = true;
    for (const auto& [a, b] : p.goal.atoms()) {
      out << (first ? "" : ",") << a << '>' << b;
      first = false;
    }
    return out.str();
  }
  const auto& p = as_logistics();
  const auto& topo = p.init.topology();
  out << "logistics;cities=" << topo.n_cities << ";locations=" << topo.locations_per_city
      << ";airplanes=" << topo.n_airplanes << ";packages=" << p.init.n_packages() << ";trucks=";
  for (std::size_t t = 0; t < p.init.trucks().size(); ++t) {
    if (t) out << ',';
    write_location(out, p.init.trucks()[t]);
  }
  out << ";planes=";
  for (std::size_t a = 0; a < p.init.airplanes().size(); ++a) {
    if (a) out << ',';
    write_location(out, p.init.airplanes()[a]);
  }
  out << ";pkgs=";
  for (std::size_t i = 0; i < p.init.packages().size(); ++i) {
    if (i) out << ',';
    const auto& pos = p.init.packages()[i];
    switch (pos.kind) {
      case logistics::PackagePosition::Kind::kAt:
        out << 'L';
        write_location(out, pos.at);
        break;
      case logistics::PackagePosition::Kind::kInTruck:
        out << 'T' << pos.vehicle;
        break;
      case logistics::PackagePosition::Kind::kInAirplane:
        out << 'A' << pos.vehicle;
        break;
    }
  }
  out << ";goal=";
  bool first = true;
  for (const auto& [pkg, loc] : p.goal.destinations()) {
    out << (first ? "" : ",") << pkg << '>';
    write_location(out, loc);
    first = false;
  }
  return out.str();
}

std::string canonical_digest(const TaskInstance& task) {
  // 128 bits of SHA-256 keeps ids short while staying collision-resistant.
  return sha256_hex(task.canonical_form()).substr(0, 32);
}

std::string to_string(const Action& action) {
  return std::visit([](const auto& a) { return to_string(a); }, action);
}

}  // namespace plancurate
