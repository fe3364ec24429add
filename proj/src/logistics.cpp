#include "plancurate/logistics.hpp"

#include <algorithm>

#include "plancurate/errors.hpp"

namespace plancurate::logistics {

void Topology::validate() const {
  if (n_cities < 1 || locations_per_city < 1 || n_airplanes < 1) {
    throw InvalidValue("logistics topology counts must be positive");
  }
}

State State::make(Topology topology, std::vector<Location> trucks,
                  std::vector<Location> airplanes, std::vector<PackagePosition> packages) {
  topology.validate();
  if (static_cast<int>(trucks.size()) != topology.n_trucks()) {
    throw InvalidValue("exactly one truck per city is required");
  }
  if (static_cast<int>(airplanes.size()) != topology.n_airplanes) {
    throw InvalidValue("airplane position count does not match the topology");
  }
  for (int t = 0; t < topology.n_trucks(); ++t) {
    if (!topology.contains(trucks[t]) || trucks[t].city != t) {
      throw InvalidValue("truck_" + std::to_string(t) + " must stay inside city_" +
                         std::to_string(t));
    }
  }
  for (const Location& loc : airplanes) {
    if (!topology.contains(loc) || !loc.is_airport()) {
      throw InvalidValue("airplanes may only be at airports");
    }
  }
  for (const PackagePosition& pos : packages) {
    switch (pos.kind) {
      case PackagePosition::Kind::kAt:
        if (!topology.contains(pos.at)) throw InvalidValue("package at an unknown location");
        break;
      case PackagePosition::Kind::kInTruck:
        if (pos.vehicle < 0 || pos.vehicle >= topology.n_trucks()) {
          throw InvalidValue("package in an unknown truck");
        }
        break;
      case PackagePosition::Kind::kInAirplane:
        if (pos.vehicle < 0 || pos.vehicle >= topology.n_airplanes) {
          throw InvalidValue("package in an unknown airplane");
        }
        break;
    }
  }
  return State(topology, std::move(trucks), std::move(airplanes), std::move(packages));
}

Goal Goal::make(std::vector<std::pair<int, Location>> destinations, const Topology& topology,
                int n_packages) {
  if (destinations.empty()) throw InvalidValue("logistics goal must name at least one package");
  std::sort(destinations.begin(), destinations.end());
  for (std::size_t i = 0; i < destinations.size(); ++i) {
    const auto& [p, loc] = destinations[i];
    if (p < 0 || p >= n_packages) throw InvalidValue("goal names an unknown package");
    if (!topology.contains(loc)) throw InvalidValue("goal destination is not a location");
    if (i > 0 && destinations[i - 1].first == p) {
      throw InvalidValue("package has two goal destinations");
    }
  }
  return Goal(std::move(destinations));
}

std::optional<PreconditionReason> check_preconditions(const State& state, const Action& action) {
  const Topology& topo = state.topology();
  const bool uses_truck = action.kind == ActionKind::kLoadTruck ||
                          action.kind == ActionKind::kUnloadTruck ||
                          action.kind == ActionKind::kDriveTruck;
  const int n_vehicles = uses_truck ? topo.n_trucks() : topo.n_airplanes;
  if (action.vehicle < 0 || action.vehicle >= n_vehicles) {
    return PreconditionReason::kUnknownObject;
  }
  if (!topo.contains(action.from)) return PreconditionReason::kUnknownObject;
  const Location& vehicle_at =
      uses_truck ? state.trucks()[action.vehicle] : state.airplanes()[action.vehicle];

  switch (action.kind) {
    case ActionKind::kLoadTruck:
    case ActionKind::kLoadAirplane: {
      if (action.package < 0 || action.package >= state.n_packages()) {
        return PreconditionReason::kUnknownObject;
      }
      const PackagePosition& pos = state.packages()[action.package];
      if (pos.kind != PackagePosition::Kind::kAt || pos.at != action.from) {
        return PreconditionReason::kPackageNotAtLocation;
      }
      if (vehicle_at != action.from) return PreconditionReason::kVehicleNotAtLocation;
      return std::nullopt;
    }
    case ActionKind::kUnloadTruck:
    case ActionKind::kUnloadAirplane: {
      if (action.package < 0 || action.package >= state.n_packages()) {
        return PreconditionReason::kUnknownObject;
      }
      const PackagePosition& pos = state.packages()[action.package];
      const auto inside = action.kind == ActionKind::kUnloadTruck
                              ? PackagePosition::Kind::kInTruck
                              : PackagePosition::Kind::kInAirplane;
      if (pos.kind != inside || pos.vehicle != action.vehicle) {
        return PreconditionReason::kPackageNotInVehicle;
      }
      if (vehicle_at != action.from) return PreconditionReason::kVehicleNotAtLocation;
      return std::nullopt;
    }
    case ActionKind::kDriveTruck:
      if (!topo.contains(action.to) || action.city < 0 || action.city >= topo.n_cities) {
        return PreconditionReason::kUnknownObject;
      }
      if (action.from == action.to) return PreconditionReason::kSameLocation;
      if (action.city != action.vehicle || action.from.city != action.city ||
          action.to.city != action.city) {
        return PreconditionReason::kTruckWrongCity;
      }
      if (vehicle_at != action.from) return PreconditionReason::kVehicleNotAtLocation;
      return std::nullopt;
    case ActionKind::kFlyAirplane:
      if (!topo.contains(action.to)) return PreconditionReason::kUnknownObject;
      if (!action.from.is_airport() || !action.to.is_airport()) {
        return PreconditionReason::kNotAnAirport;
      }
      if (action.from == action.to) return PreconditionReason::kSameLocation;
      if (vehicle_at != action.from) return PreconditionReason::kVehicleNotAtLocation;
      return std::nullopt;
  }
  return PreconditionReason::kUnknownObject;
}

State apply_unchecked(const State& state, const Action& action) {
  State next = state;
  switch (action.kind) {
    case ActionKind::kLoadTruck:
      next.packages_[action.package] = PackagePosition::in_truck(action.vehicle);
      break;
    case ActionKind::kLoadAirplane:
      next.packages_[action.package] = PackagePosition::in_airplane(action.vehicle);
      break;
    case ActionKind::kUnloadTruck:
    case ActionKind::kUnloadAirplane:
      next.packages_[action.package] = PackagePosition::at_location(action.from);
      break;
    case ActionKind::kDriveTruck:
      next.trucks_[action.vehicle] = action.to;
      break;
    case ActionKind::kFlyAirplane:
      next.airplanes_[action.vehicle] = action.to;
      break;
  }
  return next;
}

State apply_action(const State& state, const Action& action) {
  if (auto reason = check_preconditions(state, action)) {
    throw PreconditionViolation(to_string(action), *reason);
  }
  return apply_unchecked(state, action);
}

std::optional<State> try_apply(const State& state, const Action& action) {
  if (check_preconditions(state, action)) return std::nullopt;
  return apply_unchecked(state, action);
}

std::vector<Action> applicable_actions(const State& state) {
  const Topology& topo = state.topology();
  const auto& pkgs = state.packages();
  std::vector<Action> out;
  for (int p = 0; p < state.n_packages(); ++p) {
    if (pkgs[p].kind != PackagePosition::Kind::kAt) continue;
    for (int t = 0; t < topo.n_trucks(); ++t) {
      if (state.trucks()[t] == pkgs[p].at) out.push_back(Action::load_truck(p, t, pkgs[p].at));
    }
  }
  for (int p = 0; p < state.n_packages(); ++p) {
    if (pkgs[p].kind != PackagePosition::Kind::kAt) continue;
    for (int a = 0; a < topo.n_airplanes; ++a) {
      if (state.airplanes()[a] == pkgs[p].at) {
        out.push_back(Action::load_airplane(p, a, pkgs[p].at));
      }
    }
  }
  for (int p = 0; p < state.n_packages(); ++p) {
    if (pkgs[p].kind == PackagePosition::Kind::kInTruck) {
      out.push_back(Action::unload_truck(p, pkgs[p].vehicle, state.trucks()[pkgs[p].vehicle]));
    }
  }
  for (int p = 0; p < state.n_packages(); ++p) {
    if (pkgs[p].kind == PackagePosition::Kind::kInAirplane) {
      out.push_back(
          Action::unload_airplane(p, pkgs[p].vehicle, state.airplanes()[pkgs[p].vehicle]));
    }
  }
  for (int t = 0; t < topo.n_trucks(); ++t) {
    for (int l = 0; l < topo.locations_per_city; ++l) {
      const Location to{t, l};
      if (to != state.trucks()[t]) out.push_back(Action::drive_truck(t, state.trucks()[t], to, t));
    }
  }
  for (int a = 0; a < topo.n_airplanes; ++a) {
    for (int c = 0; c < topo.n_cities; ++c) {
      const Location to{c, 0};
      if (to != state.airplanes()[a]) {
        out.push_back(Action::fly_airplane(a, state.airplanes()[a], to));
      }
    }
  }
  return out;
}

bool satisfies_goal(const State& state, const Goal& goal) {
  return std::all_of(goal.destinations().begin(), goal.destinations().end(), [&](const auto& d) {
    if (d.first >= state.n_packages()) return false;
    const PackagePosition& pos = state.packages()[d.first];
    return pos.kind == PackagePosition::Kind::kAt && pos.at == d.second;
  });
}

std::string location_name(const Location& loc) {
  return "location_" + std::to_string(loc.city) + "_" + std::to_string(loc.index);
}

std::string to_string(const Action& a) {
  const std::string p = "package_" + std::to_string(a.package);
  const std::string truck = "truck_" + std::to_string(a.vehicle);
  const std::string plane = "airplane_" + std::to_string(a.vehicle);
  switch (a.kind) {
    case ActionKind::kLoadTruck:
      return "load-truck(" + p + "," + truck + "," + location_name(a.from) + ")";
    case ActionKind::kLoadAirplane:
      return "load-airplane(" + p + "," + plane + "," + location_name(a.from) + ")";
    case ActionKind::kUnloadTruck:
      return "unload-truck(" + p + "," + truck + "," + location_name(a.from) + ")";
    case ActionKind::kUnloadAirplane:
      return "unload-airplane(" + p + "," + plane + "," + location_name(a.from) + ")";
    case ActionKind::kDriveTruck:
      return "drive-truck(" + truck + "," + location_name(a.from) + "," + location_name(a.to) +
             ",city_" + std::to_string(a.city) + ")";
    case ActionKind::kFlyAirplane:
      return "fly-airplane(" + plane + "," + location_name(a.from) + "," + location_name(a.to) +
             ")";
  }
  return "?";
}

}  // namespace plancurate::logistics
