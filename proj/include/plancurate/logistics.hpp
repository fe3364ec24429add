#pragma once

#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plancurate/precondition.hpp"

namespace plancurate::logistics {

// location_<city>_<index>; index 0 is the city's airport.
struct Location {
  int city = 0;
  int index = 0;

  bool is_airport() const { return index == 0; }
  auto operator<=>(const Location&) const = default;
};

// Cities, locations per city and airplane count. Truck c lives in city c.
struct Topology {
  int n_cities = 2;
  int locations_per_city = 2;
  int n_airplanes = 1;

  int n_trucks() const { return n_cities; }
  int n_locations() const { return n_cities * locations_per_city; }
  bool contains(const Location& loc) const {
    return loc.city >= 0 && loc.city < n_cities && loc.index >= 0 &&
           loc.index < locations_per_city;
  }
  // Row-major flat index of a location, city-major.
  int flat(const Location& loc) const { return loc.city * locations_per_city + loc.index; }
  Location location(int flat_index) const {
    return {flat_index / locations_per_city, flat_index % locations_per_city};
  }
  // Throws InvalidValue when any count is not positive.
  void validate() const;

  auto operator<=>(const Topology&) const = default;
};

// Where a package is: at a location, or inside a truck / airplane.
struct PackagePosition {
  enum class Kind { kAt, kInTruck, kInAirplane };
  Kind kind = Kind::kAt;
  Location at{};
  int vehicle = -1;

  static PackagePosition at_location(Location loc) { return {Kind::kAt, loc, -1}; }
  static PackagePosition in_truck(int truck) { return {Kind::kInTruck, {}, truck}; }
  static PackagePosition in_airplane(int plane) { return {Kind::kInAirplane, {}, plane}; }

  auto operator<=>(const PackagePosition&) const = default;
};

struct Action;

class State {
 public:
  // Validates: trucks inside their own city, airplanes at airports, package
  // positions refer to existing objects.
  static State make(Topology topology, std::vector<Location> trucks,
                    std::vector<Location> airplanes, std::vector<PackagePosition> packages);

  const Topology& topology() const { return topology_; }
  int n_packages() const { return static_cast<int>(packages_.size()); }
  const std::vector<Location>& trucks() const { return trucks_; }
  const std::vector<Location>& airplanes() const { return airplanes_; }
  const std::vector<PackagePosition>& packages() const { return packages_; }

  auto operator<=>(const State&) const = default;

 private:
  State(Topology topology, std::vector<Location> trucks, std::vector<Location> airplanes,
        std::vector<PackagePosition> packages)
      : topology_(topology),
        trucks_(std::move(trucks)),
        airplanes_(std::move(airplanes)),
        packages_(std::move(packages)) {}

  friend State apply_unchecked(const State&, const Action&);

  Topology topology_;
  std::vector<Location> trucks_;
  std::vector<Location> airplanes_;
  std::vector<PackagePosition> packages_;
};

// Package destinations, sorted by package. Trucks and airplanes are free.
class Goal {
 public:
  // Validates: non-empty, distinct packages, destinations inside the topology.
  static Goal make(std::vector<std::pair<int, Location>> destinations, const Topology& topology,
                   int n_packages);

  const std::vector<std::pair<int, Location>>& destinations() const { return destinations_; }

  auto operator<=>(const Goal&) const = default;

 private:
  explicit Goal(std::vector<std::pair<int, Location>> d) : destinations_(std::move(d)) {}
  std::vector<std::pair<int, Location>> destinations_;
};

// Declaration order is the successor-ordering key.
enum class ActionKind {
  kLoadTruck,
  kLoadAirplane,
  kUnloadTruck,
  kUnloadAirplane,
  kDriveTruck,
  kFlyAirplane,
};

struct Action {
  ActionKind kind;
  // Package moved by load/unload; -1 for drive/fly.
  int package = -1;
  // Truck or airplane index.
  int vehicle = 0;
  // Load/unload site, or drive/fly origin.
  Location from{};
  // Drive/fly destination.
  Location to{};
  // City named by drive-truck; -1 otherwise.
  int city = -1;

  static Action load_truck(int p, int t, Location at) {
    return {ActionKind::kLoadTruck, p, t, at, {}, -1};
  }
  static Action load_airplane(int p, int a, Location at) {
    return {ActionKind::kLoadAirplane, p, a, at, {}, -1};
  }
  static Action unload_truck(int p, int t, Location at) {
    return {ActionKind::kUnloadTruck, p, t, at, {}, -1};
  }
  static Action unload_airplane(int p, int a, Location at) {
    return {ActionKind::kUnloadAirplane, p, a, at, {}, -1};
  }
  static Action drive_truck(int t, Location from, Location to, int city) {
    return {ActionKind::kDriveTruck, -1, t, from, to, city};
  }
  static Action fly_airplane(int a, Location from, Location to) {
    return {ActionKind::kFlyAirplane, -1, a, from, to, -1};
  }

  auto operator<=>(const Action&) const = default;
};

std::optional<PreconditionReason> check_preconditions(const State& state, const Action& action);
State apply_unchecked(const State& state, const Action& action);
State apply_action(const State& state, const Action& action);
std::optional<State> try_apply(const State& state, const Action& action);

// Ordered by kind, then package, vehicle, origin, destination.
std::vector<Action> applicable_actions(const State& state);

bool satisfies_goal(const State& state, const Goal& goal);

std::string location_name(const Location& loc);
std::string to_string(const Action& action);

}  // namespace plancurate::logistics
