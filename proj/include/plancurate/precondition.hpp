#pragma once

#include <string>
#include <string_view>

#include "plancurate/errors.hpp"

namespace plancurate {

// Which action restriction failed.
enum class PreconditionReason {
  kUnknownObject,
  kSameObject,
  kHandNotEmpty,
  kNotHolding,
  kBlockNotClear,
  kNotOnTable,
  kNotOnClaimedSupport,
  kTargetNotClear,
  kPackageNotAtLocation,
  kVehicleNotAtLocation,
  kPackageNotInVehicle,
  kTruckWrongCity,
  kNotAnAirport,
  kSameLocation,
};

std::string_view reason_code(PreconditionReason reason);

class PreconditionViolation : public Error {
 public:
  PreconditionViolation(std::string action, PreconditionReason reason)
      : Error(ErrorCategory::kData,
              "precondition violated by " + action + ": " + std::string(reason_code(reason))),
        action_(std::move(action)),
        reason_(reason) {}

  const std::string& action() const noexcept { return action_; }
  PreconditionReason reason() const noexcept { return reason_; }

 private:
  std::string action_;
  PreconditionReason reason_;
};

}  // namespace plancurate
