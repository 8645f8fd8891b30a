#pragma once

#include <stdexcept>
#include <string>

namespace lossent {

/// Raised when caller-supplied data violates a documented precondition
/// (bad dimensions, unnormalized amplitudes, oversized loss sets, ...).
/// `field` names the offending input when one can be identified.
class InvalidInput : public std::invalid_argument {
public:
  explicit InvalidInput(const std::string& what, std::string field = {})
      : std::invalid_argument(what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Raised when an input is well formed but outside the supported scale
/// (ambient dimension above the configured cap).
class CapacityExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace lossent
