#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace bendjoint {

/// Arc parameters outside the domain of the constant-curvature map.
class InvalidArc : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configuration value failed validation. field() names the offending entry
/// using a dotted path such as "stack.ring_count".
class InvalidConfig : public std::invalid_argument {
 public:
  InvalidConfig(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class InvalidTimestep : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Target lies outside the reachable workspace of a single section.
class Unreachable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Target too close to the base origin for the bend plane to be defined.
class Degenerate : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class LimitExceeded : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Waypoint script could not be parsed or validated.
class BadScript : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bendjoint
