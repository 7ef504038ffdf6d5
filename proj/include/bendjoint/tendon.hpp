#pragma once

#include <array>
#include <numbers>
#include <vector>

#include "bendjoint/kinematics.hpp"

namespace bendjoint {

inline constexpr int kTendonCount = 4;
inline constexpr double kDefaultPitchRadius = 2.5;  // mm

/// Four tendons routed at a common pitch radius. Tendons i and i+2 form an
/// antagonistic pair on opposite sides of the axis.
struct TendonLayout {
  double pitch_radius = kDefaultPitchRadius;
  std::array<double, kTendonCount> angles{0.0, std::numbers::pi / 2.0, std::numbers::pi,
                                          3.0 * std::numbers::pi / 2.0};
  /// Largest |displacement| a tendon may take, mm.
  double stroke_limit = kDefaultPitchRadius * kDefaultThetaMax;

  /// Default angles with the stroke limit tied to a bend limit.
  static TendonLayout with_bend_limit(double pitch_radius, double theta_max);

  /// Throws InvalidConfig naming the offending "layout.*" field.
  void validate() const;
};

/// Commanded bend, radians. phi is the bend plane about the base axis.
struct BendCommand {
  double theta = 0.0;
  double phi = 0.0;

  bool operator==(const BendCommand&) const = default;
};

/// Signed tendon length changes in mm. Negative means the tendon is pulled
/// (shortened), positive means it is paid out.
struct TendonDisplacements {
  std::array<double, kTendonCount> dl{};

  double operator[](std::size_t i) const { return dl[i]; }
  double& operator[](std::size_t i) { return dl[i]; }
  bool operator==(const TendonDisplacements&) const = default;
};

/// Paired allocation: dl[i] = -r * theta * cos(beta_i - phi). Each opposing
/// pair pulls and releases equal lengths.
///
/// Throws LimitExceeded if a tendon would exceed the stroke limit and
/// std::invalid_argument for a negative or non-finite command.
TendonDisplacements allocate(const BendCommand& cmd, const TendonLayout& layout);

struct Deallocation {
  BendCommand cmd;
  /// Pair-coupling inconsistency: max(|dl0 + dl2|, |dl1 + dl3|) / 2, mm.
  double residual = 0.0;
};

/// Least-squares inverse of allocate(). Total: inconsistent inputs are
/// decoded anyway and reported through the residual. phi is 0 on the axis.
Deallocation deallocate(const TendonDisplacements& dl, const TendonLayout& layout);

struct LimitViolation {
  int tendon = 0;
  double displacement = 0.0;
  double overshoot = 0.0;  // |dl| - stroke_limit, mm
};

struct LimitReport {
  std::vector<LimitViolation> violations;

  bool ok() const { return violations.empty(); }
};

LimitReport check_limits(const TendonDisplacements& dl, const TendonLayout& layout);

}  // namespace bendjoint
