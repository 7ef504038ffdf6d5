#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bendjoint/actuation.hpp"
#include "bendjoint/kinematics.hpp"
#include "bendjoint/tendon.hpp"

namespace bendjoint {

struct SimConfig {
  RingStackConfig stack;
  TendonLayout layout;
  MotorConfig motor;
  CatheterSpec catheter;
  double dt = 1e-3;  // s
  double theta_max = kDefaultThetaMax;

  /// Throws InvalidConfig with the offending field named.
  void validate() const;
};

/// One point of a command script. Angles in degrees, time from script start.
struct Waypoint {
  std::int64_t t_ms = 0;
  double theta_deg = 0.0;
  double phi_deg = 0.0;

  bool operator==(const Waypoint&) const = default;
};

struct JointSnapshot {
  double t = 0.0;  // s
  BendCommand cmd;
  BendCommand achieved;
  double residual = 0.0;  // mm
  TendonDisplacements dl_cmd;
  TendonDisplacements dl_act;
  MotorBank motors;
  Pose tip;
  std::optional<std::vector<Pose>> rings;
};

struct SetTargetAck {
  BendCommand accepted;
  bool clamped = false;
};

/// Moves linearly from `from` to `to` as s goes 0 -> 1. The bend plane takes
/// the shorter way round; when either end is straight the plane is taken
/// from the bent end.
BendCommand interpolate_bend(const BendCommand& from, const BendCommand& to, double s);

/// Stepped digital twin of the joint: command ramp -> tendon allocation ->
/// motors -> encoder readback -> decoded bend -> poses.
///
/// Single owner; not thread-safe.
class JointSim {
 public:
  explicit JointSim(SimConfig cfg);

  const SimConfig& config() const { return cfg_; }
  double time() const { return t_; }
  /// Effective bend limit: theta_max, tightened by the stroke limit.
  double bend_limit() const;

  /// Ramps the command from its current value to `cmd` over ramp_ms. theta is
  /// clamped to the bend limit (reported in the ack) and phi wrapped.
  /// Throws std::invalid_argument for a negative ramp or non-finite command.
  SetTargetAck set_target(const BendCommand& cmd, double ramp_ms);

  /// Final value of the active ramp.
  const BendCommand& target() const { return ramp_.to; }
  const BendCommand& command() const { return cmd_; }

  JointSnapshot step();
  /// Throws InvalidTimestep unless dt is in (0, 0.1].
  JointSnapshot step(double dt);

  /// Current state without advancing time.
  JointSnapshot snapshot(bool with_rings = false) const;

  /// Re-zeroes the motors at the straight pose and clears any hold.
  void home();
  /// Freezes motor targets at the current spool angles; the command becomes
  /// the decoded held bend and stops ramping.
  void hold();
  /// Leaves hold; the command continues from the held bend.
  void release_hold();
  bool holding() const { return holding_; }

 private:
  struct Ramp {
    BendCommand from;
    BendCommand to;
    double t0 = 0.0;
    double duration = 0.0;
  };

  BendCommand ramp_value(double t) const;
  void read_back();

  SimConfig cfg_;
  double t_ = 0.0;
  Ramp ramp_;
  BendCommand cmd_;
  bool holding_ = false;
  TendonDisplacements dl_cmd_;
  TendonDisplacements dl_act_;
  MotorBank motors_{};
  BendCommand achieved_;
  double residual_ = 0.0;
};

/// Throws BadScript naming the waypoint index and field.
void validate_script(std::span<const Waypoint> waypoints);

/// Drives the sim along a piecewise-linear command through the waypoints,
/// one snapshot per step, until the last waypoint time. If the first waypoint
/// is after t = 0 the command ramps to it from the sim's current command.
std::vector<JointSnapshot> run_script(JointSim& sim, std::span<const Waypoint> waypoints);

}  // namespace bendjoint
