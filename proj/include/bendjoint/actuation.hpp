#pragma once

#include <array>
#include <cstdint>
#include <numbers>

#include "bendjoint/tendon.hpp"

namespace bendjoint {

struct PidGains {
  double kp = 40.0;  // 1/s
  double ki = 0.0;   // 1/s^2
  double kd = 1.0;   // dimensionless

  bool operator==(const PidGains&) const = default;
};

/// Gear motor driving a tendon spool. Angles are measured at the spool
/// (gearbox output).
struct MotorConfig {
  double spool_radius = 5.0;  // mm
  double gear_ratio = 100.0;
  int encoder_counts_per_motor_rev = 12;
  double max_output_speed = 2.0 * std::numbers::pi;  // rad/s
  PidGains pid;

  double counts_per_output_rev() const { return gear_ratio * encoder_counts_per_motor_rev; }
  /// Throws InvalidConfig naming the offending "motor.*" field.
  void validate() const;
};

struct MotorState {
  double target_angle = 0.0;  // rad
  double actual_angle = 0.0;  // rad
  double velocity = 0.0;      // rad/s
  std::int64_t encoder_count = 0;
  double integrator = 0.0;    // integral of angle error, rad*s

  bool operator==(const MotorState&) const = default;
};

using MotorBank = std::array<MotorState, kTendonCount>;

inline double displacement_to_angle(double dl, const MotorConfig& cfg) {
  return dl / cfg.spool_radius;
}

inline double angle_to_displacement(double angle, const MotorConfig& cfg) {
  return angle * cfg.spool_radius;
}

std::int64_t encoder_quantize(double angle, const MotorConfig& cfg);
double encoder_to_angle(std::int64_t counts, const MotorConfig& cfg);

/// Advances one motor by dt seconds.
///
/// The plant is a velocity-limited servo: the PID output is the commanded
/// spool velocity, integrated with explicit Euler. The derivative acts on the
/// measured angle and is resolved implicitly, since the plant velocity is the
/// controller output:
///
///   v = (kp * e + ki * integral(e)) / (1 + kd),   clamped to +/- max speed
///
/// which is the continuous-time law v = kp e + ki I - kd v. The integrator is
/// frozen while the output saturates.
///
/// Throws InvalidTimestep unless dt is in (0, 0.1].
MotorState motor_step(const MotorState& state, const MotorConfig& cfg, double dt);

/// Zeroes angles, velocities, counts and integrators.
void home_all(MotorBank& motors);

}  // namespace bendjoint
