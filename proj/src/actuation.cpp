#include "bendjoint/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bendjoint/errors.hpp"

namespace bendjoint {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxTimestep = 0.1;

void require_positive(double value, const char* field) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw InvalidConfig(field, "must be > 0");
  }
}

}  // namespace

void MotorConfig::validate() const {
  require_positive(spool_radius, "motor.spool_radius");
  require_positive(gear_ratio, "motor.gear_ratio");
  if (encoder_counts_per_motor_rev <= 0) {
    throw InvalidConfig("motor.encoder_counts_per_motor_rev", "must be > 0");
  }
  require_positive(max_output_speed, "motor.max_output_speed");
  require_positive(pid.kp, "motor.pid.kp");
  if (!std::isfinite(pid.ki) || pid.ki < 0.0) {
    throw InvalidConfig("motor.pid.ki", "must be >= 0");
  }
  if (!std::isfinite(pid.kd) || pid.kd < 0.0) {
    throw InvalidConfig("motor.pid.kd", "must be >= 0");
  }
}

std::int64_t encoder_quantize(double angle, const MotorConfig& cfg) {
  return std::llround(angle / kTwoPi * cfg.counts_per_output_rev());
}

double encoder_to_angle(std::int64_t counts, const MotorConfig& cfg) {
  return static_cast<double>(counts) / cfg.counts_per_output_rev() * kTwoPi;
}

MotorState motor_step(const MotorState& state, const MotorConfig& cfg, double dt) {
  if (!(dt > 0.0 && dt <= kMaxTimestep)) {
    throw InvalidTimestep("dt must lie in (0, 0.1] s, got " + std::to_string(dt));
  }
  MotorState next = state;
  const double error = state.target_angle - state.actual_angle;
  const double integrator = state.integrator + error * dt;
  const double command =
      (cfg.pid.kp * error + cfg.pid.ki * integrator) / (1.0 + cfg.pid.kd);
  const double limit = cfg.max_output_speed;
  next.velocity = std::clamp(command, -limit, limit);
  if (next.velocity == command) {
    next.integrator = integrator;
  }
  next.actual_angle = state.actual_angle + next.velocity * dt;
  next.encoder_count = encoder_quantize(next.actual_angle, cfg);
  return next;
}

void home_all(MotorBank& motors) {
  motors.fill(MotorState{});
}

}  // namespace bendjoint
