#pragma once

#include <optional>

#include "bendjoint/joint_sim.hpp"
#include "bendjoint/protocol.hpp"

namespace bendjoint::teleop {

inline constexpr double kDefaultRateHz = 50.0;

/// Owns the simulation behind the teleoperation service: applies client
/// commands in arrival order, enforces the e-stop latch and decides which
/// simulation steps emit a state frame. Knows nothing about sockets or wall
/// time, so the same core runs under the real-time server and in tests.
///
/// Not thread-safe; the server drives it from a single loop.
class TeleopCore {
 public:
  explicit TeleopCore(SimConfig cfg, double rate_hz = kDefaultRateHz);

  /// Applies one client message and returns its single reply (Ack or Error).
  /// Server-to-client message types are answered with a wrong-direction
  /// error.
  ///
  /// While e-stopped, set_target is refused with estop-latched until home or
  /// resume.
  Message handle(const Message& msg);

  /// Advances the simulation by one dt. Returns a frame when one is due at
  /// the configured stream rate.
  std::optional<StateFrame> step();

  StateFrame current_frame() const;

  double rate_hz() const { return rate_hz_; }
  int steps_per_frame() const { return steps_per_frame_; }
  bool estopped() const { return estopped_; }
  const JointSim& sim() const { return sim_; }

 private:
  void set_rate(double rate_hz);

  JointSim sim_;
  double rate_hz_ = kDefaultRateHz;
  int steps_per_frame_ = 1;
  int steps_since_frame_ = 0;
  bool estopped_ = false;
};

}  // namespace bendjoint::teleop
