#include "bendjoint/joint_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bendjoint/errors.hpp"

namespace bendjoint {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kStraight = 1e-9;

double deg_to_rad(double deg) { return deg * kPi / 180.0; }

struct TimedCommand {
  double t = 0.0;  // s
  BendCommand cmd;
};

}  // namespace

void SimConfig::validate() const {
  layout.validate();
  stack.validate(layout.pitch_radius);
  motor.validate();
  catheter.validate(stack.ring_outer_diameter);
  if (!(dt > 0.0 && dt <= 0.1)) {
    throw InvalidConfig("dt", "must lie in (0, 0.1] s");
  }
  if (!(theta_max > 0.0 && theta_max <= kPi)) {
    throw InvalidConfig("theta_max", "must lie in (0, pi]");
  }
}

BendCommand interpolate_bend(const BendCommand& from, const BendCommand& to, double s) {
  BendCommand out;
  out.theta = from.theta + s * (to.theta - from.theta);
  if (from.theta < kStraight) {
    out.phi = to.phi;
  } else if (to.theta < kStraight) {
    out.phi = from.phi;
  } else {
    const double delta = std::remainder(to.phi - from.phi, 2.0 * kPi);
    out.phi = wrap_two_pi(from.phi + s * delta);
  }
  return out;
}

JointSim::JointSim(SimConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  home();
}

double JointSim::bend_limit() const {
  return std::min(cfg_.theta_max, cfg_.layout.stroke_limit / cfg_.layout.pitch_radius);
}

SetTargetAck JointSim::set_target(const BendCommand& cmd, double ramp_ms) {
  if (!std::isfinite(cmd.theta) || !std::isfinite(cmd.phi)) {
    throw std::invalid_argument("bend command must be finite");
  }
  if (cmd.theta < 0.0) {
    throw std::invalid_argument("theta must be >= 0");
  }
  if (!std::isfinite(ramp_ms) || ramp_ms < 0.0) {
    throw std::invalid_argument("ramp_ms must be >= 0");
  }
  SetTargetAck ack;
  const double limit = bend_limit();
  ack.clamped = cmd.theta > limit;
  ack.accepted = {std::min(cmd.theta, limit), wrap_two_pi(cmd.phi)};
  ramp_ = {cmd_, ack.accepted, t_, ramp_ms / 1000.0};
  return ack;
}

BendCommand JointSim::ramp_value(double t) const {
  if (ramp_.duration <= 0.0 || t >= ramp_.t0 + ramp_.duration) {
    return ramp_.to;
  }
  return interpolate_bend(ramp_.from, ramp_.to, (t - ramp_.t0) / ramp_.duration);
}

JointSnapshot JointSim::step() { return step(cfg_.dt); }

JointSnapshot JointSim::step(double dt) {
  if (!(dt > 0.0 && dt <= 0.1)) {
    throw InvalidTimestep("dt must lie in (0, 0.1] s, got " + std::to_string(dt));
  }
  t_ += dt;
  if (!holding_) {
    cmd_ = ramp_value(t_);
    dl_cmd_ = allocate(cmd_, cfg_.layout);
    for (std::size_t i = 0; i < kTendonCount; ++i) {
      motors_[i].target_angle = displacement_to_angle(dl_cmd_[i], cfg_.motor);
    }
  }
  for (auto& motor : motors_) {
    motor = motor_step(motor, cfg_.motor, dt);
  }
  read_back();
  return snapshot();
}

void JointSim::read_back() {
  for (std::size_t i = 0; i < kTendonCount; ++i) {
    dl_act_[i] = angle_to_displacement(encoder_to_angle(motors_[i].encoder_count, cfg_.motor),
                                       cfg_.motor);
  }
  const Deallocation decoded = deallocate(dl_act_, cfg_.layout);
  achieved_ = decoded.cmd;
  residual_ = decoded.residual;
}

JointSnapshot JointSim::snapshot(bool with_rings) const {
  JointSnapshot snap;
  snap.t = t_;
  snap.cmd = cmd_;
  snap.achieved = achieved_;
  snap.residual = residual_;
  snap.dl_cmd = dl_cmd_;
  snap.dl_act = dl_act_;
  snap.motors = motors_;
  const ArcParams arc{achieved_.theta, achieved_.phi, cfg_.stack.segment_arc_length};
  snap.tip = fk_tip(arc);
  if (with_rings) {
    snap.rings = fk_ring_poses(arc, cfg_.stack);
  }
  return snap;
}

void JointSim::home() {
  home_all(motors_);
  holding_ = false;
  cmd_ = {};
  ramp_ = {cmd_, cmd_, t_, 0.0};
  dl_cmd_ = {};
  read_back();
}

void JointSim::hold() {
  holding_ = true;
  for (std::size_t i = 0; i < kTendonCount; ++i) {
    motors_[i].target_angle = motors_[i].actual_angle;
    motors_[i].integrator = 0.0;
    dl_cmd_[i] = angle_to_displacement(motors_[i].actual_angle, cfg_.motor);
  }
  cmd_ = deallocate(dl_cmd_, cfg_.layout).cmd;
  cmd_.theta = std::min(cmd_.theta, bend_limit());
  ramp_ = {cmd_, cmd_, t_, 0.0};
}

void JointSim::release_hold() { holding_ = false; }

void validate_script(std::span<const Waypoint> waypoints) {
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    const Waypoint& wp = waypoints[i];
    const std::string where = "waypoint " + std::to_string(i) + ": ";
    if (wp.t_ms < 0) {
      throw BadScript(where + "field 't_ms' must be >= 0");
    }
    if (i > 0 && wp.t_ms < waypoints[i - 1].t_ms) {
      throw BadScript(where + "field 't_ms' decreases (" + std::to_string(wp.t_ms) + " after " +
                      std::to_string(waypoints[i - 1].t_ms) + ")");
    }
    if (!std::isfinite(wp.theta_deg) || wp.theta_deg < 0.0 || wp.theta_deg > 90.0) {
      throw BadScript(where + "field 'theta_deg' must lie in [0, 90]");
    }
    if (!std::isfinite(wp.phi_deg)) {
      throw BadScript(where + "field 'phi_deg' must be finite");
    }
  }
}

std::vector<JointSnapshot> run_script(JointSim& sim, std::span<const Waypoint> waypoints) {
  validate_script(waypoints);
  if (waypoints.empty()) {
    return {};
  }

  std::vector<TimedCommand> points;
  if (waypoints.front().t_ms > 0) {
    points.push_back({0.0, sim.command()});
  }
  for (const Waypoint& wp : waypoints) {
    points.push_back({static_cast<double>(wp.t_ms) / 1000.0,
                      {deg_to_rad(wp.theta_deg), wrap_two_pi(deg_to_rad(wp.phi_deg))}});
  }

  const double dt = sim.config().dt;
  const auto steps = static_cast<std::size_t>(std::llround(points.back().t / dt));
  std::vector<JointSnapshot> trace;
  trace.reserve(steps);
  std::size_t segment = 0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    while (segment + 1 < points.size() && points[segment + 1].t <= t) {
      ++segment;
    }
    BendCommand cmd = points[segment].cmd;
    if (segment + 1 < points.size()) {
      const TimedCommand& a = points[segment];
      const TimedCommand& b = points[segment + 1];
      cmd = interpolate_bend(a.cmd, b.cmd, (t - a.t) / (b.t - a.t));
    }
    sim.set_target(cmd, 0.0);
    trace.push_back(sim.step());
  }
  return trace;
}

}  // namespace bendjoint
