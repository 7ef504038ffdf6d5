#include "bendjoint/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Geometry>

#include "bendjoint/errors.hpp"

namespace bendjoint {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegenerateRadius = 1e-9;  // mm
constexpr double kJacobianSeriesTheta = 1e-3;

void check_arc(const ArcParams& arc) {
  if (!std::isfinite(arc.theta) || arc.theta < 0.0 || arc.theta > kPi) {
    throw InvalidArc("theta must lie in [0, pi], got " + std::to_string(arc.theta));
  }
  if (!std::isfinite(arc.phi)) {
    throw InvalidArc("phi must be finite");
  }
  if (!std::isfinite(arc.arc_length) || arc.arc_length <= 0.0) {
    throw InvalidArc("arc_length must be > 0, got " + std::to_string(arc.arc_length));
  }
}

// (1 - cos t) / t
double versine_ratio(double t) {
  if (t <= kStraightEpsilon) {
    return t / 2.0 - t * t * t / 24.0;
  }
  const double half = std::sin(t / 2.0);
  return 2.0 * half * half / t;
}

// sin t / t
double sine_ratio(double t) {
  if (t <= kStraightEpsilon) {
    return 1.0 - t * t / 6.0;
  }
  return std::sin(t) / t;
}

double versine_ratio_derivative(double t) {
  if (t < kJacobianSeriesTheta) {
    const double t2 = t * t;
    return 0.5 - t2 / 8.0 + t2 * t2 / 144.0;
  }
  const double half = std::sin(t / 2.0);
  return (t * std::sin(t) - 2.0 * half * half) / (t * t);
}

double sine_ratio_derivative(double t) {
  if (t < kJacobianSeriesTheta) {
    const double t2 = t * t;
    return -t / 3.0 + t * t2 / 30.0 - t * t2 * t2 / 840.0;
  }
  return (t * std::cos(t) - std::sin(t)) / (t * t);
}

Eigen::Matrix3d bend_rotation(double theta, double phi) {
  const Eigen::AngleAxisd roll(phi, Eigen::Vector3d::UnitZ());
  const Eigen::AngleAxisd bend(theta, Eigen::Vector3d::UnitY());
  return (roll * bend * roll.inverse()).toRotationMatrix();
}

}  // namespace

double wrap_two_pi(double angle) {
  double wrapped = std::fmod(angle, 2.0 * kPi);
  if (wrapped < 0.0) {
    wrapped += 2.0 * kPi;
  }
  // fmod of a tiny negative value can round up to exactly 2π.
  if (wrapped >= 2.0 * kPi) {
    wrapped = 0.0;
  }
  return wrapped;
}

void RingStackConfig::validate(double pitch_radius) const {
  if (ring_count < 2) {
    throw InvalidConfig("stack.ring_count", "must be >= 2, got " + std::to_string(ring_count));
  }
  if (!std::isfinite(ring_outer_diameter) || ring_outer_diameter <= 2.0 * pitch_radius) {
    throw InvalidConfig("stack.ring_outer_diameter",
                        "must exceed twice the tendon pitch radius");
  }
  if (!std::isfinite(segment_arc_length) || segment_arc_length <= 0.0) {
    throw InvalidConfig("stack.segment_arc_length", "must be > 0");
  }
}

void CatheterSpec::validate(double ring_outer_diameter) const {
  if (!std::isfinite(catheter_diameter) || catheter_diameter <= 0.0) {
    throw InvalidConfig("catheter.catheter_diameter", "must be > 0");
  }
  if (catheter_diameter >= ring_outer_diameter) {
    throw InvalidConfig("catheter.catheter_diameter", "must be smaller than the ring outer diameter");
  }
  if (!std::isfinite(catheter_length) || catheter_length <= 0.0) {
    throw InvalidConfig("catheter.catheter_length", "must be > 0");
  }
  if (!std::isfinite(tendon_wire_diameter) || tendon_wire_diameter <= 0.0) {
    throw InvalidConfig("catheter.tendon_wire_diameter", "must be > 0");
  }
}

Pose fk_tip(const ArcParams& arc) {
  check_arc(arc);
  const double radial = arc.arc_length * versine_ratio(arc.theta);
  Pose pose;
  pose.position = {radial * std::cos(arc.phi), radial * std::sin(arc.phi),
                   arc.arc_length * sine_ratio(arc.theta)};
  pose.orientation = bend_rotation(arc.theta, arc.phi);
  return pose;
}

std::vector<Pose> fk_ring_poses(const ArcParams& arc, const RingStackConfig& stack) {
  check_arc(arc);
  if (stack.ring_count < 2) {
    throw InvalidConfig("stack.ring_count", "must be >= 2");
  }
  const int gaps = stack.gap_count();
  std::vector<Pose> poses;
  poses.reserve(static_cast<std::size_t>(stack.ring_count));
  poses.push_back(Pose::identity());
  for (int k = 1; k <= gaps; ++k) {
    const double fraction = static_cast<double>(k) / static_cast<double>(gaps);
    poses.push_back(fk_tip({arc.theta * fraction, arc.phi, arc.arc_length * fraction}));
  }
  return poses;
}

std::vector<double> ring_gap_angles(const std::vector<Pose>& poses) {
  std::vector<double> angles;
  for (std::size_t k = 1; k < poses.size(); ++k) {
    const Eigen::Vector3d a = poses[k - 1].orientation.col(2);
    const Eigen::Vector3d b = poses[k].orientation.col(2);
    angles.push_back(std::atan2(a.cross(b).norm(), a.dot(b)));
  }
  return angles;
}

IkSolution ik_tip(const Eigen::Vector3d& target, double arc_length, double theta_max) {
  if (!target.allFinite()) {
    throw Degenerate("target must be finite");
  }
  if (!std::isfinite(arc_length) || arc_length <= 0.0) {
    throw InvalidArc("arc_length must be > 0");
  }
  const double distance = target.norm();
  if (distance < kDegenerateRadius) {
    throw Degenerate("target coincides with the base origin");
  }
  if (target.z() < 0.0) {
    throw Unreachable("target lies below the base plane (z < 0)");
  }
  const double rho = std::hypot(target.x(), target.y());
  const double theta = 2.0 * std::atan2(rho, target.z());
  // Allow round-off when inverting a pose computed exactly at the limit.
  constexpr double kLimitSlack = 1e-12;
  if (theta > theta_max + kLimitSlack) {
    throw Unreachable("target needs a bend of " + std::to_string(theta) +
                      " rad, limit is " + std::to_string(theta_max));
  }
  const double phi = rho < kDegenerateRadius ? 0.0 : wrap_two_pi(std::atan2(target.y(), target.x()));

  // Arc length implied by the chord: chord = 2 R sin(theta/2), length = R theta.
  const double implied = theta <= kStraightEpsilon
                             ? distance
                             : theta * distance / (2.0 * std::sin(theta / 2.0));
  return {{std::min(theta, theta_max), phi, arc_length}, std::abs(implied - arc_length)};
}

Eigen::Matrix<double, 3, 2> arc_jacobian(const ArcParams& arc) {
  check_arc(arc);
  const double c = std::cos(arc.phi);
  const double s = std::sin(arc.phi);
  const double len = arc.arc_length;
  const double dradial = len * versine_ratio_derivative(arc.theta);
  const double radial = len * versine_ratio(arc.theta);

  Eigen::Matrix<double, 3, 2> jac;
  jac.col(0) << dradial * c, dradial * s, len * sine_ratio_derivative(arc.theta);
  jac.col(1) << -radial * s, radial * c, 0.0;
  return jac;
}

}  // namespace bendjoint
