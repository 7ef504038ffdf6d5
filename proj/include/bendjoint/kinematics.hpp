#pragma once

#include <numbers>
#include <vector>

#include <Eigen/Core>

namespace bendjoint {

inline constexpr double kDefaultThetaMax = std::numbers::pi / 2.0;

/// Below this bend angle the arc map switches to its series expansion.
inline constexpr double kStraightEpsilon = 1e-7;

/// Wraps an angle to [0, 2π).
double wrap_two_pi(double angle);

/// Constant-curvature arc: bend angle, bend-plane angle (radians) and arc
/// length (mm).
struct ArcParams {
  double theta = 0.0;
  double phi = 0.0;
  double arc_length = 0.0;

  bool operator==(const ArcParams&) const = default;
};

struct Pose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d orientation = Eigen::Matrix3d::Identity();

  static Pose identity() { return {}; }
};

struct RingStackConfig {
  int ring_count = 8;
  double ring_outer_diameter = 7.0;  // mm
  double segment_arc_length = 40.0;  // mm

  int gap_count() const { return ring_count - 1; }
  /// Throws InvalidConfig. The tendon pitch radius must fit inside the rings.
  void validate(double pitch_radius) const;
};

/// Catheter carried through the joint. Not used by the geometry; kept so a
/// configuration describes the whole device.
struct CatheterSpec {
  double catheter_diameter = 3.2;       // mm
  double catheter_length = 1300.0;      // mm
  double tendon_wire_diameter = 0.16;   // mm

  void validate(double ring_outer_diameter) const;
};

/// Tip pose of a single constant-curvature section.
///
/// Base frame: z along the straight joint axis, x toward phi = 0. The section
/// bends by theta inside the plane at angle phi about z, without twist, so
/// the orientation is Rz(phi) * Ry(theta) * Rz(-phi). theta is accepted
/// anywhere in [0, pi]; workspace limits are applied where commands enter.
///
/// Throws InvalidArc for theta outside [0, pi], non-finite phi or a
/// non-positive arc length.
Pose fk_tip(const ArcParams& arc);

/// Poses of every ring in the stack. Ring 0 sits at the base with identity
/// pose, ring k carries k/(N-1) of both bend angle and arc length, and the
/// last ring coincides with fk_tip(arc).
std::vector<Pose> fk_ring_poses(const ArcParams& arc, const RingStackConfig& stack);

/// Angle between the z-axes of consecutive poses (N-1 values for N poses).
std::vector<double> ring_gap_angles(const std::vector<Pose>& poses);

struct IkSolution {
  ArcParams arc;
  /// |implied arc length - requested arc length|, mm. Nonzero when the target
  /// is not on the arc of the requested length; callers decide whether to
  /// reject.
  double residual = 0.0;
};

/// Closed-form inverse of the tip position map. Only the target direction
/// determines (theta, phi); the length mismatch is reported as residual.
///
/// Throws Degenerate when the target is at the origin and Unreachable when it
/// lies below the base plane or needs more than theta_max of bend.
IkSolution ik_tip(const Eigen::Vector3d& target, double arc_length,
                  double theta_max = kDefaultThetaMax);

/// d(position)/d(theta) and d(position)/d(phi), mm/rad. The phi column is
/// zero at theta = 0.
Eigen::Matrix<double, 3, 2> arc_jacobian(const ArcParams& arc);

}  // namespace bendjoint
