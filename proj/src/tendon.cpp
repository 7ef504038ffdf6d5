#include "bendjoint/tendon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bendjoint/errors.hpp"

namespace bendjoint {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPairTolerance = 1e-12;
constexpr double kOnAxisTheta = 1e-9;
// Absorbs round-off of r * theta when theta sits exactly at stroke / r.
constexpr double kStrokeSlack = 1e-12;

}  // namespace

TendonLayout TendonLayout::with_bend_limit(double pitch_radius, double theta_max) {
  TendonLayout layout;
  layout.pitch_radius = pitch_radius;
  layout.stroke_limit = pitch_radius * theta_max;
  return layout;
}

void TendonLayout::validate() const {
  if (!std::isfinite(pitch_radius) || pitch_radius <= 0.0) {
    throw InvalidConfig("layout.pitch_radius", "must be > 0");
  }
  if (!std::isfinite(stroke_limit) || stroke_limit <= 0.0) {
    throw InvalidConfig("layout.stroke_limit", "must be > 0");
  }
  for (int i = 0; i < kTendonCount; ++i) {
    const double a = angles[static_cast<std::size_t>(i)];
    if (!std::isfinite(a) || a < 0.0 || a >= 2.0 * kPi) {
      throw InvalidConfig("layout.angles", "tendon " + std::to_string(i) + " outside [0, 2pi)");
    }
    if (i > 0 && a <= angles[static_cast<std::size_t>(i - 1)]) {
      throw InvalidConfig("layout.angles", "angles must be strictly ascending");
    }
  }
  for (std::size_t i = 0; i < 2; ++i) {
    if (std::abs(angles[i + 2] - angles[i] - kPi) > kPairTolerance) {
      throw InvalidConfig("layout.angles",
                          "tendon " + std::to_string(i + 2) + " must sit opposite tendon " +
                              std::to_string(i));
    }
  }
}

TendonDisplacements allocate(const BendCommand& cmd, const TendonLayout& layout) {
  if (!std::isfinite(cmd.theta) || cmd.theta < 0.0 || !std::isfinite(cmd.phi)) {
    throw std::invalid_argument("bend command must have finite theta >= 0 and finite phi");
  }
  const double scale = -layout.pitch_radius * cmd.theta;
  TendonDisplacements out;
  // Partner tendons are written as exact negatives so each pair sums to zero
  // bit-for-bit rather than up to cos() rounding.
  for (std::size_t i = 0; i < 2; ++i) {
    out[i] = scale * std::cos(layout.angles[i] - cmd.phi);
    out[i + 2] = -out[i];
  }
  for (std::size_t i = 0; i < kTendonCount; ++i) {
    if (std::abs(out[i]) > layout.stroke_limit + kStrokeSlack) {
      throw LimitExceeded("tendon " + std::to_string(i) + " displacement " +
                          std::to_string(out[i]) + " mm exceeds stroke limit " +
                          std::to_string(layout.stroke_limit) + " mm");
    }
  }
  return out;
}

Deallocation deallocate(const TendonDisplacements& dl, const TendonLayout& layout) {
  // Work in the layout frame: tendon 0 at angle 0, tendon 1 at gamma. With
  // (a, b) = theta (cos, sin) of the plane relative to tendon 0, the
  // least-squares fit over both pairs is a = u / r, b = (v - u cos gamma) /
  // (r sin gamma) where u, v are the half-differences of each pair.
  const double gamma = layout.angles[1] - layout.angles[0];
  double cos_gamma = std::cos(gamma);
  double sin_gamma = std::sin(gamma);
  if (std::abs(gamma - kPi / 2.0) < kPairTolerance) {
    cos_gamma = 0.0;
    sin_gamma = 1.0;
  }
  const double u = (dl[2] - dl[0]) / 2.0;
  const double v = (dl[3] - dl[1]) / 2.0;
  const double a = u / layout.pitch_radius;
  const double b = (v - u * cos_gamma) / (sin_gamma * layout.pitch_radius);

  Deallocation out;
  out.cmd.theta = std::max(0.0, std::hypot(a, b));
  out.cmd.phi =
      out.cmd.theta < kOnAxisTheta ? 0.0 : wrap_two_pi(layout.angles[0] + std::atan2(b, a));
  out.residual = std::max(std::abs(dl[0] + dl[2]), std::abs(dl[1] + dl[3])) / 2.0;
  return out;
}

LimitReport check_limits(const TendonDisplacements& dl, const TendonLayout& layout) {
  LimitReport report;
  for (std::size_t i = 0; i < kTendonCount; ++i) {
    const double magnitude = std::abs(dl[i]);
    if (magnitude > layout.stroke_limit) {
      report.violations.push_back(
          {static_cast<int>(i), dl[i], magnitude - layout.stroke_limit});
    }
  }
  return report;
}

}  // namespace bendjoint
