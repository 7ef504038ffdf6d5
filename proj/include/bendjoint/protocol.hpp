#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "bendjoint/joint_sim.hpp"

namespace bendjoint::teleop {

// Client -> server.

struct SetTarget {
  double theta_deg = 0.0;
  double phi_deg = 0.0;
  double ramp_ms = 0.0;
  bool operator==(const SetTarget&) const = default;
};

struct Home {
  bool operator==(const Home&) const = default;
};

struct Estop {
  bool operator==(const Estop&) const = default;
};

/// Clears an e-stop latch without re-homing.
struct Resume {
  bool operator==(const Resume&) const = default;
};

struct StreamConfig {
  double rate_hz = 50.0;
  bool operator==(const StreamConfig&) const = default;
};

// Server -> client.

struct MotorFrame {
  double target_deg = 0.0;
  double actual_deg = 0.0;
  double velocity_deg_s = 0.0;
  std::int64_t encoder_count = 0;
  bool operator==(const MotorFrame&) const = default;
};

struct BendFrame {
  double theta_deg = 0.0;
  double phi_deg = 0.0;
  bool operator==(const BendFrame&) const = default;
};

/// A joint snapshot on the wire (no ring list), angles in degrees.
struct StateFrame {
  double t = 0.0;
  BendFrame cmd;
  BendFrame target;
  BendFrame achieved;
  double residual_mm = 0.0;
  std::array<double, 4> dl_cmd{};
  std::array<double, 4> dl_act{};
  std::array<MotorFrame, 4> motors{};
  std::array<double, 3> tip_position{};
  std::array<double, 9> tip_rotation{};  // row-major
  bool estop = false;
  bool operator==(const StateFrame&) const = default;
};

struct Ack {
  std::string command;  // "for" on the wire
  bool clamped = false;
  bool operator==(const Ack&) const = default;
};

struct Error {
  std::string code;
  std::string detail;
  bool operator==(const Error&) const = default;
};

using Message =
    std::variant<SetTarget, Home, Estop, Resume, StreamConfig, StateFrame, Ack, Error>;

/// Wire name of the message's "type" tag.
std::string_view type_name(const Message& msg);

/// True for messages a client may send.
bool is_client_message(const Message& msg);

/// Error codes carried by Error messages and ProtocolError.
namespace codes {
inline constexpr std::string_view kBadFrame = "bad-frame";
inline constexpr std::string_view kUnknownType = "unknown-type";
inline constexpr std::string_view kBadField = "bad-field";
inline constexpr std::string_view kEstopLatched = "estop-latched";
inline constexpr std::string_view kWrongDirection = "wrong-direction";
}  // namespace codes

class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(std::string_view code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// One JSON object, no newlines, "type" first. Integral values print without
/// a fractional part.
std::string encode(const Message& msg);

/// Throws ProtocolError: bad-frame for malformed JSON (with byte position),
/// unknown-type for an unrecognised tag, bad-field for missing or invalid
/// fields.
Message decode(std::string_view frame);

/// Wire view of a snapshot.
StateFrame to_state_frame(const JointSnapshot& snap, const BendCommand& target, bool estop);

}  // namespace bendjoint::teleop
