#include "bendjoint/protocol.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

namespace bendjoint::teleop {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Json number(double v) {
  constexpr double kExactIntegers = 9007199254740992.0;  // 2^53
  if (std::isfinite(v) && std::trunc(v) == v && std::abs(v) < kExactIntegers &&
      !(v == 0.0 && std::signbit(v))) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

template <std::size_t N>
Json number_array(const std::array<double, N>& values) {
  Json out = Json::array();
  for (double v : values) {
    out.push_back(number(v));
  }
  return out;
}

Json bend(const BendFrame& b) {
  Json out = Json::object();
  out["theta_deg"] = number(b.theta_deg);
  out["phi_deg"] = number(b.phi_deg);
  return out;
}

[[noreturn]] void bad_field(std::string_view type, std::string_view key, std::string_view why) {
  throw ProtocolError(codes::kBadField,
                      std::string(type) + ": field '" + std::string(key) + "' " + std::string(why));
}

const Json& field(const Json& obj, std::string_view type, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    bad_field(type, key, "is missing");
  }
  return *it;
}

double get_number(const Json& obj, std::string_view type, const char* key) {
  const Json& v = field(obj, type, key);
  if (!v.is_number()) {
    bad_field(type, key, "must be a number");
  }
  const double out = v.get<double>();
  if (!std::isfinite(out)) {
    bad_field(type, key, "must be finite");
  }
  return out;
}

std::int64_t get_integer(const Json& obj, std::string_view type, const char* key) {
  const Json& v = field(obj, type, key);
  if (!v.is_number_integer()) {
    bad_field(type, key, "must be an integer");
  }
  return v.get<std::int64_t>();
}

bool get_bool(const Json& obj, std::string_view type, const char* key) {
  const Json& v = field(obj, type, key);
  if (!v.is_boolean()) {
    bad_field(type, key, "must be a boolean");
  }
  return v.get<bool>();
}

std::string get_string(const Json& obj, std::string_view type, const char* key) {
  const Json& v = field(obj, type, key);
  if (!v.is_string()) {
    bad_field(type, key, "must be a string");
  }
  return v.get<std::string>();
}

const Json& get_object(const Json& obj, std::string_view type, const char* key) {
  const Json& v = field(obj, type, key);
  if (!v.is_object()) {
    bad_field(type, key, "must be an object");
  }
  return v;
}

template <std::size_t N>
std::array<double, N> get_numbers(const Json& obj, std::string_view type, const char* key) {
  const Json& v = field(obj, type, key);
  if (!v.is_array() || v.size() != N) {
    bad_field(type, key, "must be an array of " + std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!v[i].is_number()) {
      bad_field(type, key, "must be an array of " + std::to_string(N) + " numbers");
    }
    out[i] = v[i].get<double>();
  }
  return out;
}

BendFrame get_bend(const Json& obj, std::string_view type, const char* key) {
  const Json& b = get_object(obj, type, key);
  return {get_number(b, type, "theta_deg"), get_number(b, type, "phi_deg")};
}

StateFrame decode_state(const Json& obj) {
  constexpr std::string_view type = "state";
  StateFrame s;
  s.t = get_number(obj, type, "t");
  s.cmd = get_bend(obj, type, "cmd");
  s.target = get_bend(obj, type, "target");
  s.achieved = get_bend(obj, type, "achieved");
  s.residual_mm = get_number(obj, type, "residual_mm");
  s.dl_cmd = get_numbers<4>(obj, type, "dl_cmd");
  s.dl_act = get_numbers<4>(obj, type, "dl_act");
  const Json& motors = field(obj, type, "motors");
  if (!motors.is_array() || motors.size() != 4) {
    bad_field(type, "motors", "must be an array of 4 objects");
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (!motors[i].is_object()) {
      bad_field(type, "motors", "must be an array of 4 objects");
    }
    s.motors[i] = {get_number(motors[i], type, "target_deg"),
                   get_number(motors[i], type, "actual_deg"),
                   get_number(motors[i], type, "velocity_deg_s"),
                   get_integer(motors[i], type, "encoder_count")};
  }
  const Json& tip = get_object(obj, type, "tip");
  s.tip_position = get_numbers<3>(tip, type, "position");
  s.tip_rotation = get_numbers<9>(tip, type, "rotation");
  s.estop = get_bool(obj, type, "estop");
  return s;
}

Json encode_state(const StateFrame& s) {
  Json out = Json::object();
  out["type"] = "state";
  out["t"] = number(s.t);
  out["cmd"] = bend(s.cmd);
  out["target"] = bend(s.target);
  out["achieved"] = bend(s.achieved);
  out["residual_mm"] = number(s.residual_mm);
  out["dl_cmd"] = number_array(s.dl_cmd);
  out["dl_act"] = number_array(s.dl_act);
  Json motors = Json::array();
  for (const MotorFrame& m : s.motors) {
    Json jm = Json::object();
    jm["target_deg"] = number(m.target_deg);
    jm["actual_deg"] = number(m.actual_deg);
    jm["velocity_deg_s"] = number(m.velocity_deg_s);
    jm["encoder_count"] = m.encoder_count;
    motors.push_back(std::move(jm));
  }
  out["motors"] = std::move(motors);
  Json tip = Json::object();
  tip["position"] = number_array(s.tip_position);
  tip["rotation"] = number_array(s.tip_rotation);
  out["tip"] = std::move(tip);
  out["estop"] = s.estop;
  return out;
}

}  // namespace

std::string_view type_name(const Message& msg) {
  return std::visit(
      Overloaded{
          [](const SetTarget&) { return std::string_view("set_target"); },
          [](const Home&) { return std::string_view("home"); },
          [](const Estop&) { return std::string_view("estop"); },
          [](const Resume&) { return std::string_view("resume"); },
          [](const StreamConfig&) { return std::string_view("stream_config"); },
          [](const StateFrame&) { return std::string_view("state"); },
          [](const Ack&) { return std::string_view("ack"); },
          [](const Error&) { return std::string_view("error"); },
      },
      msg);
}

bool is_client_message(const Message& msg) {
  return std::holds_alternative<SetTarget>(msg) || std::holds_alternative<Home>(msg) ||
         std::holds_alternative<Estop>(msg) || std::holds_alternative<Resume>(msg) ||
         std::holds_alternative<StreamConfig>(msg);
}

std::string encode(const Message& msg) {
  Json out = std::visit(
      Overloaded{
          [](const SetTarget& m) {
            Json j = Json::object();
            j["type"] = "set_target";
            j["theta_deg"] = number(m.theta_deg);
            j["phi_deg"] = number(m.phi_deg);
            j["ramp_ms"] = number(m.ramp_ms);
            return j;
          },
          [](const StreamConfig& m) {
            Json j = Json::object();
            j["type"] = "stream_config";
            j["rate_hz"] = number(m.rate_hz);
            return j;
          },
          [](const StateFrame& m) { return encode_state(m); },
          [](const Ack& m) {
            Json j = Json::object();
            j["type"] = "ack";
            j["for"] = m.command;
            j["clamped"] = m.clamped;
            return j;
          },
          [](const Error& m) {
            Json j = Json::object();
            j["type"] = "error";
            j["code"] = m.code;
            j["detail"] = m.detail;
            return j;
          },
          [&msg](const auto&) {
            Json j = Json::object();
            j["type"] = type_name(msg);
            return j;
          },
      },
      msg);
  return out.dump(-1, ' ', false, Json::error_handler_t::replace);
}

Message decode(std::string_view frame) {
  Json obj;
  try {
    obj = Json::parse(frame);
  } catch (const Json::parse_error& e) {
    throw ProtocolError(codes::kBadFrame,
                        "malformed JSON at byte " + std::to_string(e.byte));
  }
  if (!obj.is_object()) {
    throw ProtocolError(codes::kBadFrame, "frame must be a JSON object");
  }
  const auto type_it = obj.find("type");
  if (type_it == obj.end() || !type_it->is_string()) {
    throw ProtocolError(codes::kBadFrame, "frame has no string \"type\" field");
  }
  const std::string type = type_it->get<std::string>();

  if (type == "set_target") {
    SetTarget m;
    m.theta_deg = get_number(obj, type, "theta_deg");
    m.phi_deg = get_number(obj, type, "phi_deg");
    if (obj.contains("ramp_ms")) {
      m.ramp_ms = get_number(obj, type, "ramp_ms");
    }
    if (m.theta_deg < 0.0) {
      bad_field(type, "theta_deg", "must be >= 0");
    }
    if (m.ramp_ms < 0.0) {
      bad_field(type, "ramp_ms", "must be >= 0");
    }
    return m;
  }
  if (type == "home") {
    return Home{};
  }
  if (type == "estop") {
    return Estop{};
  }
  if (type == "resume") {
    return Resume{};
  }
  if (type == "stream_config") {
    StreamConfig m;
    m.rate_hz = get_number(obj, type, "rate_hz");
    if (m.rate_hz <= 0.0) {
      bad_field(type, "rate_hz", "must be > 0");
    }
    return m;
  }
  if (type == "state") {
    return decode_state(obj);
  }
  if (type == "ack") {
    return Ack{get_string(obj, type, "for"), get_bool(obj, type, "clamped")};
  }
  if (type == "error") {
    return Error{get_string(obj, type, "code"), get_string(obj, type, "detail")};
  }
  throw ProtocolError(codes::kUnknownType, "unknown message type '" + type + "'");
}

StateFrame to_state_frame(const JointSnapshot& snap, const BendCommand& target, bool estop) {
  StateFrame s;
  s.t = snap.t;
  s.cmd = {snap.cmd.theta * kRadToDeg, snap.cmd.phi * kRadToDeg};
  s.target = {target.theta * kRadToDeg, target.phi * kRadToDeg};
  s.achieved = {snap.achieved.theta * kRadToDeg, snap.achieved.phi * kRadToDeg};
  s.residual_mm = snap.residual;
  s.dl_cmd = snap.dl_cmd.dl;
  s.dl_act = snap.dl_act.dl;
  for (std::size_t i = 0; i < 4; ++i) {
    const MotorState& m = snap.motors[i];
    s.motors[i] = {m.target_angle * kRadToDeg, m.actual_angle * kRadToDeg,
                   m.velocity * kRadToDeg, m.encoder_count};
  }
  for (int i = 0; i < 3; ++i) {
    s.tip_position[static_cast<std::size_t>(i)] = snap.tip.position(i);
    for (int j = 0; j < 3; ++j) {
      s.tip_rotation[static_cast<std::size_t>(3 * i + j)] = snap.tip.orientation(i, j);
    }
  }
  s.estop = estop;
  return s;
}

}  // namespace bendjoint::teleop
