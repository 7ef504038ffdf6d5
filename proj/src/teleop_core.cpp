#include "bendjoint/teleop_core.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bendjoint::teleop {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

TeleopCore::TeleopCore(SimConfig cfg, double rate_hz) : sim_(std::move(cfg)) {
  if (!(rate_hz > 0.0 && rate_hz <= 1.0 / sim_.config().dt)) {
    throw std::invalid_argument("stream rate must lie in (0, 1/dt] Hz");
  }
  set_rate(rate_hz);
}

void TeleopCore::set_rate(double rate_hz) {
  rate_hz_ = rate_hz;
  const double steps = 1.0 / (rate_hz * sim_.config().dt);
  steps_per_frame_ = std::max(1, static_cast<int>(std::lround(steps)));
  steps_since_frame_ = 0;
}

Message TeleopCore::handle(const Message& msg) {
  const std::string type(type_name(msg));
  if (const auto* m = std::get_if<SetTarget>(&msg)) {
    if (estopped_) {
      return Error{std::string(codes::kEstopLatched),
                   "e-stop is latched; send home or resume first"};
    }
    try {
      const SetTargetAck ack =
          sim_.set_target({m->theta_deg * kDegToRad, m->phi_deg * kDegToRad}, m->ramp_ms);
      return Ack{type, ack.clamped};
    } catch (const std::invalid_argument& e) {
      return Error{std::string(codes::kBadField), e.what()};
    }
  }
  if (std::holds_alternative<Estop>(msg)) {
    if (!estopped_) {
      sim_.hold();
      estopped_ = true;
    }
    return Ack{type, false};
  }
  if (std::holds_alternative<Home>(msg)) {
    sim_.home();
    estopped_ = false;
    return Ack{type, false};
  }
  if (std::holds_alternative<Resume>(msg)) {
    if (estopped_) {
      sim_.release_hold();
      estopped_ = false;
    }
    return Ack{type, false};
  }
  if (const auto* m = std::get_if<StreamConfig>(&msg)) {
    const double max_rate = 1.0 / sim_.config().dt;
    if (!(m->rate_hz > 0.0 && m->rate_hz <= max_rate)) {
      return Error{std::string(codes::kBadField),
                   "rate_hz must lie in (0, " + std::to_string(max_rate) + "]"};
    }
    set_rate(m->rate_hz);
    return Ack{type, false};
  }
  return Error{std::string(codes::kWrongDirection),
               "'" + type + "' is a server-to-client message"};
}

std::optional<StateFrame> TeleopCore::step() {
  sim_.step();
  if (++steps_since_frame_ < steps_per_frame_) {
    return std::nullopt;
  }
  steps_since_frame_ = 0;
  return current_frame();
}

StateFrame TeleopCore::current_frame() const {
  return to_state_frame(sim_.snapshot(), sim_.target(), estopped_);
}

}  // namespace bendjoint::teleop
