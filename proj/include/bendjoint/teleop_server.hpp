#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include "bendjoint/joint_sim.hpp"
#include "bendjoint/teleop_core.hpp"

namespace bendjoint::teleop {

struct ServerOptions {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = 8080;  // 0 picks a free port
  double rate_hz = kDefaultRateHz;
};

class BindError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// WebSocket front end of TeleopCore. Each text frame carries one JSON
/// message. A dedicated loop thread owns the core and steps it at wall-clock
/// pace; client sessions hand their commands to that loop through an ordered
/// queue, and every state frame is encoded once and broadcast to all
/// connected clients.
class TeleopServer {
 public:
  TeleopServer(SimConfig cfg, ServerOptions options);
  ~TeleopServer();

  TeleopServer(const TeleopServer&) = delete;
  TeleopServer& operator=(const TeleopServer&) = delete;

  /// Binds, then starts the network and simulation threads.
  /// Throws BindError if the address cannot be bound.
  void start();
  /// Actual listening port (useful when started with port 0).
  std::uint16_t port() const;
  void stop();
  /// Blocks until SIGINT or SIGTERM, then stops.
  void run_until_signal();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bendjoint::teleop
