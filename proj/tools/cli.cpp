#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bendjoint/errors.hpp"
#include "bendjoint/io.hpp"
#include "bendjoint/joint_sim.hpp"
#include "bendjoint/kinematics.hpp"
#include "bendjoint/tendon.hpp"
#include "bendjoint/teleop_server.hpp"

namespace bendjoint::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

Json number(double v) {
  if (v == 0.0) {
    return 0;
  }
  if (std::trunc(v) == v && std::abs(v) < 1e15) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

// Reports the first violated bound; returns false if the value is outside.
bool in_range(std::ostream& err, const char* name, double value, double lo, double hi) {
  if (!std::isfinite(value) || value < lo || value > hi) {
    err << "error: --" << name << " = " << value << " is outside [" << lo << ", " << hi << "]\n";
    return false;
  }
  return true;
}

struct RunArgs {
  std::string script;
  std::string out_csv;
  std::string config;
};

struct ServeArgs {
  std::uint16_t port = 8080;
  std::string bind = "127.0.0.1";
  double rate_hz = 50.0;
  std::string config;
};

std::optional<SimConfig> config_or_default(const std::string& path, std::ostream& err) {
  if (path.empty()) {
    return SimConfig{};
  }
  try {
    return load_sim_config(path);
  } catch (const InvalidConfig& e) {
    err << "error: bad config " << path << ": " << e.what() << '\n';
    return std::nullopt;
  }
}

int cmd_run(const RunArgs& args, std::ostream& err) {
  const auto cfg = config_or_default(args.config, err);
  if (!cfg) {
    return kBadConfig;
  }
  std::vector<Waypoint> waypoints;
  try {
    waypoints = load_script(args.script);
  } catch (const BadScript& e) {
    err << "error: bad script: " << e.what() << '\n';
    return kUsage;
  }
  JointSim sim(*cfg);
  const auto trace = run_script(sim, waypoints);

  std::ofstream out(args.out_csv, std::ios::binary);
  if (!out) {
    err << "error: cannot write " << args.out_csv << '\n';
    return kIoError;
  }
  write_trace_csv(out, trace);
  return out ? kOk : kIoError;
}

int cmd_serve(const ServeArgs& args, std::ostream& out, std::ostream& err) {
  const auto cfg = config_or_default(args.config, err);
  if (!cfg) {
    return kBadConfig;
  }
  if (!(args.rate_hz > 0.0 && args.rate_hz <= 1.0 / cfg->dt)) {
    err << "error: --rate-hz must lie in (0, " << 1.0 / cfg->dt << "]\n";
    return kUsage;
  }
  teleop::TeleopServer server(*cfg, {args.bind, args.port, args.rate_hz});
  try {
    server.start();
  } catch (const teleop::BindError& e) {
    err << "error: " << e.what() << '\n';
    return kBindFailure;
  }
  out << "listening on ws://" << args.bind << ':' << server.port() << std::endl;
  server.run_until_signal();
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tendon-driven bending joint simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run a waypoint script offline and write a CSV trace");
  run_cmd->add_option("script", run_args.script, "Waypoint script (JSON)")->required();
  run_cmd->add_option("out_csv", run_args.out_csv, "Output CSV path")->required();
  run_cmd->add_option("--config", run_args.config, "SimConfig JSON");

  double theta_deg = 0.0;
  double phi_deg = 0.0;
  double length = 40.0;
  auto* fk_cmd = app.add_subcommand("fk", "Tip position of a constant-curvature arc");
  fk_cmd->add_option("--theta", theta_deg, "Bend angle, degrees")->required();
  fk_cmd->add_option("--phi", phi_deg, "Bend plane, degrees");
  fk_cmd->add_option("--len", length, "Arc length, mm");

  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  auto* ik_cmd = app.add_subcommand("ik", "Arc parameters reaching a tip position");
  ik_cmd->add_option("--x", x, "mm")->required();
  ik_cmd->add_option("--y", y, "mm")->required();
  ik_cmd->add_option("--z", z, "mm")->required();
  ik_cmd->add_option("--len", length, "Arc length, mm");

  auto* alloc_cmd = app.add_subcommand("alloc", "Tendon displacements for a bend");
  alloc_cmd->add_option("--theta", theta_deg, "Bend angle, degrees")->required();
  alloc_cmd->add_option("--phi", phi_deg, "Bend plane, degrees");

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "Run the WebSocket teleoperation service");
  serve_cmd->add_option("--port", serve_args.port, "TCP port")->envname("TJS_PORT");
  serve_cmd->add_option("--bind", serve_args.bind, "Bind address");
  serve_cmd->add_option("--rate-hz", serve_args.rate_hz, "State stream rate");
  serve_cmd->add_option("--config", serve_args.config, "SimConfig JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  if (*run_cmd) {
    return cmd_run(run_args, err);
  }
  if (*serve_cmd) {
    return cmd_serve(serve_args, out, err);
  }

  Json result = Json::object();
  try {
    if (*fk_cmd) {
      if (!in_range(err, "theta", theta_deg, 0.0, 180.0) ||
          !in_range(err, "len", length, 1e-9, 1e9)) {
        return kUsage;
      }
      const Pose tip = fk_tip({theta_deg * kDegToRad, wrap_two_pi(phi_deg * kDegToRad), length});
      result["x"] = number(tip.position.x());
      result["y"] = number(tip.position.y());
      result["z"] = number(tip.position.z());
    } else if (*ik_cmd) {
      if (!in_range(err, "len", length, 1e-9, 1e9)) {
        return kUsage;
      }
      const IkSolution ik = ik_tip({x, y, z}, length);
      result["theta_deg"] = number(ik.arc.theta / kDegToRad);
      result["phi_deg"] = number(ik.arc.phi / kDegToRad);
      result["arc_length"] = number(ik.arc.arc_length);
      result["residual_mm"] = number(ik.residual);
    } else if (*alloc_cmd) {
      if (!in_range(err, "theta", theta_deg, 0.0, 90.0)) {
        return kUsage;
      }
      const TendonDisplacements dl =
          allocate({theta_deg * kDegToRad, wrap_two_pi(phi_deg * kDegToRad)}, TendonLayout{});
      Json values = Json::array();
      for (double v : dl.dl) {
        values.push_back(number(v));
      }
      result["dl"] = std::move(values);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  out << result.dump() << '\n';
  return kOk;
}

}  // namespace bendjoint::cli
