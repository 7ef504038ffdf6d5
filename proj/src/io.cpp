#include "bendjoint/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bendjoint/errors.hpp"

namespace bendjoint {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

double deg_to_rad(double deg) { return deg * kPi / 180.0; }

class ConfigReader {
 public:
  ConfigReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) {
      throw InvalidConfig(path_.empty() ? "<root>" : path_, "must be a JSON object");
    }
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json& at(const std::string& key) const { return node_.at(key); }

  void number(const std::string& key, double& out) const {
    if (!has(key)) {
      return;
    }
    const json& v = node_.at(key);
    if (!v.is_number()) {
      throw InvalidConfig(field(key), "must be a number");
    }
    out = v.get<double>();
  }

  void integer(const std::string& key, int& out) const {
    if (!has(key)) {
      return;
    }
    const json& v = node_.at(key);
    if (!v.is_number_integer()) {
      throw InvalidConfig(field(key), "must be an integer");
    }
    out = v.get<int>();
  }

  void reject_unknown(std::initializer_list<std::string_view> known) const {
    for (const auto& [key, _] : node_.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw InvalidConfig(field(key), "unknown key");
      }
    }
  }

 private:
  const json& node_;
  std::string path_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// 1-based line and column of a byte offset.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

SimConfig parse_sim_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidConfig("<root>", std::string("invalid JSON: ") + e.what());
  }

  SimConfig cfg;
  const ConfigReader top(root, "");
  top.reject_unknown({"stack", "layout", "motor", "catheter", "dt", "theta_max_deg"});
  top.number("dt", cfg.dt);
  if (top.has("theta_max_deg")) {
    double deg = 0.0;
    top.number("theta_max_deg", deg);
    cfg.theta_max = deg_to_rad(deg);
  }

  if (top.has("stack")) {
    const ConfigReader stack(top.at("stack"), "stack");
    stack.reject_unknown({"ring_count", "ring_outer_diameter", "segment_arc_length"});
    stack.integer("ring_count", cfg.stack.ring_count);
    stack.number("ring_outer_diameter", cfg.stack.ring_outer_diameter);
    stack.number("segment_arc_length", cfg.stack.segment_arc_length);
  }

  bool explicit_stroke = false;
  if (top.has("layout")) {
    const ConfigReader layout(top.at("layout"), "layout");
    layout.reject_unknown({"pitch_radius", "angles_deg", "stroke_limit"});
    layout.number("pitch_radius", cfg.layout.pitch_radius);
    if (layout.has("angles_deg")) {
      const json& angles = layout.at("angles_deg");
      if (!angles.is_array() || angles.size() != kTendonCount) {
        throw InvalidConfig("layout.angles_deg", "must be an array of 4 numbers");
      }
      for (std::size_t i = 0; i < kTendonCount; ++i) {
        if (!angles[i].is_number()) {
          throw InvalidConfig("layout.angles_deg", "must be an array of 4 numbers");
        }
        cfg.layout.angles[i] = deg_to_rad(angles[i].get<double>());
      }
    }
    explicit_stroke = layout.has("stroke_limit");
    layout.number("stroke_limit", cfg.layout.stroke_limit);
  }
  if (!explicit_stroke) {
    cfg.layout.stroke_limit = cfg.layout.pitch_radius * cfg.theta_max;
  }

  if (top.has("motor")) {
    const ConfigReader motor(top.at("motor"), "motor");
    motor.reject_unknown({"spool_radius", "gear_ratio", "encoder_counts_per_motor_rev",
                          "max_output_speed", "pid"});
    motor.number("spool_radius", cfg.motor.spool_radius);
    motor.number("gear_ratio", cfg.motor.gear_ratio);
    motor.integer("encoder_counts_per_motor_rev", cfg.motor.encoder_counts_per_motor_rev);
    motor.number("max_output_speed", cfg.motor.max_output_speed);
    if (motor.has("pid")) {
      const ConfigReader pid(motor.at("pid"), "motor.pid");
      pid.reject_unknown({"kp", "ki", "kd"});
      pid.number("kp", cfg.motor.pid.kp);
      pid.number("ki", cfg.motor.pid.ki);
      pid.number("kd", cfg.motor.pid.kd);
    }
  }

  if (top.has("catheter")) {
    const ConfigReader catheter(top.at("catheter"), "catheter");
    catheter.reject_unknown({"catheter_diameter", "catheter_length", "tendon_wire_diameter"});
    catheter.number("catheter_diameter", cfg.catheter.catheter_diameter);
    catheter.number("catheter_length", cfg.catheter.catheter_length);
    catheter.number("tendon_wire_diameter", cfg.catheter.tendon_wire_diameter);
  }

  cfg.validate();
  return cfg;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw InvalidConfig("<file>", e.what());
  }
  return parse_sim_config(text);
}

std::vector<Waypoint> parse_script(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(json_text, e.byte > 0 ? e.byte - 1 : 0);
    throw BadScript("line " + std::to_string(line) + ", column " + std::to_string(column) +
                    ": invalid JSON");
  }
  if (!root.is_array()) {
    throw BadScript("script must be a JSON array of waypoints");
  }

  std::vector<Waypoint> waypoints;
  waypoints.reserve(root.size());
  for (std::size_t i = 0; i < root.size(); ++i) {
    const json& item = root[i];
    const std::string where = "waypoint " + std::to_string(i) + ": ";
    if (!item.is_object()) {
      throw BadScript(where + "must be an object");
    }
    for (const auto& [key, _] : item.items()) {
      if (key != "t_ms" && key != "theta_deg" && key != "phi_deg") {
        throw BadScript(where + "unknown field '" + key + "'");
      }
    }
    Waypoint wp;
    if (!item.contains("t_ms") || !item["t_ms"].is_number_integer()) {
      throw BadScript(where + "field 't_ms' must be an integer");
    }
    wp.t_ms = item["t_ms"].get<std::int64_t>();
    for (const char* key : {"theta_deg", "phi_deg"}) {
      if (!item.contains(key) || !item[key].is_number()) {
        throw BadScript(where + "field '" + key + "' must be a number");
      }
    }
    wp.theta_deg = item["theta_deg"].get<double>();
    wp.phi_deg = item["phi_deg"].get<double>();
    waypoints.push_back(wp);
  }
  validate_script(waypoints);
  return waypoints;
}

std::vector<Waypoint> load_script(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw BadScript(e.what());
  }
  try {
    return parse_script(text);
  } catch (const BadScript& e) {
    throw BadScript(path.string() + ": " + e.what());
  }
}

const std::vector<std::string>& trace_csv_columns() {
  static const std::vector<std::string> columns = {
      "t",        "theta_cmd", "phi_cmd",  "theta_act", "phi_act",  "residual_mm",
      "dl_cmd_0", "dl_cmd_1",  "dl_cmd_2", "dl_cmd_3",  "dl_act_0", "dl_act_1",
      "dl_act_2", "dl_act_3",  "motor_angle_0", "motor_angle_1", "motor_angle_2",
      "motor_angle_3", "tip_x", "tip_y", "tip_z"};
  return columns;
}

std::string format_number(double value) {
  if (value == 0.0) {
    return "0";
  }
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 10);
  return {buffer, result.ptr};
}

void write_trace_csv(std::ostream& out, std::span<const JointSnapshot> trace) {
  const auto& columns = trace_csv_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << columns[i];
  }
  out << '\n';

  const auto deg = [](double rad) { return rad * 180.0 / kPi; };
  std::string row;
  for (const JointSnapshot& snap : trace) {
    row.clear();
    const auto put = [&row](double v) {
      if (!row.empty()) {
        row += ',';
      }
      row += format_number(v);
    };
    put(snap.t);
    put(deg(snap.cmd.theta));
    put(deg(snap.cmd.phi));
    put(deg(snap.achieved.theta));
    put(deg(snap.achieved.phi));
    put(snap.residual);
    for (double v : snap.dl_cmd.dl) put(v);
    for (double v : snap.dl_act.dl) put(v);
    for (const MotorState& m : snap.motors) put(m.actual_angle);
    put(snap.tip.position.x());
    put(snap.tip.position.y());
    put(snap.tip.position.z());
    out << row << '\n';
  }
}

}  // namespace bendjoint
