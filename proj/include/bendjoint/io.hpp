#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bendjoint/joint_sim.hpp"

namespace bendjoint {

/// Parses a SimConfig from JSON. Every key is optional and falls back to its
/// default; unknown keys are rejected. Angles are given in degrees:
///
///   {
///     "stack":    {"ring_count": 8, "ring_outer_diameter": 7.0, "segment_arc_length": 40.0},
///     "layout":   {"pitch_radius": 2.5, "angles_deg": [0, 90, 180, 270], "stroke_limit": 3.92699},
///     "motor":    {"spool_radius": 5.0, "gear_ratio": 100, "encoder_counts_per_motor_rev": 12,
///                  "max_output_speed": 6.283185, "pid": {"kp": 40, "ki": 0, "kd": 1}},
///     "catheter": {"catheter_diameter": 3.2, "catheter_length": 1300, "tendon_wire_diameter": 0.16},
///     "dt": 0.001,
///     "theta_max_deg": 90
///   }
///
/// When "stroke_limit" is absent it follows pitch_radius * theta_max.
/// Throws InvalidConfig naming the offending field.
SimConfig parse_sim_config(std::string_view json_text);
SimConfig load_sim_config(const std::filesystem::path& path);

/// Parses a JSON array of {"t_ms": int, "theta_deg": num, "phi_deg": num}.
/// Throws BadScript with line/column for syntax errors and waypoint index and
/// field name for content errors.
std::vector<Waypoint> parse_script(std::string_view json_text);
std::vector<Waypoint> load_script(const std::filesystem::path& path);

/// Column schema of trace CSV files.
const std::vector<std::string>& trace_csv_columns();

/// Writes a header row and one row per snapshot. Angles in degrees except
/// motor_angle_* (spool radians); lengths in mm; t in seconds.
void write_trace_csv(std::ostream& out, std::span<const JointSnapshot> trace);

/// Locale-independent, 10 significant digits; negative zero prints as 0.
std::string format_number(double value);

}  // namespace bendjoint
