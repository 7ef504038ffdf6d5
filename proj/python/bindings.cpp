#include <sstream>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bendjoint/errors.hpp"
#include "bendjoint/io.hpp"
#include "bendjoint/joint_sim.hpp"
#include "bendjoint/kinematics.hpp"
#include "bendjoint/protocol.hpp"
#include "bendjoint/tendon.hpp"

namespace py = pybind11;
using namespace bendjoint;

namespace {

SimConfig config_from(const std::optional<std::string>& json) {
  return json ? parse_sim_config(*json) : SimConfig{};
}

py::dict snapshot_dict(const JointSnapshot& s) {
  py::dict d;
  d["t"] = s.t;
  d["theta_cmd"] = s.cmd.theta;
  d["phi_cmd"] = s.cmd.phi;
  d["theta_act"] = s.achieved.theta;
  d["phi_act"] = s.achieved.phi;
  d["residual_mm"] = s.residual;
  d["dl_cmd"] = s.dl_cmd.dl;
  d["dl_act"] = s.dl_act.dl;
  std::array<double, kTendonCount> angles{};
  std::array<std::int64_t, kTendonCount> counts{};
  for (std::size_t i = 0; i < kTendonCount; ++i) {
    angles[i] = s.motors[i].actual_angle;
    counts[i] = s.motors[i].encoder_count;
  }
  d["motor_angle"] = angles;
  d["encoder_count"] = counts;
  d["tip"] = Eigen::Vector3d(s.tip.position);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Constant-curvature tendon joint: kinematics, tendon allocation and simulation";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) {
        std::rethrow_exception(p);
      }
    } catch (const LimitExceeded& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const BadScript& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const teleop::ProtocolError& e) {
      PyErr_SetString(PyExc_ValueError, (e.code() + ": " + e.what()).c_str());
    }
  });

  m.def(
      "fk_tip",
      [](double theta, double phi, double arc_length) {
        const Pose p = fk_tip({theta, phi, arc_length});
        return py::make_tuple(Eigen::Vector3d(p.position), Eigen::Matrix3d(p.orientation));
      },
      py::arg("theta"), py::arg("phi"), py::arg("arc_length"),
      "Tip (position, rotation) of the arc; angles in radians, lengths in mm.");

  m.def(
      "fk_ring_poses",
      [](double theta, double phi, double arc_length, int ring_count) {
        RingStackConfig stack;
        stack.ring_count = ring_count;
        py::list out;
        for (const Pose& p : fk_ring_poses({theta, phi, arc_length}, stack)) {
          out.append(py::make_tuple(Eigen::Vector3d(p.position), Eigen::Matrix3d(p.orientation)));
        }
        return out;
      },
      py::arg("theta"), py::arg("phi"), py::arg("arc_length"), py::arg("ring_count") = 8);

  m.def(
      "ik_tip",
      [](const Eigen::Vector3d& target, double arc_length, double theta_max) {
        const IkSolution s = ik_tip(target, arc_length, theta_max);
        return py::make_tuple(s.arc.theta, s.arc.phi, s.residual);
      },
      py::arg("target"), py::arg("arc_length"), py::arg("theta_max") = kDefaultThetaMax,
      "Returns (theta, phi, residual_mm).");

  m.def(
      "arc_jacobian",
      [](double theta, double phi, double arc_length) {
        return Eigen::Matrix<double, 3, 2>(arc_jacobian({theta, phi, arc_length}));
      },
      py::arg("theta"), py::arg("phi"), py::arg("arc_length"));

  m.def(
      "allocate",
      [](double theta, double phi) { return allocate({theta, phi}, TendonLayout{}).dl; },
      py::arg("theta"), py::arg("phi"), "Tendon displacements (mm) for the default layout.");

  m.def(
      "deallocate",
      [](const std::array<double, kTendonCount>& dl) {
        const Deallocation d = deallocate({dl}, TendonLayout{});
        return py::make_tuple(d.cmd.theta, d.cmd.phi, d.residual);
      },
      py::arg("dl"), "Returns (theta, phi, residual_mm).");

  py::class_<JointSim>(m, "JointSim")
      .def(py::init([](const std::optional<std::string>& config_json) {
             return JointSim(config_from(config_json));
           }),
           py::arg("config_json") = py::none())
      .def(
          "set_target",
          [](JointSim& sim, double theta, double phi, double ramp_ms) {
            return sim.set_target({theta, phi}, ramp_ms).clamped;
          },
          py::arg("theta"), py::arg("phi"), py::arg("ramp_ms") = 0.0,
          "Returns True when theta was clamped to the bend limit.")
      .def("step", [](JointSim& sim) { return snapshot_dict(sim.step()); })
      .def("home", &JointSim::home)
      .def_property_readonly("time", &JointSim::time);

  m.def(
      "run_script",
      [](const std::string& script_json, const std::optional<std::string>& config_json) {
        JointSim sim(config_from(config_json));
        const auto waypoints = parse_script(script_json);
        py::list out;
        for (const JointSnapshot& s : run_script(sim, waypoints)) {
          out.append(snapshot_dict(s));
        }
        return out;
      },
      py::arg("script_json"), py::arg("config_json") = py::none(),
      "Runs a waypoint script and returns one dict per step.");

  m.def(
      "run_script_csv",
      [](const std::string& script_json, const std::optional<std::string>& config_json) {
        JointSim sim(config_from(config_json));
        const auto waypoints = parse_script(script_json);
        std::ostringstream out;
        write_trace_csv(out, run_script(sim, waypoints));
        return out.str();
      },
      py::arg("script_json"), py::arg("config_json") = py::none());

  m.def(
      "normalize_message",
      [](const std::string& frame) { return teleop::encode(teleop::decode(frame)); },
      py::arg("frame"), "Decodes a teleoperation frame and re-encodes it canonically.");
}
