// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bendjoint/io.hpp"
#include "bendjoint/joint_sim.hpp"
#include "bendjoint/kinematics.hpp"
#include "bendjoint/protocol.hpp"
#include "bendjoint/teleop_core.hpp"
#include "bendjoint/tendon.hpp"
#include "oracles.hpp"

using namespace bendjoint;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  const char* name;
  std::function<Outcome()> check;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::filesystem::path script_path(const char* name) {
  return std::filesystem::path(BENDJOINT_SCRIPTS_DIR) / name;
}

std::string trace_to_csv(const std::vector<JointSnapshot>& trace) {
  std::ostringstream out;
  write_trace_csv(out, trace);
  return out.str();
}

// Offline run of a bundled max-bend script; the script holds 90 degrees for
// 2 s after reaching it.
Outcome max_bend(const char* script, double phi_deg) {
  const auto start = std::chrono::steady_clock::now();
  JointSim sim(SimConfig{});
  const auto trace = run_script(sim, load_script(script_path(script)));
  const std::string csv = trace_to_csv(trace);
  const double runtime = seconds_since(start);

  const JointSnapshot& last = trace.back();
  const double theta = last.achieved.theta / kDeg;
  double phi_err = std::abs(std::remainder(last.achieved.phi / kDeg - phi_deg, 360.0));
  Outcome o;
  o.pass = last.t >= 2.999 && std::abs(theta - 90.0) <= 0.5 && phi_err < 1.0 && runtime < 5.0 &&
           !csv.empty();
  o.detail = fmt("theta_act=%.4f deg phi_err=%.4f deg runtime=%.3f s", theta, phi_err, runtime);
  return o;
}

// Algebraic (Kasa) circle fit in the x-y plane: returns centre and radius of
// each point about it.
std::vector<double> circle_radii(const std::vector<Eigen::Vector3d>& points) {
  Eigen::MatrixXd a(points.size(), 3);
  Eigen::VectorXd b(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points[i].x();
    const double y = points[i].y();
    a.row(static_cast<Eigen::Index>(i)) << x, y, 1.0;
    b(static_cast<Eigen::Index>(i)) = -(x * x + y * y);
  }
  const Eigen::Vector3d sol = a.colPivHouseholderQr().solve(b);
  const Eigen::Vector2d centre(-sol(0) / 2.0, -sol(1) / 2.0);
  std::vector<double> radii;
  for (const auto& p : points) {
    radii.push_back((p.head<2>() - centre).norm());
  }
  return radii;
}

Outcome omnidirectional() {
  JointSim sim(SimConfig{});
  const auto waypoints = load_script(script_path("fig2c.json"));
  const auto trace = run_script(sim, waypoints);

  // The 36 plane samples are the sweep waypoints from the end of the settle.
  std::vector<Eigen::Vector3d> tips;
  double worst_theta = 0.0;
  for (const Waypoint& wp : waypoints) {
    if (wp.t_ms < 2000 || wp.phi_deg >= 360.0) {
      continue;
    }
    const auto it = std::lower_bound(
        trace.begin(), trace.end(), static_cast<double>(wp.t_ms) / 1000.0 - 1e-9,
        [](const JointSnapshot& s, double t) { return s.t < t; });
    if (it == trace.end()) {
      return {false, "trace ends before the sweep"};
    }
    tips.push_back(it->tip.position);
    worst_theta = std::max(worst_theta, std::abs(it->achieved.theta / kDeg - 30.0));
  }
  const auto radii = circle_radii(tips);
  double mean = 0.0;
  for (double r : radii) {
    mean += r;
  }
  mean /= static_cast<double>(radii.size());
  double var = 0.0;
  for (double r : radii) {
    var += (r - mean) * (r - mean);
  }
  const double sd = std::sqrt(var / static_cast<double>(radii.size()));

  Outcome o;
  o.pass = tips.size() == 36 && sd < 0.01 * mean && worst_theta < 0.5;
  o.detail = fmt("planes=%.0f radius=%.4f mm sd/mean=%.2e", static_cast<double>(tips.size()),
                 mean, sd / mean) +
             fmt(" worst theta err=%.4f deg", worst_theta);
  return o;
}

Outcome tendon_law() {
  const TendonLayout layout;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> theta(0.0, kPi / 2.0);
  std::uniform_real_distribution<double> phi(0.0, 2.0 * kPi);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto dl = allocate({theta(rng), phi(rng)}, layout);
    worst = std::max({worst, std::abs(dl[0] + dl[2]), std::abs(dl[1] + dl[3])});
  }
  const auto quarter = allocate({kPi / 2.0, 0.0}, layout);
  const double pulled = std::abs(quarter[0]);
  Outcome o;
  o.pass = worst < 1e-12 && std::abs(pulled - 3.92699) <= 1e-6 && quarter[0] < 0.0;
  o.detail = fmt("max pair sum=%.1e mm pulled=%.7f mm", worst, pulled);
  return o;
}

Outcome kinematics_oracle() {
  const auto start = std::chrono::steady_clock::now();
  const double length = 40.0;
  double worst_fk = 0.0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double th = kPi * i / 19.0;
      const double ph = 2.0 * kPi * j / 20.0;
      const Eigen::Vector3d closed = fk_tip({th, ph, length}).position;
      const Eigen::Vector3d numeric = oracle::integrate_arc(th, ph, length, 10000);
      worst_fk = std::max(worst_fk, (closed - numeric).norm());
    }
  }

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> theta(1e-3, kPi / 2.0);
  std::uniform_real_distribution<double> phi(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> len(10.0, 80.0);
  double worst_ik = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ArcParams arc{theta(rng), phi(rng), len(rng)};
    const IkSolution ik = ik_tip(fk_tip(arc).position, arc.arc_length);
    const double dphi = std::abs(std::remainder(ik.arc.phi - arc.phi, 2.0 * kPi));
    worst_ik = std::max({worst_ik, std::abs(ik.arc.theta - arc.theta), dphi});
  }
  const double runtime = seconds_since(start);
  Outcome o;
  o.pass = worst_fk < 1e-6 && worst_ik < 1e-9 && runtime < 10.0;
  o.detail = fmt("fk max dev=%.2e mm ik max err=%.2e rad runtime=%.3f s", worst_fk, worst_ik,
                 runtime);
  return o;
}

Outcome jacobian_check() {
  const double length = 40.0;
  const double h = 1e-3;
  double worst = 0.0;
  int checked = 0;
  for (int i = 0; i <= 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      const double th = kPi / 2.0 * i / 12.0;
      const double ph = 2.0 * kPi * (j + 0.25) / 12.0;
      const auto jac = arc_jacobian({th, ph, length});
      // Stay inside the fk domain at the straight end.
      const double th_eval = std::max(th, 2.0 * h);
      const auto jac_eval = arc_jacobian({th_eval, ph, length});
      const Eigen::Vector3d d_theta = oracle::central_difference5(
          [&](double t) { return fk_tip({t, ph, length}).position; }, th_eval, h);
      const Eigen::Vector3d d_phi = oracle::central_difference5(
          [&](double p) { return fk_tip({th, p, length}).position; }, ph, h);
      for (int r = 0; r < 3; ++r) {
        const std::pair<double, double> pairs[] = {{jac_eval(r, 0), d_theta(r)},
                                                   {jac(r, 1), d_phi(r)}};
        for (const auto& [analytic, numeric] : pairs) {
          if (std::abs(analytic) > 1e-3) {
            worst = std::max(worst, std::abs(analytic - numeric) / std::abs(analytic));
            ++checked;
          }
        }
      }
    }
  }
  Outcome o;
  o.pass = worst < 1e-6 && checked > 0;
  o.detail = fmt("entries=%.0f max rel err=%.2e", checked, worst);
  return o;
}

Outcome discretization() {
  const RingStackConfig stack;
  double worst = 0.0;
  for (int i = 0; i <= 18; ++i) {
    const double th = kPi / 2.0 * i / 18.0;
    const auto gaps = ring_gap_angles(fk_ring_poses({th, 1.3, stack.segment_arc_length}, stack));
    if (gaps.size() != 7) {
      return {false, "expected 7 gaps"};
    }
    for (double g : gaps) {
      worst = std::max(worst, std::abs(g - th / 7.0));
    }
  }
  const auto gaps = ring_gap_angles(fk_ring_poses({kPi / 2.0, 0.0, 40.0}, stack));
  double worst_deg = 0.0;
  for (double g : gaps) {
    worst_deg = std::max(worst_deg, std::abs(g / kDeg - 12.857143));
  }
  Outcome o;
  o.pass = worst <= 1e-12 && worst_deg < 5e-7;
  o.detail = fmt("max |gap - theta/7|=%.1e rad, gap at 90 deg=%.7f deg", worst, gaps[0] / kDeg);
  return o;
}

Outcome quantization_bound() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> theta(0.0, 90.0);
  std::uniform_real_distribution<double> phi(0.0, 360.0);
  double worst = 0.0;
  int over = 0;
  JointSim sim(SimConfig{});
  for (int i = 0; i < 100; ++i) {
    sim.home();
    const BendCommand cmd{theta(rng) * kDeg, phi(rng) * kDeg};
    sim.set_target(cmd, 0.0);
    JointSnapshot snap;
    for (int k = 0; k < 2000; ++k) {
      snap = sim.step();
    }
    const double err = std::abs(snap.achieved.theta - cmd.theta) / kDeg;
    worst = std::max(worst, err);
    if (err > 0.35) {
      ++over;
    }
  }
  Outcome o;
  o.pass = worst <= 0.35;
  o.detail = fmt("holds=100 max theta err=%.4f deg, holds over 0.35 deg=%.0f", worst, over);
  return o;
}

Outcome protocol() {
  using namespace teleop;
  std::vector<Message> samples;
  samples.emplace_back(SetTarget{42.5, 271.25, 300});
  samples.emplace_back(Home{});
  samples.emplace_back(Estop{});
  samples.emplace_back(Resume{});
  samples.emplace_back(StreamConfig{25});
  samples.emplace_back(Ack{"set_target", true});
  samples.emplace_back(Error{"bad-field", "theta_deg must be a number"});
  {
    JointSim sim(SimConfig{});
    sim.set_target({0.7, 2.1}, 0.0);
    for (int k = 0; k < 137; ++k) {
      sim.step();
    }
    samples.emplace_back(to_state_frame(sim.snapshot(), sim.target(), false));
  }
  int round_trip_failures = 0;
  for (const Message& m : samples) {
    if (decode(encode(m)) != m) {
      ++round_trip_failures;
    }
  }

  TeleopCore core(SimConfig{}, 50.0);
  core.handle(SetTarget{60, 30, 1000});
  for (int k = 0; k < 20; ++k) {
    core.step();
  }
  core.handle(Estop{});
  std::optional<StateFrame> frozen;
  int frames = 0;
  int moved = 0;
  while (frames < 120) {
    if (auto f = core.step()) {
      if (!frozen) {
        frozen = f;
      } else if (f->dl_cmd != frozen->dl_cmd || !f->estop) {
        ++moved;
      }
      ++frames;
    }
    if (frames == 50) {
      const Message reply = core.handle(SetTarget{10, 0, 0});
      if (!std::holds_alternative<Error>(reply)) {
        ++moved;
      }
    }
  }

  core.handle(Home{});
  core.handle(SetTarget{45, 90, 0});
  int reflected_at = 0;
  for (int n = 1; n <= 2 && reflected_at == 0;) {
    if (auto f = core.step()) {
      if (f->target.theta_deg == 45.0 && f->target.phi_deg == 90.0 && f->cmd.theta_deg == 45.0) {
        reflected_at = n;
      }
      ++n;
    }
  }

  Outcome o;
  o.pass = round_trip_failures == 0 && moved == 0 && frames >= 100 && reflected_at > 0 &&
           core.rate_hz() == 50.0;
  o.detail = fmt("round-trip failures=%.0f, frozen frames=%.0f with %.0f changes", round_trip_failures,
                 frames, moved) +
             fmt(", target visible in frame %.0f", reflected_at);
  return o;
}

Outcome determinism() {
  auto once = [] {
    JointSim sim(SimConfig{});
    return trace_to_csv(run_script(sim, load_script(script_path("fig2c.json"))));
  };
  const std::string a = once();
  const std::string b = once();
  Outcome o;
  o.pass = a == b && !a.empty();
  o.detail = fmt("csv bytes=%.0f identical=%.0f", static_cast<double>(a.size()), a == b ? 1 : 0);
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"max-bend phi=0", [] { return max_bend("fig2a.json", 0.0); }},
      {"max-bend phi=180", [] { return max_bend("fig2b.json", 180.0); }},
      {"omnidirectional sweep", omnidirectional},
      {"tendon law", tendon_law},
      {"kinematics oracle", kinematics_oracle},
      {"jacobian", jacobian_check},
      {"ring discretization", discretization},
      {"quantization bound", quantization_bound},
      {"protocol", protocol},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %-22s %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
