#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qhj/classical_dynamics.hpp"
#include "support.hpp"

namespace {
constexpr double kPi = std::numbers::pi;

Eigen::Vector3d position(const qhj::TrajectorySample& s) {
  const double st = std::sin(s.theta);
  return {s.r * st * std::cos(s.phi), s.r * st * std::sin(s.phi), s.r * std::cos(s.theta)};
}

Eigen::Vector3d velocity(const qhj::TrajectorySample& s) {
  const double st = std::sin(s.theta), ct = std::cos(s.theta);
  const double cp = std::cos(s.phi), sp = std::sin(s.phi);
  const Eigen::Vector3d rhat(st * cp, st * sp, ct);
  const Eigen::Vector3d that(ct * cp, ct * sp, -st);
  const Eigen::Vector3d phat(-sp, cp, 0.0);
  return s.rdot * rhat + s.r * s.thetadot * that + s.r * st * s.phidot * phat;
}

double hermite(double t, const qhj::TrajectorySample& a, const qhj::TrajectorySample& b,
               double qhj::TrajectorySample::* pos, double qhj::TrajectorySample::* vel) {
  const double h = b.t - a.t;
  const double x = (t - a.t) / h;
  const double h00 = (1 + 2 * x) * (1 - x) * (1 - x);
  const double h10 = x * (1 - x) * (1 - x);
  const double h01 = x * x * (3 - 2 * x);
  const double h11 = x * x * (x - 1);
  return h00 * (a.*pos) + h10 * h * (a.*vel) + h01 * (b.*pos) + h11 * h * (b.*vel);
}

qhj::TrajectorySample sample_at(const std::vector<qhj::TrajectorySample>& ss, double t) {
  auto it = std::lower_bound(ss.begin(), ss.end(), t,
                             [](const qhj::TrajectorySample& s, double tt) { return s.t < tt; });
  REQUIRE(it != ss.begin());
  REQUIRE(it != ss.end());
  qhj::TrajectorySample out;
  out.t = t;
  out.r = hermite(t, *(it - 1), *it, &qhj::TrajectorySample::r, &qhj::TrajectorySample::rdot);
  out.theta =
      hermite(t, *(it - 1), *it, &qhj::TrajectorySample::theta, &qhj::TrajectorySample::thetadot);
  out.phi =
      hermite(t, *(it - 1), *it, &qhj::TrajectorySample::phi, &qhj::TrajectorySample::phidot);
  return out;
}
}  // namespace

TEST_CASE("state mapping reproduces the Keplerian constants") {
  const qhj::HiddenVariables hv;
  const qhj::ClassicalParams p =
      qhj::classical_params_from_state(qhj::make_bound_state(2, 1, 1), hv);
  CHECK(p.energy == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK(p.alpha == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(p.beta == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
}

TEST_CASE("m = 0 states have no classical counterpart") {
  const qhj::HiddenVariables hv;
  for (auto [n, l] : {std::pair{1, 0}, {2, 0}, {2, 1}, {3, 2}}) {
    try {
      qhj::classical_params_from_state(qhj::make_bound_state(n, l, 0), hv);
      FAIL("expected a domain_error for m = 0");
    } catch (const std::domain_error& e) {
      CHECK(std::string(e.what()).find("purely quantum") != std::string::npos);
    }
  }
}

TEST_CASE("apsidal radii solve the effective-potential quadratic") {
  const qhj::ClassicalParams p =
      qhj::classical_params_from_state(qhj::make_bound_state(2, 1, 1), qhj::HiddenVariables{});
  const auto [r_lo, r_hi] = qhj::classical_turning_radii(p);
  CHECK(r_lo == doctest::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r_hi == doctest::Approx(4.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-12));
  for (double r : {r_lo, r_hi})
    CHECK(std::abs(2.0 * p.energy * r * r + 2.0 * r - p.alpha) < 1e-10);
}

TEST_CASE("velocity field throws outside the allowed region") {
  const qhj::ClassicalParams p =
      qhj::classical_params_from_state(qhj::make_bound_state(2, 1, 1), qhj::HiddenVariables{});
  CHECK_NOTHROW(qhj::classical_velocity_field(p, 4.0, kPi / 2, 1, 1));
  CHECK_THROWS_AS(qhj::classical_velocity_field(p, 10.0, kPi / 2, 1, 1), std::domain_error);
  CHECK_THROWS_AS(qhj::classical_velocity_field(p, 0.5, kPi / 2, 1, 1), std::domain_error);
  CHECK_THROWS_AS(qhj::classical_velocity_field(p, 4.0, 0.2, 1, 1), std::domain_error);
}

TEST_CASE("orbit closes after one Kepler period and stays planar") {
  const qhj::ClassicalParams p =
      qhj::classical_params_from_state(qhj::make_bound_state(2, 1, 1), qhj::HiddenVariables{});
  qhj::TrajectoryState init;
  init.r = 4.0 - 2.0 * std::sqrt(2.0);
  qhj::IntegratorConfig cfg;
  cfg.t_end = 120.0;
  const qhj::Trajectory traj = qhj::classical_orbit(p, init, cfg);
  REQUIRE(traj.samples.size() > 100);
  CHECK(traj.classical);
  CHECK(traj.mode == "classical");

  // semi-major axis a = -1/(2E) = 4, period 2 pi a^(3/2) = 16 pi
  const double period = 16.0 * kPi;
  const Eigen::Vector3d x0 = position(traj.samples.front());
  for (int k : {1, 2}) {
    const qhj::TrajectorySample sk = sample_at(traj.samples, k * period);
    CHECK((position(sk) - x0).norm() < 1e-6);
  }

  const Eigen::Vector3d lhat0 =
      position(traj.samples.front()).cross(velocity(traj.samples.front())).normalized();
  double worst_tilt = 0.0, worst_energy = 0.0;
  for (const auto& s : traj.samples) {
    const Eigen::Vector3d lhat = position(s).cross(velocity(s)).normalized();
    worst_tilt = std::max(worst_tilt, (lhat - lhat0).norm());
    worst_energy = std::max(worst_energy, std::abs(s.energy_residual));
  }
  CHECK(worst_tilt < 1e-8);
  CHECK(worst_energy < 1e-8);
}

TEST_CASE("turning events land on the apsides with the right spacing") {
  const qhj::ClassicalParams p =
      qhj::classical_params_from_state(qhj::make_bound_state(2, 1, 1), qhj::HiddenVariables{});
  qhj::TrajectoryState init;
  init.r = 4.0;
  qhj::IntegratorConfig cfg;
  cfg.t_end = 120.0;
  const qhj::Trajectory traj = qhj::classical_orbit(p, init, cfg);
  const double r_lo = 4.0 - 2.0 * std::sqrt(2.0);
  const double r_hi = 4.0 + 2.0 * std::sqrt(2.0);
  std::vector<double> lo_times, hi_times;
  for (const auto& ev : traj.events) {
    if (ev.kind != qhj::EventKind::RadialTurn) continue;
    if (std::abs(ev.r - r_lo) < 1e-8)
      lo_times.push_back(ev.t);
    else if (std::abs(ev.r - r_hi) < 1e-8)
      hi_times.push_back(ev.t);
    else
      FAIL("turning event away from both apsides: r = " << ev.r);
  }
  REQUIRE(lo_times.size() >= 2);
  REQUIRE(hi_times.size() >= 2);
  const double period = 16.0 * kPi;
  CHECK(lo_times[1] - lo_times[0] == doctest::Approx(period).epsilon(1e-8));
  CHECK(hi_times[1] - hi_times[0] == doctest::Approx(period).epsilon(1e-8));
}

TEST_CASE("first-order path relations hold along the orbit") {
  const qhj::ClassicalParams p =
      qhj::classical_params_from_state(qhj::make_bound_state(3, 2, 1), qhj::HiddenVariables{});
  qhj::TrajectoryState init;
  init.r = 9.0;
  init.theta = 1.3;
  qhj::IntegratorConfig cfg;
  cfg.t_end = 60.0;
  const qhj::Trajectory traj = qhj::classical_orbit(p, init, cfg);
  REQUIRE(traj.samples.size() > 100);
  CHECK(qhj::classical_path_residual(traj, p) < 1e-6);
}

TEST_CASE("energy and angular momentum are conserved numerically") {
  const qhj::ClassicalParams p =
      qhj::classical_params_from_state(qhj::make_bound_state(2, 1, 1), qhj::HiddenVariables{});
  qhj::TrajectoryState init;
  init.r = 5.0;
  init.theta = 1.1;
  qhj::IntegratorConfig cfg;
  cfg.t_end = 100.0;
  const qhj::Trajectory traj = qhj::classical_orbit(p, init, cfg);
  for (const auto& s : traj.samples) {
    const Eigen::Vector3d x = position(s);
    const Eigen::Vector3d v = velocity(s);
    const double e = 0.5 * v.squaredNorm() - 1.0 / x.norm();
    const double l2 = x.cross(v).squaredNorm();
    const double lz = std::abs(x.cross(v).z());
    CHECK(e == doctest::Approx(p.energy).epsilon(1e-8));
    CHECK(l2 == doctest::Approx(p.alpha).epsilon(1e-8));
    CHECK(lz == doctest::Approx(p.beta).epsilon(1e-8));
  }
}
