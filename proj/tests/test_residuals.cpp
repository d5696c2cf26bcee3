#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qhj/residuals.hpp"
#include "support.hpp"

namespace {
qhj::HiddenVariables hv_all(double ar, double br, double at, double bt, double ap, double bp) {
  qhj::HiddenVariables h;
  h.a_r = ar;
  h.b_r = br;
  h.a_theta = at;
  h.b_theta = bt;
  h.a_phi = ap;
  h.b_phi = bp;
  return h;
}
}  // namespace

TEST_CASE("single-coordinate stationary equations hold on the verification grid") {
  oracle::SplitMix64 rng{424242};
  for (auto [n, l, m] : {std::tuple{1, 0, 0}, {2, 0, 0}, {2, 1, 0}, {2, 1, 1}}) {
    const qhj::BoundState st = qhj::make_bound_state(n, l, m);
    for (int draw = 0; draw < 2; ++draw) {
      const qhj::HiddenVariables hv =
          hv_all(rng.in(0.3, 2.2), rng.in(-0.8, 0.8), rng.in(0.3, 2.2), rng.in(-0.8, 0.8),
                 rng.in(0.3, 2.2), rng.in(-0.8, 0.8));
      const qhj::ComponentResiduals cr = qhj::verify_component_qshje(st, hv);
      CHECK(cr.radial < 1e-5);
      CHECK(cr.polar < 1e-5);
      CHECK(cr.azimuthal < 1e-5);
      CHECK(cr.worst() < 1e-5);
    }
  }
}

TEST_CASE("the full separated equation holds on the product grid") {
  const qhj::HiddenVariables hv = hv_all(1.3, -0.4, 0.7, 0.2, 1.1, -0.2);
  CHECK(qhj::verify_full_qshje(qhj::make_bound_state(1, 0, 0), hv) < 1e-5);
  CHECK(qhj::verify_full_qshje(qhj::make_bound_state(2, 1, 1), hv) < 1e-5);
}

TEST_CASE("a corrupted second solution fails the check loudly") {
  const qhj::BoundState st = qhj::make_bound_state(2, 1, 1);
  const qhj::HiddenVariables hv = hv_all(1.0, 0.0, 1.0, 0.0, 1.0, 0.0);
  const qhj::ComponentResiduals good = qhj::verify_component_qshje(st, hv);
  CHECK(good.worst() < 1e-5);
  const qhj::ComponentResiduals bad = qhj::verify_component_qshje(st, hv, {}, 1.01);
  CHECK(bad.radial > 1e-5);
  CHECK(bad.polar > 1e-5);
  CHECK(bad.azimuthal > 1e-5);
}

TEST_CASE("a coarse custom grid reports the same magnitudes") {
  qhj::ResidualGrid grid;
  grid.nr = 16;
  grid.ntheta = 8;
  grid.nphi = 4;
  const qhj::HiddenVariables hv = hv_all(0.9, 0.3, 1.4, -0.5, 0.6, 0.2);
  const qhj::ComponentResiduals cr =
      qhj::verify_component_qshje(qhj::make_bound_state(2, 1, 0), hv, grid);
  CHECK(cr.worst() < 1e-5);
  CHECK(qhj::verify_full_qshje(qhj::make_bound_state(2, 1, 0), hv, grid) < 1e-5);
}

TEST_CASE("metric coefficients reconstructed from an orbit satisfy both forms") {
  const qhj::BoundState st = qhj::make_bound_state(2, 1, 1);
  const qhj::HiddenVariables hv = hv_all(3.1, -0.4, 0.6, -0.2, 1.0, 0.0);
  const qhj::QuantumSystem sys = qhj::make_quantum_system(st, hv);
  qhj::TrajectoryState init;
  init.r = 4.0;
  qhj::IntegratorConfig cfg;
  cfg.t_end = 40.0;
  const qhj::Trajectory traj = qhj::integrate_time_trajectory(sys, init, cfg);
  const qhj::MetricCheck mc = qhj::verify_metric_identities(sys, traj);
  CHECK(mc.included > 100);
  CHECK(mc.excluded > 0);  // samples pinned at the turning walls are skipped
  CHECK(mc.worst_energy_form < 1e-9);
  CHECK(mc.worst_fundamental_form < 1e-9);
}
