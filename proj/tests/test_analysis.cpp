#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qhj/analysis.hpp"
#include "support.hpp"

namespace {
qhj::HiddenVariables hv_radial(double a, double b) {
  qhj::HiddenVariables h;
  h.a_r = a;
  h.b_r = b;
  return h;
}

std::vector<qhj::Trajectory> ensemble(const qhj::BoundState& st, int count, uint64_t seed,
                                      double t_end) {
  oracle::SplitMix64 rng{seed};
  const qhj::TrapZone z = qhj::trap_zone(st);
  std::vector<qhj::Trajectory> out;
  for (int i = 0; i < count; ++i) {
    qhj::HiddenVariables hv;
    hv.a_r = rng.in(0.3, 2.2);
    hv.b_r = rng.in(-0.8, 0.8);
    hv.a_theta = rng.in(0.3, 2.2);
    hv.b_theta = rng.in(-0.8, 0.8);
    hv.a_phi = rng.in(0.3, 2.2);
    hv.b_phi = rng.in(-0.8, 0.8);
    const qhj::QuantumSystem sys = qhj::make_quantum_system(st, hv);
    qhj::TrajectoryState init;
    init.r = z.contains_origin ? 0.5 * z.r_outer : 0.5 * (z.r_inner + z.r_outer);
    init.theta = sys.has_polar_band ? 0.5 * (sys.theta_lo + sys.theta_hi) : 2.0;
    qhj::IntegratorConfig cfg;
    cfg.t_end = t_end;
    cfg.max_radial_events = 6;
    out.push_back(qhj::integrate_time_trajectory(sys, init, cfg));
  }
  return out;
}
}  // namespace

TEST_CASE("trap zones match the frozen radii") {
  const qhj::TrapZone z100 = qhj::trap_zone(qhj::make_bound_state(1, 0, 0));
  CHECK(z100.contains_origin);
  CHECK(z100.r_inner == 0.0);
  CHECK(z100.r_outer == doctest::Approx(2.0).epsilon(1e-12));

  const qhj::TrapZone z200 = qhj::trap_zone(qhj::make_bound_state(2, 0, 0));
  CHECK(z200.contains_origin);
  CHECK(z200.r_inner == 0.0);
  CHECK(z200.r_outer == doctest::Approx(8.0).epsilon(1e-12));

  for (int m : {0, 1}) {
    const qhj::TrapZone z = qhj::trap_zone(qhj::make_bound_state(2, 1, m));
    CHECK(!z.contains_origin);
    CHECK(z.r_inner == doctest::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(z.r_outer == doctest::Approx(4.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("zone boundaries are roots of the bracket function") {
  for (auto [n, l] : {std::pair{2, 1}, {3, 1}, {3, 2}, {4, 3}}) {
    const qhj::BoundState st = qhj::make_bound_state(n, l, 0);
    const qhj::TrapZone z = qhj::trap_zone(st);
    for (double r : {z.r_inner, z.r_outer}) {
      const double f = st.energy * r * r + r - 0.5 * st.lambda;
      CHECK(std::abs(f) < 1e-9);
    }
    CHECK(z.r_inner < z.r_outer);
  }
}

TEST_CASE("expected node catalog: shell pair, or origin plus doubled shell") {
  const qhj::NodeExpectation e211 = qhj::expected_node_count(qhj::make_bound_state(2, 1, 1));
  CHECK(e211.count == 2);
  REQUIRE(e211.radii.size() == 2);
  CHECK(e211.radii[0] == doctest::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(e211.radii[1] == doctest::Approx(4.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-12));

  const qhj::NodeExpectation e100 = qhj::expected_node_count(qhj::make_bound_state(1, 0, 0));
  CHECK(e100.count == 3);
  REQUIRE(e100.radii.size() == 3);
  CHECK(e100.radii[0] == 0.0);
  CHECK(e100.radii[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(e100.radii[2] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("node detection needs at least two trajectories") {
  std::vector<qhj::Trajectory> one = ensemble(qhj::make_bound_state(1, 0, 0), 1, 5, 5.0);
  CHECK_THROWS_AS(qhj::detect_nodes(one), std::invalid_argument);
}

TEST_CASE("ensembles cluster their turning points on the zone walls") {
  const qhj::BoundState st = qhj::make_bound_state(2, 1, 1);
  const qhj::TrapZone z = qhj::trap_zone(st);
  // Walls are reached only asymptotically; give every draw time for several
  // radial excursions so both walls collect turning events.
  const std::vector<qhj::Trajectory> trajs = ensemble(st, 4, 2004, 600.0);
  const qhj::NodeCatalog cat = qhj::detect_nodes(trajs);
  bool saw_inner = false, saw_outer = false;
  for (const auto& c : cat.turn_radii) {
    const bool at_inner = std::abs(c.radius - z.r_inner) < 1e-6;
    const bool at_outer = std::abs(c.radius - z.r_outer) < 1e-6;
    CHECK((at_inner || at_outer));
    if (at_inner && c.support >= 2) saw_inner = true;
    if (at_outer && c.support >= 2) saw_outer = true;
  }
  CHECK(saw_inner);
  CHECK(saw_outer);
}

TEST_CASE("origin-reaching states report an origin cluster") {
  const qhj::BoundState st = qhj::make_bound_state(1, 0, 0);
  const std::vector<qhj::Trajectory> trajs = ensemble(st, 4, 77, 40.0);
  const qhj::NodeCatalog cat = qhj::detect_nodes(trajs);
  bool saw_origin = false, saw_outer = false;
  for (const auto& c : cat.turn_radii) {
    if (c.radius < 1e-4 && c.support >= 2) saw_origin = true;
    if (std::abs(c.radius - 2.0) < 1e-6 && c.support >= 2) saw_outer = true;
  }
  CHECK(saw_origin);
  CHECK(saw_outer);
}

TEST_CASE("the inner half-shell of the excited s state is not a node") {
  // Turning happens only on the zone walls r=0 and r=8; the basis zero at
  // r=2 must attract neither turning clusters nor shared spatial cells.
  const qhj::BoundState st = qhj::make_bound_state(2, 0, 0);
  const std::vector<qhj::Trajectory> trajs = ensemble(st, 5, 31415, 50.0);
  const qhj::NodeCatalog cat = qhj::detect_nodes(trajs);
  for (const auto& c : cat.turn_radii) CHECK(std::abs(c.radius - 2.0) > 0.5);
  for (const auto& node : cat.nodes) {
    if (node.support < 3) continue;
    CHECK(std::abs(node.position.norm() - 2.0) > 0.2);
  }
}

TEST_CASE("ejection dichotomy for releases outside and inside the zone") {
  const qhj::BoundState st = qhj::make_bound_state(1, 0, 0);
  const qhj::HiddenVariables hv = hv_radial(1.5, -0.5);
  qhj::IntegratorConfig cfg;
  cfg.t_end = 80.0;

  const qhj::EjectionReport out = qhj::classify_ejection(st, hv, 2.1, cfg);
  CHECK(out.outcome == qhj::EjectionOutcome::Ejected);
  CHECK(out.monotone);
  CHECK(out.r_max >= cfg.ejection_radius * (1.0 - 1e-9));
  CHECK(out.t_reach > 0.0);

  const qhj::EjectionReport in = qhj::classify_ejection(st, hv, 1.0, cfg);
  CHECK(in.outcome == qhj::EjectionOutcome::Trapped);
  CHECK(in.r_max <= 2.0 + 1e-6);
}

TEST_CASE("a release exactly on the outer wall stays trapped") {
  qhj::IntegratorConfig cfg;
  cfg.t_end = 80.0;
  const qhj::EjectionReport rep =
      qhj::classify_ejection(qhj::make_bound_state(1, 0, 0), qhj::HiddenVariables{}, 2.0, cfg);
  CHECK(rep.outcome == qhj::EjectionOutcome::Trapped);
  CHECK(rep.r_max <= 2.0 + 1e-6);
}

TEST_CASE("an indeterminate run refuses to classify") {
  qhj::IntegratorConfig cfg;
  cfg.t_end = 1e-4;  // too short to touch either wall
  CHECK_THROWS_AS(
      qhj::classify_ejection(qhj::make_bound_state(1, 0, 0), qhj::HiddenVariables{}, 1.0, cfg),
      std::runtime_error);
}
