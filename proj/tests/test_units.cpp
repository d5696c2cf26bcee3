#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qhj/constants.hpp"

// Oracle values computed by hand from the rounded constants:
//   e    = 2 * 13.6 * a0 / k = 2 * 13.6 * 0.52917e-10 / 9e9
//   E_n  = -13.6 / n^2 eV by construction
//   1 internal energy unit = k e^2 / a0 = 27.2 eV
//   ground-level radius 2 a0 = 1.05834e-10 m

TEST_CASE("rounded constants and the derived charge") {
  const auto& c = qhj::constants();
  CHECK(c.k == doctest::Approx(9e9).epsilon(1e-15));
  CHECK(c.a0 == doctest::Approx(0.52917e-10).epsilon(1e-15));
  CHECK(c.m0 == doctest::Approx(9.109e-31).epsilon(1e-15));
  CHECK(c.e == doctest::Approx(2.0 * 13.6 * 0.52917e-10 / 9e9).epsilon(1e-14));
  // close to the measured 1.602e-19 C even though it is derived
  CHECK(c.e == doctest::Approx(1.602e-19).epsilon(3e-3));
  // a0 = hbar^2 / (m0 k e^2) must hold exactly by construction
  CHECK(c.hbar * c.hbar / (c.m0 * c.k * c.e * c.e) ==
        doctest::Approx(c.a0).epsilon(1e-14));
  CHECK(c.hbar == doctest::Approx(1.0546e-34).epsilon(2e-3));
  CHECK(c.energy_unit == doctest::Approx(c.k * c.e * c.e / c.a0).epsilon(1e-14));
  CHECK(c.energy_unit / c.ev == doctest::Approx(27.2).epsilon(1e-12));
  CHECK(c.time_unit == doctest::Approx(c.hbar / c.energy_unit).epsilon(1e-14));
}

TEST_CASE("bound level energies") {
  CHECK(qhj::energy_of_level(1) == -0.5);
  CHECK(qhj::energy_of_level(2) == -0.125);
  CHECK(qhj::energy_of_level(3) == doctest::Approx(-1.0 / 18.0).epsilon(1e-15));
  CHECK(qhj::energy_of_level_ev(1) == doctest::Approx(-13.6).epsilon(1e-12));
  CHECK(qhj::energy_of_level_ev(2) == doctest::Approx(-3.4).epsilon(1e-12));
  CHECK_THROWS_AS(qhj::energy_of_level(0), std::domain_error);
  CHECK_THROWS_AS(qhj::energy_of_level(-2), std::domain_error);
}

TEST_CASE("length conversion puts the ground-level outer radius at 2") {
  const double si = 1.05834e-10;  // metres
  CHECK(qhj::to_internal(si, qhj::Quantity::Length) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(qhj::from_internal(2.0, qhj::Quantity::Length) == doctest::Approx(si).epsilon(1e-12));
}

TEST_CASE("unit round trips for every quantity") {
  using Q = qhj::Quantity;
  for (Q q : {Q::Length, Q::Time, Q::Energy, Q::Velocity, Q::Momentum, Q::AngularMomentum,
              Q::Action}) {
    const double v = 0.8125;
    CHECK(qhj::to_internal(qhj::from_internal(v, q), q) == doctest::Approx(v).epsilon(1e-14));
    CHECK(qhj::si_factor(q) > 0.0);
  }
  // one SI hbar of action is one internal unit
  CHECK(qhj::to_internal(qhj::constants().hbar, qhj::Quantity::Action) ==
        doctest::Approx(1.0).epsilon(1e-14));
  // derived factors agree with their definitions
  const auto& c = qhj::constants();
  CHECK(qhj::si_factor(qhj::Quantity::Velocity) ==
        doctest::Approx(c.a0 / c.time_unit).epsilon(1e-14));
  CHECK(qhj::si_factor(qhj::Quantity::Momentum) ==
        doctest::Approx(c.m0 * c.a0 / c.time_unit).epsilon(1e-14));
}

TEST_CASE("unit system names parse both ways") {
  CHECK(qhj::parse_unit_system("internal") == qhj::UnitSystem::Internal);
  CHECK(qhj::parse_unit_system("si") == qhj::UnitSystem::Si);
  CHECK(qhj::unit_system_name(qhj::UnitSystem::Si) == "si");
  CHECK(qhj::unit_system_name(qhj::UnitSystem::Internal) == "internal");
  CHECK_THROWS_AS(qhj::parse_unit_system("cgs"), std::invalid_argument);
}
