#include "qhj/constants.hpp"

#include <cmath>
#include <stdexcept>

namespace qhj {

namespace {

PhysicalConstants build_constants() {
  PhysicalConstants pc;
  pc.k = 9.0e9;
  pc.a0 = 0.52917e-10;
  pc.m0 = 9.109e-31;
  // E_1 = -k e^2 / (2 a0) must equal -13.6 eV = -13.6 * e joules, so
  // e = 2 * 13.6 * a0 / k.
  pc.e = 2.0 * 13.6 * pc.a0 / pc.k;
  pc.ev = pc.e;
  // a0 = hbar^2 / (m0 k e^2) inverted for hbar.
  pc.hbar = std::sqrt(pc.a0 * pc.m0 * pc.k * pc.e * pc.e);
  pc.energy_unit = pc.k * pc.e * pc.e / pc.a0;
  pc.time_unit = pc.hbar / pc.energy_unit;
  pc.velocity_unit = pc.a0 / pc.time_unit;
  return pc;
}

}  // namespace

const PhysicalConstants& constants() {
  static const PhysicalConstants pc = build_constants();
  return pc;
}

double si_factor(Quantity q) {
  const PhysicalConstants& pc = constants();
  switch (q) {
    case Quantity::Length: return pc.a0;
    case Quantity::Time: return pc.time_unit;
    case Quantity::Energy: return pc.energy_unit;
    case Quantity::Velocity: return pc.velocity_unit;
    case Quantity::Momentum: return pc.m0 * pc.velocity_unit;
    case Quantity::AngularMomentum: return pc.hbar;
    case Quantity::Action: return pc.hbar;
  }
  throw std::invalid_argument("unknown quantity kind");
}

double to_internal(double value, Quantity q) { return value / si_factor(q); }

double from_internal(double internal_value, Quantity q) { return internal_value * si_factor(q); }

double energy_of_level(int n) {
  if (n < 1) throw std::domain_error("principal quantum number must be >= 1");
  return -0.5 / (static_cast<double>(n) * n);
}

double energy_of_level_ev(int n) {
  return energy_of_level(n) * constants().energy_unit / constants().ev;
}

UnitSystem parse_unit_system(const std::string& name) {
  if (name == "internal") return UnitSystem::Internal;
  if (name == "si") return UnitSystem::Si;
  throw std::invalid_argument("unknown unit system '" + name + "' (expected internal or si)");
}

std::string unit_system_name(UnitSystem u) {
  return u == UnitSystem::Internal ? "internal" : "si";
}

}  // namespace qhj
