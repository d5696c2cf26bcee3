#pragma once

#include <string>

namespace qhj {

// Internal unit system: hbar = m0 = a0 = 1 and k*e^2 = 1. Energies come out
// in units of k*e^2/a0 (27.2 eV), times in units of m0*a0^2/hbar.
struct PhysicalConstants {
  double k;             // Coulomb constant [N m^2 C^-2]
  double a0;            // Bohr radius [m]
  double m0;            // electron rest mass [kg]
  double e;             // elementary charge [C]
  double hbar;          // reduced Planck constant [J s]
  double energy_unit;   // k*e^2/a0 [J], one internal energy unit
  double time_unit;     // hbar/energy_unit [s]
  double velocity_unit; // a0/time_unit [m/s]
  double ev;            // one electron-volt [J]
};

// Rounded textbook values, with e chosen so the n=1 level is -13.6 eV exactly
// and hbar chosen so a0 = hbar^2/(m0 k e^2) holds exactly.
const PhysicalConstants& constants();

enum class UnitSystem { Internal, Si };

enum class Quantity { Length, Time, Energy, Velocity, Momentum, AngularMomentum, Action };

// Multiply an internal value by this to get SI.
double si_factor(Quantity q);

double to_internal(double value, Quantity q);
double from_internal(double internal_value, Quantity q);

// Bound-level energy -1/(2 n^2) in internal units.
double energy_of_level(int n);

// Same level in electron-volts.
double energy_of_level_ev(int n);

UnitSystem parse_unit_system(const std::string& name);
std::string unit_system_name(UnitSystem u);

}  // namespace qhj
