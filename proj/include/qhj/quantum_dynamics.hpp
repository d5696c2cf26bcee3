#pragma once

#include <Eigen/Dense>

#include "qhj/trajectory.hpp"

namespace qhj {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.5;
  double t_end = 200.0;
  double turn_window = 1e-10;      // flip distance at asymptotic turning surfaces
  double r_min_guard = 1e-6;       // reflective floor above the origin
  double theta_guard = 1e-6;       // reflective guard at the polar axis
  double ejection_radius = 100.0;  // escape march records out to here
  long max_steps = 4000000;
  int max_radial_events = 0;       // stop after this many boundary touches (0 = none)
};

// Closed-form bridge between the azimuthal angle and the azimuthal reduced
// action (in units of hbar, sign included). For m = 0 the action is bounded
// and phi refolds from the opposite end each time a branch edge is crossed;
// fold_index tracks the branch.
class AzimuthalActionMap {
 public:
  AzimuthalActionMap() = default;
  AzimuthalActionMap(int m_abs, double a, double b, int sign);

  double action(double phi) const;
  double phi_of_action(double action) const;
  int fold_index(double action) const;  // always 0 for m != 0

 private:
  int m_ = 0;
  double a_ = 1.0, b_ = 0.0;
  int sign_ = 1;
};

// Everything needed to evolve one microstate: the three momentum components
// (stored with sign +1; the dynamic signs live in the integrator), the
// azimuthal bridge, and the confinement geometry.
struct QuantumSystem {
  BoundState state;
  HiddenVariables hidden;
  MomentumComponent radial, polar, azimuthal;
  AzimuthalActionMap az_map;
  double r_inner = 0.0, r_outer = 0.0;
  bool contains_origin = false;
  double theta_lo = 0.0, theta_hi = 0.0;  // polar turning band for |m| >= 1
  bool has_polar_band = false;
};

QuantumSystem make_quantum_system(const BoundState& st, const HiddenVariables& hv,
                                  double r_domain_hi = 140.0);

// (dr/dt, dtheta/dt, dphi/dt) at a point for given instantaneous signs.
Eigen::Vector3d velocity_field(const QuantumSystem& sys, double r, double theta, double phi,
                               int sign_r, int sign_theta, int sign_phi);

// Relative residual of the kinetic-energy identity
// r' dZ/dr + theta' dL/dtheta + phi' dM/dphi = 2 (E - V).
double energy_identity_residual(const QuantumSystem& sys, double r, double theta, double phi,
                                int sign_r, int sign_theta, int sign_phi);

Trajectory integrate_time_trajectory(const QuantumSystem& sys, const TrajectoryState& init,
                                     const IntegratorConfig& cfg);

// Same orbit marched in r segment by segment between the confinement
// boundaries; time is carried as a quadrature. The cross-equation residual
// linking the polar and azimuthal advances is monitored along the way.
Trajectory integrate_spatial_orbit(const QuantumSystem& sys, const TrajectoryState& init,
                                   const IntegratorConfig& cfg);

struct AngularSample {
  double phi = 0.0, theta = 0.0;
};

struct AngularPath {
  std::vector<AngularSample> samples;
  std::vector<TrajectoryEvent> events;
};

// theta as a function of phi (radius drops out of the ratio).
AngularPath integrate_angular_path(const QuantumSystem& sys, double theta0, double phi0,
                                   double phi_span, const IntegratorConfig& cfg);

}  // namespace qhj
