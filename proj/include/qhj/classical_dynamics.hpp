#pragma once

#include <Eigen/Dense>

#include "qhj/quantum_dynamics.hpp"
#include "qhj/trajectory.hpp"

namespace qhj {

// Keplerian parameters matching a bound state: energy -1/(2 n^2),
// alpha = l(l+1), beta = sqrt(m^2 - 1/4). States with m = 0 have no
// classical counterpart (beta^2 would be negative) and throw.
ClassicalParams classical_params_from_state(const BoundState& st, const HiddenVariables& hv);

// Signed first-order velocity field (dr/dt, dtheta/dt, dphi/dt). Throws
// std::domain_error outside the classically allowed region.
Eigen::Vector3d classical_velocity_field(const ClassicalParams& p, double r, double theta,
                                         int sign_r, int sign_theta);

// Apsidal radii: roots of 2 E r^2 + 2 r - alpha = 0 (bound motion only).
std::pair<double, double> classical_turning_radii(const ClassicalParams& p);

// Newtonian orbit in spherical coordinates, integrated in second-order form
// so turning points are ordinary zero crossings.
Trajectory classical_orbit(const ClassicalParams& p, const TrajectoryState& init,
                           const IntegratorConfig& cfg);

// Max relative residual of the first-order path relations (dtheta/dr and
// dphi/dr against their quadrature forms) along the samples, skipping
// samples with |dr/dt| or |dtheta/dt| below the floor.
double classical_path_residual(const Trajectory& traj, const ClassicalParams& p,
                               double velocity_floor = 1e-3);

}  // namespace qhj
