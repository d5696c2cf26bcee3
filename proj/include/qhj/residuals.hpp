#pragma once

#include "qhj/quantum_dynamics.hpp"
#include "qhj/trajectory.hpp"

namespace qhj {

struct ResidualGrid {
  int nr = 64, ntheta = 32, nphi = 16;
  double r_lo = 0.05;
  double r_hi = 0.0;          // 0 = four times the outer trap radius
  // Distance kept from the angular endpoints. The full equation weights the
  // angular parts by 1/(r^2 sin^2 theta), so pushing this below ~1e-2 turns
  // machine rounding of those parts into noise above any useful bound.
  double edge_margin = 1e-2;
};

struct ComponentResiduals {
  double radial = 0.0, polar = 0.0, azimuthal = 0.0;
  double worst() const;
};

// Max |left side| of each single-coordinate stationary equation over the
// grid. wronskian_scale != 1 deliberately corrupts the second solution so a
// wrong pair must fail loudly.
ComponentResiduals verify_component_qshje(const BoundState& st, const HiddenVariables& hv,
                                          const ResidualGrid& grid = {},
                                          double wronskian_scale = 1.0);

// Max |left side| of the full separated stationary equation on the product
// grid (all three coordinates combined, including the angular 1/(8 r^2)
// pieces).
double verify_full_qshje(const BoundState& st, const HiddenVariables& hv,
                         const ResidualGrid& grid = {});

struct MetricCheck {
  double worst_energy_form = 0.0;       // quadratic-form energy identity
  double worst_fundamental_form = 0.0;  // line-element form of the same data
  long included = 0, excluded = 0;      // samples near turning surfaces are skipped
};

// Reconstructs the diagonal metric coefficients a_qq = (dZ/dq)/(m v_q) from
// trajectory samples and checks both quadratic identities they must satisfy.
MetricCheck verify_metric_identities(const QuantumSystem& sys, const Trajectory& traj,
                                     double velocity_floor = 1e-3);

}  // namespace qhj
