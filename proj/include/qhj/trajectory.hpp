#pragma once

#include <string>
#include <vector>

#include "qhj/basis.hpp"
#include "qhj/momenta.hpp"

namespace qhj {

struct TrajectoryState {
  double t = 0.0;
  double r = 1.0;
  double theta = 1.5707963267948966;  // pi/2
  double phi = 0.0;
};

enum class EventKind { RadialTurn, PolarTurn, SignFlip, PolePass, OriginApproach, Ejection };
std::string event_kind_name(EventKind k);

struct TrajectoryEvent {
  double t = 0.0;
  EventKind kind = EventKind::RadialTurn;
  double r = 0.0, theta = 0.0, phi = 0.0;
};

enum class Termination { ReachedTimeEnd, Ejected, RadialEventLimit, StepLimit, Stalled };
std::string termination_name(Termination t);

struct TrajectorySample {
  double t = 0.0, r = 0.0, theta = 0.0, phi = 0.0;
  double rdot = 0.0, thetadot = 0.0, phidot = 0.0;
  double energy_residual = 0.0;  // relative residual of the kinetic-energy identity
};

// Keplerian parameters: energy, squared total angular momentum alpha and
// unsigned azimuthal angular momentum beta, plus initial velocity signs.
struct ClassicalParams {
  double energy = -0.125;
  double alpha = 2.0;
  double beta = 0.0;
  int sign_r = 1, sign_theta = 1, sign_phi = 1;
};

struct Trajectory {
  BoundState state;
  HiddenVariables hidden;
  bool classical = false;
  ClassicalParams classical_params;
  std::string mode = "time";  // time | spatial | classical
  std::vector<TrajectorySample> samples;
  std::vector<TrajectoryEvent> events;
  Termination termination = Termination::ReachedTimeEnd;
  int radial_boundary_events = 0;
  double max_aux_residual = 0.0;  // spatial mode: worst cross-equation residual
};

}  // namespace qhj
