#pragma once

#include "qhj/basis.hpp"

namespace qhj {

// Microstate parameters: one (a, b) pair and one sign per coordinate. a must
// be nonzero; b and the wronskian-1 pair fix the rest of the congruence.
struct HiddenVariables {
  double a_r = 1.0, b_r = 0.0;
  double a_theta = 1.0, b_theta = 0.0;
  double a_phi = 1.0, b_phi = 0.0;
  int sign_r = 1, sign_theta = 1, sign_phi = 1;
};

void validate_hidden(const HiddenVariables& h);

struct MomentumComponent {
  SolutionPair pair;
  double a = 1.0, b = 0.0;
  int sign = 1;
};

MomentumComponent make_component(SolutionPair pair, double a, double b, int sign);

// Conjugate momentum sign * a / [(a s2 + b s1)^2 + s1^2] in units of hbar.
// The denominator never vanishes because the pair is linearly independent.
double momentum(const MomentumComponent& c, double q);

struct MomentumDerivs {
  double P;           // dZ/dq
  double dP;          // d2Z/dq2
  double schwarzian;  // Z'''/Z' - (3/2) (Z''/Z')^2
};

// Analytic derivatives: with D = (a s2 + b s1)^2 + s1^2,
// D' = 2 (s1 s1' + u u') and D'' = 2 s1'^2 + 2 u'^2 + 2 g D, so no numeric
// differentiation enters the schwarzian.
MomentumDerivs momentum_derivs(const MomentumComponent& c, double q);

// Single-valued continuation of atan((a s2 + b s1)/s1): adds pi * sgn(a) per
// zero of s1 crossed, which makes it monotone with the sign of a.
double reduced_action(const MomentumComponent& c, double q);

// Left-hand side of the single-coordinate stationary equation for this
// component; identically zero when the pair solves the separated ODE with
// unit wronskian. The coordinate stored in the pair picks the equation.
double qshje_residual(const BoundState& st, const MomentumComponent& c, double q);

}  // namespace qhj
