#include "qhj/momenta.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qhj {

namespace {
constexpr double kPi = std::numbers::pi;

struct Denominator {
  double D, dD, ddD;
  double s1v;
};

Denominator denominator(const MomentumComponent& c, double q) {
  const Eval s1 = c.pair.s1(q);
  const Eval s2 = c.pair.s2(q);
  const double u = c.a * s2.value + c.b * s1.value;
  const double du = c.a * s2.deriv + c.b * s1.deriv;
  Denominator d;
  d.s1v = s1.value;
  d.D = u * u + s1.value * s1.value;
  d.dD = 2.0 * (s1.value * s1.deriv + u * du);
  d.ddD = 2.0 * (s1.deriv * s1.deriv + du * du) + 2.0 * c.pair.ode_g(q) * d.D;
  return d;
}

}  // namespace

void validate_hidden(const HiddenVariables& h) {
  if (h.a_r == 0.0 || h.a_theta == 0.0 || h.a_phi == 0.0)
    throw std::domain_error("hidden variable 'a' must be nonzero for every coordinate");
  for (int s : {h.sign_r, h.sign_theta, h.sign_phi})
    if (s != 1 && s != -1) throw std::domain_error("hidden signs must be +1 or -1");
}

MomentumComponent make_component(SolutionPair pair, double a, double b, int sign) {
  if (a == 0.0) throw std::domain_error("hidden variable 'a' must be nonzero");
  if (sign != 1 && sign != -1) throw std::domain_error("sign must be +1 or -1");
  return MomentumComponent{std::move(pair), a, b, sign};
}

double momentum(const MomentumComponent& c, double q) {
  return c.sign * c.a / denominator(c, q).D;
}

MomentumDerivs momentum_derivs(const MomentumComponent& c, double q) {
  const Denominator d = denominator(c, q);
  MomentumDerivs out;
  out.P = c.sign * c.a / d.D;
  out.dP = -c.sign * c.a * d.dD / (d.D * d.D);
  const double ratio = d.dD / d.D;
  out.schwarzian = 0.5 * ratio * ratio - d.ddD / d.D;
  return out;
}

double reduced_action(const MomentumComponent& c, double q) {
  const double ref = c.pair.action_ref;
  const double sa = c.a > 0 ? 1.0 : -1.0;
  int n = s1_zero_count_between(c.pair, ref, q);
  if (q < ref) n = -n;

  const Eval s1 = c.pair.s1(q);
  double base;
  if (s1.value == 0.0) {
    // Exactly on a zero of s1: the continuous value is the right-sided limit.
    base = -sa * kPi / 2 + (q > ref ? sa * kPi : 0.0);
  } else {
    const Eval s2 = c.pair.s2(q);
    base = std::atan((c.a * s2.value + c.b * s1.value) / s1.value);
  }
  return c.sign * (base + kPi * sa * n);
}

double qshje_residual(const BoundState& st, const MomentumComponent& c, double q) {
  const MomentumDerivs md = momentum_derivs(c, q);
  switch (c.pair.coordinate) {
    case Coordinate::Radial:
      return 0.5 * md.P * md.P + 0.25 * md.schwarzian - 1.0 / q +
             st.lambda / (2.0 * q * q) - st.energy;
    case Coordinate::Polar: {
      const double s = std::sin(q);
      const double m2q = static_cast<double>(st.m) * st.m - 0.25;
      return md.P * md.P + 0.5 * md.schwarzian + m2q / (s * s) - (st.lambda + 0.25);
    }
    case Coordinate::Azimuthal:
      return md.P * md.P + 0.5 * md.schwarzian - static_cast<double>(st.m) * st.m;
  }
  throw std::logic_error("unknown coordinate");
}

}  // namespace qhj
