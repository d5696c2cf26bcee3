#include "qhj/classical_dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qhj/ode.hpp"

namespace qhj {

namespace {
constexpr double kPi = std::numbers::pi;
}

ClassicalParams classical_params_from_state(const BoundState& st, const HiddenVariables& hv) {
  const double beta2 = static_cast<double>(st.m) * st.m - 0.25;
  if (beta2 < 0.0)
    throw std::domain_error(
        "state with m = 0 has squared azimuthal momentum m^2 - 1/4 = -1/4 < 0: purely quantum "
        "motion with no classical counterpart");
  ClassicalParams p;
  p.energy = st.energy;
  p.alpha = st.lambda;
  p.beta = std::sqrt(beta2);
  p.sign_r = hv.sign_r;
  p.sign_theta = hv.sign_theta;
  p.sign_phi = hv.sign_phi;
  if (p.alpha <= 0.0) throw std::domain_error("classical map needs l >= 1");
  return p;
}

Eigen::Vector3d classical_velocity_field(const ClassicalParams& p, double r, double theta,
                                         int sign_r, int sign_theta) {
  const double s = std::sin(theta);
  const double rad_r = 2.0 * (p.energy + 1.0 / r - p.alpha / (2.0 * r * r));
  const double rad_th = p.alpha - p.beta * p.beta / (s * s);
  const double tol = 1e-12 * (std::abs(p.energy) + 1.0 / r + 1.0);
  if (rad_r < -tol || rad_th < -1e-12 * (p.alpha + 1.0))
    throw std::domain_error("classically forbidden point");
  const double r2 = r * r;
  return Eigen::Vector3d(sign_r * std::sqrt(std::max(0.0, rad_r)),
                         sign_theta * std::sqrt(std::max(0.0, rad_th)) / r2,
                         p.sign_phi * p.beta / (r2 * s * s));
}

std::pair<double, double> classical_turning_radii(const ClassicalParams& p) {
  if (p.energy >= 0.0) throw std::domain_error("unbound motion has no outer turning radius");
  const double disc = 1.0 + 2.0 * p.energy * p.alpha;
  if (disc < 0.0)
    throw std::domain_error("no classically allowed radii for this energy and alpha");
  const double s = std::sqrt(disc);
  const double inv = 1.0 / (-2.0 * p.energy);
  return {(1.0 - s) * inv, (1.0 + s) * inv};
}

namespace {

// State (r, theta, phi, rdot, thetadot); phi' is algebraic in beta.
struct KeplerRhs {
  const ClassicalParams* p;

  StateVec<5> operator()(double, const StateVec<5>& y) const {
    const double r = y[0], th = y[1], rd = y[3], thd = y[4];
    if (!(r > 1e-12) || !(th > 1e-12 && th < kPi - 1e-12))
      return StateVec<5>::Constant(std::numeric_limits<double>::quiet_NaN());
    const double s = std::sin(th), c = std::cos(th);
    const double r2 = r * r;
    const double phid = p->sign_phi * p->beta / (r2 * s * s);
    StateVec<5> d;
    d[0] = rd;
    d[1] = thd;
    d[2] = phid;
    d[3] = r * thd * thd + r * s * s * phid * phid - 1.0 / r2;
    d[4] = -2.0 * rd * thd / r + s * c * phid * phid;
    return d;
  }
};

template <class RhsT>
std::pair<double, StateVec<5>> refine_zero(const RhsT& rhs, double t, const StateVec<5>& y,
                                           double h_full, int comp) {
  double lo = 0.0, hi = h_full;
  StateVec<5> at_hi = rk45_step<5>(rhs, t, y, h_full).y;
  const double f0 = y[comp];
  for (int it = 0; it < 90; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const StateVec<5> ym = rk45_step<5>(rhs, t, y, mid).y;
    if (ym[comp] * f0 > 0.0) {
      lo = mid;
    } else {
      hi = mid;
      at_hi = ym;
    }
  }
  return {hi, at_hi};
}

double energy_residual(const ClassicalParams& p, const StateVec<5>& y) {
  const double r = y[0], th = y[1], rd = y[3], thd = y[4];
  const double s = std::sin(th);
  const double r2 = r * r;
  const double t1 = rd * rd;
  const double t2 = r2 * thd * thd;
  const double t3 = p.beta * p.beta / (r2 * s * s);
  const double rhs = 2.0 * (p.energy + 1.0 / r);
  return (t1 + t2 + t3 - rhs) / (t1 + t2 + t3 + std::abs(rhs) + 1e-300);
}

}  // namespace

Trajectory classical_orbit(const ClassicalParams& p, const TrajectoryState& init,
                           const IntegratorConfig& cfg) {
  if (p.beta < 0.0) throw std::domain_error("beta must be >= 0");
  Trajectory traj;
  traj.classical = true;
  traj.classical_params = p;
  traj.mode = "classical";

  const double s0 = std::sin(init.theta);
  const double rad_r = 2.0 * (p.energy + 1.0 / init.r - p.alpha / (2.0 * init.r * init.r));
  const double rad_th = p.alpha - p.beta * p.beta / (s0 * s0);
  if (rad_r < -1e-12 * (std::abs(p.energy) + 1.0 / init.r))
    throw std::domain_error("initial radius is classically forbidden");
  if (rad_th < -1e-12 * (p.alpha + 1.0))
    throw std::domain_error("initial polar angle is classically forbidden");

  KeplerRhs rhs{&p};
  StateVec<5> y;
  y << init.r, init.theta, init.phi, p.sign_r * std::sqrt(std::max(0.0, rad_r)),
      p.sign_theta * std::sqrt(std::max(0.0, rad_th)) / (init.r * init.r);

  auto push = [&](double t, const StateVec<5>& st) {
    const double phid = p.sign_phi * p.beta / (st[0] * st[0] * std::sin(st[1]) * std::sin(st[1]));
    traj.samples.push_back({t, st[0], st[1], st[2], st[3], st[4], phid, energy_residual(p, st)});
  };

  double t = init.t;
  push(t, y);
  double h = 1e-6;
  long steps = 0;

  while (t < cfg.t_end) {
    if (++steps > cfg.max_steps) {
      traj.termination = Termination::StepLimit;
      return traj;
    }
    h = std::min({h, cfg.max_step, cfg.t_end - t});
    if (t + h == t) {
      traj.termination = Termination::Stalled;
      return traj;
    }
    const double h_try = h;
    const StepResult<5> st = rk45_step<5>(rhs, t, y, h);
    const double en = error_norm<5>(st.err, y, st.y, cfg.abs_tol, cfg.rel_tol);
    if (!std::isfinite(en)) {
      h *= 0.25;
      continue;
    }
    if (en > 1.0) {
      h *= step_scale(en);
      continue;
    }
    double t_new = t + h;
    StateVec<5> y_new = st.y;
    h *= step_scale(en);

    // True sign changes of rdot / thetadot are ordinary turning points here.
    for (int comp : {3, 4}) {
      if (y[comp] != 0.0 && y_new[comp] * y[comp] < 0.0) {
        auto [h_ref, y_ref] = refine_zero(rhs, t, y, h_try, comp);
        t_new = t + h_ref;
        y_new = y_ref;
        traj.events.push_back({t_new, comp == 3 ? EventKind::RadialTurn : EventKind::PolarTurn,
                               y_new[0], y_new[1], y_new[2]});
        if (comp == 3) ++traj.radial_boundary_events;
        break;
      }
    }

    t = t_new;
    y = y_new;
    push(t, y);
    if (cfg.max_radial_events > 0 && traj.radial_boundary_events >= cfg.max_radial_events) {
      traj.termination = Termination::RadialEventLimit;
      return traj;
    }
  }
  traj.termination = Termination::ReachedTimeEnd;
  return traj;
}

double classical_path_residual(const Trajectory& traj, const ClassicalParams& p,
                               double velocity_floor) {
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    if (std::abs(s.rdot) < velocity_floor) continue;
    const double sn = std::sin(s.theta);
    const double rad_r = 2.0 * (p.energy + 1.0 / s.r - p.alpha / (2.0 * s.r * s.r));
    const double rad_th = p.alpha - p.beta * p.beta / (sn * sn);
    if (rad_r <= 0.0) continue;
    const double dphi_dr = std::abs(s.phidot / s.rdot);
    const double dphi_dr_form = p.beta / (sn * sn * s.r * s.r * std::sqrt(rad_r));
    worst = std::max(worst, std::abs(dphi_dr - dphi_dr_form) /
                                (dphi_dr + dphi_dr_form + 1e-300));
    if (std::abs(s.thetadot) * s.r < velocity_floor || rad_th <= 0.0) continue;
    const double dth_dr = std::abs(s.thetadot / s.rdot);
    const double dth_dr_form = std::sqrt(rad_th) / (s.r * s.r * std::sqrt(rad_r));
    worst = std::max(worst,
                     std::abs(dth_dr - dth_dr_form) / (dth_dr + dth_dr_form + 1e-300));
  }
  return worst;
}

}  // namespace qhj
