#include "qhj/quantum_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qhj/analysis.hpp"

namespace qhj {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int sgn(double x) { return x >= 0 ? 1 : -1; }

}  // namespace

AzimuthalActionMap::AzimuthalActionMap(int m_abs, double a, double b, int sign)
    : m_(m_abs), a_(a), b_(b), sign_(sign) {
  if (a_ == 0.0) throw std::domain_error("azimuthal hidden variable 'a' must be nonzero");
}

double AzimuthalActionMap::action(double phi) const {
  if (m_ == 0) return sign_ * std::atan(a_ * phi + b_);
  const double k = m_;
  const double sa = a_ > 0 ? 1.0 : -1.0;
  const double s1 = std::sin(k * phi);
  double base;
  long winding;
  if (s1 == 0.0) {
    // Exactly on a zero: take the continuous (right-sided) value.
    const long j = std::lround(k * phi / kPi);
    base = -sa * kPi / 2;
    winding = j;
  } else {
    base = std::atan(b_ - (a_ / k) / std::tan(k * phi));
    winding = static_cast<long>(std::floor(k * phi / kPi));
  }
  return sign_ * (base + kPi * sa * winding);
}

double AzimuthalActionMap::phi_of_action(double action) const {
  const double w = sign_ * action;
  if (m_ == 0) {
    const long fold = static_cast<long>(std::floor((w + kPi / 2) / kPi));
    return (std::tan(w - fold * kPi) - b_) / a_;
  }
  const double k = m_;
  const double sa = a_ > 0 ? 1.0 : -1.0;
  const long j = static_cast<long>(std::floor(w * sa / kPi + 0.5));
  const double t = std::tan(w - kPi * sa * j);
  const double psi = kPi / 2 - std::atan(k * (b_ - t) / a_);
  return (j * kPi + psi) / k;
}

int AzimuthalActionMap::fold_index(double action) const {
  if (m_ != 0) return 0;
  return static_cast<int>(std::floor((sign_ * action + kPi / 2) / kPi));
}

QuantumSystem make_quantum_system(const BoundState& st, const HiddenVariables& hv,
                                  double r_domain_hi) {
  validate_hidden(hv);
  QuantumSystem sys;
  sys.state = st;
  sys.hidden = hv;
  // Components keep sign +1; instantaneous signs are integrator state.
  sys.radial = make_component(make_radial_pair(st, r_domain_hi), hv.a_r, hv.b_r, 1);
  sys.polar = make_component(make_polar_pair(st), hv.a_theta, hv.b_theta, 1);
  sys.azimuthal = make_component(make_azimuthal_pair(st), hv.a_phi, hv.b_phi, 1);
  sys.az_map = AzimuthalActionMap(std::abs(st.m), hv.a_phi, hv.b_phi, hv.sign_phi);

  const TrapZone zone = trap_zone(st);
  sys.r_inner = zone.r_inner;
  sys.r_outer = zone.r_outer;
  sys.contains_origin = zone.contains_origin;

  const double m2q = static_cast<double>(st.m) * st.m - 0.25;
  if (std::abs(st.m) >= 1) {
    sys.has_polar_band = true;
    sys.theta_lo = std::asin(std::sqrt(m2q / st.lambda));
    sys.theta_hi = kPi - sys.theta_lo;
  } else {
    sys.theta_lo = 0.0;
    sys.theta_hi = kPi;
  }
  return sys;
}

namespace {

// Sign-stripped a/D factors plus the brackets entering every velocity.
struct FieldParts {
  double h_r;     // E - V - lambda / (2 r^2)
  double b_th;    // lambda - (m^2 - 1/4) / sin^2
  double m2q;     // m^2 - 1/4
  double base_r, base_th, base_phi;
  double sin2;
};

FieldParts field_parts(const QuantumSystem& sys, double r, double theta, double phi) {
  FieldParts f;
  const double s = std::sin(theta);
  f.sin2 = s * s;
  f.m2q = static_cast<double>(sys.state.m) * sys.state.m - 0.25;
  f.h_r = sys.state.energy + 1.0 / r - sys.state.lambda / (2.0 * r * r);
  f.b_th = sys.state.lambda - f.m2q / f.sin2;
  f.base_r = momentum(sys.radial, r);
  f.base_th = momentum(sys.polar, theta);
  f.base_phi = momentum(sys.azimuthal, phi);
  return f;
}

}  // namespace

Eigen::Vector3d velocity_field(const QuantumSystem& sys, double r, double theta, double phi,
                               int sign_r, int sign_theta, int sign_phi) {
  const FieldParts f = field_parts(sys, r, theta, phi);
  const double r2 = r * r;
  return Eigen::Vector3d(2.0 * f.h_r / (sign_r * f.base_r),
                         f.b_th / (r2 * sign_theta * f.base_th),
                         f.m2q / (r2 * f.sin2 * sign_phi * f.base_phi));
}

double energy_identity_residual(const QuantumSystem& sys, double r, double theta, double phi,
                                int sign_r, int sign_theta, int sign_phi) {
  const FieldParts f = field_parts(sys, r, theta, phi);
  const Eigen::Vector3d v = velocity_field(sys, r, theta, phi, sign_r, sign_theta, sign_phi);
  const double t1 = v[0] * sign_r * f.base_r;
  const double t2 = v[1] * sign_theta * f.base_th;
  const double t3 = v[2] * sign_phi * f.base_phi;
  const double rhs = 2.0 * (sys.state.energy + 1.0 / r);
  const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(rhs) + 1e-300;
  return (t1 + t2 + t3 - rhs) / scale;
}

namespace {

struct Signs {
  int r = 1, th = 1, phi = 1;
};

// Regularized evolution variable: ds = dt / (r^2 sin^2 theta |p_r|). In s the
// polar velocity stays finite through the poles, the azimuthal action advances
// at a bounded rate, the origin approach becomes an exponential creep, and the
// radial velocity reduces to a polynomial (so the exponentially shrinking
// radial momentum of an escape never starves the step size). One adaptive
// marcher covers the trapped, sub-zone and escape regimes alike.
// State layout: y = (t, r, theta, M).
struct SundmanRhs {
  const QuantumSystem* sys;
  const Signs* signs;

  StateVec<4> operator()(double, const StateVec<4>& y) const {
    const double r = y[1], th = y[2];
    if (!(r > sys->radial.pair.lo && r < sys->radial.pair.hi) ||
        !(th > sys->polar.pair.lo + 1e-12 && th < sys->polar.pair.hi - 1e-12))
      return StateVec<4>::Constant(kNaN);
    try {
      const double s = std::sin(th);
      const double sin2 = s * s;
      const double m2q = static_cast<double>(sys->state.m) * sys->state.m - 0.25;
      const double zone = (sys->state.energy * r + 1.0) * r - 0.5 * sys->state.lambda;
      const double base_r = momentum(sys->radial, r);
      const double base_th = momentum(sys->polar, th);
      const double pa = std::abs(base_r);
      return StateVec<4>(r * r * sin2 * pa,
                         2.0 * zone * sin2 * (base_r >= 0 ? 1.0 : -1.0) / signs->r,
                         (sys->state.lambda * sin2 - m2q) * pa / (signs->th * base_th),
                         signs->phi * m2q * pa);
    } catch (const std::exception&) {
      return StateVec<4>::Constant(kNaN);
    }
  }
};

// Bisect the step size so component comp of the state lands on level.
template <int N, class RhsT>
std::pair<double, StateVec<N>> refine_to_level(const RhsT& rhs, double x, const StateVec<N>& y,
                                               double h_full, int comp, double level) {
  double lo = 0.0, hi = h_full;
  StateVec<N> at_hi = rk45_step<N>(rhs, x, y, h_full).y;
  const double f0 = y[comp] - level;
  for (int it = 0; it < 90; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const StateVec<N> ym = rk45_step<N>(rhs, x, y, mid).y;
    if ((ym[comp] - level) * f0 > 0.0) {
      lo = mid;
    } else {
      hi = mid;
      at_hi = ym;
    }
    if (std::abs(at_hi[comp] - level) < 1e-12 * std::max(1.0, std::abs(level))) break;
  }
  at_hi[comp] = level;
  return {hi, at_hi};
}

struct BoundaryCheck {
  bool triggered = false;
  double clamped = 0.0;
  int side = 0;
};

// Asymptotic turning surfaces are never crossed; flip once the coordinate
// creeps to within the window while still approaching.
BoundaryCheck window_trigger(double prev, double next, double root, double window) {
  BoundaryCheck bc;
  const double d_new = std::abs(next - root);
  if (d_new <= window && d_new < std::abs(prev - root)) {
    bc.triggered = true;
    bc.side = prev >= root ? 1 : -1;
    bc.clamped = root + bc.side * window;
  }
  return bc;
}

template <int N>
struct StepOutcome {
  bool accepted = false;
  double x_new = 0.0;
  StateVec<N> y_new;
  double err = 0.0;
};

// One adaptive attempt; h is updated in place for the next try.
template <int N, class RhsT>
StepOutcome<N> try_step(const RhsT& rhs, double x, const StateVec<N>& y, double& h, double rel_tol,
                        double abs_tol) {
  const StepResult<N> st = rk45_step<N>(rhs, x, y, h);
  const double en = error_norm<N>(st.err, y, st.y, abs_tol, rel_tol);
  StepOutcome<N> out;
  if (!std::isfinite(en)) {
    h *= 0.25;
    return out;
  }
  if (en <= 1.0) {
    out.accepted = true;
    out.x_new = x + h;
    out.y_new = st.y;
    out.err = en;
  }
  h *= step_scale(en);
  return out;
}

struct RunContext {
  const QuantumSystem* sys;
  const IntegratorConfig* cfg;
  Trajectory* traj;
  Signs signs;
  int fold = 0;
};

void push_sample(RunContext& ctx, double t, double r, double th, double phi) {
  const Eigen::Vector3d v =
      velocity_field(*ctx.sys, r, th, phi, ctx.signs.r, ctx.signs.th, ctx.signs.phi);
  const double res =
      energy_identity_residual(*ctx.sys, r, th, phi, ctx.signs.r, ctx.signs.th, ctx.signs.phi);
  double t_emit = t;
  if (!ctx.traj->samples.empty() && t_emit <= ctx.traj->samples.back().t)
    t_emit = std::nextafter(ctx.traj->samples.back().t, std::numeric_limits<double>::infinity());
  ctx.traj->samples.push_back({t_emit, r, th, phi, v[0], v[1], v[2], res});
}

void push_event(RunContext& ctx, double t, EventKind kind, double r, double th, double phi) {
  ctx.traj->events.push_back({t, kind, r, th, phi});
}

// Log azimuthal branch folds crossed by this step (m = 0 only).
void handle_folds(RunContext& ctx, double t_prev, double t_new, double m_prev, double m_new,
                  double r, double th) {
  const int k0 = ctx.sys->az_map.fold_index(m_prev);
  const int k1 = ctx.sys->az_map.fold_index(m_new);
  if (k0 == k1) return;
  const int dir = k1 > k0 ? 1 : -1;
  for (int k = k0; k != k1; k += dir) {
    const int crossed = dir > 0 ? k + 1 : k;
    // Edge of branch 'crossed' in action units.
    const double m_edge = ctx.sys->hidden.sign_phi * (crossed * kPi - kPi / 2);
    double f = (m_edge - m_prev) / (m_new - m_prev);
    f = std::clamp(f, 0.0, 1.0);
    const double t_edge = t_prev + f * (t_new - t_prev);
    push_event(ctx, t_edge, EventKind::SignFlip, r, th,
               ctx.sys->az_map.phi_of_action(m_new));
  }
  ctx.fold = k1;
}

// Normalized initial radial direction: +1 means r increasing. Inside the
// trap zone the caller's sign is honored; at a boundary the motion starts
// inward; outside, away from the zone (there is no way back in).
int initial_radial_direction(const QuantumSystem& sys, const IntegratorConfig& cfg, double r0,
                             int user_dir) {
  const double w = cfg.turn_window;
  if (r0 >= sys.r_outer + w) return 1;
  if (r0 >= sys.r_outer - w) return -1;
  if (!sys.contains_origin) {
    if (r0 <= sys.r_inner - w) return -1;
    if (r0 <= sys.r_inner + w) return 1;
  } else if (r0 <= cfg.r_min_guard) {
    return 1;
  }
  return user_dir;
}

int initial_polar_direction(const QuantumSystem& sys, const IntegratorConfig& cfg, double th0,
                            int user_dir) {
  const double w = cfg.turn_window;
  if (!sys.has_polar_band) return user_dir;
  if (th0 <= sys.theta_lo - w) return -1;  // below the band: away from it
  if (th0 <= sys.theta_lo + w) return 1;
  if (th0 >= sys.theta_hi + w) return 1;
  if (th0 >= sys.theta_hi - w) return -1;
  return user_dir;
}

// What one regularized march may do and where it must stop.
struct LegPlan {
  bool wall_windows = false;  // reflect at trap walls and the origin guard
  bool record_aux = false;    // track the polar/azimuthal path relation
  bool has_r_stop = false;
  double r_stop = 0.0;
  int r_stop_dir = 1;  // +1: stop once r rises to r_stop; -1: falls to it
};

enum class LegEnd { TimeEnd, RadialStop, Terminated };

// March y = (t, r, theta, M) in the regularized variable until t_end, the
// radial stop, or a termination condition. Pole guards, band windows and fold
// bookkeeping happen inline; wall reflections only when the plan asks.
LegEnd sundman_leg(RunContext& ctx, StateVec<4>& y, long& steps, const LegPlan& plan) {
  const IntegratorConfig& cfg = *ctx.cfg;
  const QuantumSystem& sys = *ctx.sys;
  const SundmanRhs rhs{&sys, &ctx.signs};
  const double w = cfg.turn_window;
  const double m2q = static_cast<double>(sys.state.m) * sys.state.m - 0.25;
  double s = 0.0;
  double h = 1e-6;

  const auto r_stopped = [&](double r) {
    return plan.has_r_stop && (plan.r_stop_dir > 0 ? r >= plan.r_stop : r <= plan.r_stop);
  };

  while (true) {
    if (y[0] >= cfg.t_end) return LegEnd::TimeEnd;
    if (r_stopped(y[1])) return LegEnd::RadialStop;
    if (++steps > cfg.max_steps) {
      ctx.traj->termination = Termination::StepLimit;
      return LegEnd::Terminated;
    }
    // Cap so one step advances time by at most max_step; keeps samples dense
    // enough for interpolation between them.
    const double g = rhs(s, y)[0];
    if (std::isfinite(g) && g * h > cfg.max_step) h = cfg.max_step / g;
    if (h > 5.0) h = 5.0;
    if (s + h == s) {
      ctx.traj->termination = Termination::Stalled;
      return LegEnd::Terminated;
    }
    const double h_try = h;
    StepOutcome<4> st = try_step<4>(rhs, s, y, h, cfg.rel_tol, cfg.abs_tol);
    if (!st.accepted) continue;

    double s_new = st.x_new;
    StateVec<4> y_new = st.y_new;

    // Find every boundary interaction inside this step and commit only up to
    // the earliest one, refined onto its level. Taking one interaction per
    // step keeps simultaneous crossings ordered and stamps every reflection
    // with the exact time at which the level is reached, so different
    // parameterizations of the same trajectory stay synchronized.
    enum Action {
      kNone = -1,
      kTimeEnd,
      kRadialStop,
      kOriginGuard,
      kPoleLo,
      kPoleHi,
      kWallOuter,
      kWallInner,
      kBandLo,
      kBandHi
    };
    int action = kNone;
    double cut_h = 0.0, cut_level = 0.0;
    StateVec<4> cut_y = y_new;
    const auto propose = [&](int candidate, int comp, double level) {
      auto [h_ref, y_ref] = refine_to_level<4>(rhs, s, y, h_try, comp, level);
      if (action == kNone || h_ref < cut_h) {
        action = candidate;
        cut_h = h_ref;
        cut_level = level;
        cut_y = y_ref;
      }
    };
    if (y_new[0] >= cfg.t_end) propose(kTimeEnd, 0, cfg.t_end);
    if (plan.has_r_stop && r_stopped(y_new[1])) propose(kRadialStop, 1, plan.r_stop);
    if (plan.wall_windows && y_new[1] < cfg.r_min_guard && y_new[1] < y[1])
      propose(kOriginGuard, 1, cfg.r_min_guard);
    if (y_new[2] < cfg.theta_guard && y_new[2] < y[2]) propose(kPoleLo, 2, cfg.theta_guard);
    if (y_new[2] > kPi - cfg.theta_guard && y_new[2] > y[2])
      propose(kPoleHi, 2, kPi - cfg.theta_guard);
    if (plan.wall_windows) {
      const BoundaryCheck outer = window_trigger(y[1], y_new[1], sys.r_outer, w);
      if (outer.triggered) propose(kWallOuter, 1, outer.clamped);
      if (!sys.contains_origin) {
        const BoundaryCheck inner = window_trigger(y[1], y_new[1], sys.r_inner, w);
        if (inner.triggered) propose(kWallInner, 1, inner.clamped);
      }
    }
    if (sys.has_polar_band) {
      const BoundaryCheck lo = window_trigger(y[2], y_new[2], sys.theta_lo, w);
      if (lo.triggered) propose(kBandLo, 2, lo.clamped);
      const BoundaryCheck hi = window_trigger(y[2], y_new[2], sys.theta_hi, w);
      if (hi.triggered) propose(kBandHi, 2, hi.clamped);
    }

    bool radial_event = false;
    bool leg_done = false;
    LegEnd leg_end = LegEnd::TimeEnd;
    if (action != kNone) {
      s_new = s + cut_h;
      y_new = cut_y;
      // Restart small after a reflection: the retreat from an asymptotic
      // surface starts a window-width away, and a carried-over step would
      // make truncation error comparable to that distance.
      if (action != kTimeEnd && action != kRadialStop) h = 1e-6;
      switch (action) {
        case kTimeEnd:
          leg_done = true;
          leg_end = LegEnd::TimeEnd;
          break;
        case kRadialStop:
          leg_done = true;
          leg_end = LegEnd::RadialStop;
          break;
        case kOriginGuard:
          ctx.signs.r = -ctx.signs.r;
          push_event(ctx, y_new[0], EventKind::OriginApproach, y_new[1], y_new[2],
                     sys.az_map.phi_of_action(y_new[3]));
          radial_event = true;
          break;
        case kPoleLo:
        case kPoleHi:
          ctx.signs.th = -ctx.signs.th;
          push_event(ctx, y_new[0], EventKind::PolePass, y_new[1], cut_level,
                     sys.az_map.phi_of_action(y_new[3]));
          break;
        case kWallOuter:
        case kWallInner:
          ctx.signs.r = -ctx.signs.r;
          push_event(ctx, y_new[0], EventKind::RadialTurn, y_new[1], y_new[2],
                     sys.az_map.phi_of_action(y_new[3]));
          radial_event = true;
          break;
        default:
          ctx.signs.th = -ctx.signs.th;
          push_event(ctx, y_new[0], EventKind::PolarTurn, y_new[1], y_new[2],
                     sys.az_map.phi_of_action(y_new[3]));
          break;
      }
    }

    handle_folds(ctx, y[0], y_new[0], y[3], y_new[3], y_new[1], y_new[2]);

    s = s_new;
    y = y_new;
    push_sample(ctx, y[0], y[1], y[2], sys.az_map.phi_of_action(y[3]));
    if (plan.record_aux) {
      const StateVec<4> d = rhs(s, y);
      if (d.allFinite()) {
        const double ssin = std::sin(y[2]);
        const double x_term = d[3] * (sys.state.lambda * ssin * ssin / m2q - 1.0);
        const double y_term = ctx.signs.phi * ctx.signs.th * momentum(sys.polar, y[2]) * d[2];
        const double rel =
            std::abs(x_term - y_term) / (std::abs(x_term) + std::abs(y_term) + 1e-300);
        ctx.traj->max_aux_residual = std::max(ctx.traj->max_aux_residual, rel);
      }
    }
    if (leg_done) return leg_end;
    if (radial_event) {
      ++ctx.traj->radial_boundary_events;
      if (cfg.max_radial_events > 0 &&
          ctx.traj->radial_boundary_events >= cfg.max_radial_events) {
        ctx.traj->termination = Termination::RadialEventLimit;
        return LegEnd::Terminated;
      }
    }
  }
}

// Shared start-of-run normalization: clamp window/guard starts, pick the
// realized directions, seed the instantaneous signs, log the first sample.
struct RunStart {
  double r0 = 0.0, th0 = 0.0, m0 = 0.0;
  int dir_r = 1;
};

RunStart begin_run(RunContext& ctx, const TrajectoryState& init) {
  const QuantumSystem& sys = *ctx.sys;
  const IntegratorConfig& cfg = *ctx.cfg;
  RunStart rs;
  double r0 = init.r > 0.0 ? init.r : cfg.r_min_guard;
  double th0 = init.theta;
  const double w = cfg.turn_window;

  const int user_dir_r = ctx.signs.r * sgn(sys.hidden.a_r);
  rs.dir_r = initial_radial_direction(sys, cfg, r0, user_dir_r);
  const int user_dir_th = ctx.signs.th * sgn(sys.hidden.a_theta);
  const int dir_th = initial_polar_direction(sys, cfg, th0, user_dir_th);

  // Clamp starts sitting inside a window onto its inner edge.
  bool initial_radial_event = false;
  if (std::abs(r0 - sys.r_outer) <= w) {
    r0 = sys.r_outer - w;
    initial_radial_event = true;
  } else if (!sys.contains_origin && std::abs(r0 - sys.r_inner) <= w) {
    r0 = sys.r_inner + w;
    initial_radial_event = true;
  }
  if (sys.has_polar_band) {
    if (std::abs(th0 - sys.theta_lo) <= w) th0 = sys.theta_lo + w;
    if (std::abs(th0 - sys.theta_hi) <= w) th0 = sys.theta_hi - w;
  }
  if (r0 < cfg.r_min_guard) r0 = cfg.r_min_guard;
  th0 = std::clamp(th0, cfg.theta_guard, kPi - cfg.theta_guard);

  const double h_r0 = sys.state.energy + 1.0 / r0 - sys.state.lambda / (2.0 * r0 * r0);
  ctx.signs.r = rs.dir_r * sgn(h_r0) * sgn(sys.hidden.a_r);
  const double m2q = static_cast<double>(sys.state.m) * sys.state.m - 0.25;
  const double b_th0 = sys.state.lambda - m2q / (std::sin(th0) * std::sin(th0));
  if (b_th0 != 0.0) ctx.signs.th = dir_th * sgn(b_th0) * sgn(sys.hidden.a_theta);

  rs.r0 = r0;
  rs.th0 = th0;
  rs.m0 = sys.az_map.action(init.phi);
  ctx.fold = sys.az_map.fold_index(rs.m0);

  push_sample(ctx, init.t, r0, th0, init.phi);
  if (initial_radial_event) push_event(ctx, init.t, EventKind::RadialTurn, r0, th0, init.phi);
  return rs;
}

// Outward-only run for starts beyond the outer boundary.
void run_escape(RunContext& ctx, StateVec<4>& y, long& steps, bool record_aux) {
  LegPlan plan;
  plan.record_aux = record_aux;
  plan.has_r_stop = true;
  plan.r_stop = ctx.cfg->ejection_radius;
  plan.r_stop_dir = 1;
  const LegEnd end = sundman_leg(ctx, y, steps, plan);
  if (end == LegEnd::RadialStop) {
    push_event(ctx, y[0], EventKind::Ejection, y[1], y[2], ctx.sys->az_map.phi_of_action(y[3]));
    ctx.traj->termination = Termination::Ejected;
  } else if (end == LegEnd::TimeEnd) {
    ctx.traj->termination = Termination::ReachedTimeEnd;
  }
}

}  // namespace

Trajectory integrate_time_trajectory(const QuantumSystem& sys, const TrajectoryState& init,
                                     const IntegratorConfig& cfg) {
  Trajectory traj;
  traj.state = sys.state;
  traj.hidden = sys.hidden;
  traj.mode = "time";

  RunContext ctx{&sys, &cfg, &traj};
  ctx.signs = {sys.hidden.sign_r, sys.hidden.sign_theta, sys.hidden.sign_phi};
  const RunStart rs = begin_run(ctx, init);

  long steps = 0;
  StateVec<4> y(init.t, rs.r0, rs.th0, rs.m0);

  if (rs.r0 >= sys.r_outer + cfg.turn_window) {
    run_escape(ctx, y, steps, false);
    return traj;
  }

  LegPlan plan;
  plan.wall_windows = true;
  if (sundman_leg(ctx, y, steps, plan) == LegEnd::TimeEnd)
    traj.termination = Termination::ReachedTimeEnd;
  return traj;
}

Trajectory integrate_spatial_orbit(const QuantumSystem& sys, const TrajectoryState& init,
                                   const IntegratorConfig& cfg) {
  Trajectory traj;
  traj.state = sys.state;
  traj.hidden = sys.hidden;
  traj.mode = "spatial";

  RunContext ctx{&sys, &cfg, &traj};
  ctx.signs = {sys.hidden.sign_r, sys.hidden.sign_theta, sys.hidden.sign_phi};
  const RunStart rs = begin_run(ctx, init);

  long steps = 0;
  StateVec<4> y(init.t, rs.r0, rs.th0, rs.m0);
  const double w = cfg.turn_window;

  if (rs.r0 >= sys.r_outer + w) {
    run_escape(ctx, y, steps, true);
    return traj;
  }

  // Leg targets depend on which side of the zone we live in.
  const bool sub_zone = !sys.contains_origin && rs.r0 <= sys.r_inner - w;
  const double out_target = sub_zone ? sys.r_inner - w : sys.r_outer - w;
  const double in_target = sys.contains_origin || sub_zone ? cfg.r_min_guard : sys.r_inner + w;
  int dir = rs.dir_r;

  while (true) {
    LegPlan plan;
    plan.record_aux = true;
    plan.has_r_stop = true;
    plan.r_stop = dir > 0 ? out_target : in_target;
    plan.r_stop_dir = dir;
    const LegEnd end = sundman_leg(ctx, y, steps, plan);
    if (end == LegEnd::Terminated) return traj;
    if (end == LegEnd::TimeEnd) break;
    const EventKind kind = (dir < 0 && in_target == cfg.r_min_guard)
                               ? EventKind::OriginApproach
                               : EventKind::RadialTurn;
    push_event(ctx, y[0], kind, y[1], y[2], sys.az_map.phi_of_action(y[3]));
    dir = -dir;
    ctx.signs.r = -ctx.signs.r;
    ++traj.radial_boundary_events;
    if (cfg.max_radial_events > 0 && traj.radial_boundary_events >= cfg.max_radial_events) {
      traj.termination = Termination::RadialEventLimit;
      return traj;
    }
  }
  traj.termination = Termination::ReachedTimeEnd;
  return traj;
}


AngularPath integrate_angular_path(const QuantumSystem& sys, double theta0, double phi0,
                                   double phi_span, const IntegratorConfig& cfg) {
  AngularPath path;
  if (phi_span <= 0.0) throw std::invalid_argument("phi span must be positive");
  Signs signs{sys.hidden.sign_r, sys.hidden.sign_theta, sys.hidden.sign_phi};
  const double m2q = static_cast<double>(sys.state.m) * sys.state.m - 0.25;
  const double w = cfg.turn_window;

  double th0 = std::clamp(theta0, cfg.theta_guard, kPi - cfg.theta_guard);
  if (sys.has_polar_band) {
    if (std::abs(th0 - sys.theta_lo) <= w) th0 = sys.theta_lo + w;
    if (std::abs(th0 - sys.theta_hi) <= w) th0 = sys.theta_hi - w;
  }

  auto rhs = [&](double phi, const StateVec<1>& y) -> StateVec<1> {
    const double th = y[0];
    if (!(th > sys.polar.pair.lo + 1e-12 && th < sys.polar.pair.hi - 1e-12))
      return StateVec<1>::Constant(kNaN);
    try {
      const double s = std::sin(th);
      const double b_th = sys.state.lambda - m2q / (s * s);
      const double base_th = momentum(sys.polar, th);
      const double base_phi = momentum(sys.azimuthal, phi);
      return StateVec<1>(b_th * s * s * signs.phi /
                         (m2q * signs.th * base_th / base_phi));
    } catch (const std::exception&) {
      return StateVec<1>::Constant(kNaN);
    }
  };

  double phi = phi0;
  StateVec<1> y(th0);
  const double phi_end = phi0 + phi_span;
  double h = 1e-4;
  long steps = 0;
  path.samples.push_back({phi, y[0]});

  while (phi < phi_end) {
    if (++steps > cfg.max_steps)
      throw std::runtime_error("angular path: step limit exceeded");
    h = std::min({h, cfg.max_step, phi_end - phi});
    if (phi + h == phi) throw std::runtime_error("angular path: step underflow");
    const StepResult<1> st = rk45_step<1>(rhs, phi, y, h);
    const double en = error_norm<1>(st.err, y, st.y, cfg.abs_tol, cfg.rel_tol);
    if (!std::isfinite(en)) {
      h *= 0.25;
      continue;
    }
    if (en > 1.0) {
      h *= step_scale(en);
      continue;
    }
    double phi_new = phi + h;
    StateVec<1> y_new = st.y;
    h *= step_scale(en);

    if (sys.has_polar_band) {
      for (double edge : {sys.theta_lo, sys.theta_hi}) {
        const BoundaryCheck bc = window_trigger(y[0], y_new[0], edge, w);
        if (bc.triggered) {
          y_new[0] = bc.clamped;
          signs.th = -signs.th;
          path.events.push_back({phi_new, EventKind::PolarTurn, 0.0, y_new[0], phi_new});
          break;
        }
      }
    } else {
      // Poles are approached only asymptotically in phi; clamp for safety.
      y_new[0] = std::clamp(y_new[0], 0.5 * cfg.theta_guard, kPi - 0.5 * cfg.theta_guard);
    }
    phi = phi_new;
    y = y_new;
    path.samples.push_back({phi, y[0]});
  }
  return path;
}

}  // namespace qhj
