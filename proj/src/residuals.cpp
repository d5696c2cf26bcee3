#include "qhj/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qhj/analysis.hpp"

namespace qhj {

namespace {

constexpr double kPi = std::numbers::pi;

double auto_r_hi(const BoundState& st, const ResidualGrid& grid) {
  if (grid.r_hi > 0.0) return grid.r_hi;
  return 4.0 * trap_zone(st).r_outer;
}

SolutionPair scale_second_solution(SolutionPair p, double scale) {
  if (scale == 1.0) return p;
  Evaluator orig = p.s2;
  p.s2 = [orig, scale](double q) {
    Eval e = orig(q);
    e.value *= scale;
    e.deriv *= scale;
    return e;
  };
  return p;
}

struct ComponentSet {
  MomentumComponent radial, polar, azimuthal;
};

ComponentSet build_components(const BoundState& st, const HiddenVariables& hv, double r_hi,
                              double wronskian_scale) {
  validate_hidden(hv);
  ComponentSet cs;
  cs.radial = make_component(scale_second_solution(make_radial_pair(st, r_hi), wronskian_scale),
                             hv.a_r, hv.b_r, hv.sign_r);
  cs.polar = make_component(scale_second_solution(make_polar_pair(st), wronskian_scale),
                            hv.a_theta, hv.b_theta, hv.sign_theta);
  cs.azimuthal = make_component(scale_second_solution(make_azimuthal_pair(st), wronskian_scale),
                                hv.a_phi, hv.b_phi, hv.sign_phi);
  return cs;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < n; ++i)
    g[i] = std::exp(la + (lb - la) * static_cast<double>(i) / (n - 1));
  return g;
}

std::vector<double> lin_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return g;
}

}  // namespace

double ComponentResiduals::worst() const {
  return std::max({std::abs(radial), std::abs(polar), std::abs(azimuthal)});
}

ComponentResiduals verify_component_qshje(const BoundState& st, const HiddenVariables& hv,
                                          const ResidualGrid& grid, double wronskian_scale) {
  const double r_hi = auto_r_hi(st, grid);
  const ComponentSet cs =
      build_components(st, hv, std::max(4.1 * st.n * st.n, 1.1 * r_hi), wronskian_scale);
  ComponentResiduals out;
  for (double r : log_grid(grid.r_lo, r_hi, grid.nr))
    out.radial = std::max(out.radial, std::abs(qshje_residual(st, cs.radial, r)));
  for (double th : lin_grid(grid.edge_margin, kPi - grid.edge_margin, grid.ntheta))
    out.polar = std::max(out.polar, std::abs(qshje_residual(st, cs.polar, th)));
  for (double phi : lin_grid(grid.edge_margin, 2.0 * kPi, grid.nphi))
    out.azimuthal = std::max(out.azimuthal, std::abs(qshje_residual(st, cs.azimuthal, phi)));
  return out;
}

double verify_full_qshje(const BoundState& st, const HiddenVariables& hv,
                         const ResidualGrid& grid) {
  const double r_hi = auto_r_hi(st, grid);
  const ComponentSet cs =
      build_components(st, hv, std::max(4.1 * st.n * st.n, 1.1 * r_hi), 1.0);

  // Assemble the equation with each coordinate's kinetic part grouped against
  // the potential terms that balance it. Summing raw parts instead would
  // subtract 1/(r^2 sin^2 theta) pieces of magnitude ~1e10 near the grid
  // edges and drown the residual in rounding noise.
  auto part = [](const MomentumComponent& c, double q) {
    const MomentumDerivs md = momentum_derivs(c, q);
    return 0.5 * md.P * md.P + 0.25 * md.schwarzian;
  };
  const double m2q = static_cast<double>(st.m) * st.m - 0.25;

  const std::vector<double> rs = log_grid(grid.r_lo, r_hi, grid.nr);
  const std::vector<double> ths = lin_grid(grid.edge_margin, kPi - grid.edge_margin, grid.ntheta);
  const std::vector<double> phis = lin_grid(grid.edge_margin, 2.0 * kPi, grid.nphi);

  std::vector<double> dev_r(rs.size()), dev_th(ths.size()), dev_phi(phis.size());
  for (size_t i = 0; i < rs.size(); ++i) {
    const double r = rs[i];
    dev_r[i] = part(cs.radial, r) -
               (st.energy + 1.0 / r - st.lambda / (2.0 * r * r));
  }
  for (size_t j = 0; j < ths.size(); ++j) {
    const double sn = std::sin(ths[j]);
    dev_th[j] = part(cs.polar, ths[j]) -
                (0.5 * (st.lambda + 0.25) - 0.5 * m2q / (sn * sn));
  }
  for (size_t k = 0; k < phis.size(); ++k)
    dev_phi[k] = part(cs.azimuthal, phis[k]) -
                 0.5 * static_cast<double>(st.m) * st.m;

  double worst = 0.0;
  for (size_t i = 0; i < rs.size(); ++i) {
    const double r2 = rs[i] * rs[i];
    for (size_t j = 0; j < ths.size(); ++j) {
      const double sn = std::sin(ths[j]);
      const double inv_rs2 = 1.0 / (r2 * sn * sn);
      for (size_t k = 0; k < phis.size(); ++k) {
        const double res = dev_r[i] + dev_th[j] / r2 + dev_phi[k] * inv_rs2;
        worst = std::max(worst, std::abs(res));
      }
    }
  }
  return worst;
}

MetricCheck verify_metric_identities(const QuantumSystem& sys, const Trajectory& traj,
                                     double velocity_floor) {
  MetricCheck mc;
  const double m2q = static_cast<double>(sys.state.m) * sys.state.m - 0.25;
  for (const auto& s : traj.samples) {
    const double sn = std::sin(s.theta);
    const double vr = s.rdot, vth = s.r * s.thetadot, vphi = s.r * sn * s.phidot;
    if (std::abs(vr) < velocity_floor || std::abs(vth) < velocity_floor ||
        std::abs(vphi) < velocity_floor) {
      ++mc.excluded;
      continue;
    }
    ++mc.included;
    const double h_r = sys.state.energy + 1.0 / s.r - sys.state.lambda / (2.0 * s.r * s.r);
    const double b_th = sys.state.lambda - m2q / (sn * sn);
    // a_qq from |dZ/dq| / |m v_q| with the sign the bracket dictates.
    const double a_rr = (h_r >= 0 ? 1.0 : -1.0) *
                        std::abs(momentum(sys.radial, s.r) / s.rdot);
    const double a_thth = (b_th >= 0 ? 1.0 : -1.0) *
                          std::abs(momentum(sys.polar, s.theta) / (s.r * s.r * s.thetadot));
    const double a_phph =
        (m2q >= 0 ? 1.0 : -1.0) *
        std::abs(momentum(sys.azimuthal, s.phi) / (s.r * s.r * sn * sn * s.phidot));

    const double t1 = a_rr * s.rdot * s.rdot;
    const double t2 = a_thth * s.r * s.r * s.thetadot * s.thetadot;
    const double t3 = a_phph * s.r * s.r * sn * sn * s.phidot * s.phidot;
    const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + 1e-300;

    const double e_rhs = sys.state.energy + 1.0 / s.r;
    const double energy_res = (0.5 * (t1 + t2 + t3) - e_rhs) / (0.5 * scale + std::abs(e_rhs));
    const double line_res = (t1 + t2 + t3 - 2.0 * e_rhs) / (scale + 2.0 * std::abs(e_rhs));
    mc.worst_energy_form = std::max(mc.worst_energy_form, std::abs(energy_res));
    mc.worst_fundamental_form = std::max(mc.worst_fundamental_form, std::abs(line_res));
  }
  return mc;
}

}  // namespace qhj
