#include "qhj/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "qhj/ode.hpp"

namespace qhj {

TrapZone trap_zone(const BoundState& st) {
  if (st.energy >= 0.0) throw std::domain_error("trap zone exists only for bound energies");
  const double E = st.energy, lam = st.lambda;
  auto f = [E, lam](double r) { return E * r * r + r - lam / 2.0; };
  auto polish = [E, f](double r) {
    for (int i = 0; i < 3; ++i) {
      const double d = 2.0 * E * r + 1.0;
      if (d != 0.0) r -= f(r) / d;
    }
    return r;
  };
  const double n2 = static_cast<double>(st.n) * st.n;
  TrapZone z;
  if (st.l == 0) {
    z.contains_origin = true;
    z.r_inner = 0.0;
  } else {
    z.r_inner = polish(bisect_root(f, 1e-12, n2));
  }
  z.r_outer = polish(bisect_root(f, n2, 2.0 * n2));
  return z;
}

NodeExpectation expected_node_count(const BoundState& st) {
  const TrapZone z = trap_zone(st);
  NodeExpectation out;
  if (z.contains_origin) {
    out.count = 3;
    out.radii = {0.0, z.r_outer, z.r_outer};
  } else {
    out.count = 2;
    out.radii = {z.r_inner, z.r_outer};
  }
  return out;
}

NodeCatalog detect_nodes(const std::vector<Trajectory>& trajs, double radial_tol, double cell) {
  if (trajs.size() < 2)
    throw std::invalid_argument("node detection needs an ensemble of at least two trajectories");
  NodeCatalog cat;

  // Radial extremity clusters from boundary events.
  std::vector<std::pair<double, int>> radii;
  for (int id = 0; id < static_cast<int>(trajs.size()); ++id)
    for (const auto& ev : trajs[id].events)
      if (ev.kind == EventKind::RadialTurn || ev.kind == EventKind::OriginApproach)
        radii.push_back({ev.r, id});
  std::sort(radii.begin(), radii.end());
  size_t i = 0;
  while (i < radii.size()) {
    size_t j = i + 1;
    double sum = radii[i].first;
    std::set<int> ids{radii[i].second};
    while (j < radii.size() &&
           radii[j].first - radii[j - 1].first <= radial_tol * std::max(1.0, radii[j].first)) {
      sum += radii[j].first;
      ids.insert(radii[j].second);
      ++j;
    }
    if (ids.size() >= 2)
      cat.turn_radii.push_back({sum / static_cast<double>(j - i), static_cast<int>(ids.size())});
    i = j;
  }

  // Spatial cells crossed by at least two distinct trajectories.
  struct CellAcc {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    long count = 0;
    std::set<int> ids;
  };
  std::map<std::tuple<long, long, long>, CellAcc> cells;
  for (int id = 0; id < static_cast<int>(trajs.size()); ++id) {
    for (const auto& s : trajs[id].samples) {
      const double sn = std::sin(s.theta);
      const Eigen::Vector3d p(s.r * sn * std::cos(s.phi), s.r * sn * std::sin(s.phi),
                              s.r * std::cos(s.theta));
      const std::tuple<long, long, long> key(static_cast<long>(std::floor(p[0] / cell)),
                                             static_cast<long>(std::floor(p[1] / cell)),
                                             static_cast<long>(std::floor(p[2] / cell)));
      CellAcc& acc = cells[key];
      acc.sum += p;
      acc.count += 1;
      acc.ids.insert(id);
    }
  }
  for (const auto& [key, acc] : cells)
    if (acc.ids.size() >= 2)
      cat.nodes.push_back(
          {acc.sum / static_cast<double>(acc.count), static_cast<int>(acc.ids.size())});
  return cat;
}

EjectionReport classify_ejection(const BoundState& st, const HiddenVariables& hv, double r0,
                                 const IntegratorConfig& cfg) {
  const QuantumSystem sys =
      make_quantum_system(st, hv, std::max(140.0, 1.4 * cfg.ejection_radius));
  TrajectoryState init;
  init.r = r0;
  const Trajectory traj = integrate_time_trajectory(sys, init, cfg);

  EjectionReport rep;
  rep.r_max = 0.0;
  rep.monotone = true;
  double prev = -1.0;
  for (const auto& s : traj.samples) {
    rep.r_max = std::max(rep.r_max, s.r);
    if (prev > s.r + 1e-9) rep.monotone = false;
    prev = s.r;
  }
  if (traj.termination == Termination::Ejected) {
    rep.outcome = EjectionOutcome::Ejected;
    for (const auto& ev : traj.events)
      if (ev.kind == EventKind::Ejection) rep.t_reach = ev.t;
    return rep;
  }
  if (traj.radial_boundary_events >= 2) {
    rep.outcome = EjectionOutcome::Trapped;
    rep.t_reach = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  throw std::runtime_error(
      "ejection classification is indeterminate: extend t_end so the run either escapes or "
      "completes a bounce cycle");
}

}  // namespace qhj
