#include "qhj/figures.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qhj/analysis.hpp"
#include "qhj/classical_dynamics.hpp"
#include "qhj/trajectory_io.hpp"

namespace qhj {

namespace {

constexpr double kPi = std::numbers::pi;

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

ScenarioDefaults load_scenario_defaults(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open scenario defaults: " + path.string());
  ScenarioDefaults d;
  std::string line;
  while (std::getline(is, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("malformed scenario line (missing '='): " + t);
    const std::string key = trim(t.substr(0, eq));
    std::vector<std::vector<double>> tuples;
    std::stringstream groups(t.substr(eq + 1));
    std::string group;
    while (std::getline(groups, group, ';')) {
      std::vector<double> tuple;
      std::stringstream nums(group);
      double v;
      while (nums >> v) tuple.push_back(v);
      if (!tuple.empty()) tuples.push_back(tuple);
    }
    if (tuples.empty()) throw std::runtime_error("scenario line has no values: " + t);
    d.sets[key] = tuples;
  }
  return d;
}

std::filesystem::path default_scenario_file() {
  if (const char* env = std::getenv("QHJ_SHARE_DIR"))
    return std::filesystem::path(env) / "figure_hidden_sets.cfg";
  return std::filesystem::path(QHJ_SHARE_DIR) / "figure_hidden_sets.cfg";
}

namespace {

using PathList = std::vector<std::filesystem::path>;

const std::vector<std::vector<double>>& sets_for(const ScenarioDefaults& d,
                                                 const std::string& key, size_t tuple_len) {
  auto it = d.sets.find(key);
  if (it == d.sets.end())
    throw std::runtime_error("scenario defaults are missing an entry for " + key);
  for (const auto& tup : it->second)
    if (tup.size() != tuple_len)
      throw std::runtime_error("entry " + key + " needs tuples of " +
                               std::to_string(tuple_len) + " numbers");
  return it->second;
}

HiddenVariables hidden_from_radial(const std::vector<double>& t) {
  HiddenVariables h;
  h.a_r = t[0];
  h.b_r = t[1];
  return h;
}

HiddenVariables hidden_from_six(const std::vector<double>& t) {
  HiddenVariables h;
  h.a_r = t[0];
  h.b_r = t[1];
  h.a_theta = t[2];
  h.b_theta = t[3];
  h.a_phi = t[4];
  h.b_phi = t[5];
  return h;
}

void write_text(const std::filesystem::path& p, const std::string& body) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot open for writing: " + p.string());
  os << body;
  if (!os.good()) throw std::runtime_error("write failed: " + p.string());
}

std::string gp_prelude(const std::string& title) {
  return "set datafile separator ','\nset grid\nset title '" + title + "'\n";
}

// One quantum ensemble figure: either r(t) curves or an x/y orbit picture.
PathList ensemble_figure(int id, const std::filesystem::path& dir, const ScenarioDefaults& d,
                         const IntegratorConfig& base, const BoundState& st, double r0,
                         bool spatial, bool radial_tuples, double t_end,
                         const std::string& title) {
  char key[8];
  std::snprintf(key, sizeof key, "fig%02d", id);
  const auto& tuples = sets_for(d, key, radial_tuples ? 2 : 6);
  IntegratorConfig cfg = base;
  cfg.t_end = t_end;

  PathList out;
  std::string plot = spatial ? "plot " : "plot ";
  for (size_t i = 0; i < tuples.size(); ++i) {
    const HiddenVariables hv =
        radial_tuples ? hidden_from_radial(tuples[i]) : hidden_from_six(tuples[i]);
    const QuantumSystem sys = make_quantum_system(st, hv);
    TrajectoryState init;
    init.r = r0;
    const Trajectory traj = spatial ? integrate_spatial_orbit(sys, init, cfg)
                                    : integrate_time_trajectory(sys, init, cfg);
    char name[48];
    std::snprintf(name, sizeof name, "fig%02d_set%zu.csv", id, i + 1);
    const auto csv = dir / name;
    write_trajectory_csv_file(csv, traj, {UnitSystem::Internal, "figures"});
    out.push_back(csv);
    if (i) plot += ", ";
    plot += std::string("'") + name + (spatial ? "' using 5:6" : "' using 1:2") +
            " with lines title 'set " + std::to_string(i + 1) + "'";
  }
  std::string gp = gp_prelude(title);
  gp += spatial ? "set xlabel 'x [a0]'\nset ylabel 'y [a0]'\nset size ratio -1\n"
                : "set xlabel 't [hbar/E_unit]'\nset ylabel 'r [a0]'\n";
  gp += plot + "\n";
  char gpname[16];
  std::snprintf(gpname, sizeof gpname, "fig%02d.gp", id);
  write_text(dir / gpname, gp);
  out.push_back(dir / gpname);
  return out;
}

PathList classical_figure(const std::filesystem::path& dir, const IntegratorConfig& base) {
  ClassicalParams p;
  p.energy = -0.125;
  p.alpha = 2.0;
  p.beta = std::sqrt(3.0) / 2.0;
  IntegratorConfig cfg = base;
  cfg.t_end = 110.0;
  TrajectoryState init;
  init.r = classical_turning_radii(p).first;
  init.theta = 1.0;
  const Trajectory traj = classical_orbit(p, init, cfg);
  const auto csv = dir / "fig01_classical.csv";
  write_trajectory_csv_file(csv, traj, {UnitSystem::Internal, "figures"});
  std::string gp = gp_prelude("closed Keplerian orbit, E=-1/8, alpha=2, beta=sqrt(3)/2");
  gp += "set xlabel 'x [a0]'\nset ylabel 'y [a0]'\nset size ratio -1\n";
  gp += "plot 'fig01_classical.csv' using 5:6 with lines title 'classical orbit'\n";
  write_text(dir / "fig01.gp", gp);
  return {csv, dir / "fig01.gp"};
}

PathList overlay_figure(int id, const std::filesystem::path& dir, const ScenarioDefaults& d,
                        const IntegratorConfig& base) {
  const BoundState st = make_bound_state(2, 1, 1);
  char key[8];
  std::snprintf(key, sizeof key, "fig%02d", id);
  const HiddenVariables hv = hidden_from_six(sets_for(d, key, 6).front());
  IntegratorConfig cfg = base;
  cfg.t_end = 130.0;

  const QuantumSystem sys = make_quantum_system(st, hv);
  TrajectoryState init;
  init.r = sys.r_inner;
  const Trajectory q = integrate_time_trajectory(sys, init, cfg);

  const ClassicalParams p = classical_params_from_state(st, hv);
  const Trajectory c = classical_orbit(p, init, cfg);

  char qn[32], cn[32], gpn[16];
  std::snprintf(qn, sizeof qn, "fig%02d_quantum.csv", id);
  std::snprintf(cn, sizeof cn, "fig%02d_classical.csv", id);
  std::snprintf(gpn, sizeof gpn, "fig%02d.gp", id);
  write_trajectory_csv_file(dir / qn, q, {UnitSystem::Internal, "figures"});
  write_trajectory_csv_file(dir / cn, c, {UnitSystem::Internal, "figures"});

  std::string gp = gp_prelude("quantum orbit of the 211 state against its classical partner");
  if (id == 8) {
    gp += "set xlabel 'x [a0]'\nset ylabel 'y [a0]'\nset size ratio -1\n";
    gp += std::string("plot '") + qn + "' using 5:6 with lines title 'quantum', '" + cn +
          "' using 5:6 with lines title 'classical'\n";
  } else {
    gp += "set size ratio -1\nset multiplot layout 1,2\n";
    gp += std::string("set xlabel 'y [a0]'\nset ylabel 'z [a0]'\nplot '") + qn +
          "' using 6:7 with lines title 'quantum', '" + cn +
          "' using 6:7 with lines title 'classical'\n";
    gp += std::string("set xlabel 'x [a0]'\nset ylabel 'z [a0]'\nplot '") + qn +
          "' using 5:7 with lines title 'quantum', '" + cn +
          "' using 5:7 with lines title 'classical'\n";
    gp += "unset multiplot\n";
  }
  write_text(dir / gpn, gp);
  return {dir / qn, dir / cn, dir / gpn};
}

PathList ejection_figure(const std::filesystem::path& dir, const ScenarioDefaults& d,
                         const IntegratorConfig& base) {
  const BoundState st = make_bound_state(1, 0, 0);
  const auto& tup = sets_for(d, "fig11", 2).front();
  HiddenVariables hv = hidden_from_radial(tup);
  IntegratorConfig cfg = base;
  cfg.t_end = 1e9;  // the march is bounded by the ejection radius, not time
  const QuantumSystem sys = make_quantum_system(st, hv, std::max(140.0, 1.4 * cfg.ejection_radius));
  TrajectoryState init;
  init.r = 2.1;
  const Trajectory traj = integrate_time_trajectory(sys, init, cfg);
  const auto csv = dir / "fig11_eject.csv";
  write_trajectory_csv_file(csv, traj, {UnitSystem::Internal, "figures"});
  std::string gp = gp_prelude("ejection of a ground-state electron released outside the zone");
  gp += "set xlabel 't [hbar/E_unit]'\nset ylabel 'r [a0]'\nset logscale y\n";
  gp += "plot 'fig11_eject.csv' using 1:2 with lines title 'r(t)'\n";
  write_text(dir / "fig11.gp", gp);
  return {csv, dir / "fig11.gp"};
}

PathList angular_figure(const std::filesystem::path& dir, const ScenarioDefaults& d,
                        const IntegratorConfig& base) {
  struct Family {
    int l, m;
    const char* key;
    double theta0;
  };
  const Family families[] = {{0, 0, "fig12.00", 2.0}, {1, 0, "fig12.10", 1.0},
                             {1, 1, "fig12.11", kPi / 2 + 0.5}};
  PathList out;
  std::string gp = gp_prelude("polar angle against azimuth for three angular families");
  gp += "set xlabel 'phi [rad]'\nset ylabel 'theta [rad]'\nplot ";
  bool first = true;
  for (const Family& f : families) {
    const auto& tuples = sets_for(d, f.key, 4);
    const BoundState st = make_bound_state(f.l + 1, f.l, f.m);
    for (size_t i = 0; i < tuples.size(); ++i) {
      HiddenVariables hv;
      hv.a_theta = tuples[i][0];
      hv.b_theta = tuples[i][1];
      hv.a_phi = tuples[i][2];
      hv.b_phi = tuples[i][3];
      const QuantumSystem sys = make_quantum_system(st, hv);
      const AngularPath path = integrate_angular_path(sys, f.theta0, 0.0, 6.0 * kPi, base);
      char name[40];
      std::snprintf(name, sizeof name, "fig12_f%d%d_set%zu.csv", f.l, f.m, i + 1);
      std::vector<std::vector<double>> rows;
      rows.reserve(path.samples.size());
      for (const auto& s : path.samples) rows.push_back({s.phi, s.theta});
      char label[40];
      std::snprintf(label, sizeof label, "family (%d,%d) curves", f.l, f.m);
      write_table_csv(dir / name, {"qhj angular path v1", label}, "phi,theta", rows);
      out.push_back(dir / name);
      if (!first) gp += ", ";
      first = false;
      gp += std::string("'") + name + "' using 1:2 with lines title '" +
            std::to_string(f.l) + std::to_string(f.m) + " set " + std::to_string(i + 1) + "'";
    }
  }
  gp += "\n";
  write_text(dir / "fig12.gp", gp);
  out.push_back(dir / "fig12.gp");
  return out;
}

}  // namespace

std::vector<std::filesystem::path> emit_figure(int id, const std::filesystem::path& out_dir,
                                               const ScenarioDefaults& d,
                                               const IntegratorConfig& base) {
  std::filesystem::create_directories(out_dir);
  switch (id) {
    case 1:
      return classical_figure(out_dir, base);
    case 2:
      return ensemble_figure(2, out_dir, d, base, make_bound_state(1, 0, 0), 2.0, false, true,
                             60.0, "radial oscillation of the ground state, five microstates");
    case 3:
      return ensemble_figure(3, out_dir, d, base, make_bound_state(1, 0, 0), 2.0, true, false,
                             60.0, "ground-state orbits traced in space");
    case 4:
      return ensemble_figure(4, out_dir, d, base, make_bound_state(2, 0, 0), 0.0, false, true,
                             260.0, "radial oscillation of the 200 state from the origin");
    case 5:
      return ensemble_figure(5, out_dir, d, base, make_bound_state(2, 0, 0), 0.0, true, false,
                             260.0, "200-state orbits traced in space");
    case 6:
      return ensemble_figure(6, out_dir, d, base, make_bound_state(2, 1, 0),
                             trap_zone(make_bound_state(2, 1, 0)).r_inner, false, true, 260.0,
                             "radial oscillation of the 210 state");
    case 7:
      return ensemble_figure(7, out_dir, d, base, make_bound_state(2, 1, 0),
                             trap_zone(make_bound_state(2, 1, 0)).r_inner, true, false, 260.0,
                             "210-state orbits traced in space");
    case 8:
    case 9:
      return overlay_figure(id, out_dir, d, base);
    case 10:
      return ensemble_figure(10, out_dir, d, base, make_bound_state(2, 1, 1),
                             trap_zone(make_bound_state(2, 1, 1)).r_inner, true, false, 130.0,
                             "211-state spatial orbits, three microstates");
    case 11:
      return ejection_figure(out_dir, d, base);
    case 12:
      return angular_figure(out_dir, d, base);
    default:
      throw std::invalid_argument("figure id must be between 1 and 12");
  }
}

std::vector<std::filesystem::path> emit_figure_bundle(const std::filesystem::path& out_dir,
                                                      const ScenarioDefaults& d,
                                                      const IntegratorConfig& base) {
  std::vector<std::filesystem::path> all;
  for (int id = 1; id <= 12; ++id) {
    auto part = emit_figure(id, out_dir, d, base);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

}  // namespace qhj
