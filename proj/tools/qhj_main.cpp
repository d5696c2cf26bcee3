#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qhj/analysis.hpp"
#include "qhj/classical_dynamics.hpp"
#include "qhj/constants.hpp"
#include "qhj/figures.hpp"
#include "qhj/quantum_dynamics.hpp"
#include "qhj/residuals.hpp"
#include "qhj/trajectory_io.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

// Deterministic portable generator for ensemble draws.
struct SplitMix64 {
  std::uint64_t s;
  double next() {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
};

struct Options {
  std::vector<int> state{1, 0, 0};
  std::vector<double> hidden{1, 0, 1, 0, 1, 0};
  std::vector<int> signs{1, 1, 1};
  std::vector<double> init;
  double energy = -0.125, alpha = 2.0, beta = 0.0;
  std::vector<int> family{0, 0};
  std::vector<double> angular_hidden{1, 0, 1, 0};
  qhj::IntegratorConfig cfg;
  std::string out, out_dir = "figures", units = "internal", mode = "time";
  std::string config_file, hidden_sets;
  double r0 = -1.0, theta0 = kPi / 2, phi0 = 0.0, span = 6.0 * kPi, tol = 1e-5;
  int sets = 8, only = 0;
  std::uint64_t seed = 20040;
  bool from_state = false;
};

qhj::BoundState state_of(const Options& o) {
  if (o.state.size() != 3) throw std::domain_error("--state needs n,l,m");
  return qhj::make_bound_state(o.state[0], o.state[1], o.state[2]);
}

qhj::HiddenVariables hidden_of(const Options& o) {
  if (o.hidden.size() != 6 && o.hidden.size() != 2)
    throw std::domain_error("--hidden needs a_r,b_r or all six values");
  qhj::HiddenVariables h;
  h.a_r = o.hidden[0];
  h.b_r = o.hidden[1];
  if (o.hidden.size() == 6) {
    h.a_theta = o.hidden[2];
    h.b_theta = o.hidden[3];
    h.a_phi = o.hidden[4];
    h.b_phi = o.hidden[5];
  }
  if (o.signs.size() != 3) throw std::domain_error("--signs needs three entries of +-1");
  h.sign_r = o.signs[0];
  h.sign_theta = o.signs[1];
  h.sign_phi = o.signs[2];
  return h;
}

qhj::TrajectoryState init_of(const Options& o, const qhj::TrapZone& zone) {
  qhj::TrajectoryState ts;
  ts.r = o.r0 >= 0.0 ? o.r0 : 0.5 * (zone.r_inner + zone.r_outer);
  ts.theta = o.theta0;
  ts.phi = o.phi0;
  if (!o.init.empty()) {
    ts.r = o.init[0];
    if (o.init.size() > 1) ts.theta = o.init[1];
    if (o.init.size() > 2) ts.phi = o.init[2];
  }
  return ts;
}

qhj::UnitSystem units_of(const Options& o) { return qhj::parse_unit_system(o.units); }

void emit_trajectory(const Options& o, const qhj::Trajectory& traj, const std::string& command) {
  qhj::CsvOptions copt{units_of(o), command};
  if (o.out.empty()) {
    qhj::write_trajectory_csv(std::cout, traj, copt);
  } else {
    qhj::write_trajectory_csv_file(o.out, traj, copt);
  }
}

// The config file wins over flags: parse "key = value" pairs and reapply.
void apply_config_overrides(Options& o) {
  if (o.config_file.empty()) return;
  std::ifstream is(o.config_file);
  if (!is) throw std::runtime_error("cannot open config file: " + o.config_file);

  auto set_double = [](double& slot) {
    return [&slot](const std::string& v) { slot = std::strtod(v.c_str(), nullptr); };
  };
  auto set_long = [](long& slot) {
    return [&slot](const std::string& v) { slot = std::strtol(v.c_str(), nullptr, 10); };
  };
  std::map<std::string, std::function<void(const std::string&)>> setters;
  setters["rel-tol"] = set_double(o.cfg.rel_tol);
  setters["abs-tol"] = set_double(o.cfg.abs_tol);
  setters["max-step"] = set_double(o.cfg.max_step);
  setters["t-end"] = set_double(o.cfg.t_end);
  setters["turn-window"] = set_double(o.cfg.turn_window);
  setters["r-min-guard"] = set_double(o.cfg.r_min_guard);
  setters["theta-guard"] = set_double(o.cfg.theta_guard);
  setters["ejection-radius"] = set_double(o.cfg.ejection_radius);
  setters["max-steps"] = set_long(o.cfg.max_steps);
  setters["max-radial-events"] = [&o](const std::string& v) {
    o.cfg.max_radial_events = static_cast<int>(std::strtol(v.c_str(), nullptr, 10));
  };
  setters["r0"] = set_double(o.r0);
  setters["theta0"] = set_double(o.theta0);
  setters["phi0"] = set_double(o.phi0);
  setters["span"] = set_double(o.span);
  setters["tol"] = set_double(o.tol);
  setters["units"] = [&o](const std::string& v) { o.units = v; };
  setters["mode"] = [&o](const std::string& v) { o.mode = v; };
  setters["out"] = [&o](const std::string& v) { o.out = v; };
  setters["state"] = [&o](const std::string& v) {
    o.state.clear();
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) o.state.push_back(std::stoi(tok));
  };
  setters["hidden"] = [&o](const std::string& v) {
    o.hidden.clear();
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) o.hidden.push_back(std::strtod(tok.c_str(), nullptr));
  };
  setters["signs"] = [&o](const std::string& v) {
    o.signs.clear();
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) o.signs.push_back(std::stoi(tok));
  };

  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const size_t h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    const size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto strip = [](std::string s) {
      const size_t a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const size_t b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string val = strip(line.substr(eq + 1));
    if (key.empty()) continue;
    auto it = setters.find(key);
    if (it == setters.end())
      throw std::runtime_error("unknown config key '" + key + "' at line " +
                               std::to_string(lineno));
    it->second(val);
  }
}

void add_integrator_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--rel-tol", o.cfg.rel_tol, "relative step tolerance");
  cmd->add_option("--abs-tol", o.cfg.abs_tol, "absolute step tolerance");
  cmd->add_option("--max-step", o.cfg.max_step, "largest step size");
  cmd->add_option("--t-end", o.cfg.t_end, "integration end time (internal units)");
  cmd->add_option("--turn-window", o.cfg.turn_window, "flip distance at turning surfaces");
  cmd->add_option("--r-min-guard", o.cfg.r_min_guard, "reflective floor above the origin");
  cmd->add_option("--theta-guard", o.cfg.theta_guard, "reflective guard at the poles");
  cmd->add_option("--ejection-radius", o.cfg.ejection_radius, "escape march end radius");
  cmd->add_option("--max-steps", o.cfg.max_steps, "step budget");
  cmd->add_option("--max-radial-events", o.cfg.max_radial_events,
                  "stop after this many radial boundary touches");
  cmd->add_option("--config", o.config_file,
                  "key=value file applied after flags (file values win)");
  cmd->add_option("--units", o.units, "output unit system: internal or si");
  cmd->add_option("--out", o.out, "output file (default: stdout)");
}

double len_factor(const Options& o) {
  return units_of(o) == qhj::UnitSystem::Si ? qhj::si_factor(qhj::Quantity::Length) : 1.0;
}

int run(int argc, char** argv) {
  CLI::App app{"quantum trajectory toolkit for the bound hydrogen electron"};
  app.require_subcommand(1);
  Options o;
  if (const char* env = std::getenv("QHJ_UNITS")) o.units = env;

  auto* orbit = app.add_subcommand("orbit", "integrate one microstate orbit");
  orbit->add_option("--state", o.state, "quantum numbers n,l,m")->delimiter(',');
  orbit->add_option("--hidden", o.hidden, "a_r,b_r[,a_theta,b_theta,a_phi,b_phi]")
      ->delimiter(',');
  orbit->add_option("--signs", o.signs, "initial velocity signs sr,st,sp")->delimiter(',');
  orbit->add_option("--init", o.init, "initial point r0[,theta0[,phi0]]")->delimiter(',');
  orbit->add_option("--mode", o.mode, "time or spatial");
  add_integrator_flags(orbit, o);

  auto* radial = app.add_subcommand("radial-time", "radial oscillation r(t)");
  radial->add_option("--state", o.state, "quantum numbers n,l,m")->delimiter(',');
  radial->add_option("--hidden", o.hidden, "a_r,b_r")->delimiter(',');
  radial->add_option("--signs", o.signs, "initial velocity signs")->delimiter(',');
  radial->add_option("--r0", o.r0, "start radius (default: zone midpoint)");
  add_integrator_flags(radial, o);

  auto* angular = app.add_subcommand("angular", "polar angle against azimuth");
  angular->add_option("--family", o.family, "angular family l,m")->delimiter(',');
  angular->add_option("--hidden", o.angular_hidden, "a_theta,b_theta,a_phi,b_phi")
      ->delimiter(',');
  angular->add_option("--theta0", o.theta0, "starting polar angle");
  angular->add_option("--phi0", o.phi0, "starting azimuth");
  angular->add_option("--span", o.span, "azimuth span to cover");
  add_integrator_flags(angular, o);

  auto* classical = app.add_subcommand("classical", "Keplerian reference orbit");
  auto* opt_e = classical->add_option("--E", o.energy, "orbit energy (internal units)");
  classical->add_option("--alpha", o.alpha, "squared total angular momentum");
  classical->add_option("--beta", o.beta, "unsigned azimuthal angular momentum");
  classical->add_flag("--from-state", o.from_state, "map --state through the classical bridge");
  classical->add_option("--state", o.state, "quantum numbers n,l,m")->delimiter(',');
  classical->add_option("--signs", o.signs, "initial velocity signs")->delimiter(',');
  classical->add_option("--init", o.init, "initial point r0[,theta0[,phi0]]")->delimiter(',');
  add_integrator_flags(classical, o);

  auto* trap = app.add_subcommand("trap", "confinement zone radii");
  trap->add_option("--state", o.state, "quantum numbers n,l,m")->delimiter(',');
  trap->add_option("--units", o.units, "internal or si");

  auto* nodes = app.add_subcommand("nodes", "turning clusters across an ensemble");
  nodes->add_option("--state", o.state, "quantum numbers n,l,m")->delimiter(',');
  nodes->add_option("--sets", o.sets, "ensemble size");
  nodes->add_option("--seed", o.seed, "draw seed");
  nodes->add_option("--r0", o.r0, "shared start radius");
  add_integrator_flags(nodes, o);

  auto* eject = app.add_subcommand("eject", "classify a release radius");
  eject->add_option("--state", o.state, "quantum numbers n,l,m")->delimiter(',');
  eject->add_option("--hidden", o.hidden, "a_r,b_r")->delimiter(',');
  eject->add_option("--signs", o.signs, "initial velocity signs")->delimiter(',');
  eject->add_option("--r0", o.r0, "release radius")->required();
  add_integrator_flags(eject, o);

  auto* verify = app.add_subcommand("verify", "stationary-equation residual report");
  verify->add_option("--state", o.state, "quantum numbers n,l,m")->delimiter(',');
  verify->add_option("--hidden", o.hidden, "hidden variables")->delimiter(',');
  verify->add_option("--signs", o.signs, "signs")->delimiter(',');
  verify->add_option("--tol", o.tol, "pass threshold");
  verify->add_option("--config", o.config_file, "key=value overrides");

  auto* info = app.add_subcommand("state-info", "level summary");
  info->add_option("--state", o.state, "quantum numbers n,l,m")->delimiter(',');
  info->add_option("--units", o.units, "internal or si");

  auto* figures = app.add_subcommand("figures", "emit the bundled figure data");
  figures->add_option("--out-dir", o.out_dir, "output directory");
  figures->add_option("--only", o.only, "emit a single scenario (1-12)");
  figures->add_option("--hidden-sets", o.hidden_sets, "alternative scenario defaults file");
  add_integrator_flags(figures, o);

  CLI11_PARSE(app, argc, argv);
  apply_config_overrides(o);
  std::cout.precision(12);

  if (orbit->parsed()) {
    const qhj::BoundState st = state_of(o);
    const qhj::HiddenVariables hv = hidden_of(o);
    const qhj::QuantumSystem sys =
        qhj::make_quantum_system(st, hv, std::max(140.0, 1.4 * o.cfg.ejection_radius));
    const qhj::TrajectoryState ts = init_of(o, qhj::trap_zone(st));
    qhj::Trajectory traj;
    if (o.mode == "time") {
      traj = qhj::integrate_time_trajectory(sys, ts, o.cfg);
    } else if (o.mode == "spatial") {
      traj = qhj::integrate_spatial_orbit(sys, ts, o.cfg);
    } else {
      throw std::domain_error("--mode must be time or spatial");
    }
    emit_trajectory(o, traj, "orbit");
    return 0;
  }
  if (radial->parsed()) {
    const qhj::BoundState st = state_of(o);
    const qhj::HiddenVariables hv = hidden_of(o);
    const qhj::QuantumSystem sys = qhj::make_quantum_system(st, hv);
    qhj::TrajectoryState ts = init_of(o, qhj::trap_zone(st));
    const qhj::Trajectory traj = qhj::integrate_time_trajectory(sys, ts, o.cfg);
    emit_trajectory(o, traj, "radial-time");
    return 0;
  }
  if (angular->parsed()) {
    if (o.family.size() != 2) throw std::domain_error("--family needs l,m");
    if (o.angular_hidden.size() != 4)
      throw std::domain_error("--hidden needs a_theta,b_theta,a_phi,b_phi");
    const qhj::BoundState st =
        qhj::make_bound_state(o.family[0] + 1, o.family[0], o.family[1]);
    qhj::HiddenVariables hv;
    hv.a_theta = o.angular_hidden[0];
    hv.b_theta = o.angular_hidden[1];
    hv.a_phi = o.angular_hidden[2];
    hv.b_phi = o.angular_hidden[3];
    if (o.signs.size() == 3) {
      hv.sign_r = o.signs[0];
      hv.sign_theta = o.signs[1];
      hv.sign_phi = o.signs[2];
    }
    const qhj::QuantumSystem sys = qhj::make_quantum_system(st, hv);
    const qhj::AngularPath path =
        qhj::integrate_angular_path(sys, o.theta0, o.phi0, o.span, o.cfg);
    std::vector<std::vector<double>> rows;
    rows.reserve(path.samples.size());
    for (const auto& s : path.samples) rows.push_back({s.phi, s.theta});
    if (o.out.empty()) throw std::domain_error("angular needs --out for its table");
    qhj::write_table_csv(o.out, {"qhj angular path v1"}, "phi,theta", rows);
    return 0;
  }
  if (classical->parsed()) {
    qhj::ClassicalParams p;
    if (o.from_state) {
      p = qhj::classical_params_from_state(state_of(o), hidden_of(o));
    } else {
      if (!*opt_e) throw std::domain_error("classical needs --E,--alpha,--beta or --from-state");
      p.energy = o.energy;
      p.alpha = o.alpha;
      p.beta = o.beta;
      if (o.signs.size() == 3) {
        p.sign_r = o.signs[0];
        p.sign_theta = o.signs[1];
        p.sign_phi = o.signs[2];
      }
    }
    qhj::TrajectoryState ts;
    ts.r = qhj::classical_turning_radii(p).first;
    ts.theta = o.theta0;
    if (!o.init.empty()) {
      ts.r = o.init[0];
      if (o.init.size() > 1) ts.theta = o.init[1];
      if (o.init.size() > 2) ts.phi = o.init[2];
    }
    const qhj::Trajectory traj = qhj::classical_orbit(p, ts, o.cfg);
    emit_trajectory(o, traj, "classical");
    return 0;
  }
  if (trap->parsed()) {
    const qhj::TrapZone z = qhj::trap_zone(state_of(o));
    const double f = qhj::si_factor(qhj::Quantity::Length);
    std::cout << "r_inner_internal=" << z.r_inner << " r_outer_internal=" << z.r_outer << "\n"
              << "r_inner_si=" << z.r_inner * f << " r_outer_si=" << z.r_outer * f << "\n"
              << "contains_origin=" << (z.contains_origin ? "yes" : "no") << "\n";
    return 0;
  }
  if (nodes->parsed()) {
    const qhj::BoundState st = state_of(o);
    const qhj::TrapZone z = qhj::trap_zone(st);
    SplitMix64 rng{o.seed};
    std::vector<qhj::Trajectory> trajs;
    qhj::IntegratorConfig cfg = o.cfg;
    cfg.max_radial_events = cfg.max_radial_events > 0 ? cfg.max_radial_events : 6;
    for (int i = 0; i < o.sets; ++i) {
      qhj::HiddenVariables hv;
      hv.a_r = 0.3 + 1.9 * rng.next();
      hv.b_r = -0.8 + 1.6 * rng.next();
      hv.a_theta = 0.3 + 1.9 * rng.next();
      hv.b_theta = -0.8 + 1.6 * rng.next();
      hv.a_phi = 0.3 + 1.9 * rng.next();
      hv.b_phi = -0.8 + 1.6 * rng.next();
      const qhj::QuantumSystem sys = qhj::make_quantum_system(st, hv);
      qhj::TrajectoryState ts;
      ts.r = o.r0 >= 0.0 ? o.r0 : 0.5 * (z.r_inner + z.r_outer);
      trajs.push_back(qhj::integrate_time_trajectory(sys, ts, cfg));
    }
    const qhj::NodeCatalog cat = qhj::detect_nodes(trajs);
    const double f = len_factor(o);
    const qhj::NodeExpectation expect = qhj::expected_node_count(st);
    std::cout << "expected_nodes=" << expect.count << " at";
    for (double rr : expect.radii) std::cout << " " << rr * f;
    std::cout << "\n";
    for (const auto& c : cat.turn_radii)
      std::cout << "turn_radius=" << c.radius * f << " support=" << c.support << "\n";
    for (const auto& nsp : cat.nodes)
      std::cout << "node x=" << nsp.position[0] * f << " y=" << nsp.position[1] * f
                << " z=" << nsp.position[2] * f << " support=" << nsp.support << "\n";
    return 0;
  }
  if (eject->parsed()) {
    const qhj::EjectionReport rep =
        qhj::classify_ejection(state_of(o), hidden_of(o), o.r0, o.cfg);
    if (rep.outcome == qhj::EjectionOutcome::Ejected) {
      std::cout << "outcome=ejected t_reach=" << rep.t_reach << " r_max=" << rep.r_max
                << " monotone=" << (rep.monotone ? "yes" : "no") << "\n";
    } else {
      std::cout << "outcome=trapped r_max=" << rep.r_max << "\n";
    }
    return 0;
  }
  if (verify->parsed()) {
    const qhj::BoundState st = state_of(o);
    const qhj::HiddenVariables hv = hidden_of(o);
    const qhj::ComponentResiduals cr = qhj::verify_component_qshje(st, hv);
    const double full = qhj::verify_full_qshje(st, hv);
    std::cout << "radial_residual=" << cr.radial << "\n"
              << "polar_residual=" << cr.polar << "\n"
              << "azimuthal_residual=" << cr.azimuthal << "\n"
              << "full_residual=" << full << "\n";
    const bool ok = cr.worst() < o.tol && full < o.tol;
    std::cout << "verify: " << (ok ? "PASS" : "FAIL") << " tol=" << o.tol << "\n";
    return ok ? 0 : 2;
  }
  if (info->parsed()) {
    const qhj::BoundState st = state_of(o);
    const qhj::TrapZone z = qhj::trap_zone(st);
    const double f = len_factor(o);
    std::cout << "state n=" << st.n << " l=" << st.l << " m=" << st.m << "\n"
              << "energy_internal=" << st.energy << "\n"
              << "energy_ev=" << qhj::energy_of_level_ev(st.n) << "\n"
              << "lambda=" << st.lambda << "\n"
              << "r_inner=" << z.r_inner * f << " r_outer=" << z.r_outer * f << " units="
              << o.units << "\n"
              << "expected_nodes=" << qhj::expected_node_count(st).count << "\n";
    if (std::abs(st.m) >= 1) {
      const double m2q = static_cast<double>(st.m) * st.m - 0.25;
      std::cout << "polar_band_sin2=" << m2q / st.lambda << "\n";
    } else {
      std::cout << "polar_band_sin2=none (reaches the poles)\n";
    }
    return 0;
  }
  if (figures->parsed()) {
    const std::filesystem::path defaults_path =
        o.hidden_sets.empty() ? qhj::default_scenario_file() : std::filesystem::path(o.hidden_sets);
    const qhj::ScenarioDefaults d = qhj::load_scenario_defaults(defaults_path);
    const auto files = o.only > 0 ? qhj::emit_figure(o.only, o.out_dir, d, o.cfg)
                                  : qhj::emit_figure_bundle(o.out_dir, d, o.cfg);
    for (const auto& p : files) std::cout << p.string() << "\n";
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
