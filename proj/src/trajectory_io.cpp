#include "qhj/trajectory_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qhj {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* kColumns = "t,r,theta,phi,x,y,z,eq46_residual";

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const CsvOptions& opt) {
  const bool si = opt.units == UnitSystem::Si;
  const double len = si ? si_factor(Quantity::Length) : 1.0;
  const double tim = si ? si_factor(Quantity::Time) : 1.0;

  os << "# qhj trajectory v1\n";
  if (!opt.command.empty()) os << "# command: " << opt.command << "\n";
  os << "# mode: " << traj.mode << "\n";
  if (traj.classical) {
    const ClassicalParams& p = traj.classical_params;
    os << "# classical: energy=" << fmt(p.energy) << " alpha=" << fmt(p.alpha)
       << " beta=" << fmt(p.beta) << " sign_r=" << p.sign_r << " sign_theta=" << p.sign_theta
       << " sign_phi=" << p.sign_phi << "\n";
  } else {
    os << "# state: n=" << traj.state.n << " l=" << traj.state.l << " m=" << traj.state.m
       << "\n";
    const HiddenVariables& h = traj.hidden;
    os << "# hidden: a_r=" << fmt(h.a_r) << " b_r=" << fmt(h.b_r) << " a_theta=" << fmt(h.a_theta)
       << " b_theta=" << fmt(h.b_theta) << " a_phi=" << fmt(h.a_phi) << " b_phi=" << fmt(h.b_phi)
       << " sign_r=" << h.sign_r << " sign_theta=" << h.sign_theta << " sign_phi=" << h.sign_phi
       << "\n";
  }
  os << "# units: " << (si ? "si (t in s; r,x,y,z in m; angles in rad)"
                           : "internal (hbar = m0 = a0 = 1)")
     << "\n";
  os << "# termination: " << termination_name(traj.termination) << "\n";
  os << "# events: " << traj.events.size() << "\n";
  for (const auto& ev : traj.events)
    os << "# event: t=" << fmt(ev.t * tim) << " kind=" << event_kind_name(ev.kind)
       << " r=" << fmt(ev.r * len) << " theta=" << fmt(ev.theta) << " phi=" << fmt(ev.phi)
       << "\n";
  os << "# columns: " << kColumns << "\n";

  for (const auto& s : traj.samples) {
    const double sn = std::sin(s.theta);
    const double x = s.r * sn * std::cos(s.phi);
    const double y = s.r * sn * std::sin(s.phi);
    const double z = s.r * std::cos(s.theta);
    os << fmt(s.t * tim) << ',' << fmt(s.r * len) << ',' << fmt(s.theta) << ',' << fmt(s.phi)
       << ',' << fmt(x * len) << ',' << fmt(y * len) << ',' << fmt(z * len) << ','
       << fmt(s.energy_residual) << '\n';
  }
}

void write_trajectory_csv_file(const std::filesystem::path& path, const Trajectory& traj,
                               const CsvOptions& opt) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  write_trajectory_csv(os, traj, opt);
  if (!os.good()) throw std::runtime_error("write failed: " + path.string());
}

void write_table_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& comment_lines,
                     const std::string& column_line,
                     const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  for (const auto& line : comment_lines) os << "# " << line << "\n";
  os << "# columns: " << column_line << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
    os << '\n';
  }
  if (!os.good()) throw std::runtime_error("write failed: " + path.string());
}

namespace {

// "key=value" scanner for the header lines.
double header_num(const std::string& line, const std::string& key, double fallback) {
  const std::string tag = key + "=";
  const size_t pos = line.find(tag);
  if (pos == std::string::npos) return fallback;
  return std::strtod(line.c_str() + pos + tag.size(), nullptr);
}

std::string header_word(const std::string& line, const std::string& key) {
  const std::string tag = key + "=";
  const size_t pos = line.find(tag);
  if (pos == std::string::npos) return {};
  const size_t start = pos + tag.size();
  size_t end = line.find(' ', start);
  if (end == std::string::npos) end = line.size();
  return line.substr(start, end - start);
}

EventKind parse_event_kind(const std::string& name) {
  if (name == "radial_turn") return EventKind::RadialTurn;
  if (name == "polar_turn") return EventKind::PolarTurn;
  if (name == "sign_flip") return EventKind::SignFlip;
  if (name == "pole_pass") return EventKind::PolePass;
  if (name == "origin_approach") return EventKind::OriginApproach;
  if (name == "ejection") return EventKind::Ejection;
  throw std::runtime_error("unknown event kind in header: " + name);
}

}  // namespace

CsvData read_trajectory_csv(std::istream& is) {
  CsvData data;
  std::string line;
  bool saw_magic = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = line.substr(line.find_first_not_of("# "));
      if (body.rfind("qhj trajectory", 0) == 0) saw_magic = true;
      if (body.rfind("mode: ", 0) == 0) data.header.mode = body.substr(6);
      if (body.rfind("units: ", 0) == 0)
        data.header.units = body.substr(7, body.find(' ', 7) - 7);
      if (body.rfind("termination: ", 0) == 0) data.header.termination = body.substr(13);
      if (body.rfind("state: ", 0) == 0) {
        data.header.has_state = true;
        data.header.n = static_cast<int>(header_num(body, "n", 0));
        data.header.l = static_cast<int>(header_num(body, "l", 0));
        data.header.m = static_cast<int>(header_num(body, "m", 0));
      }
      if (body.rfind("hidden: ", 0) == 0) {
        HiddenVariables& h = data.header.hidden;
        h.a_r = header_num(body, "a_r", 1);
        h.b_r = header_num(body, "b_r", 0);
        h.a_theta = header_num(body, "a_theta", 1);
        h.b_theta = header_num(body, "b_theta", 0);
        h.a_phi = header_num(body, "a_phi", 1);
        h.b_phi = header_num(body, "b_phi", 0);
        h.sign_r = static_cast<int>(header_num(body, "sign_r", 1));
        h.sign_theta = static_cast<int>(header_num(body, "sign_theta", 1));
        h.sign_phi = static_cast<int>(header_num(body, "sign_phi", 1));
      }
      if (body.rfind("classical: ", 0) == 0) {
        data.header.classical = true;
        ClassicalParams& p = data.header.classical_params;
        p.energy = header_num(body, "energy", p.energy);
        p.alpha = header_num(body, "alpha", p.alpha);
        p.beta = header_num(body, "beta", p.beta);
        p.sign_r = static_cast<int>(header_num(body, "sign_r", 1));
        p.sign_theta = static_cast<int>(header_num(body, "sign_theta", 1));
        p.sign_phi = static_cast<int>(header_num(body, "sign_phi", 1));
      }
      if (body.rfind("events: ", 0) == 0)
        data.header.event_count = std::strtol(body.c_str() + 8, nullptr, 10);
      if (body.rfind("event: ", 0) == 0) {
        TrajectoryEvent ev;
        ev.t = header_num(body, "t", 0);
        ev.kind = parse_event_kind(header_word(body, "kind"));
        ev.r = header_num(body, "r", 0);
        ev.theta = header_num(body, "theta", 0);
        ev.phi = header_num(body, "phi", 0);
        data.header.events.push_back(ev);
      }
      if (body.rfind("columns: ", 0) == 0 && body.substr(9) != kColumns)
        throw std::runtime_error("unexpected column layout: " + body.substr(9));
      continue;
    }
    std::array<double, 8> row{};
    std::stringstream ss(line);
    std::string tok;
    for (int i = 0; i < 8; ++i) {
      if (!std::getline(ss, tok, ','))
        throw std::runtime_error("short data row in trajectory file");
      row[i] = std::strtod(tok.c_str(), nullptr);
    }
    data.rows.push_back(row);
  }
  if (!saw_magic) throw std::runtime_error("not a qhj trajectory file");
  data.header.event_count = static_cast<long>(data.header.events.size());
  return data;
}

CsvData read_trajectory_csv_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
  return read_trajectory_csv(is);
}

std::string event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::RadialTurn: return "radial_turn";
    case EventKind::PolarTurn: return "polar_turn";
    case EventKind::SignFlip: return "sign_flip";
    case EventKind::PolePass: return "pole_pass";
    case EventKind::OriginApproach: return "origin_approach";
    case EventKind::Ejection: return "ejection";
  }
  return "unknown";
}

std::string termination_name(Termination t) {
  switch (t) {
    case Termination::ReachedTimeEnd: return "reached_t_end";
    case Termination::Ejected: return "ejected";
    case Termination::RadialEventLimit: return "radial_event_limit";
    case Termination::StepLimit: return "step_limit";
    case Termination::Stalled: return "stalled";
  }
  return "unknown";
}

}  // namespace qhj
