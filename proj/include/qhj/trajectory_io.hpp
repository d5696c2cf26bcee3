#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qhj/constants.hpp"
#include "qhj/trajectory.hpp"

namespace qhj {

struct CsvOptions {
  UnitSystem units = UnitSystem::Internal;
  std::string command;  // echoed into the header for reproducibility
};

// Columns: t,r,theta,phi,x,y,z,eq46_residual. Cartesian columns are computed
// from the spherical ones at write time; numbers are printed with %.17g so
// rereading is lossless.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const CsvOptions& opt = {});
void write_trajectory_csv_file(const std::filesystem::path& path, const Trajectory& traj,
                               const CsvOptions& opt = {});

// Two-column angular path files and generic small tables share one writer.
void write_table_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& comment_lines,
                     const std::string& column_line,
                     const std::vector<std::vector<double>>& rows);

struct CsvHeader {
  std::string mode, units, termination;
  bool has_state = false;
  int n = 0, l = 0, m = 0;
  HiddenVariables hidden;
  bool classical = false;
  ClassicalParams classical_params;
  long event_count = 0;
  std::vector<TrajectoryEvent> events;
};

struct CsvData {
  CsvHeader header;
  std::vector<std::array<double, 8>> rows;
};

CsvData read_trajectory_csv(std::istream& is);
CsvData read_trajectory_csv_file(const std::filesystem::path& path);

}  // namespace qhj
