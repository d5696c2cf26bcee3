#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qhj/quantum_dynamics.hpp"

namespace qhj {

// Hidden-variable sets for the bundled scenarios, keyed "fig02", "fig12.10",
// ... Each key maps to a list of numeric tuples (one tuple per curve).
struct ScenarioDefaults {
  std::map<std::string, std::vector<std::vector<double>>> sets;
};

ScenarioDefaults load_scenario_defaults(const std::filesystem::path& path);

// share/figure_hidden_sets.cfg next to the sources; QHJ_SHARE_DIR in the
// environment overrides the baked-in location.
std::filesystem::path default_scenario_file();

// Writes the CSV data and gnuplot script for one bundled scenario (1-12)
// into out_dir and returns the paths. Output is deterministic: identical
// inputs produce byte-identical files.
std::vector<std::filesystem::path> emit_figure(int id, const std::filesystem::path& out_dir,
                                               const ScenarioDefaults& defaults,
                                               const IntegratorConfig& base);

std::vector<std::filesystem::path> emit_figure_bundle(const std::filesystem::path& out_dir,
                                                      const ScenarioDefaults& defaults,
                                                      const IntegratorConfig& base);

}  // namespace qhj
