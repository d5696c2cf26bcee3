#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qhj/quantum_dynamics.hpp"
#include "qhj/trajectory.hpp"

namespace qhj {

// Confinement region: positive-bracket interval of E + 1/r - lambda/(2 r^2).
// For l = 0 the region reaches the origin and r_inner is 0.
struct TrapZone {
  double r_inner = 0.0;
  double r_outer = 0.0;
  bool contains_origin = false;
};

TrapZone trap_zone(const BoundState& st);

struct RadialCluster {
  double radius = 0.0;
  int support = 0;  // distinct trajectories contributing
};

struct SpatialNode {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  int support = 0;
};

struct NodeCatalog {
  std::vector<RadialCluster> turn_radii;
  std::vector<SpatialNode> nodes;
};

// Turning radii clustered across an ensemble, and grid cells of Cartesian
// space visited by at least two distinct trajectories. Needs >= 2 inputs.
NodeCatalog detect_nodes(const std::vector<Trajectory>& trajs, double radial_tol = 1e-6,
                         double cell = 0.05);

struct NodeExpectation {
  int count = 0;
  std::vector<double> radii;  // one entry per expected node
};

// Expected nodes for the state: zones reaching the origin funnel every
// trajectory through r=0 and touch the outer shell twice (antipodal), three
// nodes total; otherwise the two shell radii.
NodeExpectation expected_node_count(const BoundState& st);

enum class EjectionOutcome { Ejected, Trapped };

struct EjectionReport {
  EjectionOutcome outcome = EjectionOutcome::Trapped;
  double t_reach = 0.0;  // time the escape march reached the ejection radius
  double r_max = 0.0;
  bool monotone = false;  // r non-decreasing along the whole run
};

// Runs the trajectory and classifies: Ejected when the ejection radius is
// reached, Trapped once both confinement walls have been touched.
EjectionReport classify_ejection(const BoundState& st, const HiddenVariables& hv, double r0,
                                 const IntegratorConfig& cfg);

}  // namespace qhj
