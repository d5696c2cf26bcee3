#pragma once

#include <functional>
#include <vector>

#include "qhj/ode.hpp"
#include "qhj/polynomials.hpp"

namespace qhj {

enum class Coordinate { Radial, Polar, Azimuthal };

struct BoundState {
  int n = 1, l = 0, m = 0;
  double energy = -0.5;  // internal units
  double lambda = 0.0;   // l (l + 1)
};

// Validates 0 <= l < n and |m| <= l.
BoundState make_bound_state(int n, int l, int m);

using Evaluator = std::function<Eval(double)>;

// Two real solutions of s'' = g(q) s with wronskian s2' s1 - s2 s1' = 1.
struct SolutionPair {
  Coordinate coordinate = Coordinate::Radial;
  Evaluator s1, s2;
  std::function<double(double)> ode_g;
  double lo = 0.0, hi = 0.0;     // open interval the evaluators cover
  double action_ref = 0.0;       // base point for the continued action
  std::vector<double> s1_zeros;  // interior zeros of s1, ascending (empty when counted analytically)
  int azimuthal_m = 0;           // |m|, used only by azimuthal pairs
};

// Zeros of s1 strictly between q0 and q1, in either order.
int s1_zero_count_between(const SolutionPair& p, double q0, double q1);

// Bound radial solution: lowest power r^(l+1), exponential rate 1/n. Built by
// differentiating r^(n+l) exp(-2r/n) (n-l-1) times and removing r^l exactly.
PolyExp radial_first_solution(int n, int l);

// sin^(|m|+1/2) * W(cos theta) with W the (l+|m|)-th derivative of
// (1-u^2)^l, rescaled monic so the leading coefficient is +1.
SinPowSeries polar_first_solution(int l, int m);

std::function<double(double)> radial_ode_g(const BoundState& st);
std::function<double(double)> polar_ode_g(const BoundState& st);
std::function<double(double)> azimuthal_ode_g(const BoundState& st);

// Radial pair valid on (0, r_hi); the second solution is tabulated from an
// anchor where s1 is comfortably nonzero.
SolutionPair make_radial_pair(const BoundState& st, double r_hi);

// Polar pair on (0, pi). (l,|m|) in {(0,0),(1,0),(1,1)} use closed forms
// whose second solution carries a ln tan(theta/2) part; other states fall
// back to the tabulated second solution.
SolutionPair make_polar_pair(const BoundState& st);

// Azimuthal pair: constant/linear for m = 0, sin/-cos/|m| otherwise.
SolutionPair make_azimuthal_pair(const BoundState& st);

// Generic numeric second solution for a supplied s1: s2(anchor) = 0,
// s2'(anchor) = 1/s1(anchor) makes the wronskian exactly 1.
SolutionPair make_pair_numeric(Coordinate coord, Evaluator s1, std::function<double(double)> g,
                               double lo, double hi, std::vector<double> s1_zeros,
                               double anchor_hint);

}  // namespace qhj
