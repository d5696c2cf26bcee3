#include "qhj/basis.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qhj/constants.hpp"

namespace qhj {

namespace {
constexpr double kPi = std::numbers::pi;

long ints_strictly_between(double x, double y) {
  if (x > y) std::swap(x, y);
  const long lo = static_cast<long>(std::floor(x)) + 1;
  const long hi = static_cast<long>(std::ceil(y)) - 1;
  return std::max(0L, hi - lo + 1);
}
}  // namespace

BoundState make_bound_state(int n, int l, int m) {
  if (n < 1) throw std::domain_error("principal quantum number must be >= 1");
  if (l < 0 || l >= n) throw std::domain_error("orbital quantum number must satisfy 0 <= l < n");
  if (std::abs(m) > l) throw std::domain_error("magnetic quantum number must satisfy |m| <= l");
  BoundState st;
  st.n = n;
  st.l = l;
  st.m = m;
  st.energy = energy_of_level(n);
  st.lambda = static_cast<double>(l) * (l + 1);
  return st;
}

int s1_zero_count_between(const SolutionPair& p, double q0, double q1) {
  if (q0 > q1) std::swap(q0, q1);
  if (p.coordinate == Coordinate::Azimuthal) {
    if (p.azimuthal_m == 0) return 0;
    const double k = p.azimuthal_m;
    return static_cast<int>(ints_strictly_between(k * q0 / kPi, k * q1 / kPi));
  }
  auto lo = std::upper_bound(p.s1_zeros.begin(), p.s1_zeros.end(), q0);
  auto hi = std::lower_bound(p.s1_zeros.begin(), p.s1_zeros.end(), q1);
  return static_cast<int>(hi > lo ? hi - lo : 0);
}

PolyExp radial_first_solution(int n, int l) {
  if (n < 1 || l < 0 || l >= n) throw std::domain_error("invalid radial state");
  PolyExp f{poly_monomial(n + l), 2.0 / n};
  for (int i = 0; i < n - l - 1; ++i) f = polyexp_derivative(f);
  f.poly = poly_shift_down(f.poly, l);
  f.rate -= 1.0 / n;  // multiply through by exp(+r/n)
  return f;
}

SinPowSeries polar_first_solution(int l, int m) {
  const int ma = std::abs(m);
  if (l < 0 || ma > l) throw std::domain_error("invalid polar state");
  Polynomial one_minus_u2;
  one_minus_u2.coeffs = Eigen::Vector3d(1.0, 0.0, -1.0);
  Polynomial w = poly_constant(1.0);
  for (int i = 0; i < l; ++i) w = poly_mul(w, one_minus_u2);
  for (int i = 0; i < l + ma; ++i) w = poly_derivative(w);
  const double lead = w.coeffs[poly_degree(w)];
  w = poly_scale(w, 1.0 / lead);
  SinPowSeries s;
  s.terms.push_back({2 * ma + 1, w});
  return s;
}

std::function<double(double)> radial_ode_g(const BoundState& st) {
  const double inv_n2 = 1.0 / (static_cast<double>(st.n) * st.n);
  const double lambda = st.lambda;
  return [inv_n2, lambda](double r) { return inv_n2 - 2.0 / r + lambda / (r * r); };
}

std::function<double(double)> polar_ode_g(const BoundState& st) {
  const double m2q = static_cast<double>(st.m) * st.m - 0.25;
  const double c = st.lambda + 0.25;
  return [m2q, c](double th) {
    const double s = std::sin(th);
    return m2q / (s * s) - c;
  };
}

std::function<double(double)> azimuthal_ode_g(const BoundState& st) {
  const double m2 = static_cast<double>(st.m) * st.m;
  return [m2](double) { return -m2; };
}

SolutionPair make_pair_numeric(Coordinate coord, Evaluator s1, std::function<double(double)> g,
                               double lo, double hi, std::vector<double> s1_zeros,
                               double anchor_hint) {
  // Deterministic anchor choice: the hint if s1 is large enough there,
  // otherwise the best of a fixed scan grid.
  double best_q = anchor_hint, best_v = 0.0;
  const int grid = 256;
  for (int i = 1; i < grid; ++i) {
    const double q = lo + (hi - lo) * static_cast<double>(i) / grid;
    const double v = std::abs(s1(q).value);
    if (v > best_v) {
      best_v = v;
      best_q = q;
    }
  }
  double anchor = anchor_hint;
  if (!(anchor > lo && anchor < hi) || std::abs(s1(anchor).value) < 1e-3 * best_v) anchor = best_q;

  const double s1a = s1(anchor).value;
  auto table = std::make_shared<LinearOdeTable>(g, anchor, 0.0, 1.0 / s1a, lo, hi);

  SolutionPair p;
  p.coordinate = coord;
  p.s1 = std::move(s1);
  p.s2 = [table](double q) { return table->eval(q); };
  p.ode_g = std::move(g);
  p.lo = lo;
  p.hi = hi;
  p.action_ref = anchor;
  p.s1_zeros = std::move(s1_zeros);
  std::sort(p.s1_zeros.begin(), p.s1_zeros.end());
  return p;
}

SolutionPair make_radial_pair(const BoundState& st, double r_hi) {
  if (r_hi <= 4.0 * st.n * st.n)
    throw std::invalid_argument("make_radial_pair: r_hi must exceed the trap region");
  const PolyExp chi = radial_first_solution(st.n, st.l);
  std::vector<double> zeros = poly_roots_in(chi.poly, 0.0, r_hi);
  if (static_cast<int>(zeros.size()) != st.n - st.l - 1)
    throw std::logic_error("make_radial_pair: unexpected interior zero count");
  Evaluator s1 = [chi](double r) { return polyexp_eval(chi, r); };
  return make_pair_numeric(Coordinate::Radial, std::move(s1), radial_ode_g(st), 1e-7, r_hi,
                           std::move(zeros), 1.0);
}

namespace {

SolutionPair polar_pair_closed(const BoundState& st, const SinPowSeries& s1s,
                               const PolarLogForm& s2f, std::vector<double> zeros,
                               double action_ref) {
  SolutionPair p;
  p.coordinate = Coordinate::Polar;
  p.s1 = [s1s](double th) { return sinpow_eval(s1s, th); };
  p.s2 = [s2f](double th) { return polarlog_eval(s2f, th); };
  p.ode_g = polar_ode_g(st);
  p.lo = 0.0;
  p.hi = kPi;
  p.action_ref = action_ref;
  p.s1_zeros = std::move(zeros);
  return p;
}

}  // namespace

SolutionPair make_polar_pair(const BoundState& st) {
  const int l = st.l, ma = std::abs(st.m);
  const SinPowSeries s1s = polar_first_solution(l, ma);

  if (l == 0 && ma == 0) {
    // s2 = sin^(1/2) ln tan(theta/2)
    PolarLogForm s2;
    s2.logpart = s1s;
    return polar_pair_closed(st, s1s, s2, {}, kPi / 2);
  }
  if (l == 1 && ma == 0) {
    // s1 = sin^(1/2) cos, s2 = sin^(1/2) (1 + cos) + sin^(1/2) cos ln tan(theta/2)
    PolarLogForm s2;
    SinPowTerm plain{1, Polynomial{}};
    plain.w.coeffs = Eigen::Vector2d(1.0, 1.0);
    s2.plain.terms.push_back(plain);
    s2.logpart = s1s;
    return polar_pair_closed(st, s1s, s2, {kPi / 2}, kPi / 4);
  }
  if (l == 1 && ma == 1) {
    // s1 = sin^(3/2), s2 = -(1/2) cos sin^(-1/2) + (1/2) sin^(3/2) ln tan(theta/2)
    PolarLogForm s2;
    SinPowTerm plain{-1, Polynomial{}};
    plain.w.coeffs = Eigen::Vector2d(0.0, -0.5);
    s2.plain.terms.push_back(plain);
    s2.logpart = sinpow_scale(s1s, 0.5);
    return polar_pair_closed(st, s1s, s2, {}, kPi / 2);
  }

  // General state: tabulated second solution. Interior zeros come from the
  // polynomial factor in u = cos theta.
  std::vector<double> uroots = poly_roots_in(s1s.terms.front().w, -1.0 + 1e-9, 1.0 - 1e-9);
  std::vector<double> zeros;
  zeros.reserve(uroots.size());
  for (double u : uroots) zeros.push_back(std::acos(u));
  std::sort(zeros.begin(), zeros.end());
  Evaluator s1 = [s1s](double th) { return sinpow_eval(s1s, th); };
  return make_pair_numeric(Coordinate::Polar, std::move(s1), polar_ode_g(st), 1e-8, kPi - 1e-8,
                           std::move(zeros), kPi / 2);
}

SolutionPair make_azimuthal_pair(const BoundState& st) {
  SolutionPair p;
  p.coordinate = Coordinate::Azimuthal;
  p.ode_g = azimuthal_ode_g(st);
  p.lo = -1e12;
  p.hi = 1e12;
  p.azimuthal_m = std::abs(st.m);
  if (st.m == 0) {
    p.s1 = [](double) { return Eval{1.0, 0.0}; };
    p.s2 = [](double phi) { return Eval{phi, 1.0}; };
    p.action_ref = 0.0;
  } else {
    const double k = std::abs(st.m);
    p.s1 = [k](double phi) { return Eval{std::sin(k * phi), k * std::cos(k * phi)}; };
    p.s2 = [k](double phi) { return Eval{-std::cos(k * phi) / k, std::sin(k * phi)}; };
    p.action_ref = kPi / (2.0 * k);
  }
  return p;
}

}  // namespace qhj
