#include "qhj/polynomials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qhj {

Polynomial poly_constant(double c) {
  Polynomial p;
  p.coeffs = Eigen::VectorXd::Constant(1, c);
  return p;
}

Polynomial poly_monomial(int degree, double scale) {
  Polynomial p;
  p.coeffs = Eigen::VectorXd::Zero(degree + 1);
  p.coeffs[degree] = scale;
  return p;
}

int poly_degree(const Polynomial& p) {
  for (int i = static_cast<int>(p.coeffs.size()) - 1; i > 0; --i)
    if (p.coeffs[i] != 0.0) return i;
  return 0;
}

double poly_eval(const Polynomial& p, double x) {
  double acc = 0.0;
  for (int i = static_cast<int>(p.coeffs.size()) - 1; i >= 0; --i) acc = acc * x + p.coeffs[i];
  return acc;
}

Polynomial poly_derivative(const Polynomial& p) {
  const int n = static_cast<int>(p.coeffs.size());
  Polynomial d;
  if (n <= 1) {
    d.coeffs = Eigen::VectorXd::Zero(1);
    return d;
  }
  d.coeffs = Eigen::VectorXd::Zero(n - 1);
  for (int i = 1; i < n; ++i) d.coeffs[i - 1] = i * p.coeffs[i];
  return d;
}

Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  const int n = static_cast<int>(std::max(a.coeffs.size(), b.coeffs.size()));
  r.coeffs = Eigen::VectorXd::Zero(n);
  r.coeffs.head(a.coeffs.size()) = a.coeffs;
  r.coeffs.head(b.coeffs.size()) += b.coeffs;
  return r;
}

Polynomial poly_scale(const Polynomial& p, double s) {
  Polynomial r;
  r.coeffs = p.coeffs * s;
  return r;
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  r.coeffs = Eigen::VectorXd::Zero(a.coeffs.size() + b.coeffs.size() - 1);
  for (int i = 0; i < a.coeffs.size(); ++i)
    for (int j = 0; j < b.coeffs.size(); ++j) r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  return r;
}

Polynomial poly_shift_down(const Polynomial& p, int k) {
  if (k == 0) return p;
  if (k >= p.coeffs.size()) throw std::invalid_argument("poly_shift_down: k exceeds degree");
  const double scale = p.coeffs.cwiseAbs().maxCoeff();
  for (int i = 0; i < k; ++i)
    if (std::abs(p.coeffs[i]) > 1e-9 * scale)
      throw std::invalid_argument("poly_shift_down: low-order coefficient is not negligible");
  Polynomial r;
  r.coeffs = p.coeffs.tail(p.coeffs.size() - k).eval();
  return r;
}

std::vector<double> poly_roots_in(const Polynomial& p, double lo, double hi) {
  std::vector<double> roots;
  const int steps = 4000;
  double prev_x = lo;
  double prev_f = poly_eval(p, lo);
  for (int i = 1; i <= steps; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / steps;
    const double f = poly_eval(p, x);
    if (prev_f == 0.0 && prev_x > lo) roots.push_back(prev_x);
    if (prev_f * f < 0.0) {
      double a = prev_x, b = x, fa = prev_f;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = poly_eval(p, m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if (fa * fm < 0.0) {
          b = m;
        } else {
          a = m;
          fa = fm;
        }
        if (b - a < 1e-15 * std::max(1.0, std::abs(m))) break;
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_f = f;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

Eval polyexp_eval(const PolyExp& f, double x) {
  const double e = std::exp(-f.rate * x);
  const double p = poly_eval(f.poly, x);
  const double dp = poly_eval(poly_derivative(f.poly), x);
  return {p * e, (dp - f.rate * p) * e};
}

PolyExp polyexp_derivative(const PolyExp& f) {
  return {poly_add(poly_derivative(f.poly), poly_scale(f.poly, -f.rate)), f.rate};
}

static void sinpow_push(SinPowSeries& s, int twice_power, const Polynomial& w) {
  for (auto& term : s.terms) {
    if (term.twice_power == twice_power) {
      term.w = poly_add(term.w, w);
      return;
    }
  }
  s.terms.push_back({twice_power, w});
}

Eval sinpow_eval(const SinPowSeries& s, double theta) {
  const double sn = std::sin(theta);
  const double u = std::cos(theta);
  if (!(sn > 0.0)) throw std::domain_error("sinpow_eval: theta outside (0, pi)");
  const SinPowSeries ds = sinpow_derivative(s);
  double v = 0.0, dv = 0.0;
  for (const auto& t : s.terms) v += std::pow(sn, 0.5 * t.twice_power) * poly_eval(t.w, u);
  for (const auto& t : ds.terms) dv += std::pow(sn, 0.5 * t.twice_power) * poly_eval(t.w, u);
  return {v, dv};
}

SinPowSeries sinpow_derivative(const SinPowSeries& s) {
  // d/dtheta [sin^p W(u)] = sin^(p-1) [p u W - (1 - u^2) W'], u = cos theta.
  SinPowSeries r;
  Polynomial one_minus_u2;
  one_minus_u2.coeffs = Eigen::Vector3d(1.0, 0.0, -1.0);
  for (const auto& t : s.terms) {
    Polynomial uW = poly_mul(poly_monomial(1), t.w);
    Polynomial part = poly_add(poly_scale(uW, 0.5 * t.twice_power),
                               poly_scale(poly_mul(one_minus_u2, poly_derivative(t.w)), -1.0));
    sinpow_push(r, t.twice_power - 2, part);
  }
  return r;
}

SinPowSeries sinpow_scale(const SinPowSeries& s, double c) {
  SinPowSeries r = s;
  for (auto& t : r.terms) t.w = poly_scale(t.w, c);
  return r;
}

SinPowSeries sinpow_div_sin(const SinPowSeries& s) {
  SinPowSeries r = s;
  for (auto& t : r.terms) t.twice_power -= 2;
  return r;
}

Eval polarlog_eval(const PolarLogForm& f, double theta) {
  const double lt = std::log(std::abs(std::tan(0.5 * theta)));
  const Eval p = sinpow_eval(f.plain, theta);
  const Eval l = sinpow_eval(f.logpart, theta);
  const double inv_sin = 1.0 / std::sin(theta);
  return {p.value + l.value * lt, p.deriv + l.deriv * lt + l.value * inv_sin};
}

}  // namespace qhj
