#pragma once

#include <Eigen/Dense>
#include <vector>

namespace qhj {

// Value/derivative pair returned by the closed-form and tabulated evaluators.
struct Eval {
  double value;
  double deriv;
};

// Dense polynomial, coeffs[i] multiplies x^i. coeffs has at least one entry.
struct Polynomial {
  Eigen::VectorXd coeffs;
};

Polynomial poly_constant(double c);
Polynomial poly_monomial(int degree, double scale = 1.0);
int poly_degree(const Polynomial& p);
double poly_eval(const Polynomial& p, double x);
Polynomial poly_derivative(const Polynomial& p);
Polynomial poly_add(const Polynomial& a, const Polynomial& b);
Polynomial poly_scale(const Polynomial& p, double s);
Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
// Quotient of p by x^k. Throws if any of the low-order coefficients are not
// negligible next to the largest one.
Polynomial poly_shift_down(const Polynomial& p, int k);
// Real roots strictly inside (lo, hi), sorted, found by sign-change scan plus
// bisection. Intended for well-separated simple roots.
std::vector<double> poly_roots_in(const Polynomial& p, double lo, double hi);

// p(x) * exp(-rate * x).
struct PolyExp {
  Polynomial poly;
  double rate;
};

Eval polyexp_eval(const PolyExp& f, double x);
PolyExp polyexp_derivative(const PolyExp& f);

// Finite sum of sin(theta)^(tp/2) * W(cos theta) terms. Half-integer powers
// are kept exact by storing twice the exponent.
struct SinPowTerm {
  int twice_power;
  Polynomial w;
};

struct SinPowSeries {
  std::vector<SinPowTerm> terms;
};

Eval sinpow_eval(const SinPowSeries& s, double theta);
SinPowSeries sinpow_derivative(const SinPowSeries& s);
SinPowSeries sinpow_scale(const SinPowSeries& s, double c);
// Divide every term by sin(theta).
SinPowSeries sinpow_div_sin(const SinPowSeries& s);

// plain(theta) + logpart(theta) * ln|tan(theta/2)|, the shape taken by the
// second polar solution. The derivative stays in the same family because
// d/dtheta ln tan(theta/2) = 1/sin(theta).
struct PolarLogForm {
  SinPowSeries plain;
  SinPowSeries logpart;
};

Eval polarlog_eval(const PolarLogForm& f, double theta);

}  // namespace qhj
