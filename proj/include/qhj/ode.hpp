#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "qhj/polynomials.hpp"

namespace qhj {

template <int N>
using StateVec = Eigen::Matrix<double, N, 1>;

template <int N>
struct StepResult {
  StateVec<N> y;
  StateVec<N> err;
};

// One embedded Dormand-Prince 5(4) step of size h from (x, y). The returned
// state is the 5th-order solution, err the difference to the embedded
// 4th-order one.
template <int N, class Rhs>
StepResult<N> rk45_step(const Rhs& f, double x, const StateVec<N>& y, double h) {
  static const double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static const double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double b5[7] = {35.0 / 384,     0.0,        500.0 / 1113, 125.0 / 192,
                               -2187.0 / 6784, 11.0 / 84,  0.0};
  static const double b4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695, 393.0 / 640,
                               -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

  StateVec<N> k[7];
  k[0] = f(x, y);
  for (int s = 1; s < 7; ++s) {
    StateVec<N> ys = y;
    for (int j = 0; j < s; ++j) ys += (h * a[s][j]) * k[j];
    k[s] = f(x + c[s] * h, ys);
  }
  StepResult<N> out;
  out.y = y;
  out.err = StateVec<N>::Zero();
  for (int s = 0; s < 7; ++s) {
    out.y += (h * b5[s]) * k[s];
    out.err += (h * (b5[s] - b4[s])) * k[s];
  }
  return out;
}

// RMS of the error scaled by atol + rtol * |y|; a value <= 1 means accept.
template <int N>
double error_norm(const StateVec<N>& err, const StateVec<N>& y_old, const StateVec<N>& y_new,
                  double atol, double rtol) {
  double acc = 0.0;
  for (int i = 0; i < N; ++i) {
    const double scale = atol + rtol * std::max(std::abs(y_old[i]), std::abs(y_new[i]));
    const double v = err[i] / scale;
    acc += v * v;
  }
  return std::sqrt(acc / N);
}

// Step-size update for a 5th-order error estimate, clamped to [0.2, 5] times
// the previous step.
double step_scale(double err_norm);

// Sign-change bisection on [lo, hi]. Throws std::invalid_argument when the
// endpoint values do not bracket a root.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double xtol = 1e-13, int max_iter = 240);

// Dense solution of y'' = g(q) y built once by adaptive integration from an
// anchor point and evaluated by two-point quintic Hermite interpolation,
// using y'' = g y to supply the curvature at the stored nodes.
class LinearOdeTable {
 public:
  LinearOdeTable(std::function<double(double)> g, double anchor, double y0, double yp0,
                 double lo, double hi, double rel_tol = 1e-12);

  Eval eval(double q) const;
  double anchor_point() const { return anchor_; }
  double lo() const { return nodes_.front().q; }
  double hi() const { return nodes_.back().q; }

 private:
  struct Node {
    double q, y, yp;
  };
  std::vector<Node> nodes_;
  std::function<double(double)> g_;
  double anchor_;
};

}  // namespace qhj
