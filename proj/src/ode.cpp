#include "qhj/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qhj {

double step_scale(double err_norm) {
  if (err_norm <= 0.0) return 5.0;
  return std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double xtol,
                   int max_iter) {
  double fa = f(lo), fb = f(hi);
  if (fa == 0.0) return lo;
  if (fb == 0.0) return hi;
  if (fa * fb > 0.0) throw std::invalid_argument("bisect_root: endpoints do not bracket a root");
  double a = lo, b = hi;
  for (int it = 0; it < max_iter && (b - a) > xtol * std::max(1.0, std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (fa * fm < 0.0) {
      b = m;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

namespace {

// Two-point quintic Hermite with value, slope and curvature at each end.
Eval hermite_quintic(double h, double s, double y0, double yp0, double ypp0, double y1, double yp1,
                     double ypp1) {
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
  const double Hv0 = s - 6 * s3 + 8 * s4 - 3 * s5;
  const double Ha0 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
  const double H1 = 10 * s3 - 15 * s4 + 6 * s5;
  const double Hv1 = -4 * s3 + 7 * s4 - 3 * s5;
  const double Ha1 = 0.5 * (s3 - 2 * s4 + s5);
  const double dH0 = -30 * s2 + 60 * s3 - 30 * s4;
  const double dHv0 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
  const double dHa0 = 0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4);
  const double dH1 = 30 * s2 - 60 * s3 + 30 * s4;
  const double dHv1 = -12 * s2 + 28 * s3 - 15 * s4;
  const double dHa1 = 0.5 * (3 * s2 - 8 * s3 + 5 * s4);
  Eval out;
  out.value = y0 * H0 + h * yp0 * Hv0 + h * h * ypp0 * Ha0 + y1 * H1 + h * yp1 * Hv1 +
              h * h * ypp1 * Ha1;
  out.deriv = (y0 * dH0 + h * yp0 * dHv0 + h * h * ypp0 * dHa0 + y1 * dH1 + h * yp1 * dHv1 +
               h * h * ypp1 * dHa1) /
              h;
  return out;
}

}  // namespace

LinearOdeTable::LinearOdeTable(std::function<double(double)> g, double anchor, double y0,
                               double yp0, double lo, double hi, double rel_tol)
    : g_(std::move(g)), anchor_(anchor) {
  if (!(lo < anchor && anchor < hi))
    throw std::invalid_argument("LinearOdeTable: anchor outside (lo, hi)");
  const double atol = 1e-300;  // pure relative control; solutions can span many decades

  auto rhs = [this](double q, const StateVec<2>& y) {
    return StateVec<2>(y[1], g_(q) * y[0]);
  };

  auto march = [&](double target, std::vector<Node>& out) {
    double q = anchor_;
    StateVec<2> y(y0, yp0);
    const double dir = target > q ? 1.0 : -1.0;
    double h = dir * 1e-4;
    long guard = 0;
    while (dir * (target - q) > 0.0) {
      const double cap = 0.05 / std::sqrt(std::abs(g_(q)) + 0.25);
      if (std::abs(h) > cap) h = dir * cap;
      if (dir * (q + h - target) > 0.0) h = target - q;
      const StepResult<2> st = rk45_step<2>(rhs, q, y, h);
      const double en = error_norm<2>(st.err, y, st.y, atol, rel_tol);
      if (!std::isfinite(en)) {
        h *= 0.25;
        continue;
      }
      if (en <= 1.0) {
        q += h;
        y = st.y;
        out.push_back({q, y[0], y[1]});
        h *= step_scale(en);
      } else {
        h *= step_scale(en);
      }
      if (++guard > 2000000) throw std::runtime_error("LinearOdeTable: step limit exceeded");
      if (q + h == q) throw std::runtime_error("LinearOdeTable: step underflow");
    }
  };

  std::vector<Node> down, up;
  march(lo, down);
  march(hi, up);
  nodes_.reserve(down.size() + up.size() + 1);
  for (auto it = down.rbegin(); it != down.rend(); ++it) nodes_.push_back(*it);
  nodes_.push_back({anchor_, y0, yp0});
  for (const auto& n : up) nodes_.push_back(n);
}

Eval LinearOdeTable::eval(double q) const {
  if (q < nodes_.front().q || q > nodes_.back().q)
    throw std::out_of_range("LinearOdeTable: query outside tabulated range");
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), q,
                             [](double v, const Node& n) { return v < n.q; });
  if (it == nodes_.begin()) ++it;
  if (it == nodes_.end()) --it;
  const Node& n1 = *it;
  const Node& n0 = *(it - 1);
  const double h = n1.q - n0.q;
  const double s = (q - n0.q) / h;
  return hermite_quintic(h, s, n0.y, n0.yp, g_(n0.q) * n0.y, n1.y, n1.yp, g_(n1.q) * n1.y);
}

}  // namespace qhj
