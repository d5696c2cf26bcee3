#pragma once

// Shared oracles for the test suite. Everything here is independent of the
// library's own numerics: plain Simpson quadrature, central differences, a
// fixed-step reference integrator, and a portable generator.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

// Adaptive Simpson quadrature with explicit recursion depth cap.
inline double simpson_slice(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_slice(f, a, m, fa, flm, fm);
  const double right = simpson_slice(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return adaptive_simpson(f, a, b, fa, fm, fb, simpson_slice(f, a, b, fa, fm, fb), tol, 48);
}

// Fourth-order central differences on an analytic function.
inline double diff1(const std::function<double(double)>& f, double x, double h = 1e-5) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline double diff2(const std::function<double(double)>& f, double x, double h = 1e-4) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
         (12 * h * h);
}

// Classic fixed-step fourth-order reference march for y'' = g(q) y.
struct LinearPair {
  double y, dy;
};

inline LinearPair march_linear(const std::function<double(double)>& g, double q0, double q1,
                               double y0, double dy0, int steps) {
  double q = q0, y = y0, dy = dy0;
  const double h = (q1 - q0) / steps;
  for (int i = 0; i < steps; ++i) {
    auto f = [&g](double qq, double yy, double dd) {
      (void)dd;
      return g(qq) * yy;
    };
    const double k1y = dy, k1d = f(q, y, dy);
    const double k2y = dy + 0.5 * h * k1d, k2d = f(q + 0.5 * h, y + 0.5 * h * k1y, 0);
    const double k3y = dy + 0.5 * h * k2d, k3d = f(q + 0.5 * h, y + 0.5 * h * k2y, 0);
    const double k4y = dy + h * k3d, k4d = f(q + h, y + h * k3y, 0);
    y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    dy += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
    q += h;
  }
  return {y, dy};
}

// Deterministic portable generator (same mapping as the tools use).
struct SplitMix64 {
  std::uint64_t s;
  double next() {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
  double in(double lo, double hi) { return lo + (hi - lo) * next(); }
};

// Run a command line, capture stdout, and report the exit status.
struct RunResult {
  int status;
  std::string out;
};

inline RunResult run_command(const std::string& cmd) {
  RunResult r{-1, {}};
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed for: " + cmd);
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  r.status = pclose(pipe);
  return r;
}

inline std::string cli_path() {
#ifdef QHJ_CLI_PATH
  return QHJ_CLI_PATH;
#else
  if (const char* p = std::getenv("QHJ_CLI_PATH")) return p;
  throw std::runtime_error("QHJ_CLI_PATH is not set");
#endif
}

}  // namespace oracle
