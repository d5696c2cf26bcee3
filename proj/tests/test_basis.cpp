#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qhj/basis.hpp"
#include "support.hpp"

namespace {
constexpr double kPi = std::numbers::pi;

// Wronskian that must equal 1 identically for every solution pair.
double wronskian(const qhj::SolutionPair& p, double q) {
  const qhj::Eval a = p.s1(q);
  const qhj::Eval b = p.s2(q);
  return a.value * b.deriv - a.deriv * b.value;
}

// |s1'' - g s1| / scale by fourth-order central differences.
double ode_residual(const qhj::Evaluator& s, const std::function<double(double)>& g, double q,
                    double h = 1e-4) {
  auto f = [&s](double x) { return s(x).value; };
  const double second = oracle::diff2(f, q, h);
  const double expect = g(q) * s(q).value;
  return std::abs(second - expect) / (std::abs(expect) + 1.0);
}
}  // namespace

TEST_CASE("bound state validation") {
  const qhj::BoundState st = qhj::make_bound_state(2, 1, -1);
  CHECK(st.energy == -0.125);
  CHECK(st.lambda == 2.0);
  CHECK_THROWS_AS(qhj::make_bound_state(0, 0, 0), std::domain_error);
  CHECK_THROWS_AS(qhj::make_bound_state(1, 1, 0), std::domain_error);
  CHECK_THROWS_AS(qhj::make_bound_state(2, 1, 2), std::domain_error);
}

TEST_CASE("radial first solutions match hand-derived closed forms") {
  // n=1, l=0: r exp(-r)
  const qhj::PolyExp f10 = qhj::radial_first_solution(1, 0);
  for (double r : {0.3, 1.0, 2.7}) {
    const qhj::Eval e = qhj::polyexp_eval(f10, r);
    CHECK(e.value == doctest::Approx(r * std::exp(-r)).epsilon(1e-13));
    CHECK(e.deriv == doctest::Approx((1.0 - r) * std::exp(-r)).epsilon(1e-13));
  }

  // n=2, l=0: (2r - r^2) exp(-r/2); frozen slope -2/e at the interior zero
  const qhj::PolyExp f20 = qhj::radial_first_solution(2, 0);
  const qhj::Eval at2 = qhj::polyexp_eval(f20, 2.0);
  CHECK(std::abs(at2.value) < 1e-14);
  CHECK(at2.deriv == doctest::Approx(-2.0 / std::numbers::e).epsilon(1e-13));
  for (double r : {0.5, 1.5, 3.0}) {
    CHECK(qhj::polyexp_eval(f20, r).value ==
          doctest::Approx((2.0 * r - r * r) * std::exp(-r / 2)).epsilon(1e-13));
  }

  // n=2, l=1: lowest power r^2, no interior zeros
  const qhj::PolyExp f21 = qhj::radial_first_solution(2, 1);
  const double ratio = qhj::polyexp_eval(f21, 1.0).value / (1.0 * std::exp(-0.5));
  for (double r : {0.4, 2.0, 5.0}) {
    CHECK(qhj::polyexp_eval(f21, r).value ==
          doctest::Approx(ratio * r * r * std::exp(-r / 2)).epsilon(1e-12));
  }
}

TEST_CASE("radial solutions satisfy their separated equation") {
  for (auto [n, l] : {std::pair{1, 0}, {2, 0}, {2, 1}, {3, 0}, {3, 1}, {3, 2}, {4, 2}}) {
    const qhj::BoundState st = qhj::make_bound_state(n, l, 0);
    const qhj::PolyExp f = qhj::radial_first_solution(n, l);
    qhj::Evaluator s1 = [f](double r) { return qhj::polyexp_eval(f, r); };
    auto g = qhj::radial_ode_g(st);
    for (double r : {0.7, 1.3, 2.9, 6.1}) {
      CHECK(ode_residual(s1, g, r) < 1e-6);
    }
  }
}

TEST_CASE("interior radial zeros: count and the frozen n=3 pair") {
  const qhj::BoundState st = qhj::make_bound_state(3, 0, 0);
  const qhj::SolutionPair p = qhj::make_radial_pair(st, 140.0);
  REQUIRE(p.s1_zeros.size() == 2);
  // roots of 2r^2 - 18r + 27: (9 -+ 3 sqrt(3)) / 2
  const double root_lo = (9.0 - 3.0 * std::sqrt(3.0)) / 2.0;
  const double root_hi = (9.0 + 3.0 * std::sqrt(3.0)) / 2.0;
  CHECK(p.s1_zeros[0] == doctest::Approx(root_lo).epsilon(1e-10));
  CHECK(p.s1_zeros[1] == doctest::Approx(root_hi).epsilon(1e-10));
  CHECK(qhj::s1_zero_count_between(p, 0.5, 5.0) == 1);
  CHECK(qhj::s1_zero_count_between(p, 0.5, 8.0) == 2);
  CHECK(qhj::s1_zero_count_between(p, 5.0, 0.5) == 1);

  const qhj::SolutionPair p21 = qhj::make_radial_pair(qhj::make_bound_state(2, 1, 0), 140.0);
  CHECK(p21.s1_zeros.empty());
}

TEST_CASE("polar first solutions match the catalog closed forms") {
  for (double th : {0.3, 1.1, kPi / 2, 2.6}) {
    const double s = std::sin(th), c = std::cos(th);
    CHECK(qhj::sinpow_eval(qhj::polar_first_solution(0, 0), th).value ==
          doctest::Approx(std::sqrt(s)).epsilon(1e-13));
    CHECK(qhj::sinpow_eval(qhj::polar_first_solution(1, 0), th).value ==
          doctest::Approx(std::sqrt(s) * c).epsilon(1e-13));
    CHECK(qhj::sinpow_eval(qhj::polar_first_solution(1, 1), th).value ==
          doctest::Approx(s * std::sqrt(s)).epsilon(1e-13));
  }
  // derivative of sin^(1/2) cos against the hand form
  const qhj::SinPowSeries f10 = qhj::polar_first_solution(1, 0);
  for (double th : {0.4, 1.9}) {
    const double s = std::sin(th), c = std::cos(th);
    const double hand = 0.5 * c * c / std::sqrt(s) - s * std::sqrt(s);
    CHECK(qhj::sinpow_eval(f10, th).deriv == doctest::Approx(hand).epsilon(1e-12));
  }
}

TEST_CASE("polar solutions satisfy their separated equation") {
  for (auto [l, m] : {std::pair{0, 0}, {1, 0}, {1, 1}, {2, 0}, {2, 1}, {2, 2}, {3, 1}}) {
    const qhj::BoundState st = qhj::make_bound_state(l + 1, l, m);
    const qhj::SinPowSeries f = qhj::polar_first_solution(l, m);
    qhj::Evaluator s1 = [f](double th) { return qhj::sinpow_eval(f, th); };
    auto g = qhj::polar_ode_g(st);
    for (double th : {0.5, 1.2, 2.0, 2.8}) {
      CHECK(ode_residual(s1, g, th) < 1e-6);
    }
  }
}

TEST_CASE("solution pairs keep wronskian exactly one") {
  // radial numeric second solution
  const qhj::SolutionPair rp = qhj::make_radial_pair(qhj::make_bound_state(2, 0, 0), 140.0);
  for (double r : {0.05, 0.8, 2.0, 5.5, 17.0, 60.0}) {
    CHECK(wronskian(rp, r) == doctest::Approx(1.0).epsilon(1e-9));
  }
  // frozen: with the wronskian pinned, the second solution at the s1 zero is
  // forced to s2(2) = e/2 whatever the anchor was
  CHECK(rp.s2(2.0).value == doctest::Approx(std::numbers::e / 2.0).epsilon(1e-9));

  // polar closed catalog
  for (auto [l, m] : {std::pair{0, 0}, {1, 0}, {1, 1}}) {
    const qhj::SolutionPair pp = qhj::make_polar_pair(qhj::make_bound_state(l + 1, l, m));
    for (double th : {0.2, 0.9, 1.8, 2.7}) {
      CHECK(wronskian(pp, th) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  // polar tabulated fallback (l=2, m=0 has two interior zeros)
  const qhj::SolutionPair pf = qhj::make_polar_pair(qhj::make_bound_state(3, 2, 0));
  REQUIRE(pf.s1_zeros.size() == 2);
  CHECK(pf.s1_zeros[0] == doctest::Approx(std::acos(1.0 / std::sqrt(3.0))).epsilon(1e-9));
  CHECK(pf.s1_zeros[1] == doctest::Approx(std::acos(-1.0 / std::sqrt(3.0))).epsilon(1e-9));
  for (double th : {0.3, 1.0, kPi / 2, 2.2, 2.9}) {
    CHECK(wronskian(pf, th) == doctest::Approx(1.0).epsilon(1e-9));
  }

  // azimuthal closed forms
  for (int m : {0, 1, 2}) {
    const qhj::SolutionPair ap = qhj::make_azimuthal_pair(qhj::make_bound_state(m + 1, m, m));
    for (double phi : {-2.0, 0.3, 1.7, 9.0}) {
      CHECK(wronskian(ap, phi) == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("second polar solutions solve the equation too") {
  for (auto [l, m] : {std::pair{0, 0}, {1, 0}, {1, 1}}) {
    const qhj::BoundState st = qhj::make_bound_state(l + 1, l, m);
    const qhj::SolutionPair pp = qhj::make_polar_pair(st);
    auto g = qhj::polar_ode_g(st);
    for (double th : {0.6, 1.3, 2.1}) {
      CHECK(ode_residual(pp.s2, g, th) < 1e-6);
    }
  }
}

TEST_CASE("azimuthal zero counting is analytic") {
  const qhj::SolutionPair ap2 = qhj::make_azimuthal_pair(qhj::make_bound_state(3, 2, 2));
  // sin(2 phi) vanishes at multiples of pi/2
  CHECK(qhj::s1_zero_count_between(ap2, 0.1, 3.0) == 1);
  CHECK(qhj::s1_zero_count_between(ap2, -0.2, 4.8) == 4);
  CHECK(qhj::s1_zero_count_between(ap2, 0.1, 1.5) == 0);
  CHECK(qhj::s1_zero_count_between(ap2, 100.0, 100.0 + 40.0 * kPi) == 80);
  const qhj::SolutionPair ap0 = qhj::make_azimuthal_pair(qhj::make_bound_state(1, 0, 0));
  CHECK(qhj::s1_zero_count_between(ap0, -50.0, 50.0) == 0);
}

TEST_CASE("tabulated linear solutions track reference integrations") {
  // g = 1 from the anchor reproduces exp(q)
  qhj::LinearOdeTable expo([](double) { return 1.0; }, 0.0, 1.0, 1.0, -3.0, 3.0);
  for (double q : {-2.5, -1.0, 0.37, 2.9}) {
    const qhj::Eval e = expo.eval(q);
    CHECK(e.value == doctest::Approx(std::exp(q)).epsilon(1e-10));
    CHECK(e.deriv == doctest::Approx(std::exp(q)).epsilon(1e-10));
  }

  // Airy-type g = q against a brute fixed-step march
  auto g = [](double q) { return q; };
  qhj::LinearOdeTable airy(g, 0.0, 1.0, 0.0, -2.0, 2.5);
  const oracle::LinearPair ref = oracle::march_linear(g, 0.0, 2.0, 1.0, 0.0, 200000);
  const qhj::Eval got = airy.eval(2.0);
  CHECK(got.value == doctest::Approx(ref.y).epsilon(1e-8));
  CHECK(got.deriv == doctest::Approx(ref.dy).epsilon(1e-8));

  CHECK_THROWS_AS(airy.eval(3.0), std::out_of_range);
}

TEST_CASE("make_radial_pair rejects domains that stop inside the trap") {
  CHECK_THROWS_AS(qhj::make_radial_pair(qhj::make_bound_state(2, 0, 0), 10.0),
                  std::invalid_argument);
}
