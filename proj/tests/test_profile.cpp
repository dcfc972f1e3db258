#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "soliton/errors.hpp"
#include "soliton/profile.hpp"
#include "soliton/quadrature.hpp"

using namespace soliton;
using doctest::Approx;

TEST_CASE("cigar profile matches log(1 + e^t)") {
  const SolitonProfile p(1);
  for (double t = -40.0; t <= 40.0; t += 0.25) {
    CHECK(std::abs(p.phi(t) - std::log1p(std::exp(t))) <= 1e-12 * std::max(1.0, std::abs(t)));
  }
  CHECK(p.phi(0.0) == Approx(0.693147).epsilon(1e-6));
}

TEST_CASE("n = 2 and n = 3 roots agree with independent bisection") {
  const SolitonProfile p2(2), p3(3);
  for (double t : {-8.0, -3.0, -1.0, 0.0, 0.5, 2.0, 5.0, 9.0}) {
    CHECK(std::abs(p2.phi(t) - oracle::phi_n2(t)) <= 1e-12 * std::max(1.0, p2.phi(t)));
    CHECK(std::abs(p3.phi(t) - oracle::phi_n3(t)) <= 1e-12 * std::max(1.0, p3.phi(t)));
  }
  CHECK(std::abs(p2.phi(0.0) - 0.76797) <= 1e-4);
}

TEST_CASE("implicit residual") {
  CHECK(std::abs(implicit_residual(1, std::log(2.0), 0.0)) <= 1e-15);
  const double root = oracle::phi_n2(0.0);
  CHECK(std::abs(implicit_residual(2, root, 0.0)) <= 1e-12);
  // Joint limit: both sides tend to 1 for n = 1.
  CHECK(std::abs(implicit_residual(1, std::log1p(std::exp(-30.0)), -30.0)) <= 1e-15);
  CHECK_THROWS_AS(implicit_residual(2, 800.0, 0.0), RangeError);
  CHECK(std::abs(log_residual(3, oracle::phi_n3(1.5), 1.5)) <= 1e-13);
}

TEST_CASE("small-t behaviour") {
  const SolitonProfile p2(2);
  CHECK(std::abs(p2.phi(-20.0) / std::exp(-20.0) - 1.0) <= 1e-3);
  // The solver just above the switch agrees with the two-term expansion used below it.
  for (int n = 1; n <= 4; ++n) {
    const SolitonProfile p(n);
    for (double t : {kAsymptoticSwitch + 1e-9, kAsymptoticSwitch + 0.5}) {
      const double expansion = std::exp(t) * (1.0 - std::exp(t) / (n + 1));
      CHECK(std::abs(p.phi(t) / expansion - 1.0) <= 1e-12);
    }
    const double below = kAsymptoticSwitch - 1e-9;
    CHECK(p.phi(below) == std::exp(below) * (1.0 - std::exp(below) / (n + 1)));
  }
}

TEST_CASE("derivatives") {
  const SolitonProfile p1(1), p2(2);
  CHECK(p1.derivatives(0.0).phi1 == Approx(0.5).epsilon(1e-14));
  CHECK(p1.derivatives(0.0).phi2 == Approx(0.25).epsilon(1e-13));
  const auto d = p2.derivatives(0.0);
  CHECK(std::abs(d.phi1 - 0.6041) <= 1e-3);
  CHECK(std::abs(d.phi2 - 0.3681) <= 1e-3);
  // phi' from the ODE evaluated at the oracle root.
  const double r = oracle::phi_n2(0.0);
  CHECK(d.phi1 == Approx(1.0 / (r * std::exp(r))).epsilon(1e-12));
}

TEST_CASE("finite differences converge at second order") {
  for (int n = 1; n <= 4; ++n) {
    const SolitonProfile p(n);
    for (double t : {-3.0, 0.0, 4.0}) {
      auto err = [&](double h) { return std::abs((p.phi(t + h) - p.phi(t - h)) / (2 * h) - p.derivatives(t).phi1); };
      const double order = std::log2(err(2e-2) / err(1e-2));
      CHECK(order >= 1.9);
      auto err2 = [&](double h) {
        return std::abs((p.derivatives(t + h).phi1 - p.derivatives(t - h).phi1) / (2 * h) - p.derivatives(t).phi2);
      };
      CHECK(std::log2(err2(2e-2) / err2(1e-2)) >= 1.9);
    }
  }
}

TEST_CASE("potential") {
  const SolitonProfile p1(1), p2(2);
  CHECK(p1.potential(0.0).f == Approx(std::log(2.0)).epsilon(1e-14));
  for (double t : {-5.0, 0.0, 3.0}) CHECK(p1.potential(t).f1 == Approx(std::exp(t) / (1 + std::exp(t))).epsilon(1e-13));
  const auto pot = p2.potential(0.0);
  CHECK(std::abs(pot.f - 0.76797) <= 2e-3);
  CHECK(pot.f == Approx(p2.phi(0.0)).epsilon(1e-13));
  // f as the integral of f' from the origin, tail ~ e^t below t = -40.
  const double integral =
      quad::integrate([&](double s) { return p2.derivatives(s).phi1; }, -40.0, 0.0, 1e-13) + std::exp(-40.0);
  CHECK(integral == Approx(pot.f).epsilon(1e-10));
}

TEST_CASE("t_of_phi inverts phi") {
  for (int n = 1; n <= 5; ++n) {
    const SolitonProfile p(n);
    for (double t : {-25.0, -2.0, 0.0, 7.0, 60.0}) CHECK(p.t_of_phi(p.phi(t)) == Approx(t).epsilon(1e-12).scale(1));
  }
}

TEST_CASE("asymptote report") {
  const auto r1 = asymptote_report(SolitonProfile(1), 10.0);
  CHECK(r1.at_T().phi_over_T == Approx(std::log1p(std::exp(10.0)) / 10.0).epsilon(1e-14));
  CHECK(r1.at_T().phi_over_T == Approx(1.0000045).epsilon(1e-7));
  const auto r2 = asymptote_report(SolitonProfile(2), 50.0);
  CHECK(r2.at_T().slope_error <= 0.05);
  const auto r3 = asymptote_report(SolitonProfile(3), 50.0);
  CHECK(r3.at_T().phi_over_T > 2.7);
  CHECK(r3.at_T().phi_over_T < 3.0);
  CHECK(r3.monotone);
  // (n - phi') t tends to n - 1.
  const auto big = asymptote_report(SolitonProfile(3), 1e5);
  CHECK(big.at_T().correction == Approx(2.0).epsilon(1e-3));
  CHECK_THROWS_AS(asymptote_report(SolitonProfile(2), 5.0), ValidationError);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(SolitonProfile(0), ValidationError);
  CHECK_THROWS_AS(SolitonProfile(2, -1.0), ValidationError);
  const SolitonProfile p(2);
  CHECK_THROWS_AS(p.phi(-1e4), RangeError);
  CHECK_THROWS_AS(p.phi(2e6), RangeError);
  CHECK_THROWS_AS(p.t_of_phi(0.0), ValidationError);
}

TEST_CASE("randomized properties") {
  std::mt19937 rng(7);
  // Strict bounds on phi' and phi'' only hold until phi' rounds to n.
  std::uniform_real_distribution<double> ut(-60.0, 25.0);
  std::uniform_int_distribution<int> un(1, 6);
  for (int k = 0; k < 400; ++k) {
    const int n = un(rng);
    const SolitonProfile p(n);
    const double a = ut(rng), b = ut(rng);
    const auto da = p.derivatives(a);
    CHECK(da.phi > 0.0);
    CHECK(da.phi1 > 0.0);
    CHECK(da.phi1 < n);
    CHECK(da.phi2 > 0.0);
    CHECK(std::abs(log_residual(n, da.phi, a)) <= 1e-12 * std::max(1.0, std::abs(n * a)));
    CHECK(std::abs((n - 1) * da.phi1 / da.phi + da.phi2 / da.phi1 + da.phi1 - n) <= 1e-8);
    if (a < b) CHECK(p.phi(a) < p.phi(b));
    if (a > b) CHECK(p.phi(a) > p.phi(b));
  }
  std::uniform_real_distribution<double> wide(25.0, 1e5);
  for (int k = 0; k < 100; ++k) {
    const int n = un(rng);
    const double t = wide(rng);
    const auto d = SolitonProfile(n).derivatives(t);
    // phi' = exp(n t - ...) carries absolute rounding of order ulp(n t).
    const double slack = 1e-14 * n * n * t;
    CHECK(d.phi1 <= n + slack);
    CHECK(d.phi2 >= -slack);
    CHECK(std::abs(log_residual(n, d.phi, t)) <= 1e-12 * n * t);
  }
}
