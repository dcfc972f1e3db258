#include <doctest.h>

#include <cmath>
#include <random>

#include "soliton/errors.hpp"
#include "soliton/ricci_flow.hpp"

using namespace soliton;
using doctest::Approx;

namespace {

double rhs_error(const SolitonProfile& p, double dt) {
  const auto s = FlowState::soliton(p, -12.0, 12.0, dt);
  const auto r = reduced_rhs(s);
  double e = 0.0;
  for (std::size_t i = 0; i < r.t.size(); ++i) e = std::max(e, std::abs(r.values[i] + p.derivatives(r.t[i]).phi1));
  return e;
}

}  // namespace

TEST_CASE("right side on soliton and flat states") {
  const SolitonProfile p1(1);
  // Exact: phi''/phi' - 1 = -phi' for phi = log(1 + e^t).
  CHECK(rhs_error(p1, 1e-2) <= 1e-4);
  CHECK(std::log2(rhs_error(p1, 2e-2) / rhs_error(p1, 1e-2)) >= 1.9);

  const SolitonProfile p2(2);
  const auto s2 = FlowState::soliton(p2, -12.0, 12.0, 1e-2);
  const auto r2 = reduced_rhs(s2);
  const std::size_t mid = (r2.t.size() - 1) / 2;
  REQUIRE(r2.t[mid] == Approx(0.0).scale(1));
  CHECK(std::abs(r2.values[mid] + 0.6041) <= 2e-3);

  for (int n = 1; n <= 4; ++n) {
    const auto flat = reduced_rhs(FlowState::flat(n));
    for (double v : flat.values) CHECK(std::abs(v) <= 1e-10);
  }
}

TEST_CASE("invariant cone faults") {
  auto s = FlowState::flat(2, -2.0, 2.0, 0.1);
  s.phi[5] = -1.0;
  try {
    reduced_rhs(s);
    FAIL("expected an invariant violation");
  } catch (const InvariantViolation& e) {
    CHECK(e.invariant() == "positivity");
  }
  auto m = FlowState::flat(2, -2.0, 2.0, 0.1);
  m.phi[7] = m.phi[6];
  try {
    evolve(m, 1e-3, 1);
    FAIL("expected an invariant violation");
  } catch (const InvariantViolation& e) {
    CHECK(e.invariant() == "monotonicity");
  }
  CHECK_THROWS_AS(FlowState::flat(1, 0.0, 1.0, 0.3), ValidationError);
  CHECK_THROWS_AS(evolve(FlowState::flat(1), -1.0, 1), ValidationError);
}

TEST_CASE("flat profile is stationary") {
  for (int n = 1; n <= 3; ++n) {
    const auto f0 = FlowState::flat(n);
    const auto f1 = evolve(f0, 1e-2, 50);
    for (std::size_t i = 0; i < f0.size(); ++i) CHECK(std::abs(f1.phi[i] / f0.phi[i] - 1.0) <= 1e-10);
    CHECK(f1.tau == Approx(0.5));
  }
}

TEST_CASE("soliton deviation at tau = 0") {
  const SolitonProfile p(1);
  const auto dev = soliton_deviation(FlowState::soliton(p), p);
  CHECK(std::abs(dev.best_shift) <= 1e-12);
  CHECK(dev.sup_error <= 1e-12);
  CHECK_THROWS_AS(soliton_deviation(FlowState::soliton(p), SolitonProfile(2)), ValidationError);
}

TEST_CASE("soliton is a unit-speed travelling wave") {
  const SolitonProfile p1(1);
  const auto e1 = evolve(FlowState::soliton(p1), 1e-4, 10000);
  const auto d1 = soliton_deviation(e1, p1);
  CHECK(d1.best_shift == Approx(1.0).epsilon(5e-3));
  CHECK(travelling_wave_error(e1, p1) <= 1e-4);

  const SolitonProfile p2(2);
  const auto e2 = evolve(FlowState::soliton(p2), 1e-4, 5000);
  CHECK(soliton_deviation(e2, p2).best_shift == Approx(0.5).epsilon(1e-2));
  CHECK(std::abs(soliton_deviation(e2, p2).best_shift - 0.5) <= 5e-3);

  // Speed ratio over several horizons.
  auto s = FlowState::soliton(p1, -12.0, 12.0, 2e-2);
  for (double tau : {0.1, 0.5, 1.0, 2.0}) {
    s = evolve(s, 4e-4, static_cast<std::size_t>(std::llround((tau - s.tau) / 4e-4)));
    const double ratio = soliton_deviation(s, p1).best_shift / s.tau;
    CHECK(ratio >= 0.99);
    CHECK(ratio <= 1.01);
  }
}

TEST_CASE("second-order spatial convergence") {
  const SolitonProfile p(1);
  std::vector<double> err;
  for (double dt : {4e-2, 2e-2, 1e-2}) {
    const auto steps = static_cast<std::size_t>(std::llround(0.5 / (dt * dt)));
    err.push_back(travelling_wave_error(evolve(FlowState::soliton(p, -12.0, 12.0, dt), 0.5 / steps, steps), p));
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.9);
  CHECK(std::log2(err[1] / err[2]) >= 1.9);
}

TEST_CASE("asymptotic right boundary") {
  const SolitonProfile p(1);
  const auto s = evolve(FlowState::soliton(p, -12.0, 12.0, 1e-2, RightBoundary::Asymptotic), 1e-4, 10000);
  CHECK(std::abs(soliton_deviation(s, p).best_shift - 1.0) <= 5e-3);
  CHECK(s.boundary.slope(0.0) == 1.0);
}

TEST_CASE("gauge consistency") {
  const SolitonProfile p(2);
  const double g1 = gauge_residual(FlowState::soliton(p, -12.0, 12.0, 2e-2));
  const double g2 = gauge_residual(FlowState::soliton(p, -12.0, 12.0, 1e-2));
  CHECK(g2 <= 1e-4);
  CHECK(std::log2(g1 / g2) >= 1.8);
  const auto evolved = evolve(FlowState::soliton(p, -12.0, 12.0, 1e-2), 1e-3, 200);
  CHECK(gauge_residual(evolved) <= 1e-4);
}

TEST_CASE("snapshot curvature matches n - phi'") {
  const SolitonProfile p(3);
  auto worst = [&](double dt) {
    double e = 0.0;
    for (const auto& r : snapshot(FlowState::soliton(p, -6.0, 6.0, dt))) {
      e = std::max(e, std::abs(r.R - (3.0 - p.derivatives(r.t).phi1)));
    }
    return e;
  };
  // f' is a small difference of O(1) quotients near the left end, then divided by phi.
  CHECK(worst(1e-2) <= 5e-2);
  CHECK(std::log2(worst(2e-2) / worst(1e-2)) >= 1.9);
}

TEST_CASE("random perturbations stay in the cone") {
  const SolitonProfile p(1);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> amp(-0.02, 0.02), centre(-4.0, 4.0);
  for (int k = 0; k < 3; ++k) {
    auto s = FlowState::soliton(p, -12.0, 12.0, 2e-2);
    const double a = amp(rng), c = centre(rng);
    for (std::size_t i = 0; i < s.size(); ++i) s.phi[i] *= 1.0 + a * std::exp(-(s.t(i) - c) * (s.t(i) - c));
    check_flow_invariants(s);
    const double before = soliton_deviation(s, p).sup_error;
    s = evolve(s, 1e-3, 2000);
    check_flow_invariants(s);
    CHECK(soliton_deviation(s, p).sup_error < before);
  }
}

TEST_CASE("bump experiment (reported)") {
  const SolitonProfile p(1);
  auto s = bumped_soliton(p);
  std::vector<double> d;
  std::size_t calls = 0;
  d.push_back(soliton_deviation(s, p).sup_error);
  s = evolve(
      s, 1e-3, 5000,
      [&](const FlowState& st, std::size_t) {
        ++calls;
        d.push_back(soliton_deviation(st, p).sup_error);
      },
      1000);
  CHECK(calls == 5);
  for (std::size_t k = 0; k < d.size(); ++k) MESSAGE("tau = " << k << "  sup distance = " << d[k]);
}
