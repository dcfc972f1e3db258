#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "soliton/errors.hpp"
#include "soliton/geometry.hpp"

using namespace soliton;
using doctest::Approx;

namespace {

PhasePoint random_point(std::mt19937& rng, int n, double t_lo, double t_hi) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> ut(t_lo, t_hi);
  RealVector v(2 * n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = g(rng);
  return PhasePoint(RealVector(v.normalized() * std::exp(0.5 * ut(rng))));
}

// Complex Hessian d_k dbar_l F by central differences in real coordinates.
template <typename F>
ComplexMatrix fd_complex_hessian(F&& func, const RealVector& x, double h = 1e-4) {
  const Eigen::Index m = x.size();
  RealMatrix D(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      auto at = [&](double sa, double sb) {
        RealVector y = x;
        y[a] += sa;
        y[b] += sb;
        return func(y);
      };
      D(a, b) = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
    }
  }
  const Eigen::Index n = m / 2;
  ComplexMatrix H(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      const double re = D(2 * k, 2 * l) + D(2 * k + 1, 2 * l + 1);
      const double im = D(2 * k, 2 * l + 1) - D(2 * k + 1, 2 * l);
      H(k, l) = 0.25 * std::complex<double>(re, im);
    }
  }
  return H;
}

}  // namespace

TEST_CASE("cigar metric at |z| = 1") {
  const SolitonProfile p(1);
  const auto m = metric_at(p, PhasePoint{1.0, 0.0});
  CHECK(m.g(0, 0).real() == Approx(0.5).epsilon(1e-14));
  CHECK(m.det == Approx(0.5).epsilon(1e-14));
  const auto origin = metric_at(p, PhasePoint{0.0, 0.0});
  CHECK(origin.g(0, 0).real() == Approx(1.0));
}

TEST_CASE("metric spectrum, inverse and determinant") {
  std::mt19937 rng(11);
  for (int n = 1; n <= 4; ++n) {
    const SolitonProfile p(n);
    for (int k = 0; k < 20; ++k) {
      const auto z = random_point(rng, n, -6.0, 6.0);
      const auto m = metric_at(p, z);
      const double t = z.log_radius();
      const auto d = p.derivatives(t);
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.g);
      const auto ev = es.eigenvalues();
      const double radial = std::exp(-t) * d.phi1, transverse = std::exp(-t) * d.phi;
      // n = 1 has only the radial direction.
      const double lo = n == 1 ? radial : std::min(radial, transverse);
      const double hi = n == 1 ? radial : std::max(radial, transverse);
      CHECK(ev.minCoeff() == Approx(lo).epsilon(1e-10));
      CHECK(ev.maxCoeff() == Approx(hi).epsilon(1e-10));
      CHECK((m.g * m.g_inv - ComplexMatrix::Identity(n, n)).norm() <= 1e-10);
      CHECK(m.det == Approx(std::exp(-p.potential(t).f)).epsilon(1e-10));
      CHECK(std::abs(m.g.determinant().real() - m.det) <= 1e-10 * m.det);
    }
  }
}

TEST_CASE("metric is the complex Hessian of the Kahler potential") {
  std::mt19937 rng(3);
  for (int n = 1; n <= 3; ++n) {
    const SolitonProfile p(n);
    for (int k = 0; k < 3; ++k) {
      const auto z = random_point(rng, n, -2.0, 2.0);
      const auto H = fd_complex_hessian(
          [&](const RealVector& y) { return kahler_potential(p, std::log(y.squaredNorm())); }, z.coords, 1e-3);
      CHECK((H - metric_at(p, z).g).cwiseAbs().maxCoeff() <= 1e-5);
    }
  }
}

TEST_CASE("Ricci form equals -i ddbar log det g and i ddbar f") {
  std::mt19937 rng(5);
  for (int n = 1; n <= 3; ++n) {
    const SolitonProfile p(n);
    for (int k = 0; k < 3; ++k) {
      const auto z = random_point(rng, n, -2.0, 2.0);
      const double t = z.log_radius();
      const auto d = p.derivatives(t);
      const ComplexMatrix ric = radial_hessian(z, d.phi1, d.phi2);
      const auto H = fd_complex_hessian(
          [&](const RealVector& y) { return -std::log(metric_at(p, PhasePoint(y)).det); }, z.coords, 1e-3);
      CHECK((H - ric).cwiseAbs().maxCoeff() <= 1e-5);
      // Eigenvalues of g^{-1} Ric are phi'/phi and phi''/phi'.
      const auto c = curvature_at(p, t);
      CHECK(c.ric_transverse == Approx(d.phi1 / d.phi).epsilon(1e-13));
      CHECK(c.ric_radial == Approx(d.phi2 / d.phi1).epsilon(1e-13));
      const ComplexMatrix gr = metric_at(p, z).g_inv * ric;
      CHECK(gr.trace().real() == Approx(c.R).epsilon(1e-10));
    }
  }
}

TEST_CASE("scalar curvature identities") {
  const auto grid = linspace(-10.0, 10.0, 2001);
  for (int n = 1; n <= 4; ++n) {
    const SolitonProfile p(n);
    const auto rep = identity_suite(p, grid);
    CHECK(rep.lemma_constant == Approx(n));
    CHECK(rep.lemma_max <= 1e-8);
    CHECK(rep.eq5_max <= 1e-6);
    CHECK(rep.gradient_field_max <= 1e-12);
    CHECK(rep.r_slope_max < 0.0);
    CHECK(rep.min_ricci > 0.0);
    const auto scaled = identity_suite(p, grid, 1e-4, unit_curvature_scale(n));
    CHECK(scaled.lemma_constant == Approx(1.0));
    CHECK(scaled.lemma_max <= 1e-8);
    CHECK(curvature_at(p, -40.0, unit_curvature_scale(n)).R == Approx(1.0).epsilon(1e-12));
  }
  // Cigar: R = 1/(1 + |z|^2) in the complex-trace convention.
  const SolitonProfile p1(1);
  for (double t : {-3.0, 0.0, 2.0}) CHECK(curvature_at(p1, t).R == Approx(1.0 / (1.0 + std::exp(t))).epsilon(1e-13));
}

TEST_CASE("distance and potential against closed forms") {
  const SolitonProfile p(1);
  for (double t : {-20.0, -3.0, 0.0, 4.0, 12.0}) {
    CHECK(distance_s(p, t) == Approx(std::asinh(std::exp(0.5 * t))).epsilon(1e-11));
  }
  CHECK(distance_between(p, -1.0, 2.0) == Approx(std::asinh(std::exp(1.0)) - std::asinh(std::exp(-0.5))).epsilon(1e-12));
  for (double t : {-8.0, -2.0, -0.5, 0.0}) {
    CHECK(kahler_potential(p, t) == Approx(oracle::neg_dilog_neg(std::exp(t))).epsilon(1e-11));
  }
  CHECK(kahler_potential(p, 0.0) == Approx(std::numbers::pi * std::numbers::pi / 12.0).epsilon(1e-12));
}

TEST_CASE("sublevel volume") {
  const SolitonProfile p1(1);
  const auto v = volume_sublevel(p1, 0.0);
  CHECK(v.closed_form == Approx(std::numbers::pi * std::log(2.0)).epsilon(1e-13));
  CHECK(v.quadrature == Approx(v.closed_form).epsilon(1e-11));
  // Disk oracle: area of {|z| < 1} for |dz|^2/(1+|z|^2).
  const double disk = oracle::simpson([](double r) { return 2 * std::numbers::pi * r / (1 + r * r); }, 0.0, 1.0);
  CHECK(disk == Approx(v.closed_form).epsilon(1e-10));
  // n = 2 shell integral of det g over the Euclidean ball, |S^3| = 2 pi^2.
  const SolitonProfile p2(2);
  const double t = 1.0;
  const double shell = oracle::simpson(
      [&](double r) {
        if (r == 0.0) return 0.0;
        return 2 * std::numbers::pi * std::numbers::pi * r * r * r * std::exp(-p2.potential(2 * std::log(r)).f);
      },
      0.0, std::exp(0.5 * t), 4000);
  CHECK(shell == Approx(volume_sublevel(p2, t).closed_form).epsilon(1e-9));
  CHECK(sublevel_volume_constant(3) == Approx(std::pow(std::numbers::pi, 3) / 2.0));
}

TEST_CASE("asymptotic geometry for n = 2") {
  const SolitonProfile p(2);
  const auto rep = asymptotic_geometry_report(p, 1e4);
  CHECK(rep.bounded);
  CHECK(std::abs(rep.rows.back().R_times_s / rep.R_times_s_target - 1.0) <= 0.10);
  CHECK(rep.fiber_target == Approx(2 * std::numbers::pi * std::sqrt(2.0)));
  CHECK(std::abs(rep.rows.back().fiber_length / rep.fiber_target - 1.0) <= 0.01);
  CHECK(rep.last_decade_variation_n <= 0.05);
  // Vol / s^{2n} keeps decaying, so its variation is large.
  CHECK(rep.last_decade_variation_2n > 1.0);
  const SolitonProfile p1(1);
  CHECK(asymptotic_geometry_report(p1, 1e3).R_times_s_target == 0.0);
}

TEST_CASE("last decade variation") {
  const std::vector<double> s{1, 5, 10, 50, 100};
  const std::vector<double> r{9, 9, 2, 2.1, 2.2};
  CHECK(last_decade_variation(s, r) == Approx(0.1));
}

TEST_CASE("convexity and properness of f") {
  std::mt19937 rng(17);
  for (int n = 1; n <= 3; ++n) {
    const SolitonProfile p(n);
    std::vector<PhasePoint> pts;
    for (int k = 0; k < 40; ++k) pts.push_back(random_point(rng, n, -12.0, 12.0));
    const auto rep = convexity_exhaustion_check(p, pts);
    CHECK(rep.passed());
    CHECK(rep.max_grad_f_sq < n);
    CHECK(rep.f_at_origin == Approx(0.0).scale(1));
  }
  std::vector<PhasePoint> bad{PhasePoint{0.0, 0.0}};
  CHECK_THROWS_AS(convexity_exhaustion_check(SolitonProfile(1), bad), ValidationError);
}
