#include "soliton/profile.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "soliton/errors.hpp"
#include "soliton/roots.hpp"

namespace soliton {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
const double kLogMax = std::log(std::numeric_limits<double>::max());

// Above this phi the alternating closed form is free of cancellation.
double series_limit(int n) { return n + 40.0; }

// log sum_{j>=0} phi^j / (j! (n+j)); all terms positive.
double log_series(int n, double phi) {
  double term = 1.0;  // phi^j / j!
  double sum = 1.0 / n;
  for (int j = 1; j < 2000; ++j) {
    term *= phi / j;
    const double add = term / (n + j);
    sum += add;
    if (j > phi && add < kEps * 1e-2 * sum) break;
  }
  return std::log(sum);
}

// Q = sum_{m<n} (-1)^m (n-1)!/(n-1-m)! phi^{-m}, so G = n phi^{n-1} e^phi Q - c.
double closed_form_q(int n, double phi) {
  double q = 0.0;
  double coeff = 1.0;
  for (int m = 0; m < n; ++m) {
    q += ((m % 2 == 0) ? coeff : -coeff);
    coeff *= (n - 1 - m) / phi;
  }
  return q;
}

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

}  // namespace

double log_lhs(int n, double phi) {
  if (phi <= 0.0) return -std::numeric_limits<double>::infinity();
  if (phi < series_limit(n)) {
    return std::log(static_cast<double>(n)) + n * std::log(phi) + log_series(n, phi);
  }
  const double q = closed_form_q(n, phi);
  const double head = phi + std::log(static_cast<double>(n)) + (n - 1) * std::log(phi) + std::log(q);
  // Constant term (-1)^{n-1} n! moved to the left: G = P e^phi - (-1)^{n-1} n!.
  const double sign = (n % 2 == 1) ? 1.0 : -1.0;
  const double rel = sign * std::exp(std::log(factorial(n)) - head);
  return head + std::log1p(-rel);
}

double dlog_lhs(int n, double phi) {
  if (phi <= 0.0) return std::numeric_limits<double>::infinity();
  return std::exp(std::log(static_cast<double>(n)) + (n - 1) * std::log(phi) + phi -
                  log_lhs(n, phi));
}

double implicit_residual(int n, double phi, double t) {
  if (n < 1) throw ValidationError("implicit_residual: n must be >= 1");
  if (phi < 0.0) throw ValidationError("implicit_residual: phi must be >= 0");
  const double log_left =
      phi + std::log(static_cast<double>(n)) + (n > 1 && phi > 0.0 ? (n - 1) * std::log(phi) : 0.0);
  if (n * t > kLogMax || log_left > kLogMax - 2.0) {
    throw RangeError("implicit_residual: phi=" + std::to_string(phi) + ", t=" + std::to_string(t) +
                     " leaves the double range; use log_residual");
  }
  // Horner on sum_{k<n} (-1)^{n-k-1} n!/k! phi^k.
  double poly = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    const double coeff = ((n - k - 1) % 2 == 0 ? 1.0 : -1.0) * factorial(n) / factorial(k);
    poly = poly * phi + coeff;
  }
  const double sign = (n % 2 == 1) ? 1.0 : -1.0;
  return poly * std::exp(phi) - std::exp(n * t) - sign * factorial(n);
}

double log_residual(int n, double phi, double t) { return log_lhs(n, phi) - n * t; }

SolitonProfile::SolitonProfile(int n, double solver_tolerance, TDomain domain)
    : n_(n), tol_(solver_tolerance), domain_(domain) {
  if (n < 1) throw ValidationError("SolitonProfile: dimension n must be >= 1, got " + std::to_string(n));
  if (!(solver_tolerance > 0.0)) throw ValidationError("SolitonProfile: solver tolerance must be positive");
  if (!(domain.t_min < domain.t_max)) throw ValidationError("SolitonProfile: empty t domain");
}

double SolitonProfile::phi(double t) const {
  if (!std::isfinite(t) || t < domain_.t_min || t > domain_.t_max) {
    throw RangeError("SolitonProfile::phi: t=" + std::to_string(t) + " outside the profile domain");
  }
  if (t < kAsymptoticSwitch) {
    const double et = std::exp(t);
    return et * (1.0 - et / (n_ + 1));
  }

  // Solve in y = log phi; F(y) = log G(e^y) - n t is increasing with
  // F'(y) = phi * dlog_lhs in (0, max(n, phi + n)].
  const double target = n_ * t;
  auto eval = [&](double y) {
    const double p = std::exp(y);
    return std::pair{log_lhs(n_, p) - target, p * dlog_lhs(n_, p)};
  };

  // Starting bracket from e^{t-2} <= phi <= 2 max(nt, 1), widened until it
  // provably brackets (G(phi) >= phi^n gives y <= t as a hard upper bound).
  double lo = std::min(t - 2.0, std::log(std::max(target, 1.0)) - 1.0);
  double hi = std::min(t, std::log(2.0 * std::max(target, 1.0)));
  for (int k = 0; eval(lo).first >= 0.0; ++k) {
    if (k > 200) throw SolverFault("SolitonProfile::phi: could not bracket the root from below");
    lo -= 1.0;
  }
  for (int k = 0; eval(hi).first <= 0.0; ++k) {
    if (k > 200) throw SolverFault("SolitonProfile::phi: could not bracket the root from above");
    hi += 1.0;
  }

  roots::NewtonOptions opt;
  opt.residual_tol = 4.0 * kEps * std::max(1.0, std::abs(target));
  opt.x_scale_floor = 1.0;
  opt.max_iterations = 200;
  const auto res = roots::safeguarded_newton(eval, lo, hi, opt);

  const double accepted = std::max(tol_, 16.0 * kEps * std::max(1.0, std::abs(target)));
  if (!(std::abs(res.residual) <= accepted)) {
    throw SolverFault("SolitonProfile::phi: residual " + std::to_string(res.residual) +
                      " above tolerance at t=" + std::to_string(t));
  }
  return std::exp(res.root);
}

PhiDerivatives SolitonProfile::derivatives(double t) const {
  PhiDerivatives d;
  d.phi = phi(t);
  const double log_phi = (t < kAsymptoticSwitch) ? t + std::log1p(-std::exp(t) / (n_ + 1)) : std::log(d.phi);
  d.phi1 = std::exp(n_ * t - (n_ - 1) * log_phi - d.phi);
  d.phi2 = d.phi1 * (n_ - d.phi1 - (n_ - 1) * d.phi1 / d.phi);
  return d;
}

Potential SolitonProfile::potential(double t) const {
  const auto d = derivatives(t);
  return {n_ * t - (n_ - 1) * std::log(d.phi) - std::log(d.phi1), d.phi1};
}

double SolitonProfile::t_of_phi(double value) const {
  if (!(value > 0.0)) throw ValidationError("t_of_phi: value must be positive");
  return log_lhs(n_, value) / n_;
}

AsymptoteReport asymptote_report(const SolitonProfile& profile, double T) {
  if (!(T >= 10.0)) throw ValidationError("asymptote_report: T must be >= 10");
  AsymptoteReport rep;
  const int n = profile.dimension();
  rep.n = n;
  for (double frac : {0.125, 0.25, 0.5, 1.0}) {
    const double tt = frac * T;
    const auto d = profile.derivatives(tt);
    AsymptoteRow row;
    row.T = tt;
    row.phi_over_T = d.phi / tt;
    row.phi1 = d.phi1;
    row.ratio_error = std::abs(row.phi_over_T - n);
    row.slope_error = std::abs(d.phi1 - n);
    row.correction = (n - d.phi1) * tt;
    rep.rows.push_back(row);
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const auto& a = rep.rows[i - 1];
    const auto& b = rep.rows[i];
    // For n = 1 the slope error is exponentially small and can reach rounding.
    const bool slope_ok = b.slope_error < a.slope_error || b.slope_error <= 4.0 * kEps * n;
    if (!(b.ratio_error < a.ratio_error && slope_ok)) rep.monotone = false;
  }
  return rep;
}

}  // namespace soliton
