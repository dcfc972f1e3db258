#include "soliton/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "soliton/errors.hpp"
#include "soliton/quadrature.hpp"

namespace soliton {
namespace {

// Below this t the profile is replaced by its e^t tail in the integrals.
constexpr double kTailCut = -40.0;

}  // namespace

RadialMetric radial_metric(const SolitonProfile& profile, double t) {
  const auto d = profile.derivatives(t);
  const double et = std::exp(-t);
  return {profile.dimension(), t, et * d.phi, et * d.phi1, et * et * (d.phi1 - d.phi)};
}

MetricAt metric_at(const SolitonProfile& profile, const PhasePoint& z) {
  const int n = profile.dimension();
  if (z.n() != n) throw ValidationError("metric_at: point has the wrong dimension");
  MetricAt out;
  const double r2 = z.norm_sq();
  const double t = r2 > 0.0 ? std::log(r2) : -std::numeric_limits<double>::infinity();
  out.t = t;
  if (!(t >= profile.domain().t_min)) {
    out.g = ComplexMatrix::Identity(n, n);
    out.g_inv = out.g;
    out.det = 1.0;
    return out;
  }
  const auto m = radial_metric(profile, t);
  Eigen::VectorXcd zv(n);
  for (int k = 0; k < n; ++k) zv[k] = z.z(k);
  const Eigen::VectorXcd zbar = zv.conjugate();
  const ComplexMatrix outer = zbar * zv.transpose();  // (k, l) -> zbar_k z_l
  out.g = m.lam_transverse * ComplexMatrix::Identity(n, n) + m.offdiag_coeff * outer;
  const double a = m.lam_transverse;
  out.g_inv = (1.0 / a) * ComplexMatrix::Identity(n, n) -
              (m.offdiag_coeff / (a * m.lam_radial)) * outer;
  out.det = std::pow(a, n - 1) * m.lam_radial;
  return out;
}

ComplexMatrix radial_hessian(const PhasePoint& z, double h1, double h2) {
  const int n = z.n();
  const double r2 = z.norm_sq();
  Eigen::VectorXcd zv(n);
  for (int k = 0; k < n; ++k) zv[k] = z.z(k);
  const ComplexMatrix outer = zv.conjugate() * zv.transpose();
  return (h1 / r2) * ComplexMatrix::Identity(n, n) + ((h2 - h1) / (r2 * r2)) * outer;
}

CurvatureData curvature_at(const SolitonProfile& profile, double t, double metric_scale) {
  if (!(metric_scale > 0.0)) throw ValidationError("curvature_at: metric scale must be positive");
  const int n = profile.dimension();
  const auto d = profile.derivatives(t);
  CurvatureData c;
  c.t = t;
  c.ric_transverse = d.phi1 / d.phi / metric_scale;
  c.ric_radial = d.phi2 / d.phi1 / metric_scale;
  c.R = c.ric_radial + (n - 1) * c.ric_transverse;
  c.grad_f_sq = d.phi1 / metric_scale;
  c.f = n * t - (n - 1) * std::log(d.phi) - std::log(d.phi1);
  return c;
}

IdentityReport identity_suite(const SolitonProfile& profile, std::span<const double> grid, double h,
                              double metric_scale) {
  const int n = profile.dimension();
  IdentityReport rep;
  rep.lemma_constant = n / metric_scale;
  rep.r_slope_max = -std::numeric_limits<double>::infinity();
  rep.min_ricci = std::numeric_limits<double>::infinity();
  auto r_at = [&](double t) { return curvature_at(profile, t, metric_scale).R; };
  for (double t : grid) {
    const auto c = curvature_at(profile, t, metric_scale);
    const auto d = profile.derivatives(t);
    const auto pot = profile.potential(t);
    rep.lemma_max = std::max(rep.lemma_max, std::abs(c.R + c.grad_f_sq - rep.lemma_constant));

    const double dr_h = (r_at(t + h) - r_at(t - h)) / (2.0 * h);
    const double dr_h2 = (r_at(t + 0.5 * h) - r_at(t - 0.5 * h)) / h;
    rep.eq5_max = std::max(rep.eq5_max, std::abs(dr_h + d.phi2 / metric_scale));
    rep.richardson_max = std::max(rep.richardson_max, std::abs(dr_h - dr_h2));
    rep.r_slope_max = std::max(rep.r_slope_max, dr_h);

    rep.gradient_field_max = std::max(rep.gradient_field_max, std::abs(pot.f1 / d.phi1 - 1.0));
    rep.min_ricci = std::min({rep.min_ricci, c.ric_radial, c.ric_transverse});
    ++rep.points;
  }
  return rep;
}

std::vector<double> linspace(double a, double b, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = a;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

double distance_between(const SolitonProfile& profile, double t0, double t1) {
  auto speed = [&](double tau) { return 0.5 * std::sqrt(profile.derivatives(tau).phi1); };
  return quad::integrate_panels(speed, t0, t1, 1e-13);
}

double distance_s(const SolitonProfile& profile, double t) {
  // phi' ~ e^t below the cut, so the tail integrates to e^{t0/2}.
  const double t0 = std::min(t, kTailCut);
  const double tail = std::exp(0.5 * t0);
  if (t <= kTailCut) return tail;
  return tail + distance_between(profile, t0, t);
}

double kahler_potential(const SolitonProfile& profile, double t) {
  const double t0 = std::min(t, kTailCut);
  const double tail = std::exp(t0);
  if (t <= kTailCut) return tail;
  return tail + quad::integrate_panels([&](double tau) { return profile.phi(tau); }, t0, t, 1e-13);
}

double sublevel_volume_constant(int n) {
  double c = std::pow(std::numbers::pi, n);
  for (int k = 2; k < n; ++k) c /= k;
  return c;
}

VolumeResult volume_sublevel(const SolitonProfile& profile, double t) {
  const int n = profile.dimension();
  const double c = sublevel_volume_constant(n);
  VolumeResult v;
  v.closed_form = c * std::pow(profile.phi(t), n) / n;
  const double t0 = std::min(t, kTailCut);
  double integral = std::exp(n * t0) / n;
  if (t > kTailCut) {
    auto density = [&](double tau) {
      const auto d = profile.derivatives(tau);
      return std::pow(d.phi, n - 1) * d.phi1;
    };
    integral += quad::integrate_panels(density, t0, t, 1e-13);
  }
  v.quadrature = c * integral;
  return v;
}

double last_decade_variation(std::span<const double> s, std::span<const double> ratio) {
  if (s.empty()) return 0.0;
  const double s_last = s.back();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= 0.1 * s_last) {
      lo = std::min(lo, ratio[i]);
      hi = std::max(hi, ratio[i]);
    }
  }
  return hi / lo - 1.0;
}

AsymptoticGeometryReport asymptotic_geometry_report(const SolitonProfile& profile, double T_max,
                                                    std::size_t samples) {
  if (!(T_max > 1.0) || samples < 4) {
    throw ValidationError("asymptotic_geometry_report: need T_max > 1 and at least 4 samples");
  }
  const int n = profile.dimension();
  AsymptoticGeometryReport rep;
  rep.n = n;
  rep.R_times_s_target = (n >= 2) ? (n - 1) * std::sqrt(static_cast<double>(n)) / 2.0 : 0.0;
  rep.fiber_target = 2.0 * std::numbers::pi * std::sqrt(static_cast<double>(n));

  const auto logs = linspace(0.0, std::log(T_max), samples);
  double s = 0.0;
  double t_prev = 0.0;
  std::vector<double> s_col;
  std::vector<double> ratio_n;
  std::vector<double> ratio_2n;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const double t = std::exp(logs[i]);
    s = (i == 0) ? distance_s(profile, t) : s + distance_between(profile, t_prev, t);
    t_prev = t;
    const auto d = profile.derivatives(t);
    const auto c = curvature_at(profile, t);
    AsymptoticGeometryRow row;
    row.t = t;
    row.s = s;
    row.R = c.R;
    row.R_times_s = c.R * s;
    row.cp_diameter_ratio = std::sqrt(d.phi) / std::sqrt(s);
    row.fiber_length = 2.0 * std::numbers::pi * std::sqrt(d.phi1);
    row.volume = sublevel_volume_constant(n) * std::pow(d.phi, n) / n;
    row.vol_over_s_n = row.volume / std::pow(s, n);
    row.vol_over_s_2n = row.volume / std::pow(s, 2 * n);
    rep.rows.push_back(row);
    s_col.push_back(s);
    ratio_n.push_back(row.vol_over_s_n);
    ratio_2n.push_back(row.vol_over_s_2n);
  }
  rep.last_decade_variation_n = last_decade_variation(s_col, ratio_n);
  rep.last_decade_variation_2n = last_decade_variation(s_col, ratio_2n);

  // Bounded: no column grows by more than half again from the first half of
  // the rows to the second.
  auto grows = [&](auto member) {
    double first = 0.0;
    double second = 0.0;
    const std::size_t half = rep.rows.size() / 2;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const double v = rep.rows[i].*member;
      if (!std::isfinite(v)) return true;
      (i < half ? first : second) = std::max(i < half ? first : second, std::abs(v));
    }
    return second > 1.5 * first;
  };
  rep.bounded = !grows(&AsymptoticGeometryRow::R_times_s) &&
                !grows(&AsymptoticGeometryRow::cp_diameter_ratio) &&
                !grows(&AsymptoticGeometryRow::fiber_length);
  return rep;
}

ConvexityReport convexity_exhaustion_check(const SolitonProfile& profile,
                                           std::span<const PhasePoint> samples) {
  const int n = profile.dimension();
  ConvexityReport rep;
  rep.min_hessian_eigenvalue = std::numeric_limits<double>::infinity();
  rep.grad_bounded = true;
  for (const auto& p : samples) {
    if (!(p.norm_sq() > 0.0)) throw ValidationError("convexity_exhaustion_check: zero sample point");
    const double t = p.log_radius();
    const auto d = profile.derivatives(t);
    const auto metric = metric_at(profile, p);
    // Covariant Hessian of f: the (1,1) part is Ric = ddbar f, the (2,0) part vanishes.
    const ComplexMatrix ric = radial_hessian(p, d.phi1, d.phi2);
    Eigen::GeneralizedSelfAdjointEigenSolver<RealMatrix> solver(real_form(ric), real_form(metric.g),
                                                                Eigen::EigenvaluesOnly);
    rep.min_hessian_eigenvalue = std::min(rep.min_hessian_eigenvalue, solver.eigenvalues().minCoeff());

    // |grad f|^2 = f^* g^{-1} f with f_k = df/dz_k = f' zbar_k / |z|^2.
    Eigen::VectorXcd df(n);
    for (int k = 0; k < n; ++k) df[k] = d.phi1 * std::conj(p.z(k)) / p.norm_sq();
    const double grad_sq = (df.adjoint() * metric.g_inv * df)(0, 0).real();
    rep.max_grad_f_sq = std::max(rep.max_grad_f_sq, grad_sq);
    if (!(grad_sq < n)) rep.grad_bounded = false;
    ++rep.samples;
  }
  const auto grid = linspace(-20.0, 30.0, 501);
  rep.f_increasing = true;
  double prev = -std::numeric_limits<double>::infinity();
  for (double t : grid) {
    const double f = profile.potential(t).f;
    if (!(f > prev)) rep.f_increasing = false;
    prev = f;
  }
  rep.properness_gap = profile.potential(30.0).f - profile.potential(-30.0).f;
  rep.f_at_origin = profile.potential(-60.0).f;
  return rep;
}

}  // namespace soliton
