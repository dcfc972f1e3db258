#include "soliton/embedding.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "soliton/dynamics.hpp"
#include "soliton/errors.hpp"
#include "soliton/geometry.hpp"
#include "soliton/roots.hpp"

namespace soliton {

const char* to_string(FormTag tag) { return tag == FormTag::Ricci ? "rho" : "omega"; }

SymplecticMap::SymplecticMap(SolitonProfile profile, FormTag tag) : profile_(std::move(profile)), tag_(tag) {}

double SymplecticMap::potential_slope(double t) const {
  const auto d = profile_.derivatives(t);
  return tag_ == FormTag::Ricci ? d.phi1 : d.phi;
}

double SymplecticMap::scale(double t) const {
  const int n = profile_.dimension();
  const double phi = profile_.phi(t);
  // Log form keeps e^{-t} h'(t) accurate deep in the origin chart.
  const double log_ratio = tag_ == FormTag::Ricci ? (n - 1) * (t - std::log(phi)) - phi
                                                  : std::log(phi) - t;
  return std::sqrt(2.0 * std::exp(log_ratio));
}

double SymplecticMap::image_radius_sq_limit() const {
  return tag_ == FormTag::Ricci ? 2.0 * profile_.dimension() : std::numeric_limits<double>::infinity();
}

RealVector SymplecticMap::apply(const RealVector& x) const {
  const double r2 = x.squaredNorm();
  if (r2 == 0.0) return x;
  return scale(std::log(r2)) * x;
}

double SymplecticMap::t_of_image_radius_sq(double R2) const {
  if (!(R2 > 0.0) || !(R2 < image_radius_sq_limit())) {
    throw RangeError("SymplecticMap: point lies outside the image ball");
  }
  const double target = 0.5 * R2;
  if (tag_ == FormTag::Kahler) return profile_.t_of_phi(target);
  // phi' is increasing with log-derivative phi''/phi'.
  const double log_target = std::log(target);
  auto eval = [&](double t) {
    const auto d = profile_.derivatives(t);
    return std::pair{std::log(d.phi1) - log_target, d.phi2 / d.phi1};
  };
  double lo = log_target - 1.0;
  double hi = log_target + 1.0;
  while (eval(lo).first > 0.0) lo -= 2.0 * (hi - lo);
  while (eval(hi).first < 0.0) {
    hi += 2.0 * (hi - lo);
    if (hi > profile_.domain().t_max) throw RangeError("SymplecticMap: inverse outside the profile domain");
  }
  roots::NewtonOptions opt;
  opt.residual_tol = 1e-15;
  opt.x_scale_floor = 1.0;
  return roots::safeguarded_newton(eval, lo, hi, opt).root;
}

RealVector SymplecticMap::inverse(const RealVector& w) const {
  const double R2 = w.squaredNorm();
  if (R2 == 0.0) return w;
  return w / scale(t_of_image_radius_sq(R2));
}

RealMatrix SymplecticMap::source_form_matrix(const RealVector& x) const {
  const PhasePoint p(x);
  const double t = std::log(x.squaredNorm());
  const auto d = profile_.derivatives(t);
  const ComplexMatrix h = tag_ == FormTag::Ricci ? radial_hessian(p, d.phi1, d.phi2)
                                                 : radial_hessian(p, d.phi, d.phi1);
  return kahler_form_matrix(h);
}

SymplecticMap build_map(const SolitonProfile& profile, FormTag tag) { return SymplecticMap(profile, tag); }

namespace {

template <typename Map>
RealMatrix jacobian(Map&& F, const RealVector& x) {
  const Eigen::Index m = x.size();
  RealMatrix D(m, m);
  const double step = 1e-5 * std::max(1.0, x.norm());
  for (Eigen::Index j = 0; j < m; ++j) {
    RealVector xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    D.col(j) = (F(xp) - F(xm)) / (2.0 * step);
  }
  return D;
}

}  // namespace

double pullback_residual(const SymplecticMap& map, const std::vector<PhasePoint>& samples) {
  const RealMatrix omega0 = complex_structure(map.dimension()).transpose();
  double worst = 0.0;
  for (const auto& p : samples) {
    if (p.n() != map.dimension()) throw ValidationError("pullback_residual: sample dimension mismatch");
    const RealMatrix D = jacobian([&](const RealVector& y) { return map.apply(y); }, p.coords);
    const RealMatrix pulled = D.transpose() * omega0 * D;
    worst = std::max(worst, (pulled - map.source_form_matrix(p.coords)).cwiseAbs().maxCoeff());
  }
  return worst;
}

double composition_residual(const SolitonProfile& profile, const std::vector<PhasePoint>& samples) {
  const SymplecticMap kahler(profile, FormTag::Kahler);
  const SymplecticMap ricci(profile, FormTag::Ricci);
  auto G = [&](const RealVector& y) { return ricci.inverse(kahler.apply(y)); };
  double worst = 0.0;
  for (const auto& p : samples) {
    const RealMatrix D = jacobian(G, p.coords);
    const RealMatrix pulled = D.transpose() * ricci.source_form_matrix(G(p.coords)) * D;
    worst = std::max(worst, (pulled - kahler.source_form_matrix(p.coords)).cwiseAbs().maxCoeff());
  }
  return worst;
}

std::vector<PhasePoint> sample_points(int n, std::size_t count, double t_lo, double t_hi, unsigned seed) {
  if (n < 1 || !(t_hi > t_lo)) throw ValidationError("sample_points: need n >= 1 and t_hi > t_lo");
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(t_lo, t_hi);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<PhasePoint> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    RealVector v(2 * n);
    do {
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
    } while (v.norm() < 1e-8);
    const double t = uni(rng);
    out.emplace_back(RealVector(v.normalized() * std::exp(0.5 * t)));
  }
  return out;
}

CapacityBounds capacity_bounds(const SolitonProfile& profile, double c, double ramp_factor, double gap_fraction) {
  if (!(c > 0.0)) throw ValidationError("capacity_bounds: level c must exceed f_min = 0");
  CapacityBounds out;
  out.level_c = c;
  out.ramp_factor = ramp_factor;
  // f equals phi along the profile, so {f <= c} = {t <= t_c} with phi(t_c) = c.
  out.t_c = profile.t_of_phi(c);
  const SymplecticMap kahler(profile, FormTag::Kahler);
  out.image_radius_sq = kahler.image_radius_sq(out.t_c);
  out.upper = std::numbers::pi * out.image_radius_sq;

  const auto ramp = AdmissibleHamiltonian::make(profile.dimension(), c, ramp_factor, gap_fraction);
  const auto rep = check_admissible(ramp);
  out.lower_admissible = rep.admissible();
  out.lower = rep.admissible() ? rep.m : 0.0;
  return out;
}

}  // namespace soliton
