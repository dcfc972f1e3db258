#include "soliton/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "soliton/errors.hpp"
#include "soliton/geometry.hpp"

namespace soliton {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double potential_at(const SolitonProfile& profile, const RealVector& x) {
  const double r2 = x.squaredNorm();
  if (!(r2 > 0.0)) return 0.0;
  const double t = std::log(r2);
  if (t < profile.domain().t_min) return 0.0;
  return profile.phi(t);  // f = phi under the normalization
}

double smootherstep(double x) { return x * x * x * (x * (6.0 * x - 15.0) + 10.0); }
double smootherstep_integral(double x) { return x * x * x * x * (x * (x - 3.0) + 2.5); }

RealVector difference_jacobian_solve(const Hamiltonian& H, const RealVector& x0, const RealVector& x1,
                                     double h) {
  // Newton correction for r(x1) = x1 - x0 - h V((x0 + x1)/2).
  const Eigen::Index dim = x0.size();
  const RealVector mid = 0.5 * (x0 + x1);
  const RealVector r = x1 - x0 - h * H.field(mid);
  RealMatrix jac = RealMatrix::Identity(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double d = 1e-7 * std::max(1.0, std::abs(mid[j]));
    RealVector plus = mid;
    RealVector minus = mid;
    plus[j] += d;
    minus[j] -= d;
    jac.col(j) -= 0.5 * h * (H.field(plus) - H.field(minus)) / (2.0 * d);
  }
  return x1 - jac.partialPivLu().solve(r);
}

}  // namespace

Ramp Ramp::identity_ramp() {
  Ramp r;
  r.value = [](double f) { return f; };
  r.slope = [](double) { return 1.0; };
  r.range_min = 0.0;
  r.range_max = std::numeric_limits<double>::infinity();
  r.identity = true;
  return r;
}

RadialHamiltonian::RadialHamiltonian(const SolitonProfile& profile, Ramp ramp)
    : profile_(profile), ramp_(std::move(ramp)) {}

RadialHamiltonian::RadialHamiltonian(const SolitonProfile& profile)
    : RadialHamiltonian(profile, Ramp::identity_ramp()) {}

double RadialHamiltonian::potential(const RealVector& x) const { return potential_at(profile_, x); }

double RadialHamiltonian::value(const RealVector& x) const { return ramp_.value(potential(x)); }

RealVector RadialHamiltonian::field(const RealVector& x) const {
  const double rate = ramp_.identity ? 1.0 : ramp_.slope(potential(x));
  return rate * apply_j(x);
}

PerturbedHamiltonian::PerturbedHamiltonian(const SolitonProfile& profile, double eps, Scalar h,
                                           Gradient grad_h)
    : profile_(profile), eps_(eps), h_(std::move(h)), grad_h_(std::move(grad_h)) {}

PerturbedHamiltonian PerturbedHamiltonian::linear_x1(const SolitonProfile& profile, double eps) {
  return PerturbedHamiltonian(
      profile, eps, [](const RealVector& x) { return x[0]; },
      [](const RealVector& x) {
        RealVector g = RealVector::Zero(x.size());
        g[0] = 1.0;
        return g;
      });
}

double PerturbedHamiltonian::value(const RealVector& x) const {
  return potential_at(profile_, x) + eps_ * h_(x);
}

RealVector PerturbedHamiltonian::field(const RealVector& x) const {
  // V = J (1/2) G^{-1} grad_E H; the f part reduces to J x.
  RealVector v = apply_j(x);
  if (eps_ != 0.0) {
    const auto metric = metric_at(profile_, PhasePoint(x));
    const RealVector kgrad = 0.5 * real_form(metric.g_inv) * grad_h_(x);
    v += eps_ * apply_j(kgrad);
  }
  return v;
}

RealVector hamiltonian_field(const Hamiltonian& H, const PhasePoint& p) { return H.field(p.coords); }

std::string to_string(OrbitStatus s) {
  switch (s) {
    case OrbitStatus::Closed: return "closed";
    case OrbitStatus::Constant: return "constant";
    case OrbitStatus::NoClosure: return "no_closure";
  }
  return "unknown";
}

RealVector implicit_midpoint_step(const Hamiltonian& H, const RealVector& x0, double h,
                                  const IntegratorOptions& opt) {
  RealVector x1 = x0 + h * H.field(x0);
  for (int it = 0; it < opt.inner_max; ++it) {
    const RealVector next = x0 + h * H.field(0.5 * (x0 + x1));
    const double change = (next - x1).norm();
    x1 = next;
    if (change <= opt.inner_tol * (1.0 + x1.norm())) return x1;
  }
  // Fixed point too slow (stiff ramp): Newton from the current iterate.
  for (int it = 0; it < 20; ++it) {
    const RealVector next = difference_jacobian_solve(H, x0, x1, h);
    const double change = (next - x1).norm();
    x1 = next;
    if (!x1.allFinite()) break;
    if (change <= 1e-14 * (1.0 + x1.norm())) return x1;
  }
  throw SolverFault("implicit midpoint: inner iteration diverged");
}

RealVector flow_map(const Hamiltonian& H, const RealVector& x0, double T, int steps,
                    const IntegratorOptions& opt) {
  RealVector x = x0;
  const double h = T / steps;
  for (int k = 0; k < steps; ++k) x = implicit_midpoint_step(H, x, h, opt);
  return x;
}

OrbitResult integrate_orbit(const SolitonProfile& profile, const Hamiltonian& H,
                            const PhasePoint& seed, const IntegratorOptions& opt) {
  if (!(opt.step > 0.0)) throw ValidationError("integrate_orbit: step must be positive");
  if (!(seed.norm_sq() > 0.0)) throw ValidationError("integrate_orbit: seed must be nonzero");
  if (seed.n() != profile.dimension()) throw ValidationError("integrate_orbit: seed dimension mismatch");

  OrbitResult out;
  out.seed = seed;
  out.level = H.value(seed.coords);
  out.path.push_back(seed.coords);
  out.times.push_back(0.0);

  const RealVector v0 = H.field(seed.coords);
  const double speed0 = v0.norm();
  if (!(speed0 > 1e-12 * std::sqrt(seed.norm_sq()))) {
    out.status = OrbitStatus::Constant;
    return out;
  }
  const RealVector normal = v0 / speed0;
  auto section = [&](const RealVector& x) { return normal.dot(x - seed.coords); };

  RealVector x = seed.coords;
  double t = 0.0;
  double s_prev = 0.0;
  bool left_section = false;
  const auto max_steps = static_cast<long>(std::ceil(opt.max_param / opt.step));
  for (long k = 0; k < max_steps; ++k) {
    RealVector next = implicit_midpoint_step(H, x, opt.step, opt);
    if (!next.allFinite()) throw SolverFault("integrate_orbit: state became non-finite");
    const double s_next = section(next);
    if (s_prev < 0.0) left_section = true;

    if (left_section && s_prev < 0.0 && s_next >= 0.0) {
      // Henon step: take s as the independent variable and step by -s_prev
      // with the same midpoint rule, integrating t alongside.
      const double ds = -s_prev;
      RealVector y = x;
      double dt = ds / normal.dot(H.field(x));
      for (int it = 0; it < 100; ++it) {
        const RealVector mid = 0.5 * (x + y);
        const RealVector vm = H.field(mid);
        const double rate = normal.dot(vm);
        const RealVector y_next = x + (ds / rate) * vm;
        const double change = (y_next - y).norm();
        y = y_next;
        dt = ds / rate;
        if (change <= opt.inner_tol * (1.0 + y.norm())) break;
      }
      const double closure = (y - seed.coords).norm();
      if (closure <= opt.detection_tol) {
        out.path.push_back(y);
        out.times.push_back(t + dt);
        out.status = OrbitStatus::Closed;
        out.period = t + dt;
        out.closure_error = closure;
        break;
      }
    }
    x = std::move(next);
    t += opt.step;
    s_prev = s_next;
    out.path.push_back(x);
    out.times.push_back(t);
  }

  for (const auto& p : out.path) {
    out.level_drift = std::max(out.level_drift, std::abs(H.value(p) - out.level));
  }
  if (out.status == OrbitStatus::Closed) {
    const auto m = orbit_metrics(profile, out);
    out.g_length = m.g_length;
    out.action = m.action;
  }
  return out;
}

OrbitMetrics orbit_metrics(const SolitonProfile& profile, const OrbitResult& orbit) {
  OrbitMetrics m;
  if (orbit.status != OrbitStatus::Closed || orbit.path.size() < 2) return m;
  const auto& path = orbit.path;
  auto primitive = [&](const RealVector& x) {
    // lambda(x) = phi(t) e^{-t} J x, so lambda(x)(v) = phi/|x|^2 <J x, v>.
    const double r2 = x.squaredNorm();
    return RealVector((profile.phi(std::log(r2)) / r2) * apply_j(x));
  };
  RealMatrix g_prev = real_form(metric_at(profile, PhasePoint(path[0])).g);
  RealVector lam_prev = primitive(path[0]);
  for (std::size_t k = 1; k < path.size(); ++k) {
    const RealVector dx = path[k] - path[k - 1];
    const RealMatrix g_next = real_form(metric_at(profile, PhasePoint(path[k])).g);
    const RealVector lam_next = primitive(path[k]);
    m.g_length += 0.5 * (std::sqrt(dx.dot(g_prev * dx)) + std::sqrt(dx.dot(g_next * dx)));
    m.action += 0.5 * (lam_prev + lam_next).dot(dx);
    g_prev = g_next;
    lam_prev = lam_next;
  }
  return m;
}

std::vector<LevelScanEntry> scan_levels_for_orbits(const SolitonProfile& profile,
                                                   const RadialHamiltonian& H,
                                                   const std::vector<double>& levels,
                                                   const IntegratorOptions& opt) {
  const int n = profile.dimension();
  const Ramp& ramp = H.ramp();
  std::vector<LevelScanEntry> out;
  for (double level : levels) {
    LevelScanEntry entry;
    entry.level = level;
    try {
      if (!(level > ramp.range_min || (level == ramp.range_min && !ramp.identity)) ||
          level > ramp.range_max || !std::isfinite(level)) {
        throw ValidationError("level outside the range of H");
      }
      // Potential value f on the level set: chi is nondecreasing, find the
      // smallest f with chi(f) >= level by bisection (identity: f = level).
      // On the top plateau also require chi' = 0, since chi rounds to m
      // slightly before the shoulder ends.
      double f_level = level;
      if (!ramp.identity) {
        const bool plateau = level >= ramp.range_max;
        auto reached = [&](double f) { return ramp.value(f) >= level && (!plateau || ramp.slope(f) == 0.0); };
        double lo = 0.0;
        double hi = 1.0;
        while (!reached(hi)) {
          hi *= 2.0;
          if (hi > 1e6) throw ValidationError("level not attained by H");
        }
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
          const double mid = 0.5 * (lo + hi);
          (reached(mid) ? hi : lo) = mid;
        }
        f_level = hi;
      }
      const double t = profile.t_of_phi(f_level);
      RealVector c = RealVector::Zero(2 * n);
      c[0] = std::exp(0.5 * t);
      entry.orbit = integrate_orbit(profile, H, PhasePoint(c), opt);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

ShootResult shoot_periodic(const SolitonProfile& profile, const Hamiltonian& H, const PhasePoint& guess,
                           double guess_period, const ShootOptions& opt) {
  const Eigen::Index dim = guess.coords.size();
  const int steps = static_cast<int>(std::ceil(guess_period / opt.integrator.step));
  const RealVector v_guess = H.field(guess.coords);
  const double level = H.value(guess.coords);

  auto grad_e = [&](const RealVector& x) {
    // Euclidean gradient recovered from the field: V = J (1/2) G^{-1} grad,
    // so grad = -2 G J V.
    const auto metric = metric_at(profile, PhasePoint(x));
    return RealVector(-2.0 * real_form(metric.g) * apply_j(H.field(x)));
  };
  auto residual = [&](const RealVector& u) {
    const RealVector x0 = u.head(dim);
    const double T = u[dim];
    const double mu = u[dim + 1];
    RealVector r(dim + 2);
    r.head(dim) = flow_map(H, x0, T, steps, opt.integrator) - x0 + mu * grad_e(x0);
    r[dim] = v_guess.dot(x0 - guess.coords);
    r[dim + 1] = H.value(x0) - level;
    return r;
  };

  RealVector u(dim + 2);
  u.head(dim) = guess.coords;
  u[dim] = guess_period;
  u[dim + 1] = 0.0;

  ShootResult out;
  RealVector r = residual(u);
  for (int it = 0; it <= opt.max_iterations; ++it) {
    out.iterations = it;
    if (r.norm() <= opt.tolerance) {
      out.converged = true;
      break;
    }
    if (it == opt.max_iterations) break;
    RealMatrix jac(dim + 2, dim + 2);
    for (Eigen::Index j = 0; j < dim + 2; ++j) {
      RealVector up = u;
      const double d = opt.fd_step * std::max(1.0, std::abs(u[j]));
      up[j] += d;
      jac.col(j) = (residual(up) - r) / d;
    }
    u -= jac.colPivHouseholderQr().solve(r);
    r = residual(u);
    if (!r.allFinite()) break;
  }

  const RealVector x0 = u.head(dim);
  const double T = u[dim];
  const RealVector xT = flow_map(H, x0, T, steps, opt.integrator);
  out.residual = (xT - x0).norm();
  out.message = out.converged ? "converged" : "Newton iteration did not converge";

  OrbitResult& orbit = out.orbit;
  orbit.seed = PhasePoint(x0);
  orbit.level = H.value(x0);
  orbit.period = T;
  orbit.closure_error = out.residual;
  orbit.status = out.converged ? OrbitStatus::Closed : OrbitStatus::NoClosure;
  if (out.converged) {
    RealVector x = x0;
    const double h = T / steps;
    orbit.path.push_back(x);
    orbit.times.push_back(0.0);
    for (int k = 0; k < steps; ++k) {
      x = implicit_midpoint_step(H, x, h, opt.integrator);
      orbit.path.push_back(x);
      orbit.times.push_back((k + 1) * h);
      orbit.level_drift = std::max(orbit.level_drift, std::abs(H.value(x) - orbit.level));
    }
    const auto m = orbit_metrics(profile, orbit);
    orbit.g_length = m.g_length;
    orbit.action = m.action;
  }
  return out;
}

double AdmissibleHamiltonian::m() const { return max_slope * ((f_outer - f_inner) - edge); }

double AdmissibleHamiltonian::chi(double f) const {
  if (f <= f_inner) return 0.0;
  if (f >= f_outer) return m();
  if (f < f_inner + edge) return max_slope * edge * smootherstep_integral((f - f_inner) / edge);
  if (f > f_outer - edge) return m() - max_slope * edge * smootherstep_integral((f_outer - f) / edge);
  return max_slope * (0.5 * edge + (f - f_inner - edge));
}

double AdmissibleHamiltonian::chi_prime(double f) const {
  if (f <= f_inner || f >= f_outer) return 0.0;
  if (f < f_inner + edge) return max_slope * smootherstep((f - f_inner) / edge);
  if (f > f_outer - edge) return max_slope * smootherstep((f_outer - f) / edge);
  return max_slope;
}

Ramp AdmissibleHamiltonian::ramp() const {
  Ramp r;
  const AdmissibleHamiltonian self = *this;
  r.value = [self](double f) { return self.chi(f); };
  r.slope = [self](double f) { return self.chi_prime(f); };
  r.range_min = 0.0;
  r.range_max = m();
  return r;
}

AdmissibleHamiltonian AdmissibleHamiltonian::make(int n, double level_c, double slope_factor,
                                                  double gap_fraction) {
  if (!(level_c > 0.0)) throw ValidationError("AdmissibleHamiltonian: level c must exceed f_min = 0");
  AdmissibleHamiltonian a;
  a.n = n;
  a.level_c = level_c;
  const double gap = gap_fraction * level_c;
  a.f_inner = gap;
  a.f_outer = level_c - gap;
  a.edge = gap;
  a.max_slope = slope_factor * kTwoPi;
  return a;
}

AdmissibilityReport check_admissible(const AdmissibleHamiltonian& A, std::size_t samples) {
  AdmissibilityReport rep;
  const double f_min = 0.0;
  const double c = A.level_c;
  rep.m = A.m();
  rep.family_supremum = kTwoPi * (c - f_min);

  if (!(A.edge > 0.0) || !(A.f_inner + A.edge <= A.f_outer - A.edge + 1e-15)) {
    rep.violations.push_back("ramp: shoulders overlap or have zero width");
  }

  const auto grid = linspace(f_min, c, samples);
  double max_slope = 0.0;
  bool bounded = true;
  bool zero_inside = true;
  bool plateau_outside = true;
  for (double f : grid) {
    const double h = A.chi(f);
    max_slope = std::max(max_slope, A.chi_prime(f));
    if (h < 0.0 || h > rep.m) bounded = false;
    if (f <= A.f_inner && h != 0.0) zero_inside = false;
    if (f >= A.f_outer && h != rep.m) plateau_outside = false;
  }
  rep.sampled_max_slope = max_slope;
  rep.min_period = max_slope > 0.0 ? kTwoPi / max_slope : std::numeric_limits<double>::infinity();

  rep.cond_a = rep.m > 0.0 && A.f_outer < c && plateau_outside;
  rep.cond_b = A.f_inner > f_min && zero_inside;
  rep.cond_c = bounded;
  rep.cond_d = max_slope < kTwoPi;
  if (!rep.cond_a) rep.violations.push_back("(a) H is not identically m(H) > 0 outside a compact subset of the interior");
  if (!rep.cond_b) rep.violations.push_back("(b) H does not vanish on a nonempty open set");
  if (!rep.cond_c) rep.violations.push_back("(c) 0 <= H <= m(H) fails");
  if (!rep.cond_d) rep.violations.push_back("(d) a nonconstant orbit has period 2 pi / chi' <= 1");
  rep.lower_bound = rep.admissible() && rep.violations.empty() ? rep.m : 0.0;
  return rep;
}

}  // namespace soliton
