#include "soliton/ricci_flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "soliton/errors.hpp"

namespace soliton {
namespace {

std::size_t node_count(double t_min, double t_max, double spacing) {
  if (!(spacing > 0.0) || !(t_max > t_min)) throw ValidationError("flow grid: need t_max > t_min and spacing > 0");
  const double cells = (t_max - t_min) / spacing;
  const auto n = static_cast<std::size_t>(std::llround(cells));
  if (n < 4 || std::abs(cells - static_cast<double>(n)) > 1e-6 * cells) {
    throw ValidationError("flow grid: spacing must divide [t_min, t_max] into at least 4 cells");
  }
  return n + 1;
}

double left_value(const FlowState& s, double tau) {
  return s.boundary.left_scale * std::exp(s.t_min - s.boundary.left_speed * tau);
}

double ghost(const FlowState& s, double tau) { return s.phi.back() + s.spacing * s.boundary.slope(tau); }

}  // namespace

FlowState FlowState::soliton(const SolitonProfile& profile, double t_min, double t_max, double spacing,
                             RightBoundary right) {
  FlowState s;
  s.n = profile.dimension();
  s.t_min = t_min;
  s.spacing = spacing;
  const std::size_t count = node_count(t_min, t_max, spacing);
  s.phi.resize(count);
  for (std::size_t i = 0; i < count; ++i) s.phi[i] = profile.phi(s.t(i));
  s.boundary.left_scale = s.phi[0] * std::exp(-t_min);
  s.boundary.left_speed = 1.0;
  s.boundary.right_slope = s.n;
  if (right == RightBoundary::Travelling) {
    const double lo = s.t_max();
    s.boundary.right_slope_at = [profile, lo, spacing](double tau) {
      return (profile.phi(lo + spacing - tau) - profile.phi(lo - tau)) / spacing;
    };
  }
  return s;
}

FlowState FlowState::flat(int n, double t_min, double t_max, double spacing) {
  FlowState s;
  s.n = n;
  s.t_min = t_min;
  s.spacing = spacing;
  const std::size_t count = node_count(t_min, t_max, spacing);
  s.phi.resize(count);
  for (std::size_t i = 0; i < count; ++i) s.phi[i] = std::exp(s.t(i));
  s.boundary.left_scale = 1.0;
  s.boundary.left_speed = 0.0;
  // Face slope of e^t past t_max, so the ghost node is e^{t_max + dt}.
  s.boundary.right_slope = std::exp(s.t_max()) * std::expm1(spacing) / spacing;
  return s;
}

void check_flow_invariants(const FlowState& state) {
  for (std::size_t i = 0; i < state.phi.size(); ++i) {
    if (!(state.phi[i] > 0.0)) {
      throw InvariantViolation("positivity", "phi <= 0 at t = " + std::to_string(state.t(i)));
    }
  }
  for (std::size_t i = 1; i < state.phi.size(); ++i) {
    if (!(state.phi[i] > state.phi[i - 1])) {
      throw InvariantViolation("monotonicity", "phi not increasing at t = " + std::to_string(state.t(i)));
    }
  }
  if (!(state.boundary.slope(state.tau) > 0.0)) {
    throw InvariantViolation("monotonicity", "right slope datum must be positive");
  }
}

GridFunction reduced_rhs(const FlowState& state) {
  check_flow_invariants(state);
  const auto& phi = state.phi;
  const std::size_t last = phi.size() - 1;
  const double h = state.spacing;
  const double g = ghost(state, state.tau);
  GridFunction out;
  for (std::size_t i = 1; i <= last; ++i) {
    const double next = (i == last) ? g : phi[i + 1];
    const double p_plus = (i == last) ? state.boundary.slope(state.tau) : (next - phi[i]) / h;
    const double p_minus = (phi[i] - phi[i - 1]) / h;
    const double diffusion = (std::log(p_plus) - std::log(p_minus)) / h;
    const double reaction = (state.n - 1) * (std::log(next) - std::log(phi[i - 1])) / (2.0 * h);
    out.t.push_back(state.t(i));
    out.values.push_back(diffusion + reaction - state.n);
  }
  return out;
}

FlowState evolve(FlowState state, double d_tau, std::size_t steps, const FlowObserver& observer,
                 std::size_t observe_every) {
  if (!(d_tau > 0.0)) throw ValidationError("evolve: d_tau must be positive");
  check_flow_invariants(state);
  const std::size_t last = state.phi.size() - 1;
  const double h = state.spacing;
  const double h2 = h * h;
  const int n = state.n;

  // Unknowns delta_1..delta_N; row k = i - 1.
  std::vector<double> lower(last), diag(last), upper(last), rhs(last);

  for (std::size_t step = 0; step < steps; ++step) {
    const auto f = reduced_rhs(state);
    const auto& phi = state.phi;
    const double g = ghost(state, state.tau);
    const double delta0 = left_value(state, state.tau + d_tau) - phi[0];

    for (std::size_t i = 1; i <= last; ++i) {
      const std::size_t k = i - 1;
      const double next = (i == last) ? g : phi[i + 1];
      const double p_minus = (phi[i] - phi[i - 1]) / h;
      // Jacobian of the right side at node i.
      double j_prev = 1.0 / (h2 * p_minus) - (n - 1) / (2.0 * h * phi[i - 1]);
      double j_self = -1.0 / (h2 * p_minus);
      double j_next = 0.0;
      if (i == last) {
        j_self += (n - 1) / (2.0 * h * next);
      } else {
        const double p_plus = (next - phi[i]) / h;
        j_self -= 1.0 / (h2 * p_plus);
        j_next = 1.0 / (h2 * p_plus) + (n - 1) / (2.0 * h * next);
      }
      lower[k] = -d_tau * j_prev;
      diag[k] = 1.0 - d_tau * j_self;
      upper[k] = -d_tau * j_next;
      rhs[k] = d_tau * f.values[k];
    }
    rhs[0] -= lower[0] * delta0;
    lower[0] = 0.0;

    // Thomas algorithm.
    for (std::size_t k = 1; k < last; ++k) {
      if (!(std::abs(diag[k - 1]) > 0.0)) throw SolverFault("evolve: singular tridiagonal pivot");
      const double w = lower[k] / diag[k - 1];
      diag[k] -= w * upper[k - 1];
      rhs[k] -= w * rhs[k - 1];
    }
    if (!(std::abs(diag[last - 1]) > 0.0)) throw SolverFault("evolve: singular tridiagonal pivot");
    rhs[last - 1] /= diag[last - 1];
    for (std::size_t k = last - 1; k-- > 0;) {
      rhs[k] = (rhs[k] - upper[k] * rhs[k + 1]) / diag[k];
    }

    state.phi[0] += delta0;
    for (std::size_t i = 1; i <= last; ++i) state.phi[i] += rhs[i - 1];
    state.tau += d_tau;
    check_flow_invariants(state);
    if (observer && observe_every > 0 && (step + 1) % observe_every == 0) observer(state, step + 1);
  }
  return state;
}

namespace {

double sup_distance(const FlowState& state, const SolitonProfile& profile, double shift, double margin = 0.0) {
  double e = 0.0;
  const double lo = state.t_min + margin;
  const double hi = state.t_max() - margin;
  for (std::size_t i = 0; i < state.phi.size(); ++i) {
    const double t = state.t(i);
    if (t < lo || t > hi) continue;
    e = std::max(e, std::abs(state.phi[i] - profile.phi(t - shift)));
  }
  return e;
}

}  // namespace

double travelling_wave_error(const FlowState& state, const SolitonProfile& profile, double margin) {
  if (profile.dimension() != state.n) throw ValidationError("travelling_wave_error: dimension mismatch");
  return sup_distance(state, profile, state.tau, margin);
}

FlowState bumped_soliton(const SolitonProfile& profile, double amplitude, double center, double spacing) {
  FlowState s = FlowState::soliton(profile, -12.0, 12.0, spacing);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = s.t(i) - center;
    s.phi[i] *= 1.0 + amplitude * std::exp(-d * d);
  }
  check_flow_invariants(s);
  return s;
}

SolitonDeviation soliton_deviation(const FlowState& state, const SolitonProfile& profile) {
  if (profile.dimension() != state.n) throw ValidationError("soliton_deviation: dimension mismatch");
  // The sup distance is quasiconvex in the shift (each term is), so golden
  // section converges to the minimizer.
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = state.tau - 2.0;
  double b = state.tau + 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = sup_distance(state, profile, c);
  double fd = sup_distance(state, profile, d);
  while (b - a > 1e-13) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = sup_distance(state, profile, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = sup_distance(state, profile, d);
    }
  }
  SolitonDeviation out;
  out.best_shift = 0.5 * (a + b);
  out.sup_error = sup_distance(state, profile, out.best_shift);
  return out;
}

double gauge_residual(const FlowState& state) {
  const auto rhs = reduced_rhs(state);
  const auto& phi = state.phi;
  const double h = state.spacing;
  const std::size_t last = phi.size() - 1;
  std::vector<double> f(phi.size(), 0.0);
  for (std::size_t i = 1; i < last; ++i) {
    const double slope = (phi[i + 1] - phi[i - 1]) / (2.0 * h);
    f[i] = state.n * state.t(i) - (state.n - 1) * std::log(phi[i]) - std::log(slope);
  }
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 <= last; ++i) {
    const double dfdt = (f[i + 1] - f[i - 1]) / (2.0 * h);
    worst = std::max(worst, std::abs(-dfdt - rhs.values[i - 1]));
  }
  return worst;
}

std::vector<SnapshotRow> snapshot(const FlowState& state) {
  const auto& phi = state.phi;
  const double h = state.spacing;
  const std::size_t N = phi.size();
  const int n = state.n;
  std::vector<double> d1(N, 0.0), fp(N, 0.0);
  for (std::size_t i = 1; i + 1 < N; ++i) {
    d1[i] = (phi[i + 1] - phi[i - 1]) / (2.0 * h);
    const double d2 = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (h * h);
    fp[i] = n - (n - 1) * d1[i] / phi[i] - d2 / d1[i];
  }
  std::vector<SnapshotRow> rows;
  for (std::size_t i = 2; i + 2 < N; ++i) {
    const double fpp = (fp[i + 1] - fp[i - 1]) / (2.0 * h);
    rows.push_back({state.t(i), phi[i], d1[i], (n - 1) * fp[i] / phi[i] + fpp / d1[i]});
  }
  return rows;
}

}  // namespace soliton
