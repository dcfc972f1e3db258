#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "soliton/profile.hpp"

namespace soliton {

/// Boundary data for the radial flow. Left: Dirichlet
/// phi(t_min, tau) = left_scale * e^{t_min - left_speed * tau}. Right: Neumann
/// slope imposed through the ghost node phi_{N+1} = phi_N + dt * slope, where
/// slope is right_slope_at(tau) when set and right_slope otherwise.
struct FlowBoundary {
  double left_scale = 1.0;
  double left_speed = 1.0;
  double right_slope = 1.0;
  std::function<double(double)> right_slope_at;

  double slope(double tau) const { return right_slope_at ? right_slope_at(tau) : right_slope; }
};

enum class RightBoundary {
  Asymptotic,  // phi' = n
  Travelling   // face slope of phi0(t - tau) just past t_max
};

/// Discretized profile phi(t, tau) on a uniform t grid for the radial Ricci
/// flow d_tau phi = phi''/phi' + (n-1) phi'/phi - n (gauge d_tau u = -f).
struct FlowState {
  int n = 1;
  double t_min = 0.0;
  double spacing = 0.0;
  std::vector<double> phi;
  double tau = 0.0;
  FlowBoundary boundary;

  std::size_t size() const { return phi.size(); }
  double t(std::size_t i) const { return t_min + spacing * static_cast<double>(i); }
  double t_max() const { return t(phi.size() - 1); }

  /// Exact soliton sampled on [t_min, t_max].
  static FlowState soliton(const SolitonProfile& profile, double t_min = -12.0, double t_max = 12.0,
                           double spacing = 1e-2, RightBoundary right = RightBoundary::Travelling);
  /// Flat metric phi = e^t (g = I); stationary boundary data.
  static FlowState flat(int n, double t_min = -12.0, double t_max = 12.0, double spacing = 1e-2);
};

struct GridFunction {
  std::vector<double> t;
  std::vector<double> values;
};

/// Discrete right side at nodes 1..N (node 0 carries Dirichlet data).
/// Uses the flux form (log p_{i+1/2} - log p_{i-1/2})/dt for phi''/phi' and
/// centered differences of log phi, which is exact on phi = e^t. Throws
/// InvariantViolation if phi or its slope is nonpositive.
GridFunction reduced_rhs(const FlowState& state);

/// Throws InvariantViolation naming "positivity" or "monotonicity".
void check_flow_invariants(const FlowState& state);

using FlowObserver = std::function<void(const FlowState&, std::size_t step)>;

/// Linearly implicit Euler steps: the 1/phi' coefficient and the log terms
/// are linearized at the current state and one tridiagonal system is solved
/// per step.
FlowState evolve(FlowState state, double d_tau, std::size_t steps, const FlowObserver& observer = {},
                 std::size_t observe_every = 0);

struct SolitonDeviation {
  double best_shift = 0.0;
  double sup_error = 0.0;
};

/// Minimizes over sigma the sup distance between the state and phi0(t - sigma).
SolitonDeviation soliton_deviation(const FlowState& state, const SolitonProfile& profile);

/// Sup distance to the exact travelling wave phi0(t - tau), over nodes at
/// least `margin` away from both ends.
double travelling_wave_error(const FlowState& state, const SolitonProfile& profile, double margin = 0.0);

/// Soliton plus a relative Gaussian bump amp * phi0 * exp(-(t - center)^2).
FlowState bumped_soliton(const SolitonProfile& profile, double amplitude = 0.01, double center = 0.0,
                         double spacing = 1e-2);

/// Max over interior nodes of |-(d/dt) f - rhs| with f = n t - (n-1) log phi - log phi'.
double gauge_residual(const FlowState& state);

struct SnapshotRow {
  double t, phi, phi1, R;
};

/// Centered-difference phi' and scalar curvature R = (n-1) f'/phi + f''/phi'
/// with f' = n - (n-1) phi'/phi - phi''/phi', at nodes 2..N-2.
std::vector<SnapshotRow> snapshot(const FlowState& state);

}  // namespace soliton
