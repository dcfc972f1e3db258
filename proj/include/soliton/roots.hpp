#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "soliton/errors.hpp"

namespace soliton::roots {

struct RootResult {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

struct NewtonOptions {
  double residual_tol = 1e-12;
  /// Relative bracket width at which the iteration is considered converged.
  double x_rel_tol = 4.0 * std::numeric_limits<double>::epsilon();
  /// Floor on the scale used with x_rel_tol; 1 turns it into an absolute test.
  double x_scale_floor = 0.0;
  int max_iterations = 200;
};

/// Safeguarded Newton iteration for an increasing function on [lo, hi].
///
/// `eval(x)` returns the pair (F(x), F'(x)). The bracket must satisfy
/// F(lo) < 0 < F(hi); it is shrunk after every evaluation and a bisection step
/// replaces any Newton step that leaves the bracket or fails to halve it.
template <typename Eval>
RootResult safeguarded_newton(Eval&& eval, double lo, double hi,
                              const NewtonOptions& opt = {}) {
  auto [flo, dlo] = eval(lo);
  auto [fhi, dhi] = eval(hi);
  (void)dlo;
  (void)dhi;
  if (flo == 0.0) return {lo, 0.0, 0};
  if (fhi == 0.0) return {hi, 0.0, 0};
  if (!(flo < 0.0 && fhi > 0.0)) {
    throw SolverFault("safeguarded_newton: interval does not bracket a root");
  }

  double x = 0.5 * (lo + hi);
  double dx_old = hi - lo;
  double dx = dx_old;
  auto [fx, dfx] = eval(x);

  for (int it = 1; it <= opt.max_iterations; ++it) {
    if (std::abs(fx) <= opt.residual_tol) return {x, fx, it};
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double scale = std::max({opt.x_scale_floor, std::abs(lo), std::abs(hi)});
    if (hi - lo <= opt.x_rel_tol * scale) {
      return {x, fx, it};
    }

    const double newton = x - fx / dfx;
    const bool inside = dfx > 0.0 && newton > lo && newton < hi;
    if (inside && std::abs(2.0 * fx) < std::abs(dx_old * dfx)) {
      dx_old = dx;
      dx = newton - x;
      x = newton;
    } else {
      dx_old = dx;
      dx = 0.5 * (hi - lo);
      x = lo + dx;
    }
    std::tie(fx, dfx) = eval(x);
  }
  throw SolverFault("safeguarded_newton: no convergence after " +
                    std::to_string(opt.max_iterations) + " iterations");
}

/// Plain bisection for a monotone increasing predicate-like function.
template <typename F>
double bisect_increasing(F&& fn, double lo, double hi, double width,
                         int max_iterations = 400) {
  if (!(fn(lo) < 0.0 && fn(hi) > 0.0)) {
    throw SolverFault("bisect_increasing: interval does not bracket a root");
  }
  for (int it = 0; it < max_iterations && hi - lo > width; ++it) {
    const double mid = 0.5 * (lo + hi);
    (fn(mid) < 0.0 ? lo : hi) = mid;
  }
  if (hi - lo > width) throw SolverFault("bisect_increasing: no convergence");
  return 0.5 * (lo + hi);
}

}  // namespace soliton::roots
