#pragma once

#include <functional>

namespace soliton::quad {

/// Adaptive Gauss-Kronrod (61-point) on [a, b]. Throws QuadratureFault when the
/// error estimate stays above rel_tol * L1 + abs_tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-13, double abs_tol = 0.0);

/// Same, split at a fixed set of panel edges between a and b so long
/// logarithmic ranges are not refined from a single interval.
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-13, double abs_tol = 0.0);

}  // namespace soliton::quad
