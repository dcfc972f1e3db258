#pragma once

// Independent reference computations used by the unit tests. Nothing here
// calls into the library.

#include <cmath>
#include <functional>

namespace oracle {

/// Plain bisection in long double on an increasing function.
inline long double bisect(const std::function<long double(long double)>& f, long double lo, long double hi,
                          int iterations = 200) {
  for (int i = 0; i < iterations; ++i) {
    const long double mid = 0.5L * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5L * (lo + hi);
}

/// n = 2: 2((phi - 1) e^phi + 1) = e^{2t}.
inline double phi_n2(double t) {
  const long double target = std::exp(2.0L * t);
  return static_cast<double>(bisect(
      [&](long double p) { return 2.0L * ((p - 1.0L) * std::exp(p) + 1.0L) - target; }, 0.0L, 10.0L + 2.0L * std::fabs(t)));
}

/// n = 3: 3((phi^2 - 2 phi + 2) e^phi - 2) = e^{3t}.
inline double phi_n3(double t) {
  const long double target = std::exp(3.0L * t);
  return static_cast<double>(bisect(
      [&](long double p) { return 3.0L * ((p * p - 2.0L * p + 2.0L) * std::exp(p) - 2.0L) - target; }, 0.0L,
      10.0L + 3.0L * std::fabs(t)));
}

/// -Li_2(-x) for 0 < x <= 1 by its alternating series.
inline double neg_dilog_neg(double x) {
  long double sum = 0.0L, term = 1.0L;
  for (int k = 1; k < 200000; ++k) {
    term = std::pow(static_cast<long double>(x), k) / (static_cast<long double>(k) * k);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-22L) break;
  }
  return static_cast<double>(sum);
}

/// Composite Simpson rule.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 20000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace oracle
