#include "soliton/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>
#include <vector>

#include "soliton/errors.hpp"

namespace soliton::quad {

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_tol) {
  if (a == b) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, 20, rel_tol, &error, &l1);
  if (!std::isfinite(value) || error > 10.0 * rel_tol * l1 + abs_tol) {
    throw QuadratureFault("quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                          "] did not converge (error estimate " + std::to_string(error) + ")");
  }
  return value;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_tol) {
  if (a > b) return -integrate_panels(f, b, a, rel_tol, abs_tol);
  std::vector<double> edges{a};
  for (double e : {-20.0, -5.0, 0.0, 5.0, 20.0}) {
    if (e > edges.back() && e < b) edges.push_back(e);
  }
  for (double e = 80.0; e < b; e *= 4.0) {
    if (e > edges.back()) edges.push_back(e);
  }
  edges.push_back(b);
  double total = 0.0;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    total += integrate(f, edges[i - 1], edges[i], rel_tol, abs_tol);
  }
  return total;
}

}  // namespace soliton::quad
