#pragma once

#include <span>
#include <vector>

#include "soliton/phase.hpp"
#include "soliton/profile.hpp"

namespace soliton {

/// Eigen-decomposition of the soliton metric at log-radius t:
/// g = lam_transverse I + offdiag_coeff zbar z^T, with the radial direction
/// carrying lam_radial.
struct RadialMetric {
  int n = 0;
  double t = 0.0;
  double lam_transverse = 0.0;  // e^{-t} phi, multiplicity n-1
  double lam_radial = 0.0;      // e^{-t} phi'
  double offdiag_coeff = 0.0;   // e^{-2t} (phi' - phi)
};

RadialMetric radial_metric(const SolitonProfile& profile, double t);

struct MetricAt {
  ComplexMatrix g;      // g(k, l) = g_{k lbar}
  ComplexMatrix g_inv;  // matrix inverse of g
  double det = 0.0;     // det g = e^{-f}
  double t = 0.0;       // -inf at the origin
};

/// Full Hermitian metric at z; the limit I at z = 0. The inverse comes from
/// the rank-one (Sherman-Morrison) update.
MetricAt metric_at(const SolitonProfile& profile, const PhasePoint& z);

/// Hermitian matrix of the complex Hessian of a radial function h(t):
/// h_{k lbar} = e^{-t} h' delta + e^{-2t} (h'' - h') zbar_k z_l.
ComplexMatrix radial_hessian(const PhasePoint& z, double h1, double h2);

struct CurvatureData {
  double t = 0.0;
  double ric_transverse = 0.0;  // phi'/phi
  double ric_radial = 0.0;      // phi''/phi'
  double R = 0.0;
  double grad_f_sq = 0.0;       // phi'
  double f = 0.0;
};

/// Curvature at t for the metric scaled by `metric_scale` (R and |grad f|^2
/// scale by 1/metric_scale). metric_scale = n gives R_max = 1 and C = 1.
CurvatureData curvature_at(const SolitonProfile& profile, double t, double metric_scale = 1.0);

/// Metric scale that normalizes the maximum scalar curvature to 1.
inline double unit_curvature_scale(int n) { return static_cast<double>(n); }

struct IdentityReport {
  double lemma_constant = 0.0;   // expected value of R + |grad f|^2
  double lemma_max = 0.0;        // max |R + |grad f|^2 - C|
  double eq5_max = 0.0;          // max |dR/dt + phi''|, centered differences
  double richardson_max = 0.0;   // max |D_h R - D_{h/2} R| (difference stability)
  double gradient_field_max = 0.0;  // max |f'/phi' - 1|
  double r_slope_max = 0.0;      // max dR/dt, must be < 0
  double min_ricci = 0.0;        // min over grid of both Ricci eigenvalues
  std::size_t points = 0;
};

IdentityReport identity_suite(const SolitonProfile& profile, std::span<const double> grid,
                              double h = 1e-4, double metric_scale = 1.0);

/// Uniform grid of `count` points on [a, b].
std::vector<double> linspace(double a, double b, std::size_t count);

/// Radial distance from the origin, s(t) = int_{-inf}^t (1/2) sqrt(phi').
double distance_s(const SolitonProfile& profile, double t);
/// s(t1) - s(t0) by quadrature.
double distance_between(const SolitonProfile& profile, double t0, double t1);

/// Kahler potential u(t) - u_min = int_{-inf}^t phi.
double kahler_potential(const SolitonProfile& profile, double t);

/// Euclidean-independent constant in Vol{log|z|^2 <= t} = c_n int phi^{n-1} phi'
/// (half the area of the unit sphere S^{2n-1}): c_n = pi^n / (n-1)!.
double sublevel_volume_constant(int n);

struct VolumeResult {
  double quadrature = 0.0;
  double closed_form = 0.0;  // c_n phi^n / n
};

VolumeResult volume_sublevel(const SolitonProfile& profile, double t);

struct AsymptoticGeometryRow {
  double t = 0.0;
  double s = 0.0;
  double R = 0.0;
  double R_times_s = 0.0;
  double cp_diameter_ratio = 0.0;  // sqrt(phi) / sqrt(s)
  double fiber_length = 0.0;       // 2 pi sqrt(phi')
  double volume = 0.0;
  double vol_over_s_n = 0.0;
  double vol_over_s_2n = 0.0;
};

struct AsymptoticGeometryReport {
  int n = 0;
  std::vector<AsymptoticGeometryRow> rows;
  double R_times_s_target = 0.0;  // (n-1) sqrt(n)/2; 0 for n = 1
  double fiber_target = 0.0;      // 2 pi sqrt(n)
  /// max/min - 1 of the ratio over rows with s in [s_last/10, s_last].
  double last_decade_variation_n = 0.0;
  double last_decade_variation_2n = 0.0;
  bool bounded = false;  // R s, CP ratio and fiber length finite and bounded
};

/// Rows at geometrically spaced t in [1, T_max] (`samples` rows).
AsymptoticGeometryReport asymptotic_geometry_report(const SolitonProfile& profile, double T_max,
                                                    std::size_t samples = 40);

/// Max/min - 1 of ratio over entries whose s lies in the last decade.
double last_decade_variation(std::span<const double> s, std::span<const double> ratio);

struct ConvexityReport {
  double min_hessian_eigenvalue = 0.0;  // of g^{-1} Hess f = g^{-1} Ric
  double max_grad_f_sq = 0.0;
  double properness_gap = 0.0;          // f(+30) - f(-30)
  double f_at_origin = 0.0;             // limit f(-inf) = 0
  bool f_increasing = false;
  bool grad_bounded = false;            // |grad f|^2 < n strictly at samples
  std::size_t samples = 0;
  bool passed() const {
    return min_hessian_eigenvalue > 0.0 && grad_bounded && f_increasing && properness_gap > 0.0;
  }
};

/// Throws ValidationError on a zero sample point.
ConvexityReport convexity_exhaustion_check(const SolitonProfile& profile,
                                           std::span<const PhasePoint> samples);

}  // namespace soliton
