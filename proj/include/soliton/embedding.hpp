#pragma once

#include <vector>

#include "soliton/phase.hpp"
#include "soliton/profile.hpp"

namespace soliton {

/// Source symplectic form: the Ricci form (potential f, h' = phi') or the
/// Kahler form (potential u, h' = phi).
enum class FormTag { Ricci, Kahler };

const char* to_string(FormTag tag);

/// Radial map w = a(t) z onto a ball in (C^n, omega_0), omega_0 = (i/2) sum dw dwbar.
/// a(t)^2 = 2 h'(t) e^{-t}, so |w|^2 = 2 h'(t): the pullback of the primitive
/// (1/2) sum (x dy - y dx) is h'(t) sum d(theta_k)-type, which is a primitive of i ddbar h.
class SymplecticMap {
 public:
  SymplecticMap(SolitonProfile profile, FormTag tag);

  FormTag source_form() const { return tag_; }
  int dimension() const { return profile_.dimension(); }
  const SolitonProfile& profile() const { return profile_; }

  /// h'(t): phi' for the Ricci form, phi for the Kahler form.
  double potential_slope(double t) const;
  /// a(t); the t -> -inf limit is sqrt(2).
  double scale(double t) const;
  static double scale_limit() { return 1.4142135623730951; }
  /// Limit of the tagged potential at the origin (both normalized to 0).
  double h_min() const { return 0.0; }
  /// |w|^2 of the image of the sphere at log-radius t.
  double image_radius_sq(double t) const { return 2.0 * potential_slope(t); }
  /// Supremum of |w|^2 over the whole manifold (2n for Ricci, inf for Kahler).
  double image_radius_sq_limit() const;

  RealVector apply(const RealVector& x) const;
  /// Throws RangeError when w lies outside the image.
  RealVector inverse(const RealVector& w) const;
  /// Log-radius t with image_radius_sq(t) = R2.
  double t_of_image_radius_sq(double R2) const;

  /// Matrix of the source form at x (2 J^T real_form of the radial Hessian).
  RealMatrix source_form_matrix(const RealVector& x) const;

 private:
  SolitonProfile profile_;
  FormTag tag_;
};

SymplecticMap build_map(const SolitonProfile& profile, FormTag tag);

/// Max entrywise |DF^T Omega_0 DF - Omega_source| over the samples, with a
/// central-difference Jacobian.
double pullback_residual(const SymplecticMap& map, const std::vector<PhasePoint>& samples);

/// G = (Ricci map)^{-1} o (Kahler map) from ({f <= c}, omega) into (C^n, rho).
/// Needs 2 phi(t_c) < 2n, i.e. c < n. Returns max |DG^T Rho(G x) DG - Omega(x)|.
double composition_residual(const SolitonProfile& profile, const std::vector<PhasePoint>& samples);

/// n points per call, log-radius uniform in [t_lo, t_hi], direction uniform on
/// the sphere; deterministic for a given seed.
std::vector<PhasePoint> sample_points(int n, std::size_t count, double t_lo, double t_hi, unsigned seed);

struct CapacityBounds {
  double level_c = 0.0;
  double t_c = 0.0;
  double lower = 0.0;           // plateau value of an admissible ramp
  double upper = 0.0;           // pi r^2 of the Kahler-map image ball
  double image_radius_sq = 0.0;
  double ramp_factor = 0.0;
  bool lower_admissible = false;
};

/// Two-sided estimate of the Hofer-Zehnder capacity of ({f <= c}, omega).
/// Throws ValidationError for c <= f_min = 0.
CapacityBounds capacity_bounds(const SolitonProfile& profile, double c, double ramp_factor = 1.0 - 1e-6,
                               double gap_fraction = 1e-5);

}  // namespace soliton
