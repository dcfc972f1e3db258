#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "soliton/phase.hpp"
#include "soliton/profile.hpp"

namespace soliton {

/// A Hamiltonian on (C^n, omega) where omega is the soliton Kahler form.
class Hamiltonian {
 public:
  virtual ~Hamiltonian() = default;
  virtual double value(const RealVector& x) const = 0;
  /// V_H with omega(V_H, .) = -dH.
  virtual RealVector field(const RealVector& x) const = 0;
};

/// A monotone function chi applied to the potential f.
struct Ramp {
  std::function<double(double)> value;
  std::function<double(double)> slope;
  double range_min = 0.0;   // smallest value of chi on [0, inf)
  double range_max = 0.0;   // largest value (inf when unbounded)
  bool identity = false;

  static Ramp identity_ramp();
};

/// H = chi(f). The field is chi'(f(x)) J x, because grad f = z for the
/// normalized soliton.
class RadialHamiltonian : public Hamiltonian {
 public:
  RadialHamiltonian(const SolitonProfile& profile, Ramp ramp);
  /// H = f.
  explicit RadialHamiltonian(const SolitonProfile& profile);

  double value(const RealVector& x) const override;
  RealVector field(const RealVector& x) const override;

  double potential(const RealVector& x) const;
  const Ramp& ramp() const { return ramp_; }
  const SolitonProfile& profile() const { return profile_; }

 private:
  const SolitonProfile& profile_;
  Ramp ramp_;
};

/// H = f + eps * h for a smooth function h with Euclidean gradient.
class PerturbedHamiltonian : public Hamiltonian {
 public:
  using Scalar = std::function<double(const RealVector&)>;
  using Gradient = std::function<RealVector(const RealVector&)>;

  PerturbedHamiltonian(const SolitonProfile& profile, double eps, Scalar h, Gradient grad_h);
  /// h = x_1, the linear perturbation.
  static PerturbedHamiltonian linear_x1(const SolitonProfile& profile, double eps);

  double value(const RealVector& x) const override;
  RealVector field(const RealVector& x) const override;
  double epsilon() const { return eps_; }

 private:
  const SolitonProfile& profile_;
  double eps_;
  Scalar h_;
  Gradient grad_h_;
};

/// Hamiltonian field of f for the soliton Kahler form: V_f = J z.
RealVector hamiltonian_field(const Hamiltonian& H, const PhasePoint& p);

enum class OrbitStatus { Closed, Constant, NoClosure };

std::string to_string(OrbitStatus s);

struct OrbitResult {
  OrbitStatus status = OrbitStatus::NoClosure;
  PhasePoint seed;
  double period = 0.0;
  double closure_error = 0.0;
  double g_length = 0.0;
  double action = 0.0;
  double level = 0.0;
  double level_drift = 0.0;         // max |H(x_k) - H(seed)| along the path
  std::vector<RealVector> path;     // x_0 = seed, ..., x_N on the section
  std::vector<double> times;
};

struct IntegratorOptions {
  double step = 1e-3;
  double max_param = 50.0;
  double detection_tol = 1e-8;
  double inner_tol = 1e-15;   // fixed-point increment, relative to |x|
  int inner_max = 60;
};

/// One implicit midpoint step x1 = x0 + h V((x0 + x1)/2). Fixed-point
/// iteration first, Newton with a difference Jacobian as fallback.
RealVector implicit_midpoint_step(const Hamiltonian& H, const RealVector& x0, double h,
                                  const IntegratorOptions& opt = {});

/// Integrate x' = V_H(x) from seed until the first return to the hyperplane
/// through the seed orthogonal to V_H(seed). Throws SolverFault if the inner
/// solve diverges; no return within max_param is reported as NoClosure.
OrbitResult integrate_orbit(const SolitonProfile& profile, const Hamiltonian& H,
                            const PhasePoint& seed, const IntegratorOptions& opt = {});

/// Integrate for a fixed parameter span with N equal steps (no event logic).
RealVector flow_map(const Hamiltonian& H, const RealVector& x0, double T, int steps,
                    const IntegratorOptions& opt = {});

struct OrbitMetrics {
  double g_length = 0.0;
  double action = 0.0;
};

/// Line integrals along a closed orbit path: metric length (chords averaged
/// over endpoint metrics) and the action of lambda = phi e^{-t} sum (x dy - y dx),
/// a primitive of omega.
OrbitMetrics orbit_metrics(const SolitonProfile& profile, const OrbitResult& orbit);

struct LevelScanEntry {
  double level = 0.0;
  std::optional<OrbitResult> orbit;
  std::string error;
};

/// Seeds one orbit per level of H = chi(f) at z = (r, 0, ..., 0) on the level set.
std::vector<LevelScanEntry> scan_levels_for_orbits(const SolitonProfile& profile,
                                                   const RadialHamiltonian& H,
                                                   const std::vector<double>& levels,
                                                   const IntegratorOptions& opt = {});

struct ShootOptions {
  IntegratorOptions integrator{};
  double tolerance = 1e-11;
  int max_iterations = 25;
  double fd_step = 1e-7;
};

struct ShootResult {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;   // |Phi_T(x0) - x0|
  OrbitResult orbit;
  std::string message;
};

/// Newton shooting on (Phi_T(x0) - x0 + mu grad H, phase, energy) for a
/// periodic orbit near `guess`. The time step is fixed at T/N with
/// N = ceil(guess_period / step) so the discrete map is smooth in T.
ShootResult shoot_periodic(const SolitonProfile& profile, const Hamiltonian& H,
                           const PhasePoint& guess, double guess_period,
                           const ShootOptions& opt = {});

/// Plateau Hamiltonian chi(f) on M = {f <= level_c}: zero for f <= f_inner,
/// slope `max_slope` on the middle, constant m for f >= f_outer; the two
/// shoulders of width `edge` use the C^2 smootherstep.
struct AdmissibleHamiltonian {
  int n = 1;
  double level_c = 0.0;
  double f_inner = 0.0;
  double f_outer = 0.0;
  double edge = 0.0;
  double max_slope = 0.0;

  double m() const;
  double chi(double f) const;
  double chi_prime(double f) const;
  Ramp ramp() const;

  /// Ramp with slope factor * 2 pi on [f_min + gap, c - gap].
  static AdmissibleHamiltonian make(int n, double level_c, double slope_factor, double gap_fraction = 1e-4);
};

struct AdmissibilityReport {
  bool cond_a = false;  // H = m outside a compact K inside the interior of M
  bool cond_b = false;  // H = 0 on a nonempty open set
  bool cond_c = false;  // 0 <= H <= m
  bool cond_d = false;  // nonconstant periods 2 pi / chi' > 1
  std::vector<std::string> violations;
  double m = 0.0;
  double sampled_max_slope = 0.0;
  double min_period = 0.0;
  double lower_bound = 0.0;        // m when admissible
  double family_supremum = 0.0;    // 2 pi (c - f_min)
  bool admissible() const { return cond_a && cond_b && cond_c && cond_d; }
};

AdmissibilityReport check_admissible(const AdmissibleHamiltonian& A, std::size_t samples = 20001);

}  // namespace soliton
