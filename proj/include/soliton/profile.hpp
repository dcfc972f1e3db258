#pragma once

#include <vector>

namespace soliton {

/// Closed interval of the log-radius t = log|z|^2 on which the profile is
/// evaluated. Below about -700 the profile itself underflows.
struct TDomain {
  double t_min = -700.0;
  double t_max = 1.0e6;
};

struct PhiDerivatives {
  double phi = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
};

struct Potential {
  double f = 0.0;
  double f1 = 0.0;
};

/// Radial profile phi(t) = u'(t) of the U(n)-invariant gradient Kahler-Ricci
/// soliton on C^n, normalized so that
///
///   phi^{n-1} phi' e^phi = e^{nt},
///
/// equivalently G_n(phi) = e^{nt} with G_n(phi) = n * int_0^phi x^{n-1} e^x dx.
/// With this normalization phi ~ e^t at t -> -inf (leading coefficient 1), the
/// soliton potential satisfies f' = phi' and f = phi, and R + |grad f|^2 = n.
class SolitonProfile {
 public:
  /// Throws ValidationError for n < 1 or a nonpositive tolerance.
  explicit SolitonProfile(int n, double solver_tolerance = 1e-12, TDomain domain = {});

  int dimension() const noexcept { return n_; }
  double solver_tolerance() const noexcept { return tol_; }
  const TDomain& domain() const noexcept { return domain_; }

  /// Unique positive root of the implicit equation at t. Throws RangeError
  /// outside the domain and SolverFault if the iteration cap is hit.
  double phi(double t) const;
  PhiDerivatives derivatives(double t) const;
  /// f = n t - (n-1) log phi - log phi', f' = phi'.
  Potential potential(double t) const;
  /// The t at which phi(t) = value (explicit: t = log G_n(value) / n).
  double t_of_phi(double value) const;

 private:
  int n_;
  double tol_;
  TDomain domain_;
};

/// Below this t the profile is the two-term expansion e^t (1 - e^t/(n+1)).
inline constexpr double kAsymptoticSwitch = -30.0;

/// log G_n(phi); -inf at phi = 0.
double log_lhs(int n, double phi);
/// d/dphi log G_n(phi).
double dlog_lhs(int n, double phi);

/// Literal LHS - RHS of the implicit equation
///   sum_{k<n} (-1)^{n-k-1} n!/k! phi^k e^phi - e^{nt} - (-1)^{n-1} n!.
/// Throws RangeError when either side leaves the double range.
double implicit_residual(int n, double phi, double t);
/// log G_n(phi) - n t, the scale-free residual the solver drives to zero.
double log_residual(int n, double phi, double t);

struct AsymptoteRow {
  double T = 0.0;
  double phi_over_T = 0.0;
  double phi1 = 0.0;
  double ratio_error = 0.0;   // |phi(T)/T - n|
  double slope_error = 0.0;   // |phi'(T) - n|
  double correction = 0.0;    // (n - phi'(T)) T, tends to n - 1
};

struct AsymptoteReport {
  int n = 0;
  std::vector<AsymptoteRow> rows;  // T/8, T/4, T/2, T
  bool monotone = false;           // both errors decrease along rows
  const AsymptoteRow& at_T() const { return rows.back(); }
};

/// Throws ValidationError for T < 10.
AsymptoteReport asymptote_report(const SolitonProfile& profile, double T);

}  // namespace soliton
