#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <initializer_list>

namespace soliton {

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// A point of C^n stored as 2n reals (x1, y1, ..., xn, yn), z_k = x_k + i y_k.
struct PhasePoint {
  RealVector coords;

  PhasePoint() = default;
  explicit PhasePoint(RealVector c) : coords(std::move(c)) {}
  PhasePoint(std::initializer_list<double> c) : coords(static_cast<Eigen::Index>(c.size())) {
    Eigen::Index i = 0;
    for (double v : c) coords[i++] = v;
  }

  int n() const { return static_cast<int>(coords.size() / 2); }
  std::complex<double> z(int k) const { return {coords[2 * k], coords[2 * k + 1]}; }
  double norm_sq() const { return coords.squaredNorm(); }
  /// t = log |z|^2.
  double log_radius() const { return std::log(norm_sq()); }
  bool finite() const { return coords.allFinite(); }
};

// Conventions, fixed once for the whole library:
//
//  * Line element ds^2 = g_{ij} dz^i dzbar^j (the cigar reads |dz|^2/(1+|z|^2)).
//    Its real 2n x 2n matrix is real_form(g); lengths, distances and volumes
//    use it.
//  * Kahler form omega = i g_{ij} dz^i ^ dzbar^j = i ddbar u. As a real
//    antisymmetric matrix, omega(X, Y) = X^T Omega Y with
//    Omega = 2 J^T real_form(g). The same rule maps any real (1,1) Hessian
//    h_{ij} to the form i ddbar h.
//  * Standard form omega0 = (i/2) sum dz ^ dzbar = sum dx ^ dy, Omega0 = J^T.
//  * J (x, y) = (-y, x) in every complex coordinate.
//  * Hamiltonian field: omega(V_H, .) = -dH, i.e. V_H = J (1/2) real_form(g)^{-1} grad_E H.
//    For H = f this is V_f = J z exactly.
//  * Scalar invariants use complex index contraction: R = g^{ij} R_{ij},
//    |grad f|^2 = g^{ij} f_i f_jbar.

/// Standard complex structure on R^{2n}.
RealMatrix complex_structure(int n);

/// Real symmetric matrix of the Hermitian form Re(sum h_{kl} xi_k conj(xi_l)).
RealMatrix real_form(const ComplexMatrix& h);

/// Real antisymmetric matrix of i sum h_{kl} dz^k ^ dzbar^l.
RealMatrix kahler_form_matrix(const ComplexMatrix& h);

/// Apply J to a point or tangent vector.
RealVector apply_j(const RealVector& v);

}  // namespace soliton
