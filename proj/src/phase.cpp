#include "soliton/phase.hpp"

namespace soliton {

RealMatrix complex_structure(int n) {
  RealMatrix j = RealMatrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    j(2 * k + 1, 2 * k) = 1.0;   // J e_x = e_y
    j(2 * k, 2 * k + 1) = -1.0;  // J e_y = -e_x
  }
  return j;
}

RealMatrix real_form(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows();
  RealMatrix g(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      const double re = h(k, l).real();
      const double im = h(k, l).imag();
      g(2 * k, 2 * l) = re;
      g(2 * k, 2 * l + 1) = im;
      g(2 * k + 1, 2 * l) = -im;
      g(2 * k + 1, 2 * l + 1) = re;
    }
  }
  return g;
}

RealMatrix kahler_form_matrix(const ComplexMatrix& h) {
  const int n = static_cast<int>(h.rows());
  return 2.0 * complex_structure(n).transpose() * real_form(h);
}

RealVector apply_j(const RealVector& v) {
  RealVector out(v.size());
  for (Eigen::Index k = 0; k + 1 < v.size(); k += 2) {
    out[k] = -v[k + 1];
    out[k + 1] = v[k];
  }
  return out;
}

}  // namespace soliton
