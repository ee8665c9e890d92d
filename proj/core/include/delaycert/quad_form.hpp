#pragma once

#include "delaycert/types.hpp"

namespace delaycert {

// Real quadratic constraint form
//   G(sigma, xi) = sigma^T Gs sigma + 2 xi^T Gsx sigma + xi^T Gx xi
// with Gs (r x r) and Gx (m x m) symmetric and Gsx (m x r).
class QuadForm {
 public:
  // Gs and Gx are symmetrised on construction.
  QuadForm(Matrix g_sigma, Matrix g_cross, Matrix g_xi);

  const Matrix& g_sigma() const { return g_sigma_; }
  const Matrix& g_cross() const { return g_cross_; }
  const Matrix& g_xi() const { return g_xi_; }
  Index r() const { return g_sigma_.rows(); }
  Index m() const { return g_xi_.rows(); }

  double evaluate(const Vector& sigma, const Vector& xi) const;

 private:
  Matrix g_sigma_;
  Matrix g_cross_;
  Matrix g_xi_;
};

// (xi - k1 sigma)(k2 sigma - xi); scalar r = m = 1.
QuadForm sector_form(double k1, double k2);

// Lambda^2 |sigma|^2 - |xi|^2.
QuadForm lipschitz_form(double lambda, Index r, Index m);

}  // namespace delaycert
