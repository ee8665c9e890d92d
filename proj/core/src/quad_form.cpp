#include "delaycert/quad_form.hpp"

#include <cmath>

#include "delaycert/error.hpp"

namespace delaycert {

QuadForm::QuadForm(Matrix g_sigma, Matrix g_cross, Matrix g_xi)
    : g_sigma_(std::move(g_sigma)), g_cross_(std::move(g_cross)), g_xi_(std::move(g_xi)) {
  if (g_sigma_.rows() != g_sigma_.cols() || g_xi_.rows() != g_xi_.cols())
    throw DimensionError("G_sigma and G_xi must be square");
  if (g_cross_.rows() != g_xi_.rows() || g_cross_.cols() != g_sigma_.rows())
    throw DimensionError("G_sigma_xi must be m x r");
  if (!g_sigma_.allFinite() || !g_cross_.allFinite() || !g_xi_.allFinite())
    throw ConfigError("quadratic form has non-finite entries");
  g_sigma_ = 0.5 * (g_sigma_ + g_sigma_.transpose()).eval();
  g_xi_ = 0.5 * (g_xi_ + g_xi_.transpose()).eval();
}

double QuadForm::evaluate(const Vector& sigma, const Vector& xi) const {
  if (sigma.size() != r() || xi.size() != m()) throw DimensionError("quadratic form arguments");
  return sigma.dot(g_sigma_ * sigma) + 2.0 * xi.dot(g_cross_ * sigma) + xi.dot(g_xi_ * xi);
}

QuadForm sector_form(double k1, double k2) {
  if (!std::isfinite(k1) || !std::isfinite(k2)) throw ConfigError("sector bounds must be finite");
  if (k1 > k2) throw ConfigError("sector_form requires kappa1 <= kappa2");
  return QuadForm(Matrix::Constant(1, 1, -k1 * k2), Matrix::Constant(1, 1, 0.5 * (k1 + k2)),
                  Matrix::Constant(1, 1, -1.0));
}

QuadForm lipschitz_form(double lambda, Index r, Index m) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("Lipschitz constant must be > 0");
  if (r <= 0 || m <= 0) throw DimensionError("lipschitz_form dimensions must be positive");
  return QuadForm(lambda * lambda * Matrix::Identity(r, r), Matrix::Zero(m, r),
                  -Matrix::Identity(m, m));
}

}  // namespace delaycert
