#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "delaycert/expression.hpp"
#include "delaycert/types.hpp"

namespace delaycert {

// kappa1 * sigma <= F(sigma) <= kappa2 * sigma (pointwise), or the same
// bounds on difference quotients (incremental).
struct SectorBound {
  double k1 = 0.0;
  double k2 = 0.0;
  bool incremental = false;
};

// |F(s)| <= Lambda |s| (pointwise) or |F(s1) - F(s2)| <= Lambda |s1 - s2|.
struct LipschitzBound {
  double lambda = 1.0;
  bool incremental = false;
};

// -2 * cbrt(2) / 3: lower slope bound of 1/(1+|s|^3) on s >= 0.
inline double goodwin_min_slope() { return -2.0 * std::cbrt(2.0) / 3.0; }

// Static nonlinearity F: R^r -> R^m, with user-declared sector/Lipschitz
// metadata. The metadata is never inferred from the formula.
class Nonlinearity {
 public:
  enum class Kind { Goodwin, LinearGain, Expression };

  // g(s) + rho*s with g(s) = 1/(1 + |s|^3). Carries the incremental sector
  // [-2 cbrt(2)/3 + rho, rho].
  static Nonlinearity goodwin(double rho = 0.0);
  // xi = K sigma; K is m x r.
  static Nonlinearity linear_gain(Matrix gain);
  static Nonlinearity expression(expr::ExprTree tree);

  Nonlinearity& with_sector(SectorBound sector);
  Nonlinearity& with_lipschitz(LipschitzBound lipschitz);

  Kind kind() const { return kind_; }
  Index input_dim() const;   // r
  Index output_dim() const;  // m

  const std::optional<SectorBound>& sector() const { return sector_; }
  const std::optional<LipschitzBound>& lipschitz() const { return lipschitz_; }
  bool time_dependent() const { return false; }

  double goodwin_rho() const { return rho_; }
  const Matrix& gain() const { return gain_; }
  const expr::ExprTree& tree() const { return tree_; }

  Vector operator()(const Vector& sigma) const;
  // Scalar shortcut; requires r = m = 1.
  double scalar(double sigma) const;

  std::string describe() const;

 private:
  Nonlinearity() = default;

  Kind kind_ = Kind::Expression;
  double rho_ = 0.0;
  Matrix gain_;
  expr::ExprTree tree_;
  std::optional<SectorBound> sector_;
  std::optional<LipschitzBound> lipschitz_;
};

}  // namespace delaycert
