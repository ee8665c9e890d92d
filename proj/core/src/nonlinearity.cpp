#include "delaycert/nonlinearity.hpp"

#include <cmath>
#include <sstream>

#include "delaycert/error.hpp"

namespace delaycert {

Nonlinearity Nonlinearity::goodwin(double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw ConfigError("goodwin rho must be >= 0");
  Nonlinearity f;
  f.kind_ = Kind::Goodwin;
  f.rho_ = rho;
  f.sector_ = SectorBound{goodwin_min_slope() + rho, rho, true};
  return f;
}

Nonlinearity Nonlinearity::linear_gain(Matrix gain) {
  if (gain.size() == 0) throw DimensionError("linear gain must be non-empty");
  if (!gain.allFinite()) throw ConfigError("linear gain contains non-finite entries");
  Nonlinearity f;
  f.kind_ = Kind::LinearGain;
  f.gain_ = std::move(gain);
  return f;
}

Nonlinearity Nonlinearity::expression(expr::ExprTree tree) {
  if (tree.empty()) throw ConfigError("empty expression");
  Nonlinearity f;
  f.kind_ = Kind::Expression;
  f.tree_ = std::move(tree);
  return f;
}

Nonlinearity& Nonlinearity::with_sector(SectorBound sector) {
  if (!std::isfinite(sector.k1) || !std::isfinite(sector.k2) || sector.k1 > sector.k2)
    throw ConfigError("sector requires finite kappa1 <= kappa2");
  sector_ = sector;
  return *this;
}

Nonlinearity& Nonlinearity::with_lipschitz(LipschitzBound lipschitz) {
  if (!(lipschitz.lambda > 0.0) || !std::isfinite(lipschitz.lambda))
    throw ConfigError("Lipschitz constant must be positive");
  lipschitz_ = lipschitz;
  return *this;
}

Index Nonlinearity::input_dim() const { return kind_ == Kind::LinearGain ? gain_.cols() : 1; }

Index Nonlinearity::output_dim() const { return kind_ == Kind::LinearGain ? gain_.rows() : 1; }

Vector Nonlinearity::operator()(const Vector& sigma) const {
  if (sigma.size() != input_dim())
    throw DimensionError("nonlinearity input has size " + std::to_string(sigma.size()) +
                         ", expected " + std::to_string(input_dim()));
  if (kind_ == Kind::LinearGain) return gain_ * sigma;
  Vector out(1);
  out(0) = scalar(sigma(0));
  return out;
}

double Nonlinearity::scalar(double sigma) const {
  switch (kind_) {
    case Kind::Goodwin: {
      const double a = std::abs(sigma);
      return 1.0 / (1.0 + a * a * a) + rho_ * sigma;
    }
    case Kind::LinearGain:
      if (gain_.size() != 1) throw DimensionError("scalar evaluation of a matrix gain");
      return gain_(0, 0) * sigma;
    case Kind::Expression:
      return tree_.evaluate(sigma);
  }
  return 0.0;
}

std::string Nonlinearity::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Goodwin: os << "goodwin(rho=" << rho_ << ")"; break;
    case Kind::LinearGain: os << "linear-gain " << gain_.rows() << "x" << gain_.cols(); break;
    case Kind::Expression: os << "expression " << tree_.to_string(); break;
  }
  return os.str();
}

}  // namespace delaycert
