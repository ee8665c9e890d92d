#include "delaycert/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "delaycert/error.hpp"
#include "delaycert/quadrature.hpp"

namespace delaycert {

namespace {

void check_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw ConfigError(std::string(what) + " contains non-finite entries");
}

// Canonical pieces: disjoint interiors, sorted, coefficients summed where
// inputs overlap.
std::vector<DensityPiece> canonical_pieces(Index rows, Index cols,
                                           const std::vector<DensityPiece>& raw) {
  std::vector<double> cuts;
  for (const auto& p : raw) {
    cuts.push_back(p.lower);
    cuts.push_back(p.upper);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<DensityPiece> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double l = cuts[i];
    const double u = cuts[i + 1];
    DensityPiece merged{l, u, {}};
    for (const auto& p : raw) {
      if (p.lower <= l && u <= p.upper) {
        if (merged.coeffs.size() < p.coeffs.size())
          merged.coeffs.resize(p.coeffs.size(), Matrix::Zero(rows, cols));
        for (std::size_t k = 0; k < p.coeffs.size(); ++k) merged.coeffs[k] += p.coeffs[k];
      }
    }
    if (!merged.coeffs.empty()) out.push_back(std::move(merged));
  }
  return out;
}

}  // namespace

Matrix DensityPiece::at(double theta) const {
  // Horner in theta.
  Matrix acc = coeffs.back();
  for (int k = static_cast<int>(coeffs.size()) - 2; k >= 0; --k) acc = acc * theta + coeffs[k];
  return acc;
}

DelayMeasure::DelayMeasure(Index rows, Index cols, std::vector<Atom> atoms,
                           std::vector<DensityPiece> pieces)
    : rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0) throw DimensionError("measure dimensions must be positive");

  std::map<double, Matrix> by_location;
  for (auto& a : atoms) {
    if (a.weight.rows() != rows || a.weight.cols() != cols)
      throw DimensionError("atom weight has dimensions " + std::to_string(a.weight.rows()) + "x" +
                           std::to_string(a.weight.cols()) + ", expected " +
                           std::to_string(rows) + "x" + std::to_string(cols));
    if (!std::isfinite(a.theta) || a.theta > 0.0)
      throw ConfigError("atom location must be finite and <= 0");
    check_finite(a.weight, "atom weight");
    auto [it, inserted] = by_location.try_emplace(a.theta, a.weight);
    if (!inserted) it->second += a.weight;
  }
  for (auto& [theta, w] : by_location) atoms_.push_back({theta, std::move(w)});

  for (const auto& p : pieces) {
    if (!(p.lower < p.upper)) throw ConfigError("density piece needs lower < upper");
    if (!std::isfinite(p.lower) || p.upper > 0.0)
      throw ConfigError("density piece must lie in (-inf, 0]");
    if (p.coeffs.empty()) throw ConfigError("density piece has no coefficients");
    for (const auto& c : p.coeffs) {
      if (c.rows() != rows || c.cols() != cols)
        throw DimensionError("density coefficient has wrong dimensions");
      check_finite(c, "density coefficient");
    }
  }
  pieces_ = canonical_pieces(rows, cols, pieces);
}

DelayMeasure DelayMeasure::point(double theta, Matrix weight) {
  const Index r = weight.rows();
  const Index c = weight.cols();
  return DelayMeasure(r, c, {Atom{theta, std::move(weight)}});
}

DelayMeasure DelayMeasure::density(double lower, double upper, std::vector<Matrix> coeffs) {
  if (coeffs.empty()) throw ConfigError("density piece has no coefficients");
  const Index r = coeffs.front().rows();
  const Index c = coeffs.front().cols();
  return DelayMeasure(r, c, {}, {DensityPiece{lower, upper, std::move(coeffs)}});
}

double DelayMeasure::support_extent() const {
  double extent = 0.0;
  for (const auto& a : atoms_) extent = std::max(extent, -a.theta);
  for (const auto& p : pieces_) extent = std::max(extent, -p.lower);
  return extent;
}

DelayMeasure DelayMeasure::split_at(double cut) const {
  std::vector<DensityPiece> pieces;
  for (const auto& p : pieces_) {
    if (p.lower < cut && cut < p.upper) {
      pieces.push_back({p.lower, cut, p.coeffs});
      pieces.push_back({cut, p.upper, p.coeffs});
    } else {
      pieces.push_back(p);
    }
  }
  DelayMeasure out;
  out.rows_ = rows_;
  out.cols_ = cols_;
  out.atoms_ = atoms_;
  out.pieces_ = std::move(pieces);
  return out;
}

DelayMeasure DelayMeasure::operator+(const DelayMeasure& other) const {
  if (other.rows_ != rows_ || other.cols_ != cols_)
    throw DimensionError("cannot add measures of different dimensions");
  std::vector<Atom> atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  std::vector<DensityPiece> pieces = pieces_;
  pieces.insert(pieces.end(), other.pieces_.begin(), other.pieces_.end());
  return DelayMeasure(rows_, cols_, std::move(atoms), std::move(pieces));
}

DelayMeasure DelayMeasure::scaled(double factor) const {
  DelayMeasure out = *this;
  for (auto& a : out.atoms_) a.weight *= factor;
  for (auto& p : out.pieces_)
    for (auto& c : p.coeffs) c *= factor;
  return out;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double total_variation(const DelayMeasure& measure) {
  double tv = 0.0;
  for (const auto& a : measure.atoms()) tv += spectral_norm(a.weight);
  for (const auto& p : measure.pieces()) {
    double scale = 0.0;
    for (const auto& c : p.coeffs) scale += spectral_norm(c);
    const double width = p.upper - p.lower;
    const double tol = 1e-15 * std::max(1.0, scale) * std::max(1.0, width);
    tv += quadrature::adaptive_kronrod([&p](double t) { return spectral_norm(p.at(t)); }, p.lower,
                                       p.upper, tol);
  }
  return tv;
}

}  // namespace delaycert
