#pragma once

#include <vector>

#include "delaycert/types.hpp"

namespace delaycert {

// Point mass `weight` placed at `theta` (theta <= 0).
struct Atom {
  double theta = 0.0;
  Matrix weight;
};

// Matrix-valued polynomial density on [lower, upper]:
//   d(theta) = sum_k coeffs[k] * theta^k
// The polynomial is in the absolute variable theta, lowest degree first.
struct DensityPiece {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<Matrix> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Matrix at(double theta) const;
};

// Matrix-valued Stieltjes measure on [-tau, 0]: finitely many atoms plus a
// piecewise-polynomial density whose pieces have disjoint interiors.
//
// Immutable after construction. Atoms sharing a location are merged and
// overlapping density pieces are split and summed, so any combination of
// atoms and pieces passed in yields a canonical measure.
class DelayMeasure {
 public:
  DelayMeasure() = default;
  DelayMeasure(Index rows, Index cols, std::vector<Atom> atoms = {},
               std::vector<DensityPiece> pieces = {});

  static DelayMeasure zero(Index rows, Index cols) { return DelayMeasure(rows, cols); }
  static DelayMeasure point(double theta, Matrix weight);
  static DelayMeasure density(double lower, double upper, std::vector<Matrix> coeffs);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensityPiece>& pieces() const { return pieces_; }
  bool empty() const { return atoms_.empty() && pieces_.empty(); }

  // Largest |theta| over the support (0 for an empty measure).
  double support_extent() const;

  // Every density piece split at `cut` when it lies strictly inside.
  DelayMeasure split_at(double cut) const;

  DelayMeasure operator+(const DelayMeasure& other) const;
  DelayMeasure scaled(double factor) const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Atom> atoms_;
  std::vector<DensityPiece> pieces_;
};

// Sum of |M_k|_2 over atoms plus the integral of |d(theta)|_2 over pieces
// (spectral norms; adaptive Gauss-Kronrod for the density part).
double total_variation(const DelayMeasure& measure);

// Spectral norm of a real matrix.
double spectral_norm(const Matrix& m);

}  // namespace delaycert
