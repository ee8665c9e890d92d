#pragma once

#include <array>

#include "delaycert/system.hpp"
#include "delaycert/types.hpp"

namespace delaycert {

// Delta(p) = det(alpha(p) - pI).
Complex char_fn(const DelaySystem& sys, Complex p);

// Delta'(p) / Delta(p) = tr((alpha(p) - pI)^{-1} (alpha'(p) - I)).
Complex char_fn_log_derivative(const DelaySystem& sys, Complex p);

// Radius R such that every characteristic root with Re p >= -nu satisfies
// |p| <= R - 1. Requires nu >= 0.
double root_box(const DelaySystem& sys, double nu);

struct RootCount {
  double nu = 0.0;
  int count = 0;
  // Rectangle [-nu, R] x [-R, R] as (bottom-left, top-right).
  std::array<Complex, 2> contour{};
  double winding_residual = 0.0;
  double min_boundary_modulus = 0.0;
  int panels = 0;
};

struct RootCountOptions {
  int edge_samples = 4096;
  double line_threshold = 1e-8;  // relative to 1 + max |Delta| on the edge
  double target_residual = 0.05;
  double reject_residual = 0.25;
  double initial_tolerance = 1e-6;
  int max_refinements = 4;
};

// Number of roots (with multiplicity) strictly right of Re p = -nu, by the
// argument principle on the a-priori rectangle. Throws RootOnLine when a
// root sits on the left edge and NonIntegerWinding when the contour integral
// does not settle near an integer.
RootCount count_roots_right_of(const DelaySystem& sys, double nu,
                               const RootCountOptions& options = {});

// Newton iteration on Delta from `guess`; returns the converged root.
Complex newton_root(const DelaySystem& sys, Complex guess, double tol = 1e-14, int max_iter = 100);

}  // namespace delaycert
