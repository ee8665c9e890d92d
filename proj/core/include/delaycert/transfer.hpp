#pragma once

#include <vector>

#include "delaycert/measure.hpp"
#include "delaycert/system.hpp"
#include "delaycert/types.hpp"

namespace delaycert {

// Moments J_k = int_lower^upper exp(p*theta) theta^k dtheta for k = 0..max_power,
// in closed form (integration by parts about the interval midpoint) with a
// Taylor-series branch when |p| (upper - lower) is small.
std::vector<Complex> exp_moments(double lower, double upper, Complex p, int max_power);

// alpha(p) = int exp(p*theta) dmu(theta). Throws OverflowError when
// exp(p*theta) leaves the double range on the support.
ComplexMatrix eval_measure(const DelayMeasure& mu, Complex p);

// d/dp alpha(p) = int theta exp(p*theta) dmu(theta).
ComplexMatrix eval_measure_derivative(const DelayMeasure& mu, Complex p);

// alpha(p) - pI for the system's state measure.
ComplexMatrix characteristic_matrix(const DelaySystem& sys, Complex p);

// Reciprocal 1-norm condition estimate below which alpha(p) - pI is
// declared singular.
inline constexpr double kSingularRcond = 1e-13;

// W(p) = gamma(p) (alpha(p) - pI)^{-1} B, an r x m matrix. LU with partial
// pivoting; throws SingularAtP when the condition estimate is below
// kSingularRcond.
ComplexMatrix eval_transfer(const DelaySystem& sys, Complex p);

// Largest singular value.
double spectral_norm(const ComplexMatrix& m);

}  // namespace delaycert
