#pragma once

#include <vector>

#include "delaycert/freqcheck.hpp"
#include "delaycert/system.hpp"

namespace delaycert {

// Delay bounds for x'(t) = F(t, C x_t) with r delayed scalar readouts and
// Lipschitz constant Lambda. Each threshold is the largest admissible tau.
struct SmallDelayReport {
  int n = 0;
  int r = 0;
  double lambda = 0.0;
  double tau = 0.0;
  // 1 / (Lambda e sqrt(r) sqrt(1 + e^-2 / r)): frequency-domain (Smith) bound.
  double threshold_frequency = 0.0;
  // 1 / (Lambda sqrt(r) e): Ryabov-Driver bound (K tau e < 1, K = sqrt(r) Lambda).
  double threshold_ryabov_driver = 0.0;
  // 1 / (Lambda 2 sqrt(r) sqrt(e)): Chicone's C^1 bound.
  double threshold_chicone = 0.0;
  Verdict verdict_frequency = Verdict::Rejected;
  Verdict verdict_ryabov_driver = Verdict::Rejected;
  Verdict verdict_chicone = Verdict::Rejected;
  // Exponent 1/tau and manifold dimension n, valid when the frequency bound holds.
  double nu = 0.0;
  int dimension = 0;
};

SmallDelayReport small_delay_certificate(int n, int r, double lambda, double tau);

// sqrt(r e^{2 tau nu} + 1) / (a + nu): bound on |W(-nu + i omega)|_2 for the
// shifted plant, uniform in omega.
double small_delay_spectral_bound(int r, double nu, double a_shift, double tau);

// One delayed readout: component `state` (0-based) of x(t - lag).
struct DelayedReadout {
  int state = 0;
  double lag = 0.0;
};

// Lur'e form x' = a x(t) + [F(C x_t) - a x(t)]: alpha(p) = a I, B = I and
// the output stacks the delayed readouts on top of x(0). Result has
// n states, n inputs and readouts.size() + n outputs.
DelaySystem build_small_delay_plant(int n, const std::vector<DelayedReadout>& readouts,
                                    double a_shift, double tau);

}  // namespace delaycert
